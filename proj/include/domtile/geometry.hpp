#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace domtile {

using Coord = std::int64_t;

// Lattices up to this dimension are supported; coordinates live inline.
inline constexpr int kMaxDim = 4;

class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A vector in Z^d with 1 <= d <= kMaxDim. Also used for shapes and offsets.
class Point {
public:
    Point() = default;
    explicit Point(int dim, Coord fill = 0);
    Point(std::initializer_list<Coord> coords);
    explicit Point(std::span<const Coord> coords);

    static Point constant(int dim, Coord value) { return Point(dim, value); }
    static Point unit(int dim, int axis);

    int dim() const noexcept { return dim_; }
    Coord operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
    Coord& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }

    const Coord* begin() const noexcept { return c_.data(); }
    const Coord* end() const noexcept { return c_.data() + dim_; }

    Point& operator+=(const Point& o);
    Point& operator-=(const Point& o);
    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    Point operator-() const;

    /// Product of all coordinates (cell count when used as a shape).
    Coord product() const noexcept;

    friend bool operator==(const Point& a, const Point& b) noexcept;
    /// Lexicographic with axis 0 most significant.
    friend bool operator<(const Point& a, const Point& b) noexcept;
    friend bool operator!=(const Point& a, const Point& b) noexcept { return !(a == b); }
    friend bool operator>(const Point& a, const Point& b) noexcept { return b < a; }
    friend bool operator<=(const Point& a, const Point& b) noexcept { return !(b < a); }
    friend bool operator>=(const Point& a, const Point& b) noexcept { return !(a < b); }

    std::string str() const;

private:
    int dim_ = 0;
    std::array<Coord, kMaxDim> c_{};
};

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept;
};

/// Floor division and the matching non-negative remainder.
Coord floor_div(Coord a, Coord b) noexcept;
Coord floor_mod(Coord a, Coord b) noexcept;

/// Componentwise floor_mod.
Point mod(const Point& v, const Point& m);

/// anchor + R_shape, where R_w = prod_i [0, w_i - 1]. A zero extent makes the box empty.
struct Box {
    Point anchor;
    Point shape;

    Box() = default;
    Box(Point anchor_, Point shape_);

    /// Box covering cells lo..hi-1 on each axis.
    static Box from_bounds(const Point& lo, const Point& hi);
    static Box square(int dim, Coord side) { return Box(Point(dim, 0), Point(dim, side)); }

    int dim() const noexcept { return anchor.dim(); }
    Point lo() const { return anchor; }
    /// Exclusive upper corner.
    Point hi() const { return anchor + shape; }
    Coord volume() const noexcept;
    bool empty() const noexcept;

    bool contains(const Point& p) const noexcept;
    bool contains(const Box& b) const noexcept;
    bool intersects(const Box& b) const noexcept;
    std::optional<Box> intersection(const Box& b) const;

    Box translated(const Point& v) const { return Box(anchor + v, shape); }

    /// Row-major linear index of p inside the box; axis 0 is most significant.
    std::size_t index_of(const Point& p) const noexcept;
    Point cell_at(std::size_t index) const;

    /// Visit every cell in lexicographic order.
    void for_each_cell(const std::function<void(const Point&)>& fn) const;

    friend bool operator==(const Box& a, const Box& b) noexcept { return a.anchor == b.anchor && a.shape == b.shape; }
    friend bool operator!=(const Box& a, const Box& b) noexcept { return !(a == b); }

    std::string str() const;
};

/// A finite set of cells kept sorted lexicographically without duplicates.
class Region {
public:
    Region() = default;
    explicit Region(std::vector<Point> cells);
    static Region of_box(const Box& b);

    std::size_t size() const noexcept { return cells_.size(); }
    bool empty() const noexcept { return cells_.empty(); }
    bool contains(const Point& p) const;
    const std::vector<Point>& cells() const noexcept { return cells_; }
    auto begin() const noexcept { return cells_.begin(); }
    auto end() const noexcept { return cells_.end(); }

    Region unite(const Region& other) const;
    Region subtract(const Region& other) const;
    Region intersect(const Region& other) const;

    friend bool operator==(const Region& a, const Region& b) { return a.cells_ == b.cells_; }

private:
    std::vector<Point> cells_;
};

/// R^s: the box grown by s on every face.
Box expand(const Box& b, Coord s);

/// R^{-s}: the box shrunk by s on every face; nullopt when some extent vanishes.
std::optional<Box> interior(const Box& b, Coord s);

/// expand(b, s) \ b.
Region outer_collar(const Box& b, Coord s);

/// b \ interior(b, s).
Region inner_collar(const Box& b, Coord s);

/// Cells of `outer` not in `inner`; `inner` need not be contained in `outer`.
Region box_difference(const Box& outer, const Box& inner);

} // namespace domtile
