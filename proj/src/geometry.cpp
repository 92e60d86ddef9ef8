#include "domtile/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace domtile {

namespace {

void check_dim(int dim)
{
    if (dim < 1 || dim > kMaxDim) {
        throw GeometryError("dimension " + std::to_string(dim) + " outside 1.." + std::to_string(kMaxDim));
    }
}

void check_same_dim(const Point& a, const Point& b)
{
    if (a.dim() != b.dim()) {
        throw GeometryError("dimension mismatch: " + a.str() + " vs " + b.str());
    }
}

} // namespace

Point::Point(int dim, Coord fill) : dim_(dim)
{
    check_dim(dim);
    for (int i = 0; i < dim; ++i) {
        c_[static_cast<std::size_t>(i)] = fill;
    }
}

Point::Point(std::initializer_list<Coord> coords) : Point(std::span<const Coord>(coords.begin(), coords.size())) {}

Point::Point(std::span<const Coord> coords) : dim_(static_cast<int>(coords.size()))
{
    check_dim(dim_);
    std::copy(coords.begin(), coords.end(), c_.begin());
}

Point Point::unit(int dim, int axis)
{
    Point p(dim, 0);
    p[axis] = 1;
    return p;
}

Point& Point::operator+=(const Point& o)
{
    check_same_dim(*this, o);
    for (int i = 0; i < dim_; ++i) {
        (*this)[i] += o[i];
    }
    return *this;
}

Point& Point::operator-=(const Point& o)
{
    check_same_dim(*this, o);
    for (int i = 0; i < dim_; ++i) {
        (*this)[i] -= o[i];
    }
    return *this;
}

Point Point::operator-() const
{
    Point p = *this;
    for (int i = 0; i < dim_; ++i) {
        p[i] = -p[i];
    }
    return p;
}

Coord Point::product() const noexcept
{
    Coord v = 1;
    for (int i = 0; i < dim_; ++i) {
        v *= (*this)[i];
    }
    return v;
}

bool operator==(const Point& a, const Point& b) noexcept
{
    return a.dim_ == b.dim_ && std::equal(a.begin(), a.end(), b.begin());
}

bool operator<(const Point& a, const Point& b) noexcept
{
    if (a.dim_ != b.dim_) {
        return a.dim_ < b.dim_;
    }
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string Point::str() const
{
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < dim_; ++i) {
        if (i) {
            os << ',';
        }
        os << (*this)[i];
    }
    os << ')';
    return os.str();
}

std::size_t PointHash::operator()(const Point& p) const noexcept
{
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(p.dim());
    for (Coord c : p) {
        h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
}

Coord floor_div(Coord a, Coord b) noexcept
{
    Coord q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

Coord floor_mod(Coord a, Coord b) noexcept
{
    return a - floor_div(a, b) * b;
}

Point mod(const Point& v, const Point& m)
{
    check_same_dim(v, m);
    Point r = v;
    for (int i = 0; i < v.dim(); ++i) {
        r[i] = floor_mod(v[i], m[i]);
    }
    return r;
}

Box::Box(Point anchor_, Point shape_) : anchor(anchor_), shape(shape_)
{
    check_same_dim(anchor, shape);
    for (Coord w : shape) {
        if (w < 0) {
            throw GeometryError("negative box extent " + shape.str());
        }
    }
}

Box Box::from_bounds(const Point& lo, const Point& hi)
{
    Point shape = hi - lo;
    for (int i = 0; i < shape.dim(); ++i) {
        shape[i] = std::max<Coord>(shape[i], 0);
    }
    return Box(lo, shape);
}

Coord Box::volume() const noexcept
{
    return shape.dim() == 0 ? 0 : shape.product();
}

bool Box::empty() const noexcept
{
    return std::any_of(shape.begin(), shape.end(), [](Coord w) { return w <= 0; }) || shape.dim() == 0;
}

bool Box::contains(const Point& p) const noexcept
{
    if (p.dim() != dim()) {
        return false;
    }
    for (int i = 0; i < p.dim(); ++i) {
        if (p[i] < anchor[i] || p[i] >= anchor[i] + shape[i]) {
            return false;
        }
    }
    return true;
}

bool Box::contains(const Box& b) const noexcept
{
    if (b.empty()) {
        return true;
    }
    for (int i = 0; i < dim(); ++i) {
        if (b.anchor[i] < anchor[i] || b.anchor[i] + b.shape[i] > anchor[i] + shape[i]) {
            return false;
        }
    }
    return true;
}

bool Box::intersects(const Box& b) const noexcept
{
    if (empty() || b.empty()) {
        return false;
    }
    for (int i = 0; i < dim(); ++i) {
        if (b.anchor[i] >= anchor[i] + shape[i] || anchor[i] >= b.anchor[i] + b.shape[i]) {
            return false;
        }
    }
    return true;
}

std::optional<Box> Box::intersection(const Box& b) const
{
    if (!intersects(b)) {
        return std::nullopt;
    }
    Point lo = anchor;
    Point hi_ = hi();
    for (int i = 0; i < dim(); ++i) {
        lo[i] = std::max(lo[i], b.anchor[i]);
        hi_[i] = std::min(hi_[i], b.anchor[i] + b.shape[i]);
    }
    return from_bounds(lo, hi_);
}

std::size_t Box::index_of(const Point& p) const noexcept
{
    std::size_t idx = 0;
    for (int i = 0; i < dim(); ++i) {
        idx = idx * static_cast<std::size_t>(shape[i]) + static_cast<std::size_t>(p[i] - anchor[i]);
    }
    return idx;
}

Point Box::cell_at(std::size_t index) const
{
    Point p = anchor;
    for (int i = dim() - 1; i >= 0; --i) {
        auto w = static_cast<std::size_t>(shape[i]);
        p[i] += static_cast<Coord>(index % w);
        index /= w;
    }
    return p;
}

void Box::for_each_cell(const std::function<void(const Point&)>& fn) const
{
    if (empty()) {
        return;
    }
    Point p = anchor;
    const int d = dim();
    while (true) {
        fn(p);
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++p[i] < anchor[i] + shape[i]) {
                break;
            }
            p[i] = anchor[i];
        }
        if (i < 0) {
            return;
        }
    }
}

std::string Box::str() const
{
    return "Box(" + anchor.str() + ", " + shape.str() + ")";
}

Region::Region(std::vector<Point> cells) : cells_(std::move(cells))
{
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

Region Region::of_box(const Box& b)
{
    std::vector<Point> cells;
    cells.reserve(static_cast<std::size_t>(b.volume()));
    b.for_each_cell([&](const Point& p) { cells.push_back(p); });
    Region r;
    r.cells_ = std::move(cells); // already lexicographic
    return r;
}

bool Region::contains(const Point& p) const
{
    return std::binary_search(cells_.begin(), cells_.end(), p);
}

Region Region::unite(const Region& other) const
{
    Region r;
    std::set_union(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(), std::back_inserter(r.cells_));
    return r;
}

Region Region::subtract(const Region& other) const
{
    Region r;
    std::set_difference(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(),
                        std::back_inserter(r.cells_));
    return r;
}

Region Region::intersect(const Region& other) const
{
    Region r;
    std::set_intersection(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(),
                          std::back_inserter(r.cells_));
    return r;
}

Box expand(const Box& b, Coord s)
{
    if (s < 0) {
        throw GeometryError("expand: negative width");
    }
    return Box(b.anchor - Point(b.dim(), s), b.shape + Point(b.dim(), 2 * s));
}

std::optional<Box> interior(const Box& b, Coord s)
{
    if (s < 0) {
        throw GeometryError("interior: negative width");
    }
    Point shape = b.shape;
    for (int i = 0; i < shape.dim(); ++i) {
        shape[i] -= 2 * s;
        if (shape[i] < 1) {
            return std::nullopt;
        }
    }
    return Box(b.anchor + Point(b.dim(), s), shape);
}

Region box_difference(const Box& outer, const Box& inner)
{
    std::vector<Point> cells;
    outer.for_each_cell([&](const Point& p) {
        if (!inner.contains(p)) {
            cells.push_back(p);
        }
    });
    return Region(std::move(cells));
}

Region outer_collar(const Box& b, Coord s)
{
    return box_difference(expand(b, s), b);
}

Region inner_collar(const Box& b, Coord s)
{
    auto in = interior(b, s);
    if (!in) {
        return Region::of_box(b);
    }
    return box_difference(b, *in);
}

} // namespace domtile
