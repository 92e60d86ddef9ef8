#pragma once

#include "domtile/geometry.hpp"
#include "domtile/numerics.hpp"
#include "domtile/sft.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace domtile {

class BrickfillError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The periodic word y[v] = tau_{(v - t) mod period}: a translate of the
/// good brick wall built from one large domino.
class BrickWall {
public:
    BrickWall() = default;
    BrickWall(Point period, const Point& translate, TileId large_id = TileId::large(1));

    const Point& period() const noexcept { return period_; }
    /// Reduced modulo the period.
    const Point& translate() const noexcept { return translate_; }
    TileId tile() const noexcept { return tile_; }
    int dim() const noexcept { return period_.dim(); }

    Symbol at(const Point& v) const;
    /// Anchor of the wall tile containing v.
    Point tile_anchor(const Point& v) const;
    /// Whole wall tiles whose cells meet `window`.
    std::vector<Placement> tiles_meeting(const Box& window) const;
    bool aligned(const Box& b) const;

    friend bool operator==(const BrickWall& a, const BrickWall& b) noexcept
    {
        return a.period_ == b.period_ && a.translate_ == b.translate_ && a.tile_ == b.tile_;
    }

private:
    Point period_;
    Point translate_;
    TileId tile_ = TileId::large(1);
};

BrickWall brick_wall(const RectFamily& f, const Point& translate, TileId large_id = TileId::large(1));

enum class Completion { Outward, Inward };

class InwardEmpty : public BrickfillError {
public:
    explicit InwardEmpty(const Box& b);
};

/// Outward: smallest wall-aligned box containing b. Inward: largest wall-aligned box inside b.
Box complete_partial_tiles(const Box& b, const BrickWall& wall, Completion direction);

struct CollarPiece {
    Box box;
    int axis = 0;     // the axis whose extent is filled by representation
    bool high = false; // which face of the inner box the piece sits on
};

class GapTooNarrow : public BrickfillError {
public:
    GapTooNarrow(int axis, bool high, Coord gap, Coord threshold);
    int axis;
    bool high;
    Coord gap;
};

/// Splits outer \ inner into at most 2d boxes, faces in the order axis 1 low,
/// axis 1 high, axis 2 low, ... Each piece spans the inner box on earlier axes
/// and the outer box on later ones, so its only free extent is along `axis`.
std::vector<CollarPiece> decompose_collar(const Box& inner, const Box& outer, Coord threshold);

class NonMultipleExtent : public BrickfillError {
public:
    NonMultipleExtent(int axis, Coord extent, Coord side);
    int axis;
};

/// Exact tiling of b by small tiles: consecutive strips of widths a_j * w^j_axis
/// along `axis`, each a grid of tile j.
Tiling strip_tile(const Box& b, const RectFamily& f, int axis);

/// Collar width that lets any inner wall be filled into any outer wall.
Coord filling_width(const RectFamily& small, const Point& inner_period, const Point& outer_period);

/// A total word on Z^d: the inner wall (or a glued core) on the completed inner
/// box, strip-tiled collar pieces, and the outer wall everywhere else.
class FilledWord {
public:
    const BrickWall& inner_wall() const noexcept { return inner_; }
    const BrickWall& outer_wall() const noexcept { return outer_; }
    const Box& inner_box() const noexcept { return box_; }
    Coord collar_width() const noexcept { return width_; }
    /// expand(inner_box, collar_width): outside it the word is the outer wall.
    Box fill_region() const { return expand(box_, width_); }
    const Box& completed_inner() const noexcept { return completed_inner_; }
    const Box& outer_hole() const noexcept { return hole_; }
    const std::vector<CollarPiece>& pieces() const noexcept { return pieces_; }
    const Tiling& collar_tiling() const noexcept { return collar_; }
    const std::optional<Patch>& core() const noexcept { return core_; }

    /// Largest distance from the inner box to the edge of the modified area.
    Coord used_collar_width() const;

    /// Every placement of the word whose cells meet `window`.
    std::vector<Placement> placements_meeting(const Box& window, const Alphabet& alphabet) const;
    Symbol symbol_at(const Point& p, const Alphabet& alphabet) const;
    SymbolicWord materialize(const Box& window, const Alphabet& alphabet) const;

private:
    friend FilledWord fill_between(const BrickWall&, const Box&, const BrickWall&, const RectFamily&, Coord);
    friend FilledWord glue(const Patch&, const BrickWall&, const RectFamily&, const Alphabet&);

    BrickWall inner_;
    BrickWall outer_;
    Box box_;
    Coord width_ = 0;
    Box completed_inner_;
    Box hole_;
    std::vector<CollarPiece> pieces_;
    Tiling collar_;
    std::optional<Patch> core_;
};

/// Inner wall on `inner_box`, outer wall outside expand(inner_box, width), the
/// collar between filled with tiles of `small` only.
FilledWord fill_between(const BrickWall& inner, const Box& inner_box, const BrickWall& outer, const RectFamily& small,
                        Coord width);

/// Filling with the family's own length: R + 2 * sum W_i.
FilledWord uniform_fill(const BrickWall& inner, const Box& inner_box, const BrickWall& outer, const RectFamily& f);

/// Nested families Y_1 ⊂ Y_2 ⊂ ...: level k uses the first cutoffs[k-1] shapes
/// and the large domino P_k with sides W^(k)_i = prod_{j <= n_k} w^j_i.
class TileSchedule {
public:
    TileSchedule() = default;
    TileSchedule(int dim, std::vector<Point> shapes, std::vector<int> cutoffs);
    /// One level holding the whole family.
    explicit TileSchedule(const RectFamily& f);

    int dim() const noexcept { return dim_; }
    int levels() const noexcept { return static_cast<int>(cutoffs_.size()); }
    int cutoff(int level) const { return cutoffs_.at(static_cast<std::size_t>(level - 1)); }
    const std::vector<int>& cutoffs() const noexcept { return cutoffs_; }
    const std::vector<Point>& shapes() const noexcept { return shapes_; }
    const RectFamily& base() const { return families_.front(); }
    const RectFamily& family(int level) const { return families_.at(static_cast<std::size_t>(level - 1)); }
    const Point& large_shape(int level) const { return family(level).large_shape; }
    /// l_k = R_1 + 2 * sum_i W^(k)_i; level 1 gives the base filling length.
    Coord collar_width(int level) const;
    BrickWall wall(int level, const Point& translate) const;
    /// Small tiles 1..n_K and large levels P1..PK.
    Alphabet alphabet() const;

private:
    int dim_ = 0;
    std::vector<Point> shapes_;
    std::vector<int> cutoffs_;
    std::vector<RectFamily> families_;
};

/// Fills a level-k wall into a level-1 wall with collar width l_k using only
/// tiles 1..n_1. Level 1 is exactly uniform_fill.
FilledWord genfil(const BrickWall& zk, const Box& box, const BrickWall& z1, const TileSchedule& schedule);

class NoMatchingTranslate : public BrickfillError {
public:
    explicit NoMatchingTranslate(const std::string& why);
};

/// The wall translate that agrees with the patch on the inner 1-collar of its domain.
BrickWall infer_collar_wall(const Patch& y, const Alphabet& alphabet);
BrickWall infer_collar_wall(const SymbolicWord& y, const Alphabet& alphabet);

/// Keeps y on its domain and z' outside the filling collar.
FilledWord glue(const Patch& y, const BrickWall& outer, const RectFamily& small, const Alphabet& alphabet);
FilledWord glue(const SymbolicWord& y, const BrickWall& outer, const RectFamily& small, const Alphabet& alphabet);

} // namespace domtile
