#include "domtile/brickfill.hpp"

#include <algorithm>

namespace domtile {

BrickWall::BrickWall(Point period, const Point& translate, TileId large_id)
    : period_(std::move(period)), translate_(mod(translate, period_)), tile_(large_id)
{
    for (Coord p : period_) {
        if (p < 1) {
            throw BrickfillError("brick wall period must be positive, got " + period_.str());
        }
    }
}

Symbol BrickWall::at(const Point& v) const
{
    return Symbol{tile_, mod(v - translate_, period_)};
}

Point BrickWall::tile_anchor(const Point& v) const
{
    return v - mod(v - translate_, period_);
}

std::vector<Placement> BrickWall::tiles_meeting(const Box& window) const
{
    std::vector<Placement> out;
    if (window.empty()) {
        return out;
    }
    Point first = tile_anchor(window.lo());
    Point last = tile_anchor(window.hi() - Point(dim(), 1));
    Point count = Point(dim(), 0);
    for (int i = 0; i < dim(); ++i) {
        count[i] = (last[i] - first[i]) / period_[i] + 1;
    }
    out.reserve(static_cast<std::size_t>(count.product()));
    Box(Point(dim(), 0), count).for_each_cell([&](const Point& k) {
        Point a = first;
        for (int i = 0; i < dim(); ++i) {
            a[i] += k[i] * period_[i];
        }
        out.push_back(Placement{tile_, a});
    });
    return out;
}

bool BrickWall::aligned(const Box& b) const
{
    for (int i = 0; i < dim(); ++i) {
        if (floor_mod(b.anchor[i] - translate_[i], period_[i]) != 0 || b.shape[i] % period_[i] != 0) {
            return false;
        }
    }
    return true;
}

BrickWall brick_wall(const RectFamily& f, const Point& translate, TileId large_id)
{
    return BrickWall(f.large_shape, translate, large_id);
}

InwardEmpty::InwardEmpty(const Box& b) : BrickfillError(b.str() + " contains no whole wall tile") {}

Box complete_partial_tiles(const Box& b, const BrickWall& wall, Completion direction)
{
    if (b.dim() != wall.dim()) {
        throw BrickfillError("box and wall dimensions differ");
    }
    Point lo = b.lo();
    Point hi = b.hi();
    for (int i = 0; i < b.dim(); ++i) {
        const Coord p = wall.period()[i];
        const Coord t = wall.translate()[i];
        if (direction == Completion::Outward) {
            lo[i] = t + floor_div(lo[i] - t, p) * p;
            hi[i] = t - floor_div(-(hi[i] - t), p) * p;
        } else {
            lo[i] = t - floor_div(-(lo[i] - t), p) * p;
            hi[i] = t + floor_div(hi[i] - t, p) * p;
            if (hi[i] <= lo[i]) {
                throw InwardEmpty(b);
            }
        }
    }
    return Box::from_bounds(lo, hi);
}

GapTooNarrow::GapTooNarrow(int axis_, bool high_, Coord gap_, Coord threshold)
    : BrickfillError("collar gap " + std::to_string(gap_) + " on the " + (high_ ? "high" : "low") + " face of axis " +
                     std::to_string(axis_ + 1) + " is not above the threshold " + std::to_string(threshold)),
      axis(axis_), high(high_), gap(gap_)
{}

std::vector<CollarPiece> decompose_collar(const Box& inner, const Box& outer, Coord threshold)
{
    if (!outer.contains(inner) || inner.empty()) {
        throw BrickfillError("collar decomposition needs " + inner.str() + " inside " + outer.str());
    }
    const int d = inner.dim();
    std::vector<CollarPiece> out;
    for (int axis = 0; axis < d; ++axis) {
        for (bool high : {false, true}) {
            Coord gap = high ? outer.hi()[axis] - inner.hi()[axis] : inner.lo()[axis] - outer.lo()[axis];
            if (gap == 0) {
                continue;
            }
            if (gap <= threshold) {
                throw GapTooNarrow(axis, high, gap, threshold);
            }
            Point lo = outer.lo();
            Point hi = outer.hi();
            for (int i = 0; i < axis; ++i) {
                lo[i] = inner.lo()[i];
                hi[i] = inner.hi()[i];
            }
            if (high) {
                lo[axis] = inner.hi()[axis];
            } else {
                hi[axis] = inner.lo()[axis];
            }
            out.push_back(CollarPiece{Box::from_bounds(lo, hi), axis, high});
        }
    }
    return out;
}

NonMultipleExtent::NonMultipleExtent(int axis_, Coord extent, Coord side)
    : BrickfillError("extent " + std::to_string(extent) + " on axis " + std::to_string(axis_ + 1) +
                     " is not a multiple of the tile side " + std::to_string(side)),
      axis(axis_)
{}

Tiling strip_tile(const Box& b, const RectFamily& f, int axis)
{
    Tiling out;
    out.dim = f.dim;
    if (b.empty()) {
        return out;
    }
    const std::vector<Coord> counts = f.axis_coins.at(static_cast<std::size_t>(axis)).represent(b.shape[axis]);
    Coord start = b.anchor[axis];
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] == 0) {
            continue;
        }
        const Point& w = f.shapes[j];
        Point strip_lo = b.anchor;
        strip_lo[axis] = start;
        Point grid = b.shape;
        grid[axis] = counts[j];
        for (int i = 0; i < f.dim; ++i) {
            if (i == axis) {
                continue;
            }
            if (b.shape[i] % w[i] != 0) {
                throw NonMultipleExtent(i, b.shape[i], w[i]);
            }
            grid[i] = b.shape[i] / w[i];
        }
        const TileId id = TileId::small(static_cast<int>(j + 1));
        Box(Point(f.dim, 0), grid).for_each_cell([&](const Point& k) {
            Point a = strip_lo;
            for (int i = 0; i < f.dim; ++i) {
                a[i] += k[i] * w[i];
            }
            out.placements.push_back(Placement{id, a});
        });
        start += counts[j] * w[axis];
    }
    out.canonicalize();
    return out;
}

Coord filling_width(const RectFamily& small, const Point& inner_period, const Point& outer_period)
{
    Coord sum = 0;
    for (int i = 0; i < small.dim; ++i) {
        sum += std::max(inner_period[i], outer_period[i]);
    }
    return small.threshold + 2 * sum;
}

namespace {

void check_compatible(const BrickWall& wall, const RectFamily& small)
{
    for (int i = 0; i < small.dim; ++i) {
        if (wall.period()[i] % small.large_shape[i] != 0) {
            throw BrickfillError("wall period " + wall.period().str() + " is not a multiple of " +
                                 small.large_shape.str());
        }
    }
}

} // namespace

FilledWord fill_between(const BrickWall& inner, const Box& inner_box, const BrickWall& outer, const RectFamily& small,
                        Coord width)
{
    if (inner.dim() != small.dim || outer.dim() != small.dim || inner_box.dim() != small.dim) {
        throw BrickfillError("fill: dimension mismatch");
    }
    if (inner_box.empty()) {
        throw BrickfillError("fill: empty inner box");
    }
    check_compatible(inner, small);
    check_compatible(outer, small);

    FilledWord out;
    out.inner_ = inner;
    out.outer_ = outer;
    out.box_ = inner_box;
    out.width_ = width;
    out.completed_inner_ = complete_partial_tiles(inner_box, inner, Completion::Outward);
    if (inner == outer) {
        // The inner completion is already aligned to the outer wall.
        out.hole_ = out.completed_inner_;
        out.collar_.dim = small.dim;
        return out;
    }
    out.hole_ = complete_partial_tiles(expand(inner_box, width), outer, Completion::Inward);
    if (!out.hole_.contains(out.completed_inner_)) {
        throw std::logic_error("fill: collar width " + std::to_string(width) + " too small for " + inner_box.str());
    }
    out.pieces_ = decompose_collar(out.completed_inner_, out.hole_, small.threshold);
    out.collar_.dim = small.dim;
    for (const CollarPiece& piece : out.pieces_) {
        Tiling strip = strip_tile(piece.box, small, piece.axis);
        out.collar_.placements.insert(out.collar_.placements.end(), strip.placements.begin(), strip.placements.end());
    }
    out.collar_.canonicalize();
    return out;
}

FilledWord uniform_fill(const BrickWall& inner, const Box& inner_box, const BrickWall& outer, const RectFamily& f)
{
    return fill_between(inner, inner_box, outer, f, f.fill_length);
}

Coord FilledWord::used_collar_width() const
{
    Coord w = 0;
    for (int i = 0; i < box_.dim(); ++i) {
        w = std::max(w, box_.lo()[i] - hole_.lo()[i]);
        w = std::max(w, hole_.hi()[i] - box_.hi()[i]);
    }
    return w;
}

std::vector<Placement> FilledWord::placements_meeting(const Box& window, const Alphabet& alphabet) const
{
    std::vector<Placement> out;
    if (core_) {
        for (const Placement& p : core_->placements) {
            if (placement_box(p, alphabet).intersects(window)) {
                out.push_back(p);
            }
        }
    }
    if (auto part = completed_inner_.intersection(window)) {
        for (const Placement& p : inner_.tiles_meeting(*part)) {
            if (core_ && Box(p.anchor, inner_.period()).intersects(core_->domain)) {
                continue;
            }
            out.push_back(p);
        }
    }
    for (const Placement& p : collar_.placements) {
        if (placement_box(p, alphabet).intersects(window)) {
            out.push_back(p);
        }
    }
    for (const Placement& p : outer_.tiles_meeting(window)) {
        if (!Box(p.anchor, outer_.period()).intersects(hole_)) {
            out.push_back(p);
        }
    }
    return out;
}

Symbol FilledWord::symbol_at(const Point& p, const Alphabet& alphabet) const
{
    for (const Placement& pl : placements_meeting(Box(p, Point(p.dim(), 1)), alphabet)) {
        if (placement_box(pl, alphabet).contains(p)) {
            return Symbol{pl.tile, p - pl.anchor};
        }
    }
    throw std::logic_error("filled word has no symbol at " + p.str());
}

SymbolicWord FilledWord::materialize(const Box& window, const Alphabet& alphabet) const
{
    Patch patch{window, placements_meeting(window, alphabet)};
    return encode(patch, alphabet);
}

TileSchedule::TileSchedule(int dim, std::vector<Point> shapes, std::vector<int> cutoffs)
    : dim_(dim), shapes_(std::move(shapes)), cutoffs_(std::move(cutoffs))
{
    if (cutoffs_.empty()) {
        throw BrickfillError("a schedule needs at least one cutoff");
    }
    int previous = 0;
    for (int n : cutoffs_) {
        if (n <= previous || n > static_cast<int>(shapes_.size())) {
            throw BrickfillError("cutoffs must increase and stay within the " + std::to_string(shapes_.size()) +
                                 " shapes");
        }
        previous = n;
    }
    for (int n : cutoffs_) {
        families_.push_back(validate_family(std::span<const Point>(shapes_.data(), static_cast<std::size_t>(n)), dim));
    }
}

TileSchedule::TileSchedule(const RectFamily& f)
    : dim_(f.dim), shapes_(f.shapes), cutoffs_{static_cast<int>(f.shapes.size())}, families_{f}
{}

Coord TileSchedule::collar_width(int level) const
{
    const Point& w = large_shape(level);
    return filling_width(base(), w, base().large_shape);
}

BrickWall TileSchedule::wall(int level, const Point& translate) const
{
    return BrickWall(large_shape(level), translate, TileId::large(level));
}

Alphabet TileSchedule::alphabet() const
{
    std::vector<Point> small(shapes_.begin(), shapes_.begin() + cutoffs_.back());
    std::vector<Point> large;
    for (int k = 1; k <= levels(); ++k) {
        large.push_back(large_shape(k));
    }
    return Alphabet(dim_, std::move(small), std::move(large));
}

FilledWord genfil(const BrickWall& zk, const Box& box, const BrickWall& z1, const TileSchedule& schedule)
{
    const RectFamily& base = schedule.base();
    if (z1.period() != base.large_shape) {
        throw BrickfillError("genfil: outer wall period " + z1.period().str() + " is not W^(1) = " +
                             base.large_shape.str());
    }
    return fill_between(zk, box, z1, base, filling_width(base, zk.period(), z1.period()));
}

NoMatchingTranslate::NoMatchingTranslate(const std::string& why) : BrickfillError("no matching wall translate: " + why)
{}

BrickWall infer_collar_wall(const Patch& y, const Alphabet& alphabet)
{
    const Box& dom = y.domain;
    if (dom.empty()) {
        throw NoMatchingTranslate("empty domain");
    }
    auto core = interior(dom, 1);
    std::optional<BrickWall> wall;
    for (const Placement& p : y.placements) {
        Box b = placement_box(p, alphabet);
        if (!b.intersects(dom) || (core && core->contains(b))) {
            continue;
        }
        // p meets the inner 1-collar.
        if (!p.tile.is_large()) {
            throw NoMatchingTranslate("small tile " + p.tile.str() + " at " + p.anchor.str() + " meets the collar");
        }
        if (!wall) {
            wall = BrickWall(b.shape, p.anchor, p.tile);
        } else if (wall->tile() != p.tile || wall->tile_anchor(p.anchor) != p.anchor) {
            throw NoMatchingTranslate("tile " + p.tile.str() + " at " + p.anchor.str() + " is off the wall grid");
        }
    }
    if (!wall) {
        throw NoMatchingTranslate("no tile meets the collar");
    }
    return *wall;
}

BrickWall infer_collar_wall(const SymbolicWord& y, const Alphabet& alphabet)
{
    if (!y.is_box()) {
        throw NoMatchingTranslate("the word's domain is not a box");
    }
    const Box& dom = y.bounds();
    auto core = interior(dom, 1);
    std::optional<BrickWall> wall;
    bool ok = true;
    std::string why;
    y.for_each([&](const Point& p, const Symbol& s) {
        if (!ok || (core && core->contains(p))) {
            return;
        }
        if (!s.tile.is_large() || !alphabet.contains(s)) {
            ok = false;
            why = "cell " + p.str() + " carries " + s.str();
            return;
        }
        if (!wall) {
            wall = BrickWall(alphabet.shape(s.tile), p - s.offset, s.tile);
        } else if (wall->at(p) != s) {
            ok = false;
            why = "cell " + p.str() + " carries " + s.str() + ", wall has " + wall->at(p).str();
        }
    });
    if (!ok) {
        throw NoMatchingTranslate(why);
    }
    return *wall;
}

FilledWord glue(const Patch& y, const BrickWall& outer, const RectFamily& small, const Alphabet& alphabet)
{
    BrickWall inner = infer_collar_wall(y, alphabet);
    FilledWord out = fill_between(inner, y.domain, outer, small, filling_width(small, inner.period(), outer.period()));
    out.core_ = y;
    return out;
}

FilledWord glue(const SymbolicWord& y, const BrickWall& outer, const RectFamily& small, const Alphabet& alphabet)
{
    infer_collar_wall(y, alphabet);
    Decoded parts = decode(y, alphabet);
    Patch patch{y.bounds(), std::move(parts.tiling.placements)};
    patch.placements.insert(patch.placements.end(), parts.partials.begin(), parts.partials.end());
    return glue(patch, outer, small, alphabet);
}

} // namespace domtile
