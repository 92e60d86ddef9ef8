#include "domtile/sft.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace domtile {

std::string TileId::str() const
{
    if (is_large()) {
        return "P" + std::to_string(index());
    }
    return std::to_string(value_);
}

TileId TileId::parse(const std::string& text)
{
    try {
        if (!text.empty() && (text[0] == 'P' || text[0] == 'p')) {
            int level = text.size() == 1 ? 1 : std::stoi(text.substr(1));
            if (level >= 1) {
                return large(level);
            }
        } else {
            std::size_t used = 0;
            int j = std::stoi(text, &used);
            if (used == text.size() && j >= 1) {
                return small(j);
            }
        }
    } catch (const std::exception&) {
    }
    throw SftError("bad tile id '" + text + "'");
}

std::string Symbol::str() const
{
    return "tau^" + tile.str() + "_" + offset.str();
}

UnknownTile::UnknownTile(TileId id) : SftError("unknown tile id " + id.str()) {}

Alphabet::Alphabet(int dim, std::vector<Point> small_shapes, std::vector<Point> large_shapes)
    : dim_(dim), small_(std::move(small_shapes)), large_(std::move(large_shapes))
{
    for (const auto* list : {&small_, &large_}) {
        for (const Point& w : *list) {
            if (w.dim() != dim_) {
                throw SftError("shape " + w.str() + " does not have dimension " + std::to_string(dim_));
            }
            for (Coord c : w) {
                if (c < 1) {
                    throw SftError("shape " + w.str() + " has a non-positive side");
                }
            }
        }
    }
}

bool Alphabet::knows(TileId id) const noexcept
{
    auto i = static_cast<std::size_t>(id.index());
    if (id.is_small()) {
        return i >= 1 && i <= small_.size();
    }
    if (id.is_large()) {
        return i >= 1 && i <= large_.size();
    }
    return false;
}

const Point& Alphabet::shape(TileId id) const
{
    if (!knows(id)) {
        throw UnknownTile(id);
    }
    auto i = static_cast<std::size_t>(id.index()) - 1;
    return id.is_large() ? large_[i] : small_[i];
}

bool Alphabet::contains(const Symbol& s) const noexcept
{
    if (!knows(s.tile) || s.offset.dim() != dim_) {
        return false;
    }
    const Point& w = shape(s.tile);
    for (int i = 0; i < dim_; ++i) {
        if (s.offset[i] < 0 || s.offset[i] >= w[i]) {
            return false;
        }
    }
    return true;
}

std::size_t Alphabet::size() const noexcept
{
    std::size_t n = 0;
    for (const auto* list : {&small_, &large_}) {
        for (const Point& w : *list) {
            n += static_cast<std::size_t>(w.product());
        }
    }
    return n;
}

std::vector<TileId> Alphabet::tiles() const
{
    std::vector<TileId> out;
    for (std::size_t j = 1; j <= small_.size(); ++j) {
        out.push_back(TileId::small(static_cast<int>(j)));
    }
    for (std::size_t j = 1; j <= large_.size(); ++j) {
        out.push_back(TileId::large(static_cast<int>(j)));
    }
    return out;
}

std::vector<Symbol> Alphabet::symbols() const
{
    std::vector<Symbol> out;
    out.reserve(size());
    for (TileId id : tiles()) {
        Box(Point(dim_, 0), shape(id)).for_each_cell([&](const Point& v) { out.push_back(Symbol{id, v}); });
    }
    return out;
}

Alphabet build_alphabet(const RectFamily& f, bool with_large)
{
    std::vector<Point> large;
    if (with_large) {
        large.push_back(f.large_shape);
    }
    return Alphabet(f.dim, f.shapes, std::move(large));
}

Alphabet build_alphabet(const RectFamily& f, const std::vector<Point>& large_shapes)
{
    return Alphabet(f.dim, f.shapes, large_shapes);
}

bool allowed_neighbor(const Alphabet& alphabet, const Symbol& s, int axis, const Symbol& next)
{
    if (!alphabet.contains(s) || !alphabet.contains(next)) {
        return false;
    }
    const Point& w = alphabet.shape(s.tile);
    if (s.offset[axis] < w[axis] - 1) {
        Point expected = s.offset;
        expected[axis] += 1;
        return next.tile == s.tile && next.offset == expected;
    }
    return next.offset[axis] == 0;
}

SymbolicWord::SymbolicWord(int dim) : dim_(dim), bounds_(Point(dim, 0), Point(dim, 0)) {}

SymbolicWord::SymbolicWord(const Box& bounds)
    : dim_(bounds.dim()), bounds_(bounds), symbols_(static_cast<std::size_t>(bounds.volume())),
      present_(static_cast<std::size_t>(bounds.volume()), 0)
{}

void SymbolicWord::grow_to(const Point& p)
{
    Point lo = bounds_.lo();
    Point hi = bounds_.hi();
    if (bounds_.empty()) {
        lo = p;
        hi = p + Point(dim_, 1);
    }
    for (int i = 0; i < dim_; ++i) {
        Coord slack = std::max<Coord>(4, (hi[i] - lo[i]) / 2);
        if (p[i] < lo[i]) {
            lo[i] = p[i] - slack;
        }
        if (p[i] >= hi[i]) {
            hi[i] = p[i] + 1 + slack;
        }
    }
    SymbolicWord grown(Box::from_bounds(lo, hi));
    for_each([&](const Point& q, const Symbol& s) { grown.set(q, s); });
    *this = std::move(grown);
}

void SymbolicWord::set(const Point& p, const Symbol& s)
{
    if (dim_ == 0) {
        *this = SymbolicWord(p.dim());
    }
    if (p.dim() != dim_) {
        throw SftError("cell " + p.str() + " has the wrong dimension");
    }
    if (!bounds_.contains(p)) {
        grow_to(p);
    }
    auto i = bounds_.index_of(p);
    if (!present_[i]) {
        present_[i] = 1;
        ++count_;
    }
    symbols_[i] = s;
}

void SymbolicWord::erase(const Point& p)
{
    if (!bounds_.contains(p)) {
        return;
    }
    auto i = bounds_.index_of(p);
    if (present_[i]) {
        present_[i] = 0;
        --count_;
    }
}

bool SymbolicWord::contains(const Point& p) const noexcept
{
    return bounds_.contains(p) && present_[bounds_.index_of(p)];
}

const Symbol* SymbolicWord::find(const Point& p) const noexcept
{
    if (!bounds_.contains(p)) {
        return nullptr;
    }
    auto i = bounds_.index_of(p);
    return present_[i] ? &symbols_[i] : nullptr;
}

const Symbol& SymbolicWord::at(const Point& p) const
{
    const Symbol* s = find(p);
    if (!s) {
        throw SftError("cell " + p.str() + " is outside the word's domain");
    }
    return *s;
}

Region SymbolicWord::domain() const
{
    std::vector<Point> cells;
    cells.reserve(count_);
    for_each([&](const Point& p, const Symbol&) { cells.push_back(p); });
    return Region(std::move(cells));
}

bool SymbolicWord::is_box() const noexcept
{
    return count_ > 0 && count_ == present_.size();
}

SymbolicWord SymbolicWord::restricted(const Box& b) const
{
    auto common = bounds_.intersection(b);
    if (!common) {
        return SymbolicWord(dim_);
    }
    SymbolicWord out(*common);
    common->for_each_cell([&](const Point& p) {
        if (const Symbol* s = find(p)) {
            out.set(p, *s);
        }
    });
    return out;
}

bool operator==(const SymbolicWord& a, const SymbolicWord& b)
{
    if (a.count_ != b.count_ || a.dim_ != b.dim_) {
        return false;
    }
    bool same = true;
    a.for_each([&](const Point& p, const Symbol& s) {
        if (same) {
            const Symbol* o = b.find(p);
            same = o && *o == s;
        }
    });
    return same;
}

std::string Violation::str() const
{
    std::ostringstream os;
    if (kind == Kind::UnknownSymbol) {
        os << "unknown symbol " << first.str() << " at " << cell.str();
    } else {
        os << first.str() << " at " << cell.str() << " cannot be followed on axis " << (axis + 1) << " by "
           << second.str();
    }
    return os.str();
}

std::vector<Violation> validate_word(const SymbolicWord& w, const Alphabet& alphabet)
{
    std::vector<Violation> out;
    w.for_each([&](const Point& p, const Symbol& s) {
        if (!alphabet.contains(s)) {
            out.push_back(Violation{Violation::Kind::UnknownSymbol, p, -1, s, s});
            return;
        }
        for (int axis = 0; axis < w.dim(); ++axis) {
            Point q = p;
            q[axis] += 1;
            const Symbol* n = w.find(q);
            if (n && !allowed_neighbor(alphabet, s, axis, *n)) {
                out.push_back(Violation{Violation::Kind::Neighbor, p, axis, s, *n});
            }
        }
    });
    return out;
}

Box placement_box(const Placement& p, const Alphabet& alphabet)
{
    return Box(p.anchor, alphabet.shape(p.tile));
}

void Tiling::canonicalize()
{
    std::sort(placements.begin(), placements.end());
}

Coord Tiling::cell_count(const Alphabet& alphabet) const
{
    Coord n = 0;
    for (const Placement& p : placements) {
        n += alphabet.shape(p.tile).product();
    }
    return n;
}

Region Tiling::covered(const Alphabet& alphabet) const
{
    std::vector<Point> cells;
    for (const Placement& p : placements) {
        placement_box(p, alphabet).for_each_cell([&](const Point& c) { cells.push_back(c); });
    }
    return Region(std::move(cells));
}

namespace {

std::string summarize(const std::vector<Violation>& v)
{
    std::string s = std::to_string(v.size()) + " violation(s)";
    if (!v.empty()) {
        s += ", first: " + v.front().str();
    }
    return s;
}

struct PlacementHash {
    std::size_t operator()(const Placement& p) const noexcept
    {
        return PointHash{}(p.anchor) * 31u + static_cast<std::size_t>(p.tile.raw());
    }
};

void write_placement(const Placement& pl, const Point& shape, const Box& clip, SymbolicWord& out)
{
    auto cells = Box(pl.anchor, shape).intersection(clip);
    if (!cells) {
        return;
    }
    cells->for_each_cell([&](const Point& c) {
        if (out.contains(c)) {
            throw SftError("placements overlap at " + c.str());
        }
        out.set(c, Symbol{pl.tile, c - pl.anchor});
    });
}

} // namespace

InvalidWord::InvalidWord(std::vector<Violation> v) : SftError("invalid word: " + summarize(v)), violations(std::move(v))
{}

Decoded decode(const SymbolicWord& w, const Alphabet& alphabet)
{
    auto violations = validate_word(w, alphabet);
    if (!violations.empty()) {
        throw InvalidWord(std::move(violations));
    }
    std::unordered_map<Placement, Coord, PlacementHash> seen;
    std::vector<Placement> order;
    w.for_each([&](const Point& p, const Symbol& s) {
        Placement pl{s.tile, p - s.offset};
        auto [it, inserted] = seen.try_emplace(pl, 0);
        if (inserted) {
            order.push_back(pl);
        }
        ++it->second;
    });
    Decoded out;
    out.tiling.dim = w.dim();
    for (const Placement& pl : order) {
        if (seen[pl] == alphabet.shape(pl.tile).product()) {
            out.tiling.placements.push_back(pl);
        } else {
            out.partials.push_back(pl);
        }
    }
    out.tiling.canonicalize();
    std::sort(out.partials.begin(), out.partials.end());
    return out;
}

SymbolicWord encode(const Tiling& t, const Alphabet& alphabet)
{
    if (t.placements.empty()) {
        return SymbolicWord(t.dim > 0 ? t.dim : alphabet.dim());
    }
    Point lo = t.placements.front().anchor;
    Point hi = lo;
    for (const Placement& pl : t.placements) {
        Box b = placement_box(pl, alphabet);
        for (int i = 0; i < lo.dim(); ++i) {
            lo[i] = std::min(lo[i], b.anchor[i]);
            hi[i] = std::max(hi[i], b.anchor[i] + b.shape[i]);
        }
    }
    Box bounds = Box::from_bounds(lo, hi);
    SymbolicWord out(bounds);
    for (const Placement& pl : t.placements) {
        write_placement(pl, alphabet.shape(pl.tile), bounds, out);
    }
    return out;
}

void encode_into(const Patch& patch, const Alphabet& alphabet, const Box& window, SymbolicWord& out)
{
    auto clip = patch.domain.intersection(window);
    if (!clip) {
        return;
    }
    for (const Placement& pl : patch.placements) {
        write_placement(pl, alphabet.shape(pl.tile), *clip, out);
    }
}

SymbolicWord encode(const Patch& patch, const Alphabet& alphabet)
{
    SymbolicWord out(patch.domain);
    encode_into(patch, alphabet, patch.domain, out);
    if (static_cast<Coord>(out.size()) != patch.domain.volume()) {
        throw SftError("patch leaves " + std::to_string(patch.domain.volume() - static_cast<Coord>(out.size())) +
                       " cell(s) of " + patch.domain.str() + " uncovered");
    }
    return out;
}

SymbolicWord translate_word(const SymbolicWord& w, const Point& v)
{
    if (w.empty()) {
        return SymbolicWord(w.dim());
    }
    SymbolicWord out(w.bounds().translated(v));
    w.for_each([&](const Point& p, const Symbol& s) { out.set(p + v, s); });
    return out;
}

} // namespace domtile
