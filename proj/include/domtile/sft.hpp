#pragma once

#include "domtile/geometry.hpp"
#include "domtile/numerics.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace domtile {

/// Small tiles are numbered 1..k; large dominoes are levels P1, P2, ...
class TileId {
public:
    constexpr TileId() = default;
    static constexpr TileId small(int index) { return TileId(index); }
    static constexpr TileId large(int level = 1) { return TileId(-level); }

    constexpr bool is_large() const noexcept { return value_ < 0; }
    constexpr bool is_small() const noexcept { return value_ > 0; }
    /// Small tile number, or large level.
    constexpr int index() const noexcept { return value_ < 0 ? -value_ : value_; }
    constexpr std::int32_t raw() const noexcept { return value_; }

    /// "1", "2", ... for small tiles, "P1", "P2", ... for large ones.
    std::string str() const;
    static TileId parse(const std::string& text);

    friend constexpr bool operator==(TileId a, TileId b) noexcept { return a.value_ == b.value_; }
    /// Small tiles first, then large levels, each ascending.
    friend constexpr bool operator<(TileId a, TileId b) noexcept
    {
        if (a.is_large() != b.is_large()) {
            return !a.is_large();
        }
        return a.index() < b.index();
    }

private:
    constexpr explicit TileId(std::int32_t v) : value_(v) {}
    std::int32_t value_ = 0;
};

struct Symbol {
    TileId tile;
    Point offset;

    friend bool operator==(const Symbol& a, const Symbol& b) noexcept
    {
        return a.tile == b.tile && a.offset == b.offset;
    }
    friend bool operator!=(const Symbol& a, const Symbol& b) noexcept { return !(a == b); }
    std::string str() const;
};

class SftError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownTile : public SftError {
public:
    explicit UnknownTile(TileId id);
};

/// Tile shapes indexed by TileId; doubles as the alphabet of the tiling shift.
class Alphabet {
public:
    Alphabet() = default;
    Alphabet(int dim, std::vector<Point> small_shapes, std::vector<Point> large_shapes);

    int dim() const noexcept { return dim_; }
    std::size_t small_count() const noexcept { return small_.size(); }
    std::size_t large_count() const noexcept { return large_.size(); }
    const std::vector<Point>& small_shapes() const noexcept { return small_; }
    const std::vector<Point>& large_shapes() const noexcept { return large_; }

    bool knows(TileId id) const noexcept;
    const Point& shape(TileId id) const;
    bool contains(const Symbol& s) const noexcept;

    /// Number of symbols: sum over tiles of the tile's cell count.
    std::size_t size() const noexcept;
    /// Every symbol, tiles in TileId order and offsets lexicographic.
    std::vector<Symbol> symbols() const;
    std::vector<TileId> tiles() const;

private:
    int dim_ = 0;
    std::vector<Point> small_;
    std::vector<Point> large_;
};

/// Alphabet of Y(w^1..w^k); with_large adds the large domino P1 of shape W.
Alphabet build_alphabet(const RectFamily& f, bool with_large = true);
/// Alphabet with explicit large levels P1..Pm.
Alphabet build_alphabet(const RectFamily& f, const std::vector<Point>& large_shapes);

/// Whether s' may sit at cell + e_axis when s sits at cell.
bool allowed_neighbor(const Alphabet& alphabet, const Symbol& s, int axis, const Symbol& next);

/// Partial assignment of symbols to lattice cells.
///
/// Storage is dense over a bounding box with a presence mask; the bounding
/// box grows on demand. Iteration is lexicographic.
class SymbolicWord {
public:
    SymbolicWord() = default;
    explicit SymbolicWord(int dim);
    explicit SymbolicWord(const Box& bounds);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    const Box& bounds() const noexcept { return bounds_; }

    void set(const Point& p, const Symbol& s);
    void erase(const Point& p);
    bool contains(const Point& p) const noexcept;
    const Symbol* find(const Point& p) const noexcept;
    const Symbol& at(const Point& p) const;

    template <class Fn>
    void for_each(Fn&& fn) const
    {
        if (count_ == 0) {
            return;
        }
        for (std::size_t i = 0; i < present_.size(); ++i) {
            if (present_[i]) {
                fn(bounds_.cell_at(i), symbols_[i]);
            }
        }
    }

    Region domain() const;
    /// True when the domain is exactly the bounding box.
    bool is_box() const noexcept;

    SymbolicWord restricted(const Box& b) const;

    friend bool operator==(const SymbolicWord& a, const SymbolicWord& b);

private:
    void grow_to(const Point& p);

    int dim_ = 0;
    Box bounds_;
    std::vector<Symbol> symbols_;
    std::vector<std::uint8_t> present_;
    std::size_t count_ = 0;
};

struct Violation {
    enum class Kind { UnknownSymbol, Neighbor };
    Kind kind = Kind::Neighbor;
    Point cell;
    int axis = -1; // 0-based; -1 for UnknownSymbol
    Symbol first;
    Symbol second;

    std::string str() const;
};

std::vector<Violation> validate_word(const SymbolicWord& w, const Alphabet& alphabet);

struct Placement {
    TileId tile;
    Point anchor;

    friend bool operator==(const Placement& a, const Placement& b) noexcept
    {
        return a.tile == b.tile && a.anchor == b.anchor;
    }
    /// Anchor first, then tile id: the canonical file order.
    friend bool operator<(const Placement& a, const Placement& b) noexcept
    {
        if (a.anchor != b.anchor) {
            return a.anchor < b.anchor;
        }
        return a.tile < b.tile;
    }
};

Box placement_box(const Placement& p, const Alphabet& alphabet);

struct Tiling {
    int dim = 0;
    std::vector<Placement> placements;

    /// Sort placements into canonical order.
    void canonicalize();
    Coord cell_count(const Alphabet& alphabet) const;
    Region covered(const Alphabet& alphabet) const;

    friend bool operator==(const Tiling& a, const Tiling& b)
    {
        return a.dim == b.dim && a.placements == b.placements;
    }
};

/// A word given in placement form: every domain cell lies in exactly one
/// placement; placements may stick out of the domain (cut tiles).
struct Patch {
    Box domain;
    std::vector<Placement> placements;
};

class InvalidWord : public SftError {
public:
    explicit InvalidWord(std::vector<Violation> v);
    std::vector<Violation> violations;
};

struct Decoded {
    Tiling tiling;                   // placements wholly inside the domain
    std::vector<Placement> partials; // placements cut by the domain boundary
};

Decoded decode(const SymbolicWord& w, const Alphabet& alphabet);
SymbolicWord encode(const Tiling& t, const Alphabet& alphabet);
/// The patch's word on its domain.
SymbolicWord encode(const Patch& patch, const Alphabet& alphabet);
/// Writes the patch's symbols into `out` on cells of `window` covered by the domain.
void encode_into(const Patch& patch, const Alphabet& alphabet, const Box& window, SymbolicWord& out);

SymbolicWord translate_word(const SymbolicWord& w, const Point& v);

} // namespace domtile
