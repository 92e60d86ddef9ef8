#include "domtile/verify.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <unordered_map>
#include <utility>

namespace domtile {

namespace {

constexpr std::size_t kMaxMessages = 50;

void note(VerifyReport& r, const std::string& m)
{
    if (r.messages.size() < kMaxMessages) {
        r.messages.push_back(m);
    }
}

std::string pstr(const Point& p)
{
    std::string s = "(";
    for (int a = 0; a < p.dim(); ++a) {
        s += (a ? "," : "") + std::to_string(p[a]);
    }
    return s + ")";
}

// Tile side lengths, or nullptr for ids the header does not declare.
const Point* side_of(const FileHeader& h, TileId t)
{
    const std::vector<Point>& list = t.is_large() ? h.large : h.shapes;
    int idx = t.index();
    if (idx < 1 || static_cast<std::size_t>(idx) > list.size()) {
        return nullptr;
    }
    return &list[static_cast<std::size_t>(idx - 1)];
}

struct CellHash {
    std::size_t operator()(const Point& p) const noexcept
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (int a = 0; a < p.dim(); ++a) {
            h ^= static_cast<std::uint64_t>(p[a]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace

std::size_t VerifyReport::violations() const noexcept
{
    return unknown_tiles + bad_offsets + neighbor_violations + overlaps + outside_window + (partials_allowed ? 0 : partial_tiles);
}

VerifyFailed::VerifyFailed(std::size_t c) : std::runtime_error(std::to_string(c) + " violation(s)"), count(c) {}

VerifyReport verify_tiling(const TilingFile& f)
{
    VerifyReport r;
    const FileHeader& h = f.header;
    const int d = h.dim;
    const Point lo = h.window.anchor;
    const Point ext = h.window.shape;
    std::size_t volume = 1;
    for (int a = 0; a < d; ++a) {
        volume *= static_cast<std::size_t>(ext[a]);
    }
    // owner[cell] = 1 + index of the first placement seen on the cell
    std::vector<std::uint32_t> owner(volume, 0);
    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;

    for (std::size_t k = 0; k < f.tiling.placements.size(); ++k) {
        const Placement& p = f.tiling.placements[k];
        if (p.anchor.dim() != d) {
            ++r.unknown_tiles;
            note(r, "placement " + std::to_string(k) + " has the wrong dimension");
            continue;
        }
        const Point* side = side_of(h, p.tile);
        if (!side) {
            ++r.unknown_tiles;
            note(r, "unknown tile " + p.tile.str() + " at " + pstr(p.anchor));
            continue;
        }
        bool inside = true;
        for (int a = 0; a < d; ++a) {
            Coord rel = p.anchor[a] - lo[a];
            inside = inside && rel >= 0 && rel + (*side)[a] <= ext[a];
        }
        if (!inside) {
            ++r.outside_window;
            note(r, "tile " + p.tile.str() + " at " + pstr(p.anchor) + " leaves the window");
            continue;
        }
        // Walk the tile's cells with an odometer over its sides.
        Point off(d, 0);
        const auto me = static_cast<std::uint32_t>(k + 1);
        while (true) {
            std::size_t idx = 0;
            for (int a = 0; a < d; ++a) {
                idx = idx * static_cast<std::size_t>(ext[a]) + static_cast<std::size_t>(p.anchor[a] + off[a] - lo[a]);
            }
            if (owner[idx] == 0) {
                owner[idx] = me;
            } else if (pairs.emplace(owner[idx], me).second) {
                ++r.overlaps;
                const Placement& q = f.tiling.placements[owner[idx] - 1];
                note(r, "tiles " + q.tile.str() + " at " + pstr(q.anchor) + " and " + p.tile.str() + " at " + pstr(p.anchor) +
                            " overlap");
            }
            int a = d - 1;
            while (a >= 0 && ++off[a] == (*side)[a]) {
                off[a] = 0;
                --a;
            }
            if (a < 0) {
                break;
            }
        }
    }
    return r;
}

VerifyReport verify_word(const WordFile& f, bool allow_partials)
{
    VerifyReport r;
    r.partials_allowed = allow_partials;
    const FileHeader& h = f.header;
    const int d = h.dim;

    std::unordered_map<Point, std::size_t, CellHash> at;
    at.reserve(f.entries.size() * 2);
    for (std::size_t k = 0; k < f.entries.size(); ++k) {
        at.emplace(f.entries[k].cell, k);
    }

    // Tile anchor -> number of cells seen, for complete/partial counting.
    std::unordered_map<Point, std::size_t, CellHash> anchor_cells;
    std::unordered_map<Point, TileId, CellHash> anchor_tile;

    for (const WordEntry& e : f.entries) {
        const Point* side = side_of(h, e.tile);
        if (!side) {
            ++r.unknown_tiles;
            note(r, "unknown tile " + e.tile.str() + " at " + pstr(e.cell));
            continue;
        }
        bool offset_ok = e.offset.dim() == d;
        for (int a = 0; a < d && offset_ok; ++a) {
            offset_ok = e.offset[a] >= 0 && e.offset[a] < (*side)[a];
        }
        if (!offset_ok) {
            ++r.bad_offsets;
            note(r, "offset " + pstr(e.offset) + " outside tile " + e.tile.str() + " at " + pstr(e.cell));
            continue;
        }
        for (int a = 0; a < d; ++a) {
            Point next = e.cell;
            next[a] += 1;
            auto it = at.find(next);
            if (it == at.end()) {
                continue;
            }
            const WordEntry& n = f.entries[it->second];
            bool good;
            if (e.offset[a] + 1 < (*side)[a]) {
                Point want = e.offset;
                want[a] += 1;
                good = n.tile == e.tile && n.offset == want;
            } else {
                good = n.offset.dim() == d && n.offset[a] == 0;
            }
            if (!good) {
                ++r.neighbor_violations;
                note(r, "cells " + pstr(e.cell) + " and " + pstr(next) + " disagree along axis " + std::to_string(a + 1));
            }
        }
        Point anchor = e.cell;
        for (int a = 0; a < d; ++a) {
            anchor[a] -= e.offset[a];
        }
        auto [it, fresh] = anchor_tile.emplace(anchor, e.tile);
        if (fresh || it->second == e.tile) {
            ++anchor_cells[anchor];
        }
    }
    for (const auto& [anchor, count] : anchor_cells) {
        const Point* side = side_of(h, anchor_tile[anchor]);
        Coord area = 1;
        for (int a = 0; a < d; ++a) {
            area *= (*side)[a];
        }
        if (static_cast<Coord>(count) == area) {
            ++r.complete_tiles;
        } else {
            ++r.partial_tiles;
        }
    }
    if (!allow_partials && r.partial_tiles > 0) {
        note(r, std::to_string(r.partial_tiles) + " tile(s) cut by the domain boundary");
    }
    return r;
}

} // namespace domtile
