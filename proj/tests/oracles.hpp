#pragma once

// Brute-force oracles shared by the unit tests and the acceptance binary.

#include "domtile/sft.hpp"

#include <functional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using namespace domtile;

/// Every exact tiling of `box` by the given tiles, by backtracking on the
/// first uncovered cell in lexicographic order.
inline void enumerate_tilings(const Box& box, const std::vector<std::pair<TileId, Point>>& tiles,
                              const std::function<void(const std::vector<Placement>&)>& visit)
{
    const auto n = static_cast<std::size_t>(box.volume());
    std::vector<std::uint8_t> used(n, 0);
    std::vector<Placement> current;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        while (from < n && used[from]) {
            ++from;
        }
        if (from == n) {
            visit(current);
            return;
        }
        const Point cell = box.cell_at(from);
        for (const auto& [id, shape] : tiles) {
            Box t(cell, shape);
            if (!box.contains(t)) {
                continue;
            }
            bool free = true;
            t.for_each_cell([&](const Point& p) { free = free && !used[box.index_of(p)]; });
            if (!free) {
                continue;
            }
            t.for_each_cell([&](const Point& p) { used[box.index_of(p)] = 1; });
            current.push_back(Placement{id, cell});
            rec(from + 1);
            current.pop_back();
            t.for_each_cell([&](const Point& p) { used[box.index_of(p)] = 0; });
        }
    };
    rec(0);
}

/// Every word on `box` that satisfies the one-step rule and cuts no tile at
/// the box boundary, built cell by cell from the neighbor relation alone.
inline void enumerate_words(const Box& box, const Alphabet& alphabet, const std::function<void(const SymbolicWord&)>& visit)
{
    const auto n = static_cast<std::size_t>(box.volume());
    const int d = box.dim();
    const std::vector<Symbol> symbols = alphabet.symbols();
    SymbolicWord w(box);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == n) {
            visit(w);
            return;
        }
        const Point cell = box.cell_at(k);
        for (const Symbol& s : symbols) {
            const Point& shape = alphabet.shape(s.tile);
            bool ok = true;
            for (int a = 0; a < d && ok; ++a) {
                // no tile may be cut by the box faces
                if (cell[a] == box.anchor[a] && s.offset[a] != 0) {
                    ok = false;
                }
                if (cell[a] == box.anchor[a] + box.shape[a] - 1 && s.offset[a] != shape[a] - 1) {
                    ok = false;
                }
                Point prev = cell;
                prev[a] -= 1;
                if (ok && box.contains(prev)) {
                    ok = allowed_neighbor(alphabet, w.at(prev), a, s);
                }
            }
            if (!ok) {
                continue;
            }
            w.set(cell, s);
            rec(k + 1);
            w.erase(cell);
        }
    };
    rec(0);
}

/// A uniformly shuffled depth-first search for one exact tiling.
inline bool random_tiling(const Box& box, const std::vector<std::pair<TileId, Point>>& tiles, std::mt19937_64& rng,
                          std::vector<Placement>& out)
{
    const auto n = static_cast<std::size_t>(box.volume());
    std::vector<std::uint8_t> used(n, 0);
    out.clear();
    std::size_t budget = 2'000'000;
    std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
        if (budget-- == 0) {
            return false;
        }
        while (from < n && used[from]) {
            ++from;
        }
        if (from == n) {
            return true;
        }
        const Point cell = box.cell_at(from);
        std::vector<std::size_t> order(tiles.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i : order) {
            Box t(cell, tiles[i].second);
            if (!box.contains(t)) {
                continue;
            }
            bool free = true;
            t.for_each_cell([&](const Point& p) { free = free && !used[box.index_of(p)]; });
            if (!free) {
                continue;
            }
            t.for_each_cell([&](const Point& p) { used[box.index_of(p)] = 1; });
            out.push_back(Placement{tiles[i].first, cell});
            if (rec(from + 1)) {
                return true;
            }
            out.pop_back();
            t.for_each_cell([&](const Point& p) { used[box.index_of(p)] = 0; });
        }
        return false;
    };
    return rec(0);
}

inline std::vector<std::pair<TileId, Point>> tiles_of(const Alphabet& a)
{
    std::vector<std::pair<TileId, Point>> out;
    for (TileId t : a.tiles()) {
        out.emplace_back(t, a.shape(t));
    }
    return out;
}

} // namespace oracle
