#pragma once

#include "domtile/io.hpp"

#include <cstddef>
#include <string>

namespace domtile {

/// Windows above this many cells are drawn as a downsampled density map.
inline constexpr std::size_t kSvgCellCap = 2'000'000;

/// "#rrggbb" for a tile id; small tiles cycle through a fixed palette,
/// large levels are grays.
std::string tile_color(TileId t);

/// d = 2 only. One rectangle per placement, or a density map for big windows.
std::string render_svg(const TilingFile& f);
std::string render_density_svg(const TilingFile& f, std::size_t max_blocks_per_axis = 512);

/// d = 1: one character per cell ('1'..'9' small tiles, 'A'.. large levels,
/// '.' uncovered, '#' past tile 9), wrapped at `width`.
std::string render_ascii(const TilingFile& f, std::size_t width = 100);

} // namespace domtile
