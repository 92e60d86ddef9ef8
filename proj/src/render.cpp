#include "domtile/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace domtile {

namespace {

constexpr std::array<const char*, 10> kPalette = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                                  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#17becf"};
constexpr std::array<const char*, 4> kGrays = {"#bab0ac", "#8c8c8c", "#5f5f5f", "#3a3a3a"};

std::array<int, 3> rgb(const std::string& hex)
{
    return {std::stoi(hex.substr(1, 2), nullptr, 16), std::stoi(hex.substr(3, 2), nullptr, 16),
            std::stoi(hex.substr(5, 2), nullptr, 16)};
}

void require_dim(const TilingFile& f, int d, const char* what)
{
    if (f.header.dim != d) {
        throw std::invalid_argument(std::string(what) + " needs a " + std::to_string(d) + "-dimensional tiling");
    }
}

const Point& shape_of(const FileHeader& h, TileId t)
{
    const auto& list = t.is_large() ? h.large : h.shapes;
    auto i = static_cast<std::size_t>(t.index());
    if (i < 1 || i > list.size()) {
        throw UnknownTile(t);
    }
    return list[i - 1];
}

} // namespace

std::string tile_color(TileId t)
{
    if (t.is_large()) {
        return kGrays[static_cast<std::size_t>(t.index() - 1) % kGrays.size()];
    }
    return kPalette[static_cast<std::size_t>(t.index() - 1) % kPalette.size()];
}

std::string render_svg(const TilingFile& f)
{
    require_dim(f, 2, "SVG rendering");
    const Box& w = f.header.window;
    if (static_cast<std::size_t>(w.volume()) > kSvgCellCap) {
        return render_density_svg(f);
    }
    const Coord cols = w.shape[0];
    const Coord rows = w.shape[1];
    const Coord longest = std::max<Coord>(1, std::max(cols, rows));
    const Coord px = std::clamp<Coord>(800 / longest, 1, 16);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * px << "\" height=\"" << rows * px << "\" viewBox=\"0 0 "
        << cols * px << ' ' << rows * px << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    const bool stroke = px >= 4;
    for (const Placement& p : f.tiling.placements) {
        const Point& s = shape_of(f.header, p.tile);
        out << "<rect x=\"" << (p.anchor[0] - w.anchor[0]) * px << "\" y=\"" << (p.anchor[1] - w.anchor[1]) * px << "\" width=\""
            << s[0] * px << "\" height=\"" << s[1] * px << "\" fill=\"" << tile_color(p.tile) << '"';
        if (stroke) {
            out << " stroke=\"#000000\" stroke-width=\"0.5\"";
        }
        out << "/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_density_svg(const TilingFile& f, std::size_t max_blocks)
{
    require_dim(f, 2, "SVG rendering");
    const Box& w = f.header.window;
    const Coord longest = std::max<Coord>(1, std::max(w.shape[0], w.shape[1]));
    const Coord block = std::max<Coord>(1, (longest + static_cast<Coord>(max_blocks) - 1) / static_cast<Coord>(max_blocks));
    const Coord bx = (w.shape[0] + block - 1) / block;
    const Coord by = (w.shape[1] + block - 1) / block;
    const auto nb = static_cast<std::size_t>(bx * by);
    // Weighted color sums per block; the uncovered remainder stays white.
    std::vector<std::array<double, 3>> acc(nb, {0, 0, 0});
    std::vector<double> cells(nb, 0);
    for (const Placement& p : f.tiling.placements) {
        const Point& s = shape_of(f.header, p.tile);
        const auto c = rgb(tile_color(p.tile));
        const Coord x0 = p.anchor[0] - w.anchor[0];
        const Coord y0 = p.anchor[1] - w.anchor[1];
        for (Coord gx = std::max<Coord>(0, x0 / block); gx <= std::min(bx - 1, (x0 + s[0] - 1) / block); ++gx) {
            Coord ox = std::min(x0 + s[0], (gx + 1) * block) - std::max(x0, gx * block);
            for (Coord gy = std::max<Coord>(0, y0 / block); gy <= std::min(by - 1, (y0 + s[1] - 1) / block); ++gy) {
                Coord oy = std::min(y0 + s[1], (gy + 1) * block) - std::max(y0, gy * block);
                if (ox <= 0 || oy <= 0) {
                    continue;
                }
                auto k = static_cast<std::size_t>(gy * bx + gx);
                double n = static_cast<double>(ox * oy);
                for (int ch = 0; ch < 3; ++ch) {
                    acc[k][static_cast<std::size_t>(ch)] += n * c[static_cast<std::size_t>(ch)];
                }
                cells[k] += n;
            }
        }
    }
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << bx << "\" height=\"" << by << "\" viewBox=\"0 0 " << bx << ' ' << by
        << "\" shape-rendering=\"crispEdges\">\n";
    out << "<!-- density map: one pixel per " << block << "x" << block << " block -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    const double full = static_cast<double>(block * block);
    for (Coord gy = 0; gy < by; ++gy) {
        for (Coord gx = 0; gx < bx; ++gx) {
            auto k = static_cast<std::size_t>(gy * bx + gx);
            if (cells[k] == 0) {
                continue;
            }
            char hex[8];
            int ch[3];
            for (int i = 0; i < 3; ++i) {
                double covered = acc[k][static_cast<std::size_t>(i)];
                double white = 255.0 * std::max(0.0, full - cells[k]);
                ch[i] = static_cast<int>(std::lround((covered + white) / full));
                ch[i] = std::clamp(ch[i], 0, 255);
            }
            std::snprintf(hex, sizeof hex, "#%02x%02x%02x", ch[0], ch[1], ch[2]);
            out << "<rect x=\"" << gx << "\" y=\"" << gy << "\" width=\"1\" height=\"1\" fill=\"" << hex << "\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_ascii(const TilingFile& f, std::size_t width)
{
    require_dim(f, 1, "ASCII rendering");
    const Box& w = f.header.window;
    std::string line(static_cast<std::size_t>(w.shape[0]), '.');
    for (const Placement& p : f.tiling.placements) {
        const Point& s = shape_of(f.header, p.tile);
        char c;
        if (p.tile.is_large()) {
            c = static_cast<char>('A' + std::min(p.tile.index() - 1, 25));
        } else {
            c = p.tile.index() <= 9 ? static_cast<char>('0' + p.tile.index()) : '#';
        }
        for (Coord x = std::max<Coord>(0, p.anchor[0] - w.anchor[0]); x < std::min(w.shape[0], p.anchor[0] - w.anchor[0] + s[0]); ++x) {
            line[static_cast<std::size_t>(x)] = c;
        }
    }
    std::string out;
    for (std::size_t i = 0; i < line.size(); i += width) {
        out += line.substr(i, width);
        out += '\n';
    }
    return out;
}

} // namespace domtile
