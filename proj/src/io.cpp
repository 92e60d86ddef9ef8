#include "domtile/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace domtile {

ParseError::ParseError(std::size_t line_, const std::string& what)
    : std::runtime_error(line_ == 0 ? what : "line " + std::to_string(line_) + ": " + what), line(line_)
{
}

VersionMismatch::VersionMismatch(const std::string& kind, const std::string& found)
    : ParseError(1, "expected " + kind + " version " + std::to_string(kFormatVersion) + ", found '" + found + "'")
{
}

namespace {

constexpr const char* kTilingMagic = "domtile-tiling";
constexpr const char* kWordMagic = "domtile-word";

std::vector<std::string> split_ws(const std::string& line)
{
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

Coord parse_coord(const std::string& s, std::size_t line)
{
    Coord v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && s[0] == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last) {
        throw ParseError(line, "bad integer '" + s + "'");
    }
    return v;
}

Point point_from(const std::string& s, int dim, std::size_t line)
{
    std::vector<Coord> c;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = s.find(',', start);
        c.push_back(parse_coord(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start), line));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    if (c.empty() || static_cast<int>(c.size()) > kMaxDim || (dim != 0 && static_cast<int>(c.size()) != dim)) {
        throw ParseError(line, "expected a " + std::to_string(dim) + "-vector, got '" + s + "'");
    }
    return Point(std::span<const Coord>(c));
}

struct Lines {
    std::vector<std::string> lines;
    std::size_t pos = 0;

    explicit Lines(const std::string& text)
    {
        std::istringstream in(text);
        std::string l;
        while (std::getline(in, l)) {
            if (!l.empty() && l.back() == '\r') {
                l.pop_back();
            }
            lines.push_back(l);
        }
    }
    bool done() const { return pos >= lines.size(); }
    std::size_t number() const { return pos + 1; }
    std::vector<std::string> next_fields()
    {
        return split_ws(lines[pos++]);
    }
};

std::vector<std::string> expect_key(Lines& in, const std::string& key)
{
    if (in.done()) {
        throw ParseError(in.number(), "missing '" + key + "' header");
    }
    std::size_t at = in.number();
    auto f = in.next_fields();
    if (f.empty() || f[0] != key) {
        throw ParseError(at, "expected '" + key + "' header");
    }
    f.erase(f.begin());
    return f;
}

void check_magic(Lines& in, const std::string& magic)
{
    if (in.done()) {
        throw ParseError(1, "empty file");
    }
    auto f = in.next_fields();
    if (f.empty() || f[0] != magic) {
        throw ParseError(1, "not a " + magic + " file");
    }
    if (f.size() != 2 || f[1] != std::to_string(kFormatVersion)) {
        throw VersionMismatch(magic, f.size() >= 2 ? f[1] : "");
    }
}

FileHeader parse_header(Lines& in)
{
    FileHeader h;
    std::size_t at = in.number();
    auto dim = expect_key(in, "dim");
    if (dim.size() != 1) {
        throw ParseError(at, "dim takes one value");
    }
    h.dim = static_cast<int>(parse_coord(dim[0], at));
    if (h.dim < 1 || h.dim > kMaxDim) {
        throw ParseError(at, "unsupported dimension " + dim[0]);
    }
    at = in.number();
    for (const std::string& s : expect_key(in, "shapes")) {
        h.shapes.push_back(point_from(s, h.dim, at));
    }
    at = in.number();
    for (const std::string& s : expect_key(in, "large")) {
        h.large.push_back(point_from(s, h.dim, at));
    }
    at = in.number();
    auto win = expect_key(in, "window");
    if (win.size() != 2) {
        throw ParseError(at, "window takes an anchor and a shape");
    }
    try {
        h.window = Box(point_from(win[0], h.dim, at), point_from(win[1], h.dim, at));
    } catch (const GeometryError& e) {
        throw ParseError(at, e.what());
    }
    at = in.number();
    auto seed = expect_key(in, "seed");
    if (seed.size() != 1) {
        throw ParseError(at, "seed takes one value");
    }
    std::uint64_t s = 0;
    auto [ptr, ec] = std::from_chars(seed[0].data(), seed[0].data() + seed[0].size(), s);
    if (ec != std::errc() || ptr != seed[0].data() + seed[0].size()) {
        throw ParseError(at, "bad seed '" + seed[0] + "'");
    }
    h.seed = s;
    for (const Point& p : h.shapes) {
        for (Coord c : p) {
            if (c <= 0) {
                throw ParseError(0, "tile shape " + format_point(p) + " has a non-positive side");
            }
        }
    }
    return h;
}

void write_header(std::ostream& out, const FileHeader& h)
{
    out << "dim " << h.dim << '\n' << "shapes";
    for (const Point& p : h.shapes) {
        out << ' ' << format_point(p);
    }
    out << '\n' << "large";
    for (const Point& p : h.large) {
        out << ' ' << format_point(p);
    }
    out << '\n'
        << "window " << format_point(h.window.anchor) << ' ' << format_point(h.window.shape) << '\n'
        << "seed " << h.seed << '\n';
}

TileId tile_from(const std::string& s, const FileHeader&, std::size_t line)
{
    TileId t;
    try {
        t = TileId::parse(s);
    } catch (const std::exception&) {
        throw ParseError(line, "bad tile id '" + s + "'");
    }
    return t;
}

Point coords_from(const std::vector<std::string>& f, std::size_t first, int dim, std::size_t line)
{
    Point p(dim, 0);
    for (int a = 0; a < dim; ++a) {
        p[a] = parse_coord(f[first + static_cast<std::size_t>(a)], line);
    }
    return p;
}

nlohmann::json header_json(const FileHeader& h)
{
    nlohmann::json j;
    j["dim"] = h.dim;
    j["shapes"] = nlohmann::json::array();
    for (const Point& p : h.shapes) {
        j["shapes"].push_back(std::vector<Coord>(p.begin(), p.end()));
    }
    j["large"] = nlohmann::json::array();
    for (const Point& p : h.large) {
        j["large"].push_back(std::vector<Coord>(p.begin(), p.end()));
    }
    j["window"] = {{"anchor", std::vector<Coord>(h.window.anchor.begin(), h.window.anchor.end())},
                   {"shape", std::vector<Coord>(h.window.shape.begin(), h.window.shape.end())}};
    j["seed"] = h.seed;
    return j;
}

Point json_point(const nlohmann::json& j, int dim)
{
    auto v = j.get<std::vector<Coord>>();
    if (static_cast<int>(v.size()) != dim) {
        throw ParseError(0, "expected a " + std::to_string(dim) + "-vector in JSON");
    }
    return Point(std::span<const Coord>(v));
}

FileHeader header_from_json(const nlohmann::json& j, const std::string& kind)
{
    if (j.value("format", std::string()) != kind) {
        throw ParseError(0, "not a " + kind + " document");
    }
    if (j.value("version", -1) != kFormatVersion) {
        throw VersionMismatch(kind, std::to_string(j.value("version", -1)));
    }
    FileHeader h;
    h.dim = j.at("dim").get<int>();
    if (h.dim < 1 || h.dim > kMaxDim) {
        throw ParseError(0, "unsupported dimension");
    }
    for (const auto& p : j.at("shapes")) {
        h.shapes.push_back(json_point(p, h.dim));
    }
    for (const auto& p : j.at("large")) {
        h.large.push_back(json_point(p, h.dim));
    }
    h.window = Box(json_point(j.at("window").at("anchor"), h.dim), json_point(j.at("window").at("shape"), h.dim));
    h.seed = j.at("seed").get<std::uint64_t>();
    return h;
}

} // namespace

std::string format_point(const Point& p)
{
    std::string s;
    for (int a = 0; a < p.dim(); ++a) {
        if (a) {
            s += ',';
        }
        s += std::to_string(p[a]);
    }
    return s;
}

Point parse_point(const std::string& s, int dim) { return point_from(s, dim, 0); }

WordFile word_file(const FileHeader& h, const SymbolicWord& w)
{
    WordFile f;
    f.header = h;
    f.entries.reserve(w.size());
    w.for_each([&](const Point& p, const Symbol& s) { f.entries.push_back(WordEntry{p, s.tile, s.offset}); });
    return f;
}

SymbolicWord to_word(const WordFile& f)
{
    SymbolicWord w(f.header.dim);
    for (const WordEntry& e : f.entries) {
        w.set(e.cell, Symbol{e.tile, e.offset});
    }
    return w;
}

std::string serialize_tiling(const TilingFile& f)
{
    std::vector<Placement> sorted = f.tiling.placements;
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream out;
    out << kTilingMagic << ' ' << kFormatVersion << '\n';
    write_header(out, f.header);
    for (const Placement& p : sorted) {
        out << p.tile.str();
        for (Coord c : p.anchor) {
            out << ' ' << c;
        }
        out << '\n';
    }
    return out.str();
}

TilingFile parse_tiling(const std::string& text)
{
    Lines in(text);
    check_magic(in, kTilingMagic);
    TilingFile f;
    f.header = parse_header(in);
    f.tiling.dim = f.header.dim;
    const auto width = static_cast<std::size_t>(f.header.dim) + 1;
    while (!in.done()) {
        std::size_t at = in.number();
        auto fields = in.next_fields();
        if (fields.empty()) {
            continue;
        }
        if (fields.size() != width) {
            throw ParseError(at, "expected tile id and " + std::to_string(f.header.dim) + " coordinates");
        }
        f.tiling.placements.push_back(Placement{tile_from(fields[0], f.header, at), coords_from(fields, 1, f.header.dim, at)});
    }
    return f;
}

std::string serialize_word(const WordFile& f)
{
    std::vector<WordEntry> sorted = f.entries;
    std::sort(sorted.begin(), sorted.end(), [](const WordEntry& a, const WordEntry& b) { return a.cell < b.cell; });
    std::ostringstream out;
    out << kWordMagic << ' ' << kFormatVersion << '\n';
    write_header(out, f.header);
    for (const WordEntry& e : sorted) {
        for (Coord c : e.cell) {
            out << c << ' ';
        }
        out << e.tile.str();
        for (Coord c : e.offset) {
            out << ' ' << c;
        }
        out << '\n';
    }
    return out.str();
}

WordFile parse_word(const std::string& text)
{
    Lines in(text);
    check_magic(in, kWordMagic);
    WordFile f;
    f.header = parse_header(in);
    const auto d = static_cast<std::size_t>(f.header.dim);
    while (!in.done()) {
        std::size_t at = in.number();
        auto fields = in.next_fields();
        if (fields.empty()) {
            continue;
        }
        if (fields.size() != 2 * d + 1) {
            throw ParseError(at, "expected cell, tile id and offset");
        }
        f.entries.push_back(WordEntry{coords_from(fields, 0, f.header.dim, at), tile_from(fields[d], f.header, at),
                                      coords_from(fields, d + 1, f.header.dim, at)});
    }
    return f;
}

nlohmann::json to_json(const TilingFile& f)
{
    nlohmann::json j;
    j["format"] = kTilingMagic;
    j["version"] = kFormatVersion;
    j.update(header_json(f.header));
    std::vector<Placement> sorted = f.tiling.placements;
    std::sort(sorted.begin(), sorted.end());
    nlohmann::json list = nlohmann::json::array();
    for (const Placement& p : sorted) {
        list.push_back({{"tile", p.tile.str()}, {"anchor", std::vector<Coord>(p.anchor.begin(), p.anchor.end())}});
    }
    j["placements"] = std::move(list);
    return j;
}

nlohmann::json to_json(const WordFile& f)
{
    nlohmann::json j;
    j["format"] = kWordMagic;
    j["version"] = kFormatVersion;
    j.update(header_json(f.header));
    std::vector<WordEntry> sorted = f.entries;
    std::sort(sorted.begin(), sorted.end(), [](const WordEntry& a, const WordEntry& b) { return a.cell < b.cell; });
    nlohmann::json list = nlohmann::json::array();
    for (const WordEntry& e : sorted) {
        list.push_back({{"cell", std::vector<Coord>(e.cell.begin(), e.cell.end())},
                        {"tile", e.tile.str()},
                        {"offset", std::vector<Coord>(e.offset.begin(), e.offset.end())}});
    }
    j["cells"] = std::move(list);
    return j;
}

TilingFile tiling_from_json(const nlohmann::json& j)
{
    try {
        TilingFile f;
        f.header = header_from_json(j, kTilingMagic);
        f.tiling.dim = f.header.dim;
        for (const auto& p : j.at("placements")) {
            f.tiling.placements.push_back(
                Placement{tile_from(p.at("tile").get<std::string>(), f.header, 0), json_point(p.at("anchor"), f.header.dim)});
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed JSON tiling: ") + e.what());
    }
}

WordFile word_from_json(const nlohmann::json& j)
{
    try {
        WordFile f;
        f.header = header_from_json(j, kWordMagic);
        for (const auto& c : j.at("cells")) {
            f.entries.push_back(WordEntry{json_point(c.at("cell"), f.header.dim), tile_from(c.at("tile").get<std::string>(), f.header, 0),
                                          json_point(c.at("offset"), f.header.dim)});
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed JSON word: ") + e.what());
    }
}

bool looks_like_json(const std::string& content)
{
    auto pos = content.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && content[pos] == '{';
}

FileKind detect_kind(const std::string& content)
{
    if (looks_like_json(content)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(content);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(0, std::string("malformed JSON: ") + e.what());
        }
        std::string format = j.value("format", std::string());
        if (format == kTilingMagic) {
            return FileKind::Tiling;
        }
        if (format == kWordMagic) {
            return FileKind::Word;
        }
        throw ParseError(0, "unknown JSON document format '" + format + "'");
    }
    if (content.rfind(kTilingMagic, 0) == 0) {
        return FileKind::Tiling;
    }
    if (content.rfind(kWordMagic, 0) == 0) {
        return FileKind::Word;
    }
    throw ParseError(1, "unrecognized file header");
}

TilingFile load_tiling(const std::string& content)
{
    if (looks_like_json(content)) {
        try {
            return tiling_from_json(nlohmann::json::parse(content));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(0, std::string("malformed JSON: ") + e.what());
        }
    }
    return parse_tiling(content);
}

WordFile load_word(const std::string& content)
{
    if (looks_like_json(content)) {
        try {
            return word_from_json(nlohmann::json::parse(content));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(0, std::string("malformed JSON: ") + e.what());
        }
    }
    return parse_word(content);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

} // namespace domtile
