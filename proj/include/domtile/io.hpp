#pragma once

#include "domtile/geometry.hpp"
#include "domtile/sft.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace domtile {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line; // 1-based; 0 when not tied to a line
};

class VersionMismatch : public ParseError {
public:
    VersionMismatch(const std::string& kind, const std::string& found);
};

inline constexpr int kFormatVersion = 1;

/// Header shared by tiling and word files.
struct FileHeader {
    int dim = 0;
    std::vector<Point> shapes; // small tiles 1..k
    std::vector<Point> large;  // large levels P1..Pm
    Box window;
    std::uint64_t seed = 0;

    Alphabet alphabet() const { return Alphabet(dim, shapes, large); }
    friend bool operator==(const FileHeader&, const FileHeader&) = default;
};

struct TilingFile {
    FileHeader header;
    Tiling tiling;
    friend bool operator==(const TilingFile& a, const TilingFile& b) { return a.header == b.header && a.tiling == b.tiling; }
};

struct WordEntry {
    Point cell;
    TileId tile;
    Point offset;
    friend bool operator==(const WordEntry& a, const WordEntry& b) noexcept
    {
        return a.cell == b.cell && a.tile == b.tile && a.offset == b.offset;
    }
};

/// Entries in lexicographic cell order.
struct WordFile {
    FileHeader header;
    std::vector<WordEntry> entries;
    friend bool operator==(const WordFile& a, const WordFile& b) { return a.header == b.header && a.entries == b.entries; }
};

WordFile word_file(const FileHeader& h, const SymbolicWord& w);
SymbolicWord to_word(const WordFile& f);

/// "3,2"
std::string format_point(const Point& p);
Point parse_point(const std::string& s, int dim = 0);

/// Canonical text: placements sorted by anchor then tile id.
std::string serialize_tiling(const TilingFile& f);
TilingFile parse_tiling(const std::string& text);
std::string serialize_word(const WordFile& f);
WordFile parse_word(const std::string& text);

nlohmann::json to_json(const TilingFile& f);
nlohmann::json to_json(const WordFile& f);
TilingFile tiling_from_json(const nlohmann::json& j);
WordFile word_from_json(const nlohmann::json& j);

enum class FileKind { Tiling, Word };
/// Sniffs the first line (text) or the "format" field (JSON).
FileKind detect_kind(const std::string& content);
bool looks_like_json(const std::string& content);

TilingFile load_tiling(const std::string& content);
WordFile load_word(const std::string& content);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace domtile
