#pragma once

#include "domtile/io.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace domtile {

// Checks files from their content alone. Only the plain data types are
// shared with the construction code; the local rule, decoding and the
// partition check are implemented here a second time on purpose.

struct VerifyReport {
    std::size_t unknown_tiles = 0;
    std::size_t bad_offsets = 0;
    std::size_t neighbor_violations = 0;
    std::size_t overlaps = 0;        // distinct overlapping placement pairs
    std::size_t outside_window = 0;
    std::size_t partial_tiles = 0;   // words only; a violation when partials are disallowed
    std::size_t complete_tiles = 0;  // words only
    bool partials_allowed = true;
    std::vector<std::string> messages; // first few violations

    std::size_t violations() const noexcept;
    bool ok() const noexcept { return violations() == 0; }
};

class VerifyFailed : public std::runtime_error {
public:
    explicit VerifyFailed(std::size_t count);
    std::size_t count;
};

VerifyReport verify_tiling(const TilingFile& f);
VerifyReport verify_word(const WordFile& f, bool allow_partials = true);

} // namespace domtile
