#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace domtile {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// std::mt19937_64 (fully specified by the standard) with a portable bounded
/// draw: rejection sampling on the top of the 64-bit range. Distribution
/// objects from <random> are avoided because their output is implementation
/// defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Fisher-Yates, from the back.
    template <class T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace domtile
