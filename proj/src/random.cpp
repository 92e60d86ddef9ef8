#include "domtile/random.hpp"

#include <limits>
#include <stdexcept>

namespace domtile {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::below(std::uint64_t n)
{
    if (n == 0) {
        throw std::invalid_argument("Rng::below(0)");
    }
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % n + 1) % n; // largest multiple of n, minus one
    std::uint64_t x = engine_();
    while (x > limit) {
        x = engine_();
    }
    return x % n;
}

} // namespace domtile
