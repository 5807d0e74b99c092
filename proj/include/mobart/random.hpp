#ifndef MOBART_RANDOM_HPP
#define MOBART_RANDOM_HPP

#include <cstdint>
#include <random>

namespace mobart {

using Rng = std::mt19937_64;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed for an independent stream identified by position, never by scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t tag = 0) noexcept
{
    return mix64(mix64(mix64(master) ^ stream) + tag);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

} // namespace mobart

#endif
