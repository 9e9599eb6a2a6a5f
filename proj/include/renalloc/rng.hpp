#pragma once

#include <cstdint>
#include <random>

namespace renalloc {

// Counter-based mixer; gives a reproducible per-slot noise value without
// carrying stream state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits; identical output on any
// conforming platform, unlike std::uniform_real_distribution.
inline double to_unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(std::mt19937_64& rng) { return to_unit_interval(rng()); }

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline std::size_t next_index(std::mt19937_64& rng, std::size_t size) {
    return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(size));
}

}  // namespace renalloc
