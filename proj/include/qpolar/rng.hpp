#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qpolar {

inline uint64_t splitmix64(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derive an independent generator from (master seed, stream name, indices).
// The same tuple always yields the same stream, independent of thread layout.
inline std::mt19937_64 substream(uint64_t seed, std::string_view name,
                                 uint64_t a = 0, uint64_t b = 0) {
    uint64_t s = seed;
    uint64_t h = splitmix64(s);
    for (char c : name) {
        s ^= (uint64_t)(uint8_t)c * 0xff51afd7ed558ccdull;
        h ^= splitmix64(s);
    }
    s ^= a * 0xc4ceb9fe1a85ec53ull;
    h ^= splitmix64(s);
    s ^= b * 0x2545f4914f6cdd1dull;
    h ^= splitmix64(s);
    return std::mt19937_64(h);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
    return (double)(rng() >> 11) * 0x1.0p-53;
}

inline bool random_bit(std::mt19937_64& rng) {
    return (rng() >> 63) != 0;
}

// Precomputed Bernoulli threshold: event fires iff rng() < threshold.
inline uint64_t bernoulli_threshold(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return ~0ull;
    return (uint64_t)(p * 0x1.0p64);
}

}
