#pragma once

#include <cstdint>
#include <string_view>

// Internal: fixed, portable integer hashing used for content ids, the
// mock embedder, and seeded subsampling. Not part of the public API.

namespace indivec::detail {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Stateful splitmix64 stream.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0, n) by rejection; n must be nonzero.
    uint64_t bounded(uint64_t n) {
        const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }
};

}  // namespace indivec::detail
