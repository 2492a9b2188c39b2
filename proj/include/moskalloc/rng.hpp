#pragma once

#include <cmath>
#include <cstdint>

// Seedable, splittable generator used by every randomized component.
// Substreams are derived from (seed, a, b) by hashing, so trial i of a
// Monte Carlo run or individual i of GA generation g always sees the same
// stream no matter how work is scheduled across threads.

namespace moskalloc {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        state += kGolden;
        return mix64(state);
    }

    // uniform in [0, 1) with 53 random bits
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; consumes two draws, keeps the cosine leg
    double next_normal() {
        double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }
};

// Stream-derivation rule: seed and the two stream indices are folded through
// the 64-bit finalizer so that distinct (seed, a, b) triples give statistically
// independent sequences.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = mix64(seed + kGolden);
    s = mix64(s ^ (a * 0xD1342543DE82EF95ULL + 1));
    s = mix64(s ^ (b * 0xAF251AF3B0F025B5ULL + 3));
    return SplitMix64{s};
}

} // namespace moskalloc
