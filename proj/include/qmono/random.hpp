#pragma once

#include <cstdint>
#include <initializer_list>

namespace qmono {

/**
 * SplitMix64, the reference stream used for every random grid function.
 *
 *   state += 0x9E3779B97F4A7C15
 *   z = state
 *   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
 *   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
 *   return z ^ (z >> 31)
 *
 * Doubles take the top 53 bits: uniform01() = (next() >> 11) * 2^-53 in [0, 1),
 * uniform_pos() = ((next() >> 11) + 1) * 2^-53 in (0, 1]. All arithmetic is
 * modulo 2^64, so any language with 64-bit unsigned integers reproduces the
 * stream bit for bit.
 */
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }
    /// lo + (hi - lo) * uniform01().
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

/// Folds keys into a base seed: s = next(SplitMix64(s ^ key)) for each key in order.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t s = base;
    for (std::uint64_t k : keys) s = SplitMix64(s ^ k).next();
    return s;
}

}  // namespace qmono
