#pragma once

#include <cstdint>
#include <limits>

namespace lookout {

/// Deterministic 64-bit generator (SplitMix64). All randomized stages use this
/// generator so a run is reproducible from its seed alone, independent of the
/// platform's standard-library distributions. The recurrence, per step:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   output = z ^ (z >> 31)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 significant bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). Rejection-sampled, so unbiased.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % bound;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return r % bound;
    }

    /// Uniform double strictly inside (lo, hi). Falls back to hi when the
    /// interval is too narrow for an interior point to exist in doubles.
    double next_inside(double lo, double hi) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            const double v = lo + next_double() * (hi - lo);
            if (v > lo && v < hi) return v;
        }
        const double mid = lo + (hi - lo) / 2;
        return (mid > lo && mid < hi) ? mid : hi;
    }

private:
    std::uint64_t state_;
};

/// Derives an independent child seed from (seed, stream). Used to give each
/// isolation tree, each pair plot, and each tie-break draw its own stream
/// while keeping the whole run a pure function of the base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return SplitMix64(seed ^ ((stream + 1) * 0x9E3779B97F4A7C15ULL)).next();
}

} // namespace lookout
