#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Self-contained splitmix64 RNG. std::normal_distribution is not pinned down
// by the standard, so seeded runs would not reproduce across toolchains;
// everything random in this project goes through these routines instead.
namespace gatseg::rng {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Stateless combine of a seed and a counter into a fresh stream seed.
inline uint64_t mix(uint64_t seed, uint64_t counter) {
    uint64_t s = seed ^ (counter * 0xD1B54A32D192ED03ull + 0x8BB84B93962EACC9ull);
    return splitmix64(s);
}

/// Sequential stream of uniforms / gaussians.
struct Stream {
    uint64_t state;
    explicit Stream(uint64_t seed) : state(seed) {}

    uint64_t next_u64() { return splitmix64(state); }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller (one value per call, no caching).
    double gaussian() {
        // u1 in (0, 1] so the log is finite
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
};

/// Counter-based gaussian: independent of evaluation order, so voxel noise
/// loops can parallelize freely.
inline double gaussian_at(uint64_t seed, uint64_t index) {
    Stream s(mix(seed, index));
    return s.gaussian();
}

} // namespace gatseg::rng
