#pragma once

// Seeded uniform draws on top of std::mt19937_64. The float mapping is
// spelled out here (rather than using std::uniform_real_distribution) so
// random streams are bit-identical across standard library implementations.

#include <cstdint>
#include <random>

namespace colpitts {

/// Uniform on [0, 1) with 53 random bits.
[[nodiscard]] inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on [lo, hi).
[[nodiscard]] inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform on the open interval (-1, 1); the single lattice point mapping
/// to -1 is redrawn.
[[nodiscard]] inline double uniform_open_sym(std::mt19937_64& rng) {
    for (;;) {
        const double v = 2.0 * uniform01(rng) - 1.0;
        if (v != -1.0) return v;
    }
}

}  // namespace colpitts
