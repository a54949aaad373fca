#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace xxzsim {

// All randomness in the project flows through explicitly seeded mt19937_64
// engines.  The helpers below avoid std::uniform_*_distribution, whose output
// is implementation-defined; these are bit-stable across standard libraries,
// which is what makes artifact files byte-reproducible.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for work item `index` of stream `stream` under a master seed.
// Independent items (realizations, trajectories, ensemble members) each get
// their own engine so results do not depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ splitmix64(stream)) ^ index);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), unbiased via rejection.
inline std::uint64_t uniform_index(std::mt19937_64& eng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return x % n;
}

// Standard normal via Box-Muller (one value per call; the partner draw is
// discarded to keep the consumption pattern simple and stable).
inline double standard_normal(std::mt19937_64& eng) {
    double u1 = uniform01(eng);
    while (u1 <= 0.0) u1 = uniform01(eng);
    const double u2 = uniform01(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace xxzsim
