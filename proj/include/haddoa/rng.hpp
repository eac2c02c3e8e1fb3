// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace haddoa {

/// Deterministic random stream for reproducible simulation.
///
/// The core generator is std::mt19937_64, whose output sequence is pinned by
/// the standard, and every variate is derived here from raw 64-bit draws, so
/// identical seeds give bit-identical samples on any platform (stdlib
/// distribution objects are implementation-defined and deliberately avoided).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Circularly-symmetric complex Gaussian CN(0, variance):
    /// real and imaginary parts i.i.d. N(0, variance/2).
    std::complex<double> complex_normal(double variance) {
        // Box-Muller in polar form; u1 in (0, 1] keeps the log finite.
        const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform01();
        const double r = std::sqrt(-variance * std::log(u1));
        const double psi = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(psi), r * std::sin(psi)};
    }

    /// splitmix64 mix of (master, index): derives independent per-trial seeds
    /// from one master seed.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
        std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace haddoa
