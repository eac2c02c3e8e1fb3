// SPDX-License-Identifier: Apache-2.0

#include "haddoa/array_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace haddoa {

double wrap_phase(double radians) {
    double w = std::remainder(radians, kTwoPi);  // [-pi, pi]
    if (w <= -kPi) {
        w += kTwoPi;
    }
    return w;
}

Angle Angle::from_degrees(double deg) {
    if (!(std::abs(deg) <= 90.0)) {
        throw std::invalid_argument("Angle out of arcsin range [-90, 90]: " +
                                    std::to_string(deg) + " deg");
    }
    return Angle(deg);
}

Angle Angle::from_radians(double rad) {
    return from_degrees(rad * (180.0 / kPi));
}

int ArrayConfig::subarrays_per_group() const {
    if (!fast_grouping_ok) {
        throw std::logic_error("grouping undefined: K is not divisible by M");
    }
    return n_subarrays / subarray_size;
}

ArrayConfig ArrayConfig::create(int n_antennas, int subarray_size,
                                double spacing_over_wavelength) {
    if (n_antennas < 1 || subarray_size < 1) {
        throw std::invalid_argument("antenna and subarray counts must be positive");
    }
    if (n_antennas % subarray_size != 0) {
        throw std::invalid_argument(
            "inconsistent geometry: n_antennas (" + std::to_string(n_antennas) +
            ") is not a multiple of subarray_size (" + std::to_string(subarray_size) + ")");
    }
    if (!(spacing_over_wavelength > 0.0)) {
        throw std::invalid_argument("spacing_over_wavelength must be positive");
    }
    ArrayConfig cfg;
    cfg.n_antennas = n_antennas;
    cfg.subarray_size = subarray_size;
    cfg.n_subarrays = n_antennas / subarray_size;
    cfg.spacing_over_wavelength = spacing_over_wavelength;
    cfg.fast_grouping_ok = (cfg.n_subarrays % subarray_size == 0);
    return cfg;
}

SpatialPhase spatial_phase(Angle theta, const ArrayConfig& cfg) {
    return {kTwoPi * cfg.spacing_over_wavelength * std::sin(theta.rad())};
}

Eigen::VectorXcd element_steering(Angle theta, const ArrayConfig& cfg) {
    const double phi = spatial_phase(theta, cfg).radians;
    Eigen::VectorXcd a(cfg.n_antennas);
    for (int n = 0; n < cfg.n_antennas; ++n) {
        a(n) = std::polar(1.0, n * phi);
    }
    return a;
}

std::complex<double> subarray_gain(Angle theta, const ArrayConfig& cfg) {
    const double phi = spatial_phase(theta, cfg).radians;
    std::complex<double> g = 0.0;
    for (int m = 0; m < cfg.subarray_size; ++m) {
        g += std::polar(1.0, m * phi);
    }
    return g;
}

Eigen::VectorXcd bare_virtual_steering(SpatialPhase phase, int length) {
    Eigen::VectorXcd a(length);
    for (int k = 0; k < length; ++k) {
        a(k) = std::polar(1.0, k * phase.radians);
    }
    return a;
}

Eigen::VectorXcd virtual_manifold(Angle theta, const ArrayConfig& cfg) {
    const double phi = spatial_phase(theta, cfg).radians;
    return subarray_gain(theta, cfg) *
           bare_virtual_steering({cfg.subarray_size * phi}, cfg.n_subarrays);
}

}  // namespace haddoa
