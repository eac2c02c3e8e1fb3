// SPDX-License-Identifier: Apache-2.0
//
// had-doa: two-stage direction finding for sub-connected hybrid
// analog-digital uniform linear arrays.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace haddoa {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps a phase to the canonical interval (-pi, pi].
double wrap_phase(double radians);

/// Direction angle in degrees, restricted to the arcsin range [-90, +90].
/// Stored in degrees; trig helpers convert on demand.
class Angle {
public:
    Angle() = default;

    static Angle from_degrees(double deg);
    static Angle from_radians(double rad);

    double deg() const { return deg_; }
    double rad() const { return deg_ * (kPi / 180.0); }

private:
    explicit Angle(double deg) : deg_(deg) {}
    double deg_ = 0.0;
};

/// Electrical phase in radians. Values are unwrapped unless stated otherwise;
/// wrapped() gives the canonical representative.
struct SpatialPhase {
    double radians = 0.0;

    SpatialPhase wrapped() const { return {wrap_phase(radians)}; }
};

/// Geometry of the hybrid array: N antennas partitioned into K subarrays of
/// M elements each (N = K*M), element spacing carried as the ratio d/lambda.
struct ArrayConfig {
    int n_antennas = 0;     // N
    int n_subarrays = 0;    // K
    int subarray_size = 0;  // M
    double spacing_over_wavelength = 0.5;

    /// True when K is divisible by M, i.e. the K subarrays can be split into
    /// M groups of P = K/M subarrays for the one-slot eliminator.
    bool fast_grouping_ok = false;

    /// P = K / M. Only meaningful when fast_grouping_ok.
    int subarrays_per_group() const;

    /// Validates N % M == 0 and derives K = N / M. Throws
    /// std::invalid_argument on inconsistent geometry.
    static ArrayConfig create(int n_antennas, int subarray_size,
                              double spacing_over_wavelength = 0.5);
};

/// Electrical phase between adjacent elements: 2*pi*(d/lambda)*sin(theta).
/// Unwrapped (not reduced mod 2*pi).
SpatialPhase spatial_phase(Angle theta, const ArrayConfig& cfg);

/// Element-space manifold, entries e^{j(n-1)phi}, n = 1..N.
Eigen::VectorXcd element_steering(Angle theta, const ArrayConfig& cfg);

/// Coherent gain of one M-element subarray: sum_{m=1..M} e^{j(m-1)phi}.
std::complex<double> subarray_gain(Angle theta, const ArrayConfig& cfg);

/// Steering of the K-element virtual array seen after analog combining:
/// entry k = g(theta) * e^{j(k-1)M phi}.
Eigen::VectorXcd virtual_manifold(Angle theta, const ArrayConfig& cfg);

/// Unit-modulus virtual steering [1, e^{j phi}, ..., e^{j(length-1) phi}]
/// for a subarray-level phase phi = M*varphi. Used where the scalar subarray
/// gain is irrelevant (digital combining, polynomial construction).
Eigen::VectorXcd bare_virtual_steering(SpatialPhase phase, int length);

}  // namespace haddoa
