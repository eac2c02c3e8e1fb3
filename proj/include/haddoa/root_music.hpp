// SPDX-License-Identifier: Apache-2.0
//
// Stage-1 estimator over the K-element virtual array: sample covariance,
// noise subspace, spectral polynomial in z = e^{jM varphi}, root extraction,
// digital-phase-alignment selection, and phase-ambiguity expansion.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "haddoa/array_model.hpp"
#include "haddoa/had_receiver.hpp"

namespace haddoa {

struct CovarianceMatrix {
    Eigen::MatrixXcd values;  // K x K, Hermitian PSD
};

struct NoiseSubspace {
    Eigen::MatrixXcd basis;  // K x (K - n_sources), orthonormal columns
};

/// One spectral root: wrapped phase arg(z) and magnitude |z|.
struct RootPhase {
    double phase_rad = 0.0;
    double magnitude = 1.0;
};

/// Output of stage 1: the selected base phase (canonical, subarray level,
/// i.e. the wrapped M*varphi), every spectral root it was chosen from, and
/// the ambiguous angle set the base expands to (sorted ascending).
struct CandidateSet {
    SpatialPhase base_phase;
    std::vector<RootPhase> root_phases;
    std::vector<Angle> ambiguous_angles;
};

/// (1/L) sum_n y(n) y(n)^H over the slot's snapshots.
CovarianceMatrix sample_covariance(const SlotData& slot);

/// Eigendecomposition of the Hermitian covariance; returns the orthonormal
/// basis of the K - n_sources smallest eigenvalues. Throws when the input is
/// not Hermitian within tolerance.
NoiseSubspace noise_subspace(const CovarianceMatrix& r, int n_sources = 1);

/// Coefficients (ascending powers, length 2K-1) of the degree-2K-2
/// polynomial z^{K-1} a^H(1/z) C a(z) with C = E_N E_N^H and a the bare
/// virtual steering; coefficient of z^{s+K-1} is the sum of C's s-th
/// diagonal.
std::vector<std::complex<double>> music_polynomial(const NoiseSubspace& ns);

/// Same coefficient map applied to an arbitrary square matrix.
std::vector<std::complex<double>> music_polynomial_from_projector(
    const Eigen::MatrixXcd& c);

/// All roots of the polynomial (companion-matrix eigenvalues, Newton
/// refined). Leading/trailing coefficients below 1e-12 * max|c| are
/// deflated; deflated trailing coefficients reappear as roots at zero.
/// Throws on the all-zero polynomial; a constant polynomial has no roots.
std::vector<std::complex<double>> polynomial_roots(
    const std::vector<std::complex<double>>& coeffs);

/// Digital phase alignment: beamforms the stage-1 slot with
/// (1/sqrt(K)) a(phi) for every candidate root phase and returns the phase of
/// maximum average power. Ties break toward the root magnitude nearest the
/// unit circle, then toward smaller |phi|.
SpatialPhase dpa_select(const std::vector<RootPhase>& root_phases,
                        const SlotData& slot);

/// Expands a canonical base phase into every angle with
/// sin(theta) = (base + 2 pi i) / (2 pi M d/lambda), |sin| <= 1. Sines within
/// 1e-9 of +/-1 snap to the boundary; when both +90 and -90 appear, only -90
/// is kept (sin is 2-to-1 there). Angles sorted ascending.
CandidateSet expand_ambiguous(SpatialPhase base, const ArrayConfig& cfg);

enum class RootSelection {
    dpa_power,            // beamformed-power argmax over all root phases
    nearest_unit_circle,  // classic |1 - |z|| argmin, for comparison
};

struct Stage1Options {
    RootSelection selection = RootSelection::dpa_power;
};

/// Full stage-1 pipeline on one slot, covariance through expansion.
CandidateSet stage1_candidates(const SlotData& slot, const ArrayConfig& cfg,
                               const Stage1Options& opts = {});

}  // namespace haddoa
