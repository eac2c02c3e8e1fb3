// SPDX-License-Identifier: Apache-2.0

#include "haddoa/root_music.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "haddoa/kernels.hpp"

namespace haddoa {

using cplx = std::complex<double>;

CovarianceMatrix sample_covariance(const SlotData& slot) {
    const Eigen::Index k = slot.samples.rows();
    const Eigen::Index snapshots = slot.samples.cols();
    if (k < 1 || snapshots < 1) {
        throw std::invalid_argument("empty slot");
    }
    const auto& ops = kernels::active();
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(k, k);
    for (Eigen::Index t = 0; t < snapshots; ++t) {
        ops.rank1_herm_update(r.data(), slot.samples.col(t).data(),
                              static_cast<std::size_t>(k));
    }
    r /= static_cast<double>(snapshots);
    // exact Hermitian symmetry (FMA in the update can leave ~1 ulp skew)
    r = ((r + r.adjoint()) * 0.5).eval();
    return {std::move(r)};
}

NoiseSubspace noise_subspace(const CovarianceMatrix& r, int n_sources) {
    const Eigen::Index k = r.values.rows();
    if (k < 2 || r.values.cols() != k) {
        throw std::invalid_argument("covariance must be square, K >= 2");
    }
    if (n_sources < 1 || n_sources >= k) {
        throw std::invalid_argument("n_sources must lie in [1, K-1]");
    }
    const double scale = std::max(1.0, r.values.cwiseAbs().maxCoeff());
    const double skew = (r.values - r.values.adjoint()).cwiseAbs().maxCoeff();
    if (skew > 1e-8 * scale) {
        throw std::invalid_argument("covariance is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r.values);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }
    // eigenvalues ascending: the first K - n_sources columns span the noise
    // subspace
    return {eig.eigenvectors().leftCols(k - n_sources)};
}

std::vector<cplx> music_polynomial_from_projector(const Eigen::MatrixXcd& c) {
    const Eigen::Index k = c.rows();
    std::vector<cplx> coeffs(static_cast<std::size_t>(2 * k - 1), cplx{0.0, 0.0});
    for (Eigen::Index s = -(k - 1); s <= k - 1; ++s) {
        cplx sum = 0.0;
        const Eigen::Index lo = std::max<Eigen::Index>(0, -s);
        const Eigen::Index hi = std::min<Eigen::Index>(k, k - s);
        for (Eigen::Index i = lo; i < hi; ++i) {
            sum += c(i, i + s);
        }
        coeffs[static_cast<std::size_t>(s + k - 1)] = sum;
    }
    return coeffs;
}

std::vector<cplx> music_polynomial(const NoiseSubspace& ns) {
    const Eigen::MatrixXcd projector = ns.basis * ns.basis.adjoint();
    return music_polynomial_from_projector(projector);
}

namespace {

cplx horner(const std::vector<cplx>& coeffs, int lo, int hi, cplx z) {
    cplx acc = coeffs[static_cast<std::size_t>(hi)];
    for (int i = hi - 1; i >= lo; --i) {
        acc = acc * z + coeffs[static_cast<std::size_t>(i)];
    }
    return acc;
}

cplx horner_deriv(const std::vector<cplx>& coeffs, int lo, int hi, cplx z) {
    cplx acc = 0.0;
    for (int i = hi; i > lo; --i) {
        acc = acc * z + coeffs[static_cast<std::size_t>(i)] * double(i - lo);
    }
    return acc;
}

// A few guarded Newton steps. Companion eigenvalues resolve a double root
// (the on-circle root of a noiseless spectrum) only to O(sqrt(eps)); each
// Newton step halves that residual. Steps that do not decrease |p| are
// discarded.
cplx refine_root(const std::vector<cplx>& coeffs, int lo, int hi, cplx z) {
    double best = std::abs(horner(coeffs, lo, hi, z));
    for (int it = 0; it < 3 && best > 0.0; ++it) {
        const cplx d = horner_deriv(coeffs, lo, hi, z);
        if (d == cplx{0.0, 0.0}) {
            break;
        }
        const cplx step = horner(coeffs, lo, hi, z) / d;
        const cplx cand = z - step;
        const double res = std::abs(horner(coeffs, lo, hi, cand));
        if (res >= best) {
            break;
        }
        z = cand;
        best = res;
    }
    return z;
}

}  // namespace

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
    double max_abs = 0.0;
    for (const cplx& c : coeffs) {
        max_abs = std::max(max_abs, std::abs(c));
    }
    if (coeffs.empty() || max_abs == 0.0) {
        throw std::invalid_argument("all-zero polynomial has no defined roots");
    }
    const double cutoff = 1e-12 * max_abs;
    int hi = static_cast<int>(coeffs.size()) - 1;
    while (hi > 0 && std::abs(coeffs[static_cast<std::size_t>(hi)]) <= cutoff) {
        --hi;
    }
    int lo = 0;
    while (lo < hi && std::abs(coeffs[static_cast<std::size_t>(lo)]) <= cutoff) {
        ++lo;
    }
    const int degree = hi - lo;
    std::vector<cplx> roots;
    roots.reserve(static_cast<std::size_t>(degree + lo));
    // deflated trailing coefficients are roots at the origin
    for (int i = 0; i < lo; ++i) {
        roots.emplace_back(0.0, 0.0);
    }
    if (degree == 0) {
        return roots;  // constant polynomial
    }

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
    const cplx lead = coeffs[static_cast<std::size_t>(hi)];
    for (int i = 0; i < degree; ++i) {
        companion(i, degree - 1) = -coeffs[static_cast<std::size_t>(lo + i)] / lead;
        if (i > 0) {
            companion(i, i - 1) = 1.0;
        }
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(companion, false);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("companion eigenvalue computation failed");
    }
    for (int i = 0; i < degree; ++i) {
        roots.push_back(refine_root(coeffs, lo, hi, eig.eigenvalues()(i)));
    }
    return roots;
}

SpatialPhase dpa_select(const std::vector<RootPhase>& root_phases,
                        const SlotData& slot) {
    if (root_phases.empty()) {
        throw std::invalid_argument("no candidate root phases");
    }
    const Eigen::Index k = slot.samples.rows();
    const Eigen::Index snapshots = slot.samples.cols();
    if (k < 1 || snapshots < 1) {
        throw std::invalid_argument("empty slot");
    }
    const auto& ops = kernels::active();
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));

    int best = -1;
    double best_power = 0.0;
    std::vector<cplx> combined(static_cast<std::size_t>(snapshots));
    for (std::size_t idx = 0; idx < root_phases.size(); ++idx) {
        const Eigen::VectorXcd w =
            scale * bare_virtual_steering({root_phases[idx].phase_rad},
                                          static_cast<int>(k));
        for (Eigen::Index t = 0; t < snapshots; ++t) {
            combined[static_cast<std::size_t>(t)] =
                ops.cdot(w.data(), slot.samples.col(t).data(),
                         static_cast<std::size_t>(k));
        }
        const double power =
            ops.power_sum(combined.data(), combined.size()) /
            static_cast<double>(snapshots);

        bool better = best < 0 || power > best_power;
        if (!better && power == best_power) {
            const auto circle_dist = [&](std::size_t i) {
                return std::abs(root_phases[i].magnitude - 1.0);
            };
            const std::size_t b = static_cast<std::size_t>(best);
            if (circle_dist(idx) < circle_dist(b) ||
                (circle_dist(idx) == circle_dist(b) &&
                 std::abs(root_phases[idx].phase_rad) <
                     std::abs(root_phases[b].phase_rad))) {
                better = true;
            }
        }
        if (better) {
            best = static_cast<int>(idx);
            best_power = power;
        }
    }
    return SpatialPhase{root_phases[static_cast<std::size_t>(best)].phase_rad}
        .wrapped();
}

CandidateSet expand_ambiguous(SpatialPhase base, const ArrayConfig& cfg) {
    const double phi = wrap_phase(base.radians);
    const double denom = kTwoPi * cfg.subarray_size * cfg.spacing_over_wavelength;

    const int i_lo = static_cast<int>(std::ceil((-denom - phi) / kTwoPi - 1e-12));
    const int i_hi = static_cast<int>(std::floor((denom - phi) / kTwoPi + 1e-12));

    bool has_pos90 = false;
    bool has_neg90 = false;
    std::vector<Angle> angles;
    for (int i = i_lo; i <= i_hi; ++i) {
        double s = (phi + kTwoPi * i) / denom;
        if (std::abs(s) > 1.0 + 1e-12) {
            continue;
        }
        // boundary snap: sin within 1e-9 of +/-1 maps to +/-90 degrees
        if (std::abs(s - 1.0) <= 1e-9) {
            has_pos90 = true;
            angles.push_back(Angle::from_degrees(90.0));
        } else if (std::abs(s + 1.0) <= 1e-9) {
            has_neg90 = true;
            angles.push_back(Angle::from_degrees(-90.0));
        } else {
            angles.push_back(Angle::from_radians(std::asin(s)));
        }
    }
    if (has_pos90 && has_neg90) {
        // sin(+90) = sin(-90) up to the wrap; keep the -90 representative
        std::erase_if(angles, [](Angle a) { return a.deg() == 90.0; });
    }
    if (angles.empty()) {
        throw std::domain_error("base phase expands to no angle in [-90, 90]");
    }
    std::sort(angles.begin(), angles.end(),
              [](Angle a, Angle b) { return a.deg() < b.deg(); });

    CandidateSet set;
    set.base_phase = {phi};
    set.ambiguous_angles = std::move(angles);
    return set;
}

CandidateSet stage1_candidates(const SlotData& slot, const ArrayConfig& cfg,
                               const Stage1Options& opts) {
    const CovarianceMatrix r = sample_covariance(slot);
    const NoiseSubspace ns = noise_subspace(r, 1);
    const std::vector<cplx> coeffs = music_polynomial(ns);
    const std::vector<cplx> roots = polynomial_roots(coeffs);
    if (roots.empty()) {
        throw std::domain_error("spectral polynomial has no roots");
    }

    std::vector<RootPhase> phases;
    phases.reserve(roots.size());
    for (const cplx& z : roots) {
        phases.push_back({wrap_phase(std::arg(z)), std::abs(z)});
    }

    SpatialPhase base;
    if (opts.selection == RootSelection::dpa_power) {
        base = dpa_select(phases, slot);
    } else {
        std::size_t best = 0;
        for (std::size_t i = 1; i < phases.size(); ++i) {
            const double di = std::abs(phases[i].magnitude - 1.0);
            const double db = std::abs(phases[best].magnitude - 1.0);
            if (di < db || (di == db && std::abs(phases[i].phase_rad) <
                                            std::abs(phases[best].phase_rad))) {
                best = i;
            }
        }
        base = SpatialPhase{phases[best].phase_rad}.wrapped();
    }

    CandidateSet set = expand_ambiguous(base, cfg);
    set.root_phases = std::move(phases);
    return set;
}

}  // namespace haddoa
