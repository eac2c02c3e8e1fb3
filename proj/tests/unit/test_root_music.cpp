// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <doctest.h>
#include <Eigen/Dense>

#include "haddoa/root_music.hpp"

using namespace haddoa;
using cplx = std::complex<double>;

namespace {

const ArrayConfig kCfg = ArrayConfig::create(64, 4, 0.5);
const Angle kTheta0 = Angle::from_degrees(41.345);
constexpr double kNoiseless = std::numeric_limits<double>::infinity();

SlotData noiseless_slot(Angle theta, int snapshots, std::uint64_t seed,
                        const ArrayConfig& cfg = kCfg) {
    RandomStream rng(seed);
    return synthesize_stage1_slot({theta, kNoiseless, snapshots}, cfg, rng);
}

Eigen::MatrixXcd random_orthonormal(int rows, int cols, RandomStream& rng) {
    Eigen::MatrixXcd g(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            g(r, c) = rng.complex_normal(1.0);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    return Eigen::MatrixXcd(qr.householderQ()).leftCols(cols);
}

cplx eval_poly(const std::vector<cplx>& coeffs, cplx z) {
    cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

// greedy conjugate-reciprocal pairing; returns the worst match distance
double worst_pairing_distance(std::vector<cplx> roots) {
    double worst = 0.0;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) {
            continue;
        }
        used[i] = true;
        const cplx target = 1.0 / std::conj(roots[i]);
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = i;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (!used[j] && std::abs(roots[j] - target) < best) {
                best = std::abs(roots[j] - target);
                best_j = j;
            }
        }
        REQUIRE(best_j != i);
        used[best_j] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

TEST_CASE("sample_covariance: outer-product identities") {
    SUBCASE("single snapshot gives y y^H") {
        const SlotData slot = noiseless_slot(kTheta0, 1, 4);
        const CovarianceMatrix r = sample_covariance(slot);
        const Eigen::MatrixXcd expect =
            slot.samples.col(0) * slot.samples.col(0).adjoint();
        CHECK((r.values - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("noiseless slot is rank one") {
        const SlotData slot = noiseless_slot(kTheta0, 8, 4);
        const CovarianceMatrix r = sample_covariance(slot);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r.values);
        const auto& ev = eig.eigenvalues();
        CHECK(ev(15) > 0.0);
        CHECK(ev(14) < 1e-10 * ev(15));
    }
    SUBCASE("empty slot throws") {
        SlotData empty;
        empty.samples.resize(16, 0);
        CHECK_THROWS_AS(sample_covariance(empty), std::invalid_argument);
    }
}

TEST_CASE("sample_covariance: pure noise converges to sigma_w^2 I") {
    const double sigma2 = std::pow(10.0, 20.0);  // -200 dB trick, signal ~1e-20
    RandomStream rng(6);
    const SlotData slot =
        synthesize_stage1_slot({kTheta0, -200.0, 100000}, kCfg, rng);
    const CovarianceMatrix r = sample_covariance(slot);
    for (int i = 0; i < 16; ++i) {
        CHECK(r.values(i, i).real() == doctest::Approx(sigma2).epsilon(0.05));
        for (int j = 0; j < 16; ++j) {
            if (i != j) {
                CHECK(std::abs(r.values(i, j)) < 0.02 * sigma2);
            }
        }
    }
}

TEST_CASE("property: covariance is Hermitian PSD over random slots") {
    RandomStream rng(77);
    for (int rep = 0; rep < 1000; ++rep) {
        const SlotData slot = synthesize_stage1_slot(
            {Angle::from_degrees(rng.uniform(-90.0, 90.0)), rng.uniform(-20.0, 20.0), 4},
            kCfg, rng);
        const CovarianceMatrix r = sample_covariance(slot);
        const double scale = r.values.cwiseAbs().maxCoeff();
        CHECK((r.values - r.values.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r.values);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * scale);
    }
}

TEST_CASE("noise_subspace contracts") {
    SUBCASE("identity covariance: orthonormal K-1 basis") {
        CovarianceMatrix r{Eigen::MatrixXcd::Identity(16, 16)};
        const NoiseSubspace ns = noise_subspace(r);
        REQUIRE(ns.basis.rows() == 16);
        REQUIRE(ns.basis.cols() == 15);
        const Eigen::MatrixXcd gram = ns.basis.adjoint() * ns.basis;
        CHECK((gram - Eigen::MatrixXcd::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("noiseless covariance: basis orthogonal to a_D") {
        const CovarianceMatrix r = sample_covariance(noiseless_slot(kTheta0, 8, 4));
        const NoiseSubspace ns = noise_subspace(r);
        const Eigen::VectorXcd a_d = virtual_manifold(kTheta0, kCfg);
        CHECK((ns.basis.adjoint() * a_d).norm() < 1e-8 * a_d.norm());
    }
    SUBCASE("diagonal covariance with one dominant entry") {
        Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(16, 16);
        d(0, 0) = 10.0;
        const NoiseSubspace ns = noise_subspace({d});
        // projector must null the dominant coordinate and keep the rest
        const Eigen::MatrixXcd c = ns.basis * ns.basis.adjoint();
        CHECK(std::abs(c(0, 0)) < 1e-12);
        for (int i = 1; i < 16; ++i) {
            CHECK(std::abs(c(i, i) - 1.0) < 1e-12);
        }
    }
    SUBCASE("non-Hermitian input throws") {
        Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(16, 16);
        bad(0, 1) = 0.5;
        CHECK_THROWS_AS(noise_subspace({bad}), std::invalid_argument);
    }
    SUBCASE("n_sources bounds") {
        CovarianceMatrix r{Eigen::MatrixXcd::Identity(16, 16)};
        CHECK_THROWS_AS(noise_subspace(r, 0), std::invalid_argument);
        CHECK_THROWS_AS(noise_subspace(r, 16), std::invalid_argument);
    }
}

TEST_CASE("property: noise projector is idempotent") {
    RandomStream rng(13);
    for (int rep = 0; rep < 50; ++rep) {
        const SlotData slot = synthesize_stage1_slot(
            {Angle::from_degrees(rng.uniform(-80.0, 80.0)), 5.0, 8}, kCfg, rng);
        const NoiseSubspace ns = noise_subspace(sample_covariance(slot));
        const Eigen::MatrixXcd c = ns.basis * ns.basis.adjoint();
        CHECK((c * c - c).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("music_polynomial coefficient map") {
    SUBCASE("identity projector keeps only the central coefficient") {
        const auto coeffs =
            music_polynomial_from_projector(Eigen::MatrixXcd::Identity(16, 16));
        REQUIRE(coeffs.size() == 31);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (i == 15) {
                CHECK(coeffs[i] == cplx{16.0, 0.0});
            } else {
                CHECK(coeffs[i] == cplx{0.0, 0.0});
            }
        }
    }
    SUBCASE("conjugate symmetry c_{-l} = conj(c_l)") {
        RandomStream rng(3);
        const Eigen::MatrixXcd basis = random_orthonormal(16, 15, rng);
        const auto coeffs = music_polynomial(NoiseSubspace{basis});
        REQUIRE(coeffs.size() == 31);
        for (std::size_t l = 0; l < coeffs.size(); ++l) {
            CHECK(std::abs(coeffs[l] - std::conj(coeffs[30 - l])) < 1e-13);
        }
    }
    SUBCASE("noiseless case: polynomial vanishes on the signal root") {
        const NoiseSubspace ns =
            noise_subspace(sample_covariance(noiseless_slot(kTheta0, 8, 9)));
        const auto coeffs = music_polynomial(ns);
        const double phi4 = 4.0 * spatial_phase(kTheta0, kCfg).radians;
        CHECK(std::abs(eval_poly(coeffs, std::polar(1.0, phi4))) < 1e-10);
    }
}

TEST_CASE("polynomial_roots basics") {
    SUBCASE("z^2 - 1") {
        const auto roots = polynomial_roots({{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
        REQUIRE(roots.size() == 2);
        const bool order = roots[0].real() > 0.0;
        CHECK(std::abs(roots[order ? 0 : 1] - cplx{1.0, 0.0}) < 1e-12);
        CHECK(std::abs(roots[order ? 1 : 0] - cplx{-1.0, 0.0}) < 1e-12);
    }
    SUBCASE("all-zero polynomial throws") {
        CHECK_THROWS_AS(polynomial_roots({{0.0, 0.0}, {0.0, 0.0}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(polynomial_roots({}), std::invalid_argument);
    }
    SUBCASE("constant polynomial has no roots") {
        CHECK(polynomial_roots({{3.0, 0.0}}).empty());
    }
    SUBCASE("trailing deflation produces origin roots") {
        // z^2 * (z - 2)
        const auto roots =
            polynomial_roots({{0.0, 0.0}, {0.0, 0.0}, {-2.0, 0.0}, {1.0, 0.0}});
        REQUIRE(roots.size() == 3);
        CHECK(std::abs(roots[0]) == 0.0);
        CHECK(std::abs(roots[1]) == 0.0);
        CHECK(std::abs(roots[2] - cplx{2.0, 0.0}) < 1e-12);
    }
}

TEST_CASE("polynomial_roots: conjugate-reciprocal pairing on random subspaces") {
    RandomStream rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        const Eigen::MatrixXcd basis = random_orthonormal(16, 15, rng);
        const auto coeffs = music_polynomial(NoiseSubspace{basis});
        auto roots = polynomial_roots(coeffs);
        REQUIRE(roots.size() == 30);
        CHECK(worst_pairing_distance(roots) < 1e-6);
    }
}

TEST_CASE("polynomial_roots: noiseless signal root sits on the unit circle") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RandomStream pick(seed);
        const Angle theta = Angle::from_degrees(pick.uniform(-60.0, 60.0));
        const NoiseSubspace ns =
            noise_subspace(sample_covariance(noiseless_slot(theta, 8, 100 + seed)));
        const auto roots = polynomial_roots(music_polynomial(ns));
        const double phi4 = wrap_phase(4.0 * spatial_phase(theta, kCfg).radians);
        double best = std::numeric_limits<double>::infinity();
        for (const cplx& z : roots) {
            const double dphase = std::abs(wrap_phase(std::arg(z) - phi4));
            best = std::min(best, std::max(dphase, std::abs(std::abs(z) - 1.0)));
        }
        CHECK(best < 1e-8);
    }
}

TEST_CASE("dpa_select") {
    SUBCASE("K = 2: both roots, exact recovery") {
        const ArrayConfig cfg = ArrayConfig::create(8, 4, 0.5);  // K = 2
        REQUIRE(cfg.n_subarrays == 2);
        const SlotData slot = noiseless_slot(kTheta0, 8, 5, cfg);
        const CandidateSet cand = stage1_candidates(slot, cfg);
        const double expect = wrap_phase(4.0 * spatial_phase(kTheta0, cfg).radians);
        CHECK(cand.base_phase.radians == doctest::Approx(expect).epsilon(1e-8));
        CHECK(cand.root_phases.size() == 2);
    }
    SUBCASE("degenerate all-equal candidates return that phase") {
        const SlotData slot = noiseless_slot(kTheta0, 4, 6);
        const std::vector<RootPhase> same(5, RootPhase{0.7, 1.0});
        CHECK(dpa_select(same, slot).radians == doctest::Approx(0.7));
    }
    SUBCASE("empty candidate list throws") {
        const SlotData slot = noiseless_slot(kTheta0, 4, 6);
        CHECK_THROWS_AS(dpa_select({}, slot), std::invalid_argument);
    }
    SUBCASE("Table-1 direction, noiseless: wrapped 4*phi") {
        const SlotData slot = noiseless_slot(kTheta0, 8, 7);
        const CandidateSet cand = stage1_candidates(slot, kCfg);
        // exact evaluation of wrap(4 pi sin 41.345deg) = 2.0180524 (2.018 to 4 digits)
        CHECK(cand.base_phase.radians ==
              doctest::Approx(2.01805237952).epsilon(1e-6));
    }
}

TEST_CASE("expand_ambiguous") {
    SUBCASE("zero base on the Table-1 array") {
        const CandidateSet set = expand_ambiguous({0.0}, kCfg);
        REQUIRE(set.ambiguous_angles.size() == 4);
        CHECK(set.ambiguous_angles[0].deg() == doctest::Approx(-90.0));
        CHECK(set.ambiguous_angles[1].deg() == doctest::Approx(-30.0));
        CHECK(set.ambiguous_angles[2].deg() == doctest::Approx(0.0));
        CHECK(set.ambiguous_angles[3].deg() == doctest::Approx(30.0));
    }
    SUBCASE("Table-1 base phase") {
        const CandidateSet set = expand_ambiguous({2.01805237952}, kCfg);
        REQUIRE(set.ambiguous_angles.size() == 4);
        CHECK(set.ambiguous_angles[0].deg() == doctest::Approx(-57.0777107).epsilon(1e-6));
        CHECK(set.ambiguous_angles[1].deg() == doctest::Approx(-19.8408404).epsilon(1e-6));
        CHECK(set.ambiguous_angles[2].deg() == doctest::Approx(9.2412310).epsilon(1e-6));
        CHECK(set.ambiguous_angles[3].deg() == doctest::Approx(41.345).epsilon(1e-9));
    }
    SUBCASE("M = 1 has no ambiguity") {
        const ArrayConfig cfg = ArrayConfig::create(16, 1, 0.5);
        const CandidateSet set = expand_ambiguous({1.0}, cfg);
        CHECK(set.ambiguous_angles.size() == 1);
        CHECK(set.ambiguous_angles[0].deg() ==
              doctest::Approx(std::asin(1.0 / kPi) * 180.0 / kPi));
    }
    SUBCASE("re-wrap recovers the base phase") {
        RandomStream rng(19);
        for (int rep = 0; rep < 500; ++rep) {
            const double base = rng.uniform(-kPi, kPi);
            const CandidateSet set = expand_ambiguous({base}, kCfg);
            CHECK(set.ambiguous_angles.size() == 4);
            for (const Angle a : set.ambiguous_angles) {
                const double rewrap =
                    wrap_phase(4.0 * spatial_phase(a, kCfg).radians);
                CHECK(std::abs(rewrap - wrap_phase(base)) < 1e-9);
            }
        }
    }
}

TEST_CASE("noiseless end-to-end stage 1 over random directions") {
    RandomStream pick(101);
    for (int rep = 0; rep < 100; ++rep) {
        const Angle theta = Angle::from_degrees(pick.uniform(-60.0, 60.0));
        const SlotData slot = noiseless_slot(theta, 8, 5000 + rep);
        const CandidateSet cand = stage1_candidates(slot, kCfg);

        const double expect = wrap_phase(4.0 * spatial_phase(theta, kCfg).radians);
        CHECK(std::abs(wrap_phase(cand.base_phase.radians - expect)) < 1e-6);

        double best = 1e9;
        for (const Angle a : cand.ambiguous_angles) {
            best = std::min(best, std::abs(a.deg() - theta.deg()));
        }
        CHECK(best < 1e-6);
    }
}

TEST_CASE("nearest-unit-circle selection also solves the noiseless case") {
    Stage1Options opts;
    opts.selection = RootSelection::nearest_unit_circle;
    const SlotData slot = noiseless_slot(kTheta0, 8, 77);
    const CandidateSet cand = stage1_candidates(slot, kCfg, opts);
    CHECK(cand.base_phase.radians == doctest::Approx(2.01805237952).epsilon(1e-6));
}
