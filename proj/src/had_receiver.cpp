// SPDX-License-Identifier: Apache-2.0

#include "haddoa/had_receiver.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "haddoa/kernels.hpp"

static_assert(std::endian::native == std::endian::little,
              "slot dump format is little-endian");

namespace haddoa {

namespace {

void check_scenario(const SourceScenario& scn) {
    if (scn.snapshots_per_slot < 1) {
        throw std::invalid_argument("snapshots_per_slot must be >= 1");
    }
}

/// Raw N x L element samples: a(theta0) s(n) + w(n). Per snapshot the signal
/// draw comes first, then the N noise draws in element order, so the stream
/// layout is independent of everything but (scenario, cfg, seed).
Eigen::MatrixXcd synthesize_raw(const SourceScenario& scn, const ArrayConfig& cfg,
                                RandomStream& rng) {
    const int n = cfg.n_antennas;
    const int snapshots = scn.snapshots_per_slot;
    const Eigen::VectorXcd a = element_steering(scn.theta0, cfg);
    const double var = scn.noise_variance();
    const bool noisy = !scn.noiseless();

    Eigen::MatrixXcd raw(n, snapshots);
    for (int t = 0; t < snapshots; ++t) {
        const std::complex<double> s = rng.complex_normal(1.0);
        auto col = raw.col(t);
        col = a * s;
        if (noisy) {
            for (int i = 0; i < n; ++i) {
                col(i) += rng.complex_normal(var);
            }
        }
    }
    return raw;
}

/// Applies the per-subarray analog weights: output row q is v_q^H x_q(n).
Eigen::MatrixXcd combine_subarrays(const Eigen::MatrixXcd& raw,
                                   const AnalogWeights& weights,
                                   const ArrayConfig& cfg) {
    const auto& ops = kernels::active();
    const int k = cfg.n_subarrays;
    const int m = cfg.subarray_size;
    const int snapshots = static_cast<int>(raw.cols());
    Eigen::MatrixXcd out(k, snapshots);
    for (int t = 0; t < snapshots; ++t) {
        const std::complex<double>* col = raw.col(t).data();
        for (int q = 0; q < k; ++q) {
            out(q, t) = ops.cdot(weights.per_subarray[q].data(), col + q * m,
                                 static_cast<std::size_t>(m));
        }
    }
    return out;
}

void check_weights(const AnalogWeights& weights, const ArrayConfig& cfg) {
    if (static_cast<int>(weights.per_subarray.size()) != cfg.n_subarrays) {
        throw std::invalid_argument("analog weight bank does not cover all subarrays");
    }
    for (const auto& v : weights.per_subarray) {
        if (v.size() != cfg.subarray_size) {
            throw std::invalid_argument("analog weight vector length != subarray size");
        }
    }
    if (weights.n_groups < 1 || cfg.n_subarrays % weights.n_groups != 0) {
        throw std::invalid_argument("group count does not partition the subarrays");
    }
}

}  // namespace

SlotData synthesize_stage1_slot(const SourceScenario& scn, const ArrayConfig& cfg,
                                RandomStream& rng, int slot_index) {
    check_scenario(scn);
    AnalogWeights zero_phase;
    zero_phase.n_groups = cfg.n_subarrays;  // no digital grouping at stage 1
    zero_phase.active_groups = cfg.n_subarrays;
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.subarray_size));
    zero_phase.per_subarray.assign(
        cfg.n_subarrays, Eigen::VectorXcd::Constant(cfg.subarray_size, scale));

    const Eigen::MatrixXcd raw = synthesize_raw(scn, cfg, rng);
    return {combine_subarrays(raw, zero_phase, cfg), slot_index, SlotKind::stage1};
}

double apa_phase(int group, int subarray, int element, Angle theta,
                 const ArrayConfig& cfg, ApaOffset offset) {
    if (!cfg.fast_grouping_ok) {
        throw std::invalid_argument("fast grouping requires K divisible by M");
    }
    const int m = cfg.subarray_size;
    const int p = cfg.subarrays_per_group();
    if (group < 1 || group > m || subarray < 1 || subarray > p || element < 0 ||
        element >= m) {
        throw std::out_of_range("apa_phase index out of range");
    }
    const int h = (offset == ApaOffset::per_subarray)
                      ? (group - 1) * p * m + (subarray - 1) * m
                      : (group - 1) * p * m + (p - 1) * m;
    return (h + element) * spatial_phase(theta, cfg).radians;
}

AnalogWeights build_analog_weights(const std::vector<Angle>& candidates,
                                   const ArrayConfig& cfg, ApaOffset offset) {
    if (!cfg.fast_grouping_ok) {
        throw std::invalid_argument("fast grouping requires K divisible by M");
    }
    const int m = cfg.subarray_size;
    if (candidates.empty()) {
        throw std::invalid_argument("candidate set is empty");
    }
    if (static_cast<int>(candidates.size()) > m) {
        throw std::invalid_argument("more candidates than groups");
    }
    const int p = cfg.subarrays_per_group();
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));

    AnalogWeights weights;
    weights.n_groups = m;
    weights.active_groups = static_cast<int>(candidates.size());
    weights.per_subarray.resize(cfg.n_subarrays);
    for (int g = 1; g <= m; ++g) {
        const Angle steer = candidates[std::min<std::size_t>(g, candidates.size()) - 1];
        for (int q = 1; q <= p; ++q) {
            Eigen::VectorXcd v(m);
            for (int i = 0; i < m; ++i) {
                v(i) = std::polar(scale, apa_phase(g, q, i, steer, cfg, offset));
            }
            weights.per_subarray[(g - 1) * p + (q - 1)] = std::move(v);
        }
    }
    return weights;
}

AnalogWeights build_aligned_weights(Angle theta, const ArrayConfig& cfg) {
    const int m = cfg.subarray_size;
    const double phi = spatial_phase(theta, cfg).radians;
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));

    AnalogWeights weights;
    weights.n_groups = 1;
    weights.active_groups = 1;
    weights.per_subarray.resize(cfg.n_subarrays);
    for (int q = 0; q < cfg.n_subarrays; ++q) {
        Eigen::VectorXcd v(m);
        for (int i = 0; i < m; ++i) {
            v(i) = std::polar(scale, (q * m + i) * phi);
        }
        weights.per_subarray[q] = std::move(v);
    }
    return weights;
}

SlotData synthesize_stage2_slot(const SourceScenario& scn, const AnalogWeights& weights,
                                const ArrayConfig& cfg, RandomStream& rng,
                                int slot_index) {
    check_scenario(scn);
    check_weights(weights, cfg);

    const Eigen::MatrixXcd raw = synthesize_raw(scn, cfg, rng);
    const Eigen::MatrixXcd subarray_out = combine_subarrays(raw, weights, cfg);

    const int groups = weights.n_groups;
    const int per_group = cfg.n_subarrays / groups;
    const int snapshots = scn.snapshots_per_slot;
    Eigen::MatrixXcd grouped = Eigen::MatrixXcd::Zero(groups, snapshots);
    for (int g = 0; g < groups; ++g) {
        for (int q = 0; q < per_group; ++q) {
            grouped.row(g) += subarray_out.row(g * per_group + q);
        }
    }
    return {std::move(grouped), slot_index, SlotKind::stage2};
}

namespace {

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void write_slot(const SlotData& slot, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out.write("HADS", 4);
    write_u32(out, static_cast<std::uint32_t>(slot.samples.rows()));
    write_u32(out, static_cast<std::uint32_t>(slot.samples.cols()));
    write_u32(out, static_cast<std::uint32_t>(slot.slot_index));
    write_u32(out, static_cast<std::uint32_t>(slot.kind));
    for (Eigen::Index r = 0; r < slot.samples.rows(); ++r) {
        for (Eigen::Index c = 0; c < slot.samples.cols(); ++c) {
            const float re = static_cast<float>(slot.samples(r, c).real());
            const float im = static_cast<float>(slot.samples(r, c).imag());
            out.write(reinterpret_cast<const char*>(&re), sizeof re);
            out.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
    }
    if (!out) {
        throw std::runtime_error("short write to " + path.string());
    }
}

SlotData read_slot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    char magic[4] = {};
    in.read(magic, 4);
    if (std::memcmp(magic, "HADS", 4) != 0) {
        throw std::runtime_error(path.string() + ": bad magic");
    }
    const std::uint32_t rows = read_u32(in);
    const std::uint32_t cols = read_u32(in);
    const std::uint32_t slot_index = read_u32(in);
    const std::uint32_t kind = read_u32(in);
    if (kind != static_cast<std::uint32_t>(SlotKind::stage1) &&
        kind != static_cast<std::uint32_t>(SlotKind::stage2)) {
        throw std::runtime_error(path.string() + ": unknown slot kind");
    }
    SlotData slot;
    slot.samples.resize(rows, cols);
    slot.slot_index = static_cast<int>(slot_index);
    slot.kind = static_cast<SlotKind>(kind);
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t c = 0; c < cols; ++c) {
            float re = 0.0f;
            float im = 0.0f;
            in.read(reinterpret_cast<char*>(&re), sizeof re);
            in.read(reinterpret_cast<char*>(&im), sizeof im);
            slot.samples(r, c) = {static_cast<double>(re), static_cast<double>(im)};
        }
    }
    if (!in) {
        throw std::runtime_error(path.string() + ": truncated slot dump");
    }
    return slot;
}

}  // namespace haddoa
