// SPDX-License-Identifier: Apache-2.0
//
// Stochastic synthesis of received baseband data through the hybrid
// analog-digital chain: raw element samples, per-subarray analog combining
// (constant-modulus phase weights), and digital group summation.

#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "haddoa/array_model.hpp"
#include "haddoa/rng.hpp"

namespace haddoa {

/// One far-field emitter plus the per-slot sampling budget.
/// snr_db is the per-element ratio sigma_s^2 / sigma_w^2 with sigma_s^2 = 1;
/// +infinity disables noise entirely.
struct SourceScenario {
    Angle theta0;
    double snr_db = 0.0;
    int snapshots_per_slot = 1;  // L

    bool noiseless() const { return std::isinf(snr_db) && snr_db > 0.0; }
    double noise_variance() const {
        return noiseless() ? 0.0 : std::pow(10.0, -snr_db / 10.0);
    }
};

enum class SlotKind : unsigned { stage1 = 1, stage2 = 2 };

/// One time slot of digitized channel outputs: K rows for stage 1, one row
/// per digital group for stage 2; columns are the L snapshots.
struct SlotData {
    Eigen::MatrixXcd samples;
    int slot_index = 1;
    SlotKind kind = SlotKind::stage1;
};

/// Analog phase-shifter bank: one length-M constant-modulus vector per
/// subarray (global subarray order, entry modulus 1/sqrt(M)). The digital
/// layer sums subarrays in contiguous groups: group g owns subarrays
/// [g*P, (g+1)*P) where P = K / n_groups.
struct AnalogWeights {
    std::vector<Eigen::VectorXcd> per_subarray;
    int n_groups = 1;
    /// Groups mapped to distinct candidate angles; trailing groups built from
    /// a repeated candidate (padding) are not counted here.
    int active_groups = 1;
};

/// Convention for the element-phase offset H used when steering subarray p
/// of group m to a candidate angle.
enum class ApaOffset {
    /// H = (m-1)PM + (p-1)M: the first-element index of subarray p under
    /// contiguous grouping; phase-aligns the whole group.
    per_subarray,
    /// H = (m-1)PM + (P-1)M for every subarray of the group (legacy form,
    /// kept for comparison; does not fully align the group).
    group_constant,
};

/// Stage-1 slot: analog phases all zero (all-ones / sqrt(M) weights), output
/// is the K-channel virtual array, signal part M^{-1/2} a_D(theta0) s(n).
SlotData synthesize_stage1_slot(const SourceScenario& scn, const ArrayConfig& cfg,
                                RandomStream& rng, int slot_index = 1);

/// Analog phase applied to element i (0-based) of subarray p (1-based) in
/// group m (1-based) when steering to theta: (H + i) * spatial_phase(theta).
double apa_phase(int group, int subarray, int element, Angle theta,
                 const ArrayConfig& cfg, ApaOffset offset = ApaOffset::per_subarray);

/// Weight bank for the one-slot eliminator: group m is steered to the m-th
/// candidate. Fewer than M candidates: remaining groups reuse the last
/// candidate (active_groups marks the real ones). More than M throws.
AnalogWeights build_analog_weights(const std::vector<Angle>& candidates,
                                   const ArrayConfig& cfg,
                                   ApaOffset offset = ApaOffset::per_subarray);

/// Weight bank steering every subarray of the whole array to one angle
/// (single digital group); used by the multi-slot baseline scan.
AnalogWeights build_aligned_weights(Angle theta, const ArrayConfig& cfg);

/// Stage-2 slot: raw element samples pass through the analog weights, then
/// each group's subarray outputs are summed with an all-ones digital vector.
/// Returns an n_groups x L matrix.
SlotData synthesize_stage2_slot(const SourceScenario& scn, const AnalogWeights& weights,
                                const ArrayConfig& cfg, RandomStream& rng,
                                int slot_index = 2);

/// Debug dump: little-endian header (magic "HADS", u32 rows, cols,
/// slot_index, kind) followed by row-major complex64 (f32 re, f32 im).
void write_slot(const SlotData& slot, const std::filesystem::path& path);
SlotData read_slot(const std::filesystem::path& path);

}  // namespace haddoa
