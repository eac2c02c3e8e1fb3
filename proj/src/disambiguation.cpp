// SPDX-License-Identifier: Apache-2.0

#include "haddoa/disambiguation.hpp"

#include <stdexcept>

namespace haddoa {

PowerProfile group_power_profile(const SlotData& slot2,
                                 const CandidateSet& candidates) {
    const int n = static_cast<int>(candidates.ambiguous_angles.size());
    if (n < 1) {
        throw std::invalid_argument("candidate set is empty");
    }
    if (slot2.samples.rows() < n) {
        throw std::invalid_argument("stage-2 slot has fewer rows than candidates");
    }
    const double snapshots = static_cast<double>(slot2.samples.cols());

    PowerProfile profile;
    profile.per_candidate.reserve(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        profile.per_candidate.push_back(
            {candidates.ambiguous_angles[static_cast<std::size_t>(m)],
             slot2.samples.row(m).squaredNorm() / snapshots});
    }
    profile.selected_index = 0;
    for (int m = 1; m < n; ++m) {
        if (profile.per_candidate[static_cast<std::size_t>(m)].average_power >
            profile.per_candidate[static_cast<std::size_t>(profile.selected_index)]
                .average_power) {
            profile.selected_index = m;
        }
    }
    return profile;
}

EstimateResult estimate_fast(const SourceScenario& scn, const ArrayConfig& cfg,
                             RandomStream& rng, const Stage1Options& opts) {
    if (!cfg.fast_grouping_ok) {
        throw std::invalid_argument("fast eliminator requires K divisible by M");
    }
    const SlotData slot1 = synthesize_stage1_slot(scn, cfg, rng, 1);
    const CandidateSet candidates = stage1_candidates(slot1, cfg, opts);

    const AnalogWeights weights = build_analog_weights(candidates.ambiguous_angles, cfg);
    const SlotData slot2 = synthesize_stage2_slot(scn, weights, cfg, rng, 2);

    EstimateResult result;
    result.profile = group_power_profile(slot2, candidates);
    result.theta_hat =
        result.profile.per_candidate[static_cast<std::size_t>(result.profile.selected_index)]
            .angle;
    result.slots_consumed = 2;
    result.method = Method::fast;
    return result;
}

EstimateResult estimate_baseline(const SourceScenario& scn, const ArrayConfig& cfg,
                                 RandomStream& rng, const Stage1Options& opts) {
    const SlotData slot1 = synthesize_stage1_slot(scn, cfg, rng, 1);
    const CandidateSet candidates = stage1_candidates(slot1, cfg, opts);
    const int n = static_cast<int>(candidates.ambiguous_angles.size());
    const int scan_slots = cfg.subarray_size;  // fixed M-slot budget

    PowerProfile profile;
    profile.per_candidate.reserve(static_cast<std::size_t>(n));
    for (int m = 0; m < scan_slots; ++m) {
        const Angle steer =
            candidates.ambiguous_angles[static_cast<std::size_t>(std::min(m, n - 1))];
        const AnalogWeights weights = build_aligned_weights(steer, cfg);
        const SlotData slot = synthesize_stage2_slot(scn, weights, cfg, rng, 2 + m);
        const double power = slot.samples.row(0).squaredNorm() /
                             static_cast<double>(slot.samples.cols());
        if (m < n) {
            profile.per_candidate.push_back({steer, power});
        }
    }
    profile.selected_index = 0;
    for (int m = 1; m < n; ++m) {
        if (profile.per_candidate[static_cast<std::size_t>(m)].average_power >
            profile.per_candidate[static_cast<std::size_t>(profile.selected_index)]
                .average_power) {
            profile.selected_index = m;
        }
    }

    EstimateResult result;
    result.theta_hat =
        profile.per_candidate[static_cast<std::size_t>(profile.selected_index)].angle;
    result.profile = std::move(profile);
    result.slots_consumed = 1 + scan_slots;
    result.method = Method::baseline;
    return result;
}

double delay_ratio(const ArrayConfig& cfg) {
    return 2.0 / (cfg.subarray_size + 1.0);
}

}  // namespace haddoa
