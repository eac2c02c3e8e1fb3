// SPDX-License-Identifier: Apache-2.0
//
// Second-stage spurious-angle elimination: the fast one-slot group-power
// method and the multi-slot aligned-scan baseline, plus the end-to-end
// estimators composing both stages.

#pragma once

#include <vector>

#include "haddoa/array_model.hpp"
#include "haddoa/had_receiver.hpp"
#include "haddoa/root_music.hpp"
#include "haddoa/rng.hpp"

namespace haddoa {

enum class Method { fast, baseline };

struct CandidatePower {
    Angle angle;
    double average_power = 0.0;
};

/// Average beamformed power per ambiguous candidate and the argmax index.
struct PowerProfile {
    std::vector<CandidatePower> per_candidate;
    int selected_index = 0;
};

struct EstimateResult {
    Angle theta_hat;
    PowerProfile profile;
    int slots_consumed = 0;
    Method method = Method::fast;
};

/// Powers of the grouped stage-2 slot: entry m is (1/L) sum_n |r_m(n)|^2,
/// rows aligned with the candidate ordering used by build_analog_weights.
/// Ties in the argmax resolve to the first (lowest) index.
PowerProfile group_power_profile(const SlotData& slot2, const CandidateSet& candidates);

/// Two-slot estimator: stage-1 Root-MUSIC candidates, then one grouped slot
/// with each group steered to one candidate; the group of maximum average
/// power wins. Requires K divisible by M.
EstimateResult estimate_fast(const SourceScenario& scn, const ArrayConfig& cfg,
                             RandomStream& rng, const Stage1Options& opts = {});

/// Multi-slot baseline: stage-1 candidates, then M scan slots, each steering
/// every subarray of the whole array to one candidate; maximum average power
/// wins. Consumes 1 + M slots.
EstimateResult estimate_baseline(const SourceScenario& scn, const ArrayConfig& cfg,
                                 RandomStream& rng, const Stage1Options& opts = {});

/// Elimination delay of the fast method relative to the baseline: 2 / (M+1).
double delay_ratio(const ArrayConfig& cfg);

}  // namespace haddoa
