// Copyright 2026 xysurf Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xysurf/failure.h"

#include "xysurf/errors.h"
#include "xysurf/syndrome.h"

namespace xysurf {

bool spatial_failure(const PauliOperator &accumulated_error, const PauliOperator &spatial_recovery,
                     const CodeLayout &layout) {
    PauliOperator residual = accumulated_error * spatial_recovery;
    if (layout.syndrome(residual).any()) {
        throw InternalError("residual error has a nonzero syndrome");
    }
    return !layout.stabilizer_group().contains(residual);
}

bool temporal_failure(const ErrorHistory &history, const RecoveryPlan &plan, const CodeLayout &layout) {
    if (!layout.periodic()) {
        throw UsageError("temporal failure is only defined on periodic layouts");
    }
    int T = history.rounds();
    if (static_cast<int>(plan.flips.size()) != T) {
        throw UsageError("recovery plan and history disagree on the number of rounds");
    }
    BitVector crossing = history.flips[T - 1] ^ plan.flips[T - 1];
    int parity[2] = {0, 0};
    for (auto k : crossing.ones()) {
        int v = layout.stabilized_vertices()[k];
        parity[static_cast<int>(layout.color(v))] ^= 1;
    }
    return parity[0] || parity[1];
}

TimeBoundary time_boundary_for(const CodeLayout &layout, const NoiseParams &params) {
    return layout.periodic() || params.q == 0 ? TimeBoundary::periodic : TimeBoundary::final_round_perfect;
}

TrialOutcome run_trial(const CodeLayout &layout, const NoiseParams &params, int rounds, TrialRng &rng,
                       const DecodeOptions &options) {
    ErrorHistory history = sample_history(layout, params, rounds, rng);
    SyndromeHistory syndromes = measure_rounds(layout, history);
    TimeBoundary tb = time_boundary_for(layout, params);
    DefectSet defects = extract_defects(layout, syndromes, tb);
    TrialOutcome out;
    out.defect_count = static_cast<int>(defects.size());
    RecoveryPlan plan = decode(defects, layout, params, options);
    out.graph_node_count = plan.diagnostics.graph_nodes;
    out.spatial_failure = spatial_failure(history.final_error(), plan.spatial, layout);
    if (layout.periodic()) {
        out.temporal_failure = temporal_failure(history, plan, layout);
    }
    return out;
}

}  // namespace xysurf
