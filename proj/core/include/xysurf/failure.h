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

#ifndef XYSURF_FAILURE_H
#define XYSURF_FAILURE_H

#include "xysurf/decoder.h"
#include "xysurf/lattice.h"
#include "xysurf/noise.h"
#include "xysurf/pauli.h"

namespace xysurf {

struct TrialOutcome {
    bool spatial_failure = false;
    bool temporal_failure = false;  // always false on open layouts
    int defect_count = 0;
    int graph_node_count = 0;

    bool failed() const {
        return spatial_failure || temporal_failure;
    }
};

/// True iff error * recovery is a nontrivial logical. Throws InternalError if
/// the residual has a syndrome.
bool spatial_failure(const PauliOperator &accumulated_error, const PauliOperator &spatial_recovery,
                     const CodeLayout &layout);

/// True iff actual plus corrected measurement flips wind around the periodic
/// time direction an odd number of times for either vertex colour.
bool temporal_failure(const ErrorHistory &history, const RecoveryPlan &plan, const CodeLayout &layout);

/// Runs one trial end to end: measure, extract defects, decode, classify.
TrialOutcome run_trial(const CodeLayout &layout, const NoiseParams &params, int rounds, TrialRng &rng,
                       const DecodeOptions &options = {});

/// Time boundary used for a layout and noise: open layouts with measurement
/// errors get a final perfect round, everything else is periodic in time.
TimeBoundary time_boundary_for(const CodeLayout &layout, const NoiseParams &params);

}  // namespace xysurf

#endif  // XYSURF_FAILURE_H
