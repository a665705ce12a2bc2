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

#ifndef XYSURF_TESTS_TEST_SUPPORT_H
#define XYSURF_TESTS_TEST_SUPPORT_H

#include "xysurf/decoder.h"
#include "xysurf/failure.h"
#include "xysurf/lattice.h"
#include "xysurf/noise.h"
#include "xysurf/syndrome.h"

namespace xysurf::testing {

inline ErrorHistory quiet_history(const CodeLayout &layout, int rounds) {
    ErrorHistory h;
    for (int t = 0; t < rounds; t++) {
        h.fresh.push_back(PauliOperator(layout.num_faces()));
        h.flips.push_back(BitVector(layout.num_stabilizers()));
    }
    return h;
}

struct Decoded {
    DefectSet defects;
    RecoveryPlan plan;
    bool spatial = false;
    bool temporal = false;
};

/// Measures, decodes and classifies a fixed error history.
inline Decoded decode_history(const CodeLayout &layout, const ErrorHistory &history, const NoiseParams &noise) {
    Decoded out;
    auto syndromes = measure_rounds(layout, history);
    out.defects = extract_defects(layout, syndromes, time_boundary_for(layout, noise));
    out.plan = decode(out.defects, layout, noise);
    out.spatial = spatial_failure(history.final_error(), out.plan.spatial, layout);
    if (layout.periodic()) {
        out.temporal = temporal_failure(history, out.plan, layout);
    }
    return out;
}

}  // namespace xysurf::testing

#endif  // XYSURF_TESTS_TEST_SUPPORT_H
