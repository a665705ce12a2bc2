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

#ifndef XYSURF_SYNDROME_H
#define XYSURF_SYNDROME_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "xysurf/bit_vector.h"
#include "xysurf/lattice.h"
#include "xysurf/noise.h"

namespace xysurf {

enum class TimeBoundary : uint8_t { periodic, final_round_perfect };

std::string time_boundary_name(TimeBoundary tb);

/// X-type defects sit on black vertices, Y-type on white.
enum class DefectType : uint8_t { x_type, y_type };

inline DefectType defect_type_of(VertexColor c) {
    return c == VertexColor::black ? DefectType::x_type : DefectType::y_type;
}

struct Defect {
    int vertex;
    int r;
    int c;
    int t;
    DefectType type;

    bool operator==(const Defect &other) const = default;
};

struct DefectSet {
    std::vector<Defect> defects;  // sorted by (t, vertex)
    int layers = 1;               // number of time layers of the defect lattice
    TimeBoundary time_boundary = TimeBoundary::periodic;

    size_t size() const {
        return defects.size();
    }
    bool empty() const {
        return defects.empty();
    }
    bool operator==(const DefectSet &other) const = default;
};

/// Measured outcomes per round plus what the time boundary needs: the last
/// round's flips (periodic reference) and the final true syndrome (perfect
/// closing round).
struct SyndromeHistory {
    std::vector<BitVector> outcomes;
    BitVector last_round_flips;
    BitVector final_syndrome;

    int rounds() const {
        return static_cast<int>(outcomes.size());
    }
};

SyndromeHistory measure_rounds(const CodeLayout &layout, const ErrorHistory &history);

/// Defects from consecutive outcome differences.
///
/// Periodic: layer t compares round t with round t-1; layer 0 compares with
/// the reference implied by closing the time direction, i.e. the last
/// round's flips, so a persistent data error does not fake a defect at t = 0.
/// Final-round-perfect: layers 0..T, the extra layer compares the perfect
/// final syndrome with the last measured round.
DefectSet extract_defects(const CodeLayout &layout, const SyndromeHistory &syndromes, TimeBoundary time_boundary);

/// Defects of a spacetime chain: D(v,t) = s(e_t) + f(t) + f(t-1), where e_t
/// are per-layer data errors and f(t) per-layer outcome flips.
DefectSet chain_defects(const CodeLayout &layout, const std::vector<PauliOperator> &layer_errors,
                        const std::vector<BitVector> &layer_flips, TimeBoundary time_boundary);

/// One `t r c type` line per defect, with a leading comment header.
void write_defects(std::ostream &out, const DefectSet &defects);
/// Parses the dump format; `layers`/`time_boundary` come from the header when
/// present, otherwise from the arguments.
DefectSet read_defects(std::istream &in, const CodeLayout &layout, int layers, TimeBoundary time_boundary);

}  // namespace xysurf

#endif  // XYSURF_SYNDROME_H
