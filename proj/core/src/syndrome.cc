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

#include "xysurf/syndrome.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "xysurf/errors.h"

namespace xysurf {

namespace {

void append_layer(const CodeLayout &layout, const BitVector &bits, int t, DefectSet &out) {
    for (auto k : bits.ones()) {
        int v = layout.stabilized_vertices()[k];
        out.defects.push_back(Defect{v, layout.vertex_row(v), layout.vertex_col(v), t,
                                     defect_type_of(layout.color(v))});
    }
}

}  // namespace

std::string time_boundary_name(TimeBoundary tb) {
    return tb == TimeBoundary::periodic ? "periodic" : "final-round-perfect";
}

SyndromeHistory measure_rounds(const CodeLayout &layout, const ErrorHistory &history) {
    if (history.rounds() < 1) {
        throw UsageError("error history has no rounds");
    }
    SyndromeHistory s;
    PauliOperator acc(layout.num_faces());
    for (int t = 0; t < history.rounds(); t++) {
        if (history.flips[t].size() != static_cast<size_t>(layout.num_stabilizers())) {
            throw UsageError("flip set size does not match the layout");
        }
        acc *= history.fresh[t];
        BitVector truth = layout.syndrome(acc);
        s.outcomes.push_back(truth ^ history.flips[t]);
        if (t + 1 == history.rounds()) {
            s.final_syndrome = std::move(truth);
        }
    }
    s.last_round_flips = history.flips.back();
    return s;
}

DefectSet extract_defects(const CodeLayout &layout, const SyndromeHistory &syndromes, TimeBoundary time_boundary) {
    int T = syndromes.rounds();
    if (T < 1) {
        throw UsageError("syndrome history has no rounds");
    }
    DefectSet out;
    out.time_boundary = time_boundary;
    if (time_boundary == TimeBoundary::periodic) {
        out.layers = T;
        append_layer(layout, syndromes.outcomes[0] ^ syndromes.last_round_flips, 0, out);
        for (int t = 1; t < T; t++) {
            append_layer(layout, syndromes.outcomes[t] ^ syndromes.outcomes[t - 1], t, out);
        }
    } else {
        out.layers = T + 1;
        append_layer(layout, syndromes.outcomes[0], 0, out);
        for (int t = 1; t < T; t++) {
            append_layer(layout, syndromes.outcomes[t] ^ syndromes.outcomes[t - 1], t, out);
        }
        append_layer(layout, syndromes.final_syndrome ^ syndromes.outcomes[T - 1], T, out);
    }
    return out;
}

DefectSet chain_defects(const CodeLayout &layout, const std::vector<PauliOperator> &layer_errors,
                        const std::vector<BitVector> &layer_flips, TimeBoundary time_boundary) {
    int L = static_cast<int>(layer_errors.size());
    if (L < 1 || layer_flips.size() != layer_errors.size()) {
        throw UsageError("chain needs matching, non-empty error and flip layers");
    }
    DefectSet out;
    out.layers = L;
    out.time_boundary = time_boundary;
    for (int t = 0; t < L; t++) {
        BitVector bits = layout.syndrome(layer_errors[t]) ^ layer_flips[t];
        if (t > 0) {
            bits ^= layer_flips[t - 1];
        } else if (time_boundary == TimeBoundary::periodic) {
            bits ^= layer_flips[L - 1];
        }
        append_layer(layout, bits, t, out);
    }
    return out;
}

void write_defects(std::ostream &out, const DefectSet &defects) {
    out << "# layers " << defects.layers << " time_boundary " << time_boundary_name(defects.time_boundary)
        << "\n";
    for (const auto &d : defects.defects) {
        out << d.t << " " << d.r << " " << d.c << " " << (d.type == DefectType::x_type ? "X" : "Y") << "\n";
    }
}

DefectSet read_defects(std::istream &in, const CodeLayout &layout, int layers, TimeBoundary time_boundary) {
    DefectSet out;
    out.layers = layers;
    out.time_boundary = time_boundary;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        line_number++;
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) {
            continue;
        }
        if (first[0] == '#') {
            std::string key;
            fields.str(line.substr(1));
            fields.clear();
            while (fields >> key) {
                std::string value;
                if (!(fields >> value)) {
                    break;
                }
                if (key == "layers") {
                    out.layers = std::stoi(value);
                } else if (key == "time_boundary") {
                    out.time_boundary =
                        value == "periodic" ? TimeBoundary::periodic : TimeBoundary::final_round_perfect;
                }
            }
            continue;
        }
        int t, r, c;
        std::string type;
        std::istringstream row(line);
        if (!(row >> t >> r >> c >> type) || (type != "X" && type != "Y")) {
            throw UsageError("malformed defect line " + std::to_string(line_number) + ": '" + line + "'");
        }
        int n = layout.vertex_extent();
        if (r < 0 || r >= n || c < 0 || c >= n) {
            throw UsageError("defect outside the lattice on line " + std::to_string(line_number));
        }
        int v = layout.vertex_index(r, c);
        if (!layout.is_stabilized(v)) {
            throw UsageError("defect on an unstabilized vertex on line " + std::to_string(line_number));
        }
        DefectType expected = defect_type_of(layout.color(v));
        if ((type == "X") != (expected == DefectType::x_type)) {
            throw UsageError("defect type does not match vertex colour on line " + std::to_string(line_number));
        }
        out.defects.push_back(Defect{v, r, c, t, expected});
    }
    for (const auto &d : out.defects) {
        if (d.t < 0 || d.t >= out.layers) {
            throw UsageError("defect time outside [0, layers)");
        }
    }
    std::sort(out.defects.begin(), out.defects.end(), [&](const Defect &a, const Defect &b) {
        return a.t != b.t ? a.t < b.t : layout.stabilizer_index(a.vertex) < layout.stabilizer_index(b.vertex);
    });
    out.defects.erase(std::unique(out.defects.begin(), out.defects.end()), out.defects.end());
    return out;
}

}  // namespace xysurf
