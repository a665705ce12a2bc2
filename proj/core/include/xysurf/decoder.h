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

#ifndef XYSURF_DECODER_H
#define XYSURF_DECODER_H

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "xysurf/certified_matching.h"
#include "xysurf/lattice.h"
#include "xysurf/matching.h"
#include "xysurf/noise.h"
#include "xysurf/syndrome.h"

namespace xysurf {

/// Log-likelihood cost of one time, parallel and diagonal step.
struct StepWeights {
    double mu_t = 0;  // +inf without measurement errors
    double mu_p = 0;
    double mu_d = 0;  // +inf at infinite bias
};

StepWeights step_weights(const NoiseParams &params);

/// Geometry of the defect lattice: space from the layout, time from the
/// defect layers.
struct Spacetime {
    const CodeLayout *layout = nullptr;
    int layers = 1;
    TimeBoundary time_boundary = TimeBoundary::periodic;

    Spacetime() = default;
    Spacetime(const CodeLayout &l, int num_layers, TimeBoundary tb) : layout(&l), layers(num_layers), time_boundary(tb) {
    }
    explicit Spacetime(const CodeLayout &l, const DefectSet &defects)
        : Spacetime(l, defects.layers, defects.time_boundary) {
    }

    bool periodic_time() const {
        return time_boundary == TimeBoundary::periodic;
    }
    /// Shortest signed displacement from a to b along each axis.
    int delta_row(int a, int b) const;
    int delta_col(int a, int b) const {
        return delta_row(a, b);
    }
    int delta_time(int a, int b) const;
};

enum class NodeOrientation : uint8_t { horizontal, vertical };

struct DecoderNode {
    int vertex = 0;
    int r = 0;
    int c = 0;
    int t = 0;
    NodeOrientation orientation = NodeOrientation::horizontal;
    bool is_virtual = false;
    int defect = -1;  // index into DefectSet::defects for real nodes
    int twin = -1;    // opposite-orientation partner of a virtual node
};

/// Biased step distance between two same-orientation nodes.
double distance(const DecoderNode &a, const DecoderNode &b, const StepWeights &weights, const Spacetime &st);

/// One H and one V node per defect (nodes 2i and 2i + 1), then on open layouts
/// an H/V virtual pair per unstabilized boundary vertex and layer.
std::vector<DecoderNode> decoder_nodes(const DefectSet &defects, const CodeLayout &layout);

struct DecodingGraph {
    std::vector<DecoderNode> nodes;
    WeightedGraph graph;
};

/// The complete decoding graph with every finite same-orientation edge.
DecodingGraph build_decoding_graph(const DefectSet &defects, const CodeLayout &layout, const StepWeights &weights);

/// Minimum-weight perfect matching of the decoding graph, computed on a
/// certified sparse subgraph. Same optimum weight as mwpm(build_decoding_graph(...)).
Matching match_nodes(const std::vector<DecoderNode> &nodes, const StepWeights &weights, const Spacetime &st,
                     const CertifiedMatchingOptions &options = {}, CertifiedMatchingStats *stats = nullptr);

enum class Charge : uint8_t { neutral, charged };

struct ClusterEntry {
    int vertex = 0;
    int r = 0;
    int c = 0;
    int t = 0;
    DefectType type = DefectType::x_type;
    bool is_virtual = false;
    int defect = -1;
};

struct Cluster {
    std::vector<ClusterEntry> entries;  // cycle order, alternating V and H pairings
    // Signed displacement of each matched step, entry i to entry i + 1 (cyclic).
    std::vector<int> step_dr;
    std::vector<int> step_dc;
    std::vector<int> step_dt;
    Charge charge = Charge::neutral;
    /// Local pairing per defect type (indexed by DefectType), as entry positions.
    std::array<std::vector<std::pair<int, int>>, 2> pairs;
    /// Entry left unpaired by the local pairing, or -1.
    std::array<int, 2> leftover{-1, -1};

    int count(DefectType type) const;
    bool has_virtual(DefectType type) const;
    bool has_real() const;
    struct Displacement {
        int dr = 0;
        int dc = 0;
        int dt = 0;
    };
    /// Signed displacement walking forward from entry i to entry j. On the
    /// torus this fixes the homology class of the correction.
    Displacement path(int i, int j) const;
};

/// Traces the cycles of the H and V matchings into clusters and fixes their
/// local pairing. Matches between a virtual node and its own twin are dropped.
std::vector<Cluster> form_clusters(const std::vector<DecoderNode> &nodes, const Matching &matching,
                                   const Spacetime &st);

/// Per-layer spatial corrections plus measurement-flip corrections.
struct RecoveryPlan {
    PauliOperator spatial;
    std::vector<PauliOperator> layer_spatial;  // one per defect layer
    std::vector<BitVector> flips;              // one per defect layer, indexed by stabilizer

    struct Diagnostics {
        int defects = 0;
        int graph_nodes = 0;
        int clusters = 0;
        int charged_clusters = 0;
        int residual_nodes = 0;
        CertifiedMatchingStats matching;
    } diagnostics;
    std::vector<Cluster> clusters;

    RecoveryPlan() = default;
    RecoveryPlan(const CodeLayout &layout, int layers);

    /// (vertex, t) of every measurement-flip correction.
    std::vector<std::pair<int, int>> temporal_corrections(const CodeLayout &layout) const;
};

/// Strings pairing the cluster's entries locally, composed over time.
PauliOperator local_correction(const Cluster &cluster, const Spacetime &st);

/// Joins charged clusters pairwise, through corners on open layouts and
/// through mixed neutral clusters, and returns the extra spatial correction.
PauliOperator residual_decode(const std::vector<Cluster> &clusters, const Spacetime &st);

void apply_local_correction(const Cluster &cluster, const Spacetime &st, RecoveryPlan &plan);
/// Returns the number of nodes in the residual matching problem.
int apply_residual_correction(const std::vector<Cluster> &clusters, const Spacetime &st, RecoveryPlan &plan);

struct DecodeOptions {
    CertifiedMatchingOptions matching;
    /// Recompute the defects of the plan and compare with the input.
    bool verify_closure = true;
};

RecoveryPlan decode(const DefectSet &defects, const CodeLayout &layout, const NoiseParams &params,
                    const DecodeOptions &options = {});

}  // namespace xysurf

#endif  // XYSURF_DECODER_H
