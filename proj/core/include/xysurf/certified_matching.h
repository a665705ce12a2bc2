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

#ifndef XYSURF_CERTIFIED_MATCHING_H
#define XYSURF_CERTIFIED_MATCHING_H

#include <utility>
#include <vector>

#include "xysurf/matching.h"

namespace xysurf {

/// A complete weighted graph given implicitly, with a neighbourhood query
/// cheap enough to avoid materialising all n^2 edges.
class ImplicitGraph {
   public:
    virtual ~ImplicitGraph() = default;

    virtual int num_nodes() const = 0;

    /// Weight of the edge (u, v), or +infinity if there is none.
    virtual double weight(int u, int v) const = 0;

    /// Appends every v != u with weight(u, v) <= radius (and possibly more;
    /// the caller filters). Returns true if the search already covered every
    /// node reachable from u, so a larger radius cannot find anything new.
    virtual bool neighbors(int u, double radius, std::vector<std::pair<int, double>> &out) const = 0;

    /// Edges always present in the candidate set.
    virtual std::vector<WeightedEdge> forced_edges() const {
        return {};
    }

    /// Suggested starting radius for neighbour searches.
    virtual double initial_radius() const = 0;

    /// False when weights can be negative or the neighbourhood bound does not
    /// hold; the solver then materialises every edge.
    virtual bool supports_pruning() const {
        return true;
    }
};

struct CertifiedMatchingOptions {
    int neighbors_per_node = 6;
    /// Materialise all edges when n (n - 1) / 2 stays below this.
    long dense_edge_budget = 60000;
};

struct CertifiedMatchingStats {
    int rounds = 0;
    int candidate_edges = 0;
    int components = 0;
    bool dense = false;
};

/// Minimum-weight perfect matching of the complete implicit graph. Solves on
/// a sparse candidate set and grows it until the blossom duals are feasible
/// for every edge of the full graph, which certifies optimality.
Matching certified_mwpm(const ImplicitGraph &graph, const CertifiedMatchingOptions &options = {},
                        CertifiedMatchingStats *stats = nullptr);

}  // namespace xysurf

#endif  // XYSURF_CERTIFIED_MATCHING_H
