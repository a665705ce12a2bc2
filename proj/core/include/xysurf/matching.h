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

#ifndef XYSURF_MATCHING_H
#define XYSURF_MATCHING_H

#include <cstdint>
#include <memory>
#include <unordered_set>
#include <utility>
#include <vector>

namespace xysurf {

struct WeightedEdge {
    int u;
    int v;
    double weight;
};

/// Undirected graph with real edge weights. At most one edge per node pair.
///
/// Weights may be negative: every perfect matching of a fixed node set has the
/// same number of edges, so a constant shift never changes the optimum.
class WeightedGraph {
   public:
    explicit WeightedGraph(int num_nodes = 0);

    int num_nodes() const {
        return num_nodes_;
    }
    const std::vector<WeightedEdge> &edges() const {
        return edges_;
    }

    /// Throws UsageError on self loops, out-of-range nodes, non-finite weights
    /// and repeated pairs.
    void add_edge(int u, int v, double weight);
    bool has_edge(int u, int v) const;

   private:
    static uint64_t key(int u, int v);
    int num_nodes_;
    std::vector<WeightedEdge> edges_;
    std::unordered_set<uint64_t> keys_;
};

struct Matching {
    std::vector<std::pair<int, int>> pairs;  // (u < v), sorted by u
    double total_weight = 0;

    /// Partner of every node.
    std::vector<int> mates(int num_nodes) const;
};

/// Exact minimum-weight perfect matching. Throws DecodeInfeasible when the
/// node count is odd or no perfect matching exists.
Matching mwpm(const WeightedGraph &graph);

/// Exhaustive search; at most 12 nodes.
Matching brute_force_matching(const WeightedGraph &graph);

/// Primal-dual blossom solver that keeps its final dual solution, so callers
/// can certify optimality against edges that were never handed to it.
class BlossomMatcher {
   public:
    /// Edges must satisfy the WeightedGraph invariants.
    BlossomMatcher(int num_nodes, std::vector<WeightedEdge> edges);
    ~BlossomMatcher();
    BlossomMatcher(const BlossomMatcher &) = delete;
    BlossomMatcher &operator=(const BlossomMatcher &) = delete;

    /// Returns false if no perfect matching exists.
    bool solve();

    int mate(int v) const;
    /// Vertex potential y_v of the minimisation dual.
    double node_dual(int v) const;
    /// Reduced cost w - y_u - y_v + (duals of odd sets containing both u and v)
    /// of a candidate edge; negative means the edge would improve the matching.
    double reduced_cost(int u, int v, double weight) const;
    /// Tolerance used for tightness tests.
    double epsilon() const;

    Matching matching() const;

   private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace xysurf

#endif  // XYSURF_MATCHING_H
