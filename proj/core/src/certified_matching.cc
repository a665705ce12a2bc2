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

#include "xysurf/certified_matching.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_set>

#include "xysurf/errors.h"

namespace xysurf {

namespace {

uint64_t edge_key(int u, int v) {
    if (u > v) {
        std::swap(u, v);
    }
    return (static_cast<uint64_t>(u) << 32) | static_cast<uint32_t>(v);
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
};

// Current candidate edge set plus the per-component solutions built from it.
class CandidateSolver {
   public:
    CandidateSolver(const ImplicitGraph &graph, int n) : graph_(graph), n_(n), dirty_(n, true), local_(n, -1) {
        component_of_.assign(n, -1);
        mate_.assign(n, -1);
        dual_.assign(n, 0);
    }

    bool add_edge(int u, int v, double w) {
        if (u == v || !std::isfinite(w) || !keys_.insert(edge_key(u, v)).second) {
            return false;
        }
        edges_.push_back({u, v, w});
        dirty_[u] = dirty_[v] = true;
        max_weight_ = std::max(max_weight_, std::abs(w));
        return true;
    }
    bool has_edge(int u, int v) const {
        return keys_.count(edge_key(u, v)) != 0;
    }

    /// Solves every component touched since the last call. Returns the nodes of
    /// components that have no perfect matching on the current candidates.
    std::vector<int> solve(int &components) {
        DisjointSets sets(n_);
        for (const auto &e : edges_) {
            sets.unite(e.u, e.v);
        }
        std::vector<std::vector<int>> members(n_);
        for (int v = 0; v < n_; v++) {
            members[sets.find(v)].push_back(v);
        }
        std::vector<std::vector<int>> comp_edges(n_);
        for (int k = 0; k < static_cast<int>(edges_.size()); k++) {
            comp_edges[sets.find(edges_[k].u)].push_back(k);
        }
        std::vector<int> stuck;
        components = 0;
        for (int root = 0; root < n_; root++) {
            const auto &nodes = members[root];
            if (nodes.empty()) {
                continue;
            }
            components++;
            bool touched = false;
            for (int v : nodes) {
                touched |= dirty_[v];
            }
            if (!touched) {
                continue;
            }
            for (size_t i = 0; i < nodes.size(); i++) {
                local_[nodes[i]] = static_cast<int>(i);
                dirty_[nodes[i]] = false;
            }
            if (nodes.size() % 2) {
                stuck.insert(stuck.end(), nodes.begin(), nodes.end());
                continue;
            }
            std::vector<WeightedEdge> local_edges;
            local_edges.reserve(comp_edges[root].size());
            for (int k : comp_edges[root]) {
                const auto &e = edges_[k];
                local_edges.push_back({local_[e.u], local_[e.v], e.weight});
            }
            auto matcher = std::make_shared<BlossomMatcher>(static_cast<int>(nodes.size()), std::move(local_edges));
            if (!matcher->solve()) {
                stuck.insert(stuck.end(), nodes.begin(), nodes.end());
                continue;
            }
            int id = static_cast<int>(matchers_.size());
            matchers_.push_back(matcher);
            for (size_t i = 0; i < nodes.size(); i++) {
                int v = nodes[i];
                component_of_[v] = id;
                mate_[v] = nodes[matcher->mate(static_cast<int>(i))];
                dual_[v] = matcher->node_dual(static_cast<int>(i));
            }
        }
        for (int v : stuck) {
            dirty_[v] = true;
        }
        return stuck;
    }

    double reduced_cost(int u, int v, double w) const {
        if (component_of_[u] == component_of_[v]) {
            return matchers_[component_of_[u]]->reduced_cost(local_[u], local_[v], w);
        }
        return w - dual_[u] - dual_[v];
    }

    double dual(int v) const {
        return dual_[v];
    }
    double tolerance() const {
        return 1e-9 * std::max(1.0, max_weight_);
    }
    size_t num_edges() const {
        return edges_.size();
    }

    Matching matching() const {
        Matching m;
        for (int v = 0; v < n_; v++) {
            if (v < mate_[v]) {
                m.pairs.push_back({v, mate_[v]});
                m.total_weight += graph_.weight(v, mate_[v]);
            }
        }
        return m;
    }

   private:
    const ImplicitGraph &graph_;
    int n_;
    std::vector<WeightedEdge> edges_;
    std::unordered_set<uint64_t> keys_;
    std::vector<bool> dirty_;
    std::vector<int> local_;
    std::vector<int> component_of_;
    std::vector<int> mate_;
    std::vector<double> dual_;
    std::vector<std::shared_ptr<BlossomMatcher>> matchers_;
    double max_weight_ = 0;
};

// Adds edges from u to its k nearest neighbours. Returns true if the search
// covered everything reachable from u.
bool add_nearest(const ImplicitGraph &graph, CandidateSolver &solver, int u, int k) {
    double radius = graph.initial_radius() > 0 ? graph.initial_radius() : 1.0;
    std::vector<std::pair<int, double>> found;
    bool saturated = false;
    while (true) {
        found.clear();
        saturated = graph.neighbors(u, radius, found);
        std::erase_if(found, [&](const auto &item) {
            return item.first == u || !(item.second <= radius) || !std::isfinite(item.second);
        });
        if (saturated || static_cast<int>(found.size()) >= k) {
            break;
        }
        radius *= 2;
    }
    std::sort(found.begin(), found.end(), [](const auto &a, const auto &b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    found.erase(std::unique(found.begin(), found.end(),
                            [](const auto &a, const auto &b) { return a.first == b.first; }),
                found.end());
    if (saturated && static_cast<int>(found.size()) <= k) {
        for (const auto &[v, w] : found) {
            solver.add_edge(u, v, w);
        }
        return true;
    }
    for (int i = 0; i < std::min<int>(k, static_cast<int>(found.size())); i++) {
        solver.add_edge(u, found[i].first, found[i].second);
    }
    return false;
}

Matching solve_dense(const ImplicitGraph &graph, CertifiedMatchingStats *stats) {
    int n = graph.num_nodes();
    WeightedGraph g(n);
    for (int u = 0; u < n; u++) {
        for (int v = u + 1; v < n; v++) {
            double w = graph.weight(u, v);
            if (std::isfinite(w)) {
                g.add_edge(u, v, w);
            }
        }
    }
    if (stats) {
        stats->dense = true;
        stats->rounds = 1;
        stats->candidate_edges = static_cast<int>(g.edges().size());
    }
    // Reuse the component machinery so separate pieces are solved separately.
    CandidateSolver solver(graph, n);
    for (const auto &e : g.edges()) {
        solver.add_edge(e.u, e.v, e.weight);
    }
    int components = 0;
    if (!solver.solve(components).empty()) {
        throw DecodeInfeasible("matching graph with " + std::to_string(n) + " nodes has no perfect matching");
    }
    if (stats) {
        stats->components = components;
    }
    return solver.matching();
}

}  // namespace

Matching certified_mwpm(const ImplicitGraph &graph, const CertifiedMatchingOptions &options,
                        CertifiedMatchingStats *stats) {
    int n = graph.num_nodes();
    if (n % 2) {
        throw DecodeInfeasible("odd number of nodes (" + std::to_string(n) + ") cannot be perfectly matched");
    }
    if (n == 0) {
        return {};
    }
    long pairs = static_cast<long>(n) * (n - 1) / 2;
    if (!graph.supports_pruning() || pairs <= options.dense_edge_budget) {
        return solve_dense(graph, stats);
    }

    CandidateSolver solver(graph, n);
    for (const auto &e : graph.forced_edges()) {
        solver.add_edge(e.u, e.v, e.weight);
    }
    std::vector<int> k(n, options.neighbors_per_node);
    std::vector<bool> saturated(n, false);
    for (int u = 0; u < n; u++) {
        saturated[u] = add_nearest(graph, solver, u, k[u]);
    }

    std::vector<std::pair<int, double>> found;
    int rounds = 0;
    int components = 0;
    while (true) {
        rounds++;
        auto stuck = solver.solve(components);
        if (!stuck.empty()) {
            bool grew = false;
            for (int u : stuck) {
                if (!saturated[u]) {
                    k[u] *= 2;
                    saturated[u] = add_nearest(graph, solver, u, k[u]);
                    grew = true;
                }
            }
            if (!grew) {
                throw DecodeInfeasible("matching graph with " + std::to_string(n) + " nodes has no perfect matching");
            }
            continue;
        }
        // Any edge with negative reduced cost has weight below y_u + y_v, so it
        // is found by searching from its endpoint with the larger dual.
        double tol = solver.tolerance();
        int added = 0;
        for (int u = 0; u < n; u++) {
            double yu = solver.dual(u);
            if (yu <= 0) {
                continue;
            }
            found.clear();
            graph.neighbors(u, 2 * yu, found);
            for (const auto &[v, w] : found) {
                if (v == u || !(w < 2 * yu) || solver.dual(v) > yu || solver.has_edge(u, v)) {
                    continue;
                }
                if (solver.reduced_cost(u, v, w) < -tol) {
                    added += solver.add_edge(u, v, w);
                }
            }
        }
        if (added == 0) {
            break;
        }
    }
    if (stats) {
        stats->dense = false;
        stats->rounds = rounds;
        stats->candidate_edges = static_cast<int>(solver.num_edges());
        stats->components = components;
    }
    return solver.matching();
}

}  // namespace xysurf
