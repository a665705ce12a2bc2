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

#include "xysurf/decoder.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "xysurf/errors.h"

namespace xysurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int wrap_delta(int diff, int n) {
    int d = ((diff % n) + n) % n;
    if (2 * d > n) {
        d -= n;
    }
    return d;
}

int wrap_index(int x, int n) {
    return ((x % n) + n) % n;
}

DefectType type_of_vertex(const CodeLayout &layout, int v) {
    return defect_type_of(layout.color(v));
}

// Coordinates of an axis within `radius` of `center`. Returns true when the
// whole axis is covered.
bool axis_range(int center, double radius, int n, bool periodic, std::vector<int> &out) {
    out.clear();
    int r = radius >= n ? n : static_cast<int>(std::floor(radius));
    if (r < 0) {
        return false;
    }
    if (periodic) {
        if (2 * r + 1 >= n) {
            for (int x = 0; x < n; x++) {
                out.push_back(x);
            }
            return true;
        }
        for (int k = -r; k <= r; k++) {
            out.push_back(wrap_index(center + k, n));
        }
        return false;
    }
    int lo = std::max(0, center - r);
    int hi = std::min(n - 1, center + r);
    for (int x = lo; x <= hi; x++) {
        out.push_back(x);
    }
    return lo == 0 && hi == n - 1;
}

}  // namespace

StepWeights step_weights(const NoiseParams &params) {
    if (!(params.p > 0 && params.p < 1)) {
        throw UsageError("step weights need 0 < p < 1");
    }
    if (!(params.q >= 0 && params.q < 1)) {
        throw UsageError("step weights need 0 <= q < 1");
    }
    StepWeights w;
    double odds = -std::log(params.p / (1 - params.p));
    if (params.eta.is_infinite()) {
        w.mu_p = odds;
        w.mu_d = kInf;
    } else {
        double eta = params.eta.value();
        w.mu_p = -std::log(eta / (eta + 1)) + odds;
        w.mu_d = -std::log(1 / (2 * (eta + 1))) + odds;
    }
    w.mu_t = params.q > 0 ? -std::log(params.q / (1 - params.q)) : kInf;
    return w;
}

int Spacetime::delta_row(int a, int b) const {
    return layout->periodic() ? wrap_delta(b - a, layout->vertex_extent()) : b - a;
}

int Spacetime::delta_time(int a, int b) const {
    return periodic_time() ? wrap_delta(b - a, layers) : b - a;
}

double distance(const DecoderNode &a, const DecoderNode &b, const StepWeights &weights, const Spacetime &st) {
    if (a.orientation != b.orientation) {
        throw UsageError("distance is only defined between nodes of the same orientation");
    }
    int dr = std::abs(st.delta_row(a.r, b.r));
    int dc = std::abs(st.delta_col(a.c, b.c));
    int dt = std::abs(st.delta_time(a.t, b.t));
    int dd = a.orientation == NodeOrientation::horizontal ? dr : dc;
    int dp = a.orientation == NodeOrientation::horizontal ? dc : dr;
    dp = dp >= dd ? dp - dd : (dd - dp) % 2;
    double total = 0;
    if (dt > 0) {
        total += dt * weights.mu_t;
    }
    if (dp > 0) {
        total += dp * weights.mu_p;
    }
    if (dd > 0) {
        total += dd * weights.mu_d;
    }
    return total;
}

std::vector<DecoderNode> decoder_nodes(const DefectSet &defects, const CodeLayout &layout) {
    std::vector<DecoderNode> nodes;
    for (int i = 0; i < static_cast<int>(defects.size()); i++) {
        const auto &d = defects.defects[i];
        for (auto o : {NodeOrientation::horizontal, NodeOrientation::vertical}) {
            nodes.push_back(DecoderNode{d.vertex, d.r, d.c, d.t, o, false, i, -1});
        }
    }
    if (!layout.periodic()) {
        for (int t = 0; t < defects.layers; t++) {
            for (int v : layout.unstabilized_boundary_vertices()) {
                int h = static_cast<int>(nodes.size());
                int r = layout.vertex_row(v);
                int c = layout.vertex_col(v);
                nodes.push_back(DecoderNode{v, r, c, t, NodeOrientation::horizontal, true, -1, h + 1});
                nodes.push_back(DecoderNode{v, r, c, t, NodeOrientation::vertical, true, -1, h});
            }
        }
    }
    return nodes;
}

DecodingGraph build_decoding_graph(const DefectSet &defects, const CodeLayout &layout, const StepWeights &weights) {
    Spacetime st(layout, defects);
    DecodingGraph out{decoder_nodes(defects, layout), WeightedGraph(0)};
    int n = static_cast<int>(out.nodes.size());
    out.graph = WeightedGraph(n);
    for (int u = 0; u < n; u++) {
        const auto &a = out.nodes[u];
        if (a.is_virtual && a.twin > u) {
            out.graph.add_edge(u, a.twin, 0);
        }
        for (int v = u + 1; v < n; v++) {
            if (out.nodes[v].orientation != a.orientation) {
                continue;
            }
            double w = distance(a, out.nodes[v], weights, st);
            if (std::isfinite(w)) {
                out.graph.add_edge(u, v, w);
            }
        }
    }
    return out;
}

namespace {

// Decoding graph over lattice sites with a box search for neighbourhoods.
class LatticeGraph final : public ImplicitGraph {
   public:
    LatticeGraph(const std::vector<DecoderNode> &nodes, const StepWeights &weights, const Spacetime &st)
        : nodes_(nodes), w_(weights), st_(st), extent_(st.layout->vertex_extent()) {
        int sites = 2 * st.layers * extent_ * extent_;
        offsets_.assign(sites + 1, 0);
        for (const auto &n : nodes_) {
            offsets_[site(n) + 1]++;
        }
        std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
        members_.resize(nodes_.size());
        std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
        for (int i = 0; i < static_cast<int>(nodes_.size()); i++) {
            members_[fill[site(nodes_[i])]++] = i;
        }
    }

    int num_nodes() const override {
        return static_cast<int>(nodes_.size());
    }

    double weight(int u, int v) const override {
        if (nodes_[u].twin == v) {
            return 0;
        }
        if (nodes_[u].orientation != nodes_[v].orientation) {
            return kInf;
        }
        return distance(nodes_[u], nodes_[v], w_, st_);
    }

    std::vector<WeightedEdge> forced_edges() const override {
        std::vector<WeightedEdge> out;
        for (int u = 0; u < num_nodes(); u++) {
            if (nodes_[u].twin > u) {
                out.push_back({u, nodes_[u].twin, 0});
            }
        }
        return out;
    }

    double initial_radius() const override {
        return 2 * std::min(w_.mu_p, w_.mu_t);
    }

    bool supports_pruning() const override {
        return std::min(w_.mu_p, w_.mu_d) > 0 && w_.mu_t > 0;
    }

    bool neighbors(int u, double radius, std::vector<std::pair<int, double>> &out) const override {
        const auto &a = nodes_[u];
        bool horizontal = a.orientation == NodeOrientation::horizontal;
        double m = std::min(w_.mu_p, w_.mu_d);
        bool periodic_space = st_.layout->periodic();

        double time_radius = st_.layers == 1 || std::isinf(w_.mu_t) ? 0 : radius / w_.mu_t;
        bool saturated = axis_range(a.t, time_radius, st_.layers, st_.periodic_time(), times_);
        if (std::isinf(w_.mu_t)) {
            saturated = true;
        }
        for (int t : times_) {
            int dt = std::abs(st_.delta_time(a.t, t));
            double rest = radius - (dt > 0 ? dt * w_.mu_t : 0);
            double across = std::min(rest / w_.mu_d, rest / m);
            double along = rest / m;
            double row_radius = horizontal ? across : along;
            double col_radius = horizontal ? along : across;
            bool rows_full = axis_range(a.r, row_radius, extent_, periodic_space, rows_);
            bool cols_full = axis_range(a.c, col_radius, extent_, periodic_space, cols_);
            // Rows (columns) are unreachable for H (V) nodes at infinite bias.
            if (std::isinf(w_.mu_d)) {
                (horizontal ? rows_full : cols_full) = true;
            }
            saturated = saturated && rows_full && cols_full;
            for (int r : rows_) {
                for (int c : cols_) {
                    int s = site(a.orientation, t, r, c);
                    for (int k = offsets_[s]; k < offsets_[s + 1]; k++) {
                        int v = members_[k];
                        if (v != u) {
                            out.push_back({v, distance(a, nodes_[v], w_, st_)});
                        }
                    }
                }
            }
        }
        return saturated;
    }

   private:
    int site(NodeOrientation o, int t, int r, int c) const {
        return ((static_cast<int>(o) * st_.layers + t) * extent_ + r) * extent_ + c;
    }
    int site(const DecoderNode &n) const {
        return site(n.orientation, n.t, n.r, n.c);
    }

    const std::vector<DecoderNode> &nodes_;
    StepWeights w_;
    Spacetime st_;
    int extent_;
    std::vector<int> offsets_;
    std::vector<int> members_;
    mutable std::vector<int> times_, rows_, cols_;
};

}  // namespace

Matching match_nodes(const std::vector<DecoderNode> &nodes, const StepWeights &weights, const Spacetime &st,
                     const CertifiedMatchingOptions &options, CertifiedMatchingStats *stats) {
    LatticeGraph graph(nodes, weights, st);
    return certified_mwpm(graph, options, stats);
}

// ---------------------------------------------------------------------------
// Clusters

int Cluster::count(DefectType type) const {
    return static_cast<int>(
        std::count_if(entries.begin(), entries.end(), [&](const ClusterEntry &e) { return e.type == type; }));
}

bool Cluster::has_virtual(DefectType type) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const ClusterEntry &e) { return e.type == type && e.is_virtual; });
}

bool Cluster::has_real() const {
    return std::any_of(entries.begin(), entries.end(), [](const ClusterEntry &e) { return !e.is_virtual; });
}

Cluster::Displacement Cluster::path(int i, int j) const {
    int n = static_cast<int>(entries.size());
    Displacement total;
    for (int k = i; k != j; k = (k + 1) % n) {
        total.dr += step_dr[k];
        total.dc += step_dc[k];
        total.dt += step_dt[k];
    }
    return total;
}

namespace {

int manhattan(const ClusterEntry &a, const ClusterEntry &b, const Spacetime &st) {
    return std::abs(st.delta_row(a.r, b.r)) + std::abs(st.delta_col(a.c, b.c)) + std::abs(st.delta_time(a.t, b.t));
}

// Length of the correction joining entries i and j walking forward.
double pair_cost(const Cluster &cl, int i, int j) {
    const auto &a = cl.entries[i];
    const auto &b = cl.entries[j];
    if (a.is_virtual && b.is_virtual) {
        return 0;
    }
    auto disp = cl.path(i, j);
    double cost = std::max(std::abs(disp.dr), std::abs(disp.dc));
    if (!a.is_virtual && !b.is_virtual) {
        cost += std::abs(disp.dt);
    }
    return cost;
}

// Pairs successive entries of one type along the cycle. With an odd count one
// entry stays unpaired: a virtual one when available, since the boundary
// absorbs it.
void plan_pairs(Cluster &cl, DefectType type) {
    std::vector<int> pos;
    for (int i = 0; i < static_cast<int>(cl.entries.size()); i++) {
        if (cl.entries[i].type == type) {
            pos.push_back(i);
        }
    }
    int n = static_cast<int>(pos.size());
    auto &pairs = cl.pairs[static_cast<int>(type)];
    pairs.clear();
    cl.leftover[static_cast<int>(type)] = -1;
    if (n == 0) {
        return;
    }
    std::vector<double> link(n);
    for (int i = 0; i < n; i++) {
        link[i] = n == 1 ? 0 : pair_cost(cl, pos[i], pos[(i + 1) % n]);
    }
    if (n % 2 == 0) {
        double even = 0, odd = 0;
        for (int i = 0; i < n; i += 2) {
            even += link[i];
            odd += link[i + 1];
        }
        int offset = odd < even ? 1 : 0;
        for (int i = offset; i < n + offset; i += 2) {
            pairs.push_back({pos[i % n], pos[(i + 1) % n]});
        }
        return;
    }
    // Removing position j leaves links j+1, j+3, ..., which are consecutive in
    // the sequence g_k = link[2k mod n].
    int half = (n - 1) / 2;
    std::vector<double> prefix(2 * n + 1, 0);
    for (int k = 0; k < 2 * n; k++) {
        prefix[k + 1] = prefix[k] + link[(2 * k) % n];
    }
    int inv2 = (n + 1) / 2;
    auto cost_without = [&](int j) {
        int k0 = static_cast<int>((static_cast<long>(j + 1) * inv2) % n);
        return prefix[k0 + half] - prefix[k0];
    };
    bool any_virtual = false;
    for (int p : pos) {
        any_virtual |= cl.entries[p].is_virtual;
    }
    int best = -1;
    double best_cost = kInf;
    for (int j = n - 1; j >= 0; j--) {
        if (any_virtual && !cl.entries[pos[j]].is_virtual) {
            continue;
        }
        double c = cost_without(j);
        if (c < best_cost) {
            best_cost = c;
            best = j;
        }
    }
    cl.leftover[static_cast<int>(type)] = pos[best];
    for (int m = 0; m < half; m++) {
        pairs.push_back({pos[(best + 1 + 2 * m) % n], pos[(best + 2 + 2 * m) % n]});
    }
}

ClusterEntry entry_of(const DecoderNode &node, const CodeLayout &layout) {
    return ClusterEntry{node.vertex, node.r, node.c, node.t, type_of_vertex(layout, node.vertex), node.is_virtual,
                        node.defect};
}

}  // namespace

std::vector<Cluster> form_clusters(const std::vector<DecoderNode> &nodes, const Matching &matching,
                                   const Spacetime &st) {
    int n = static_cast<int>(nodes.size());
    auto mate = matching.mates(n);
    // Entities: real defects, and virtual locations whose two nodes are matched
    // elsewhere. Each has one H and one V node.
    std::vector<int> entity_of(n, -1);
    std::vector<int> h_node, v_node;
    for (int u = 0; u < n; u++) {
        if (mate[u] < 0) {
            throw UsageError("matching is not perfect on the decoding graph");
        }
        const auto &a = nodes[u];
        if (a.orientation != NodeOrientation::horizontal) {
            continue;
        }
        int partner = a.is_virtual ? a.twin : u + 1;
        if (a.is_virtual && mate[u] == a.twin) {
            continue;
        }
        int id = static_cast<int>(h_node.size());
        entity_of[u] = entity_of[partner] = id;
        h_node.push_back(u);
        v_node.push_back(partner);
    }
    int num_entities = static_cast<int>(h_node.size());
    std::vector<bool> seen(num_entities, false);
    std::vector<Cluster> clusters;
    for (int start = 0; start < num_entities; start++) {
        if (seen[start]) {
            continue;
        }
        Cluster cl;
        int cur = start;
        bool use_v = true;
        int guard = 0;
        do {
            if (++guard > 2 * num_entities + 2) {
                throw InternalError("cluster trace did not close");
            }
            seen[cur] = true;
            const auto &node = nodes[h_node[cur]];
            cl.entries.push_back(entry_of(node, *st.layout));
            int next = entity_of[mate[use_v ? v_node[cur] : h_node[cur]]];
            if (next < 0) {
                throw InternalError("matched node without a cluster entity");
            }
            const auto &to = nodes[h_node[next]];
            cl.step_dr.push_back(st.delta_row(node.r, to.r));
            cl.step_dc.push_back(st.delta_col(node.c, to.c));
            cl.step_dt.push_back(st.delta_time(node.t, to.t));
            cur = next;
            use_v = !use_v;
        } while (cur != start || !use_v);
        if (!cl.has_real()) {
            continue;
        }
        plan_pairs(cl, DefectType::x_type);
        plan_pairs(cl, DefectType::y_type);
        bool odd = cl.count(DefectType::x_type) % 2 == 1;
        bool absorbed = cl.has_virtual(DefectType::x_type) && cl.has_virtual(DefectType::y_type);
        cl.charge = odd && !absorbed ? Charge::charged : Charge::neutral;
        clusters.push_back(std::move(cl));
    }
    return clusters;
}

// ---------------------------------------------------------------------------
// Corrections

RecoveryPlan::RecoveryPlan(const CodeLayout &layout, int layers)
    : spatial(layout.num_faces()),
      layer_spatial(layers, PauliOperator(layout.num_faces())),
      flips(layers, BitVector(layout.num_stabilizers())) {
}

std::vector<std::pair<int, int>> RecoveryPlan::temporal_corrections(const CodeLayout &layout) const {
    std::vector<std::pair<int, int>> out;
    for (int t = 0; t < static_cast<int>(flips.size()); t++) {
        for (auto k : flips[t].ones()) {
            out.push_back({layout.stabilized_vertices()[k], t});
        }
    }
    return out;
}

namespace {

// Diagonal staircase of Y (between black vertices) or X (between white
// vertices) from a to b in the given layer.
void add_string(const Spacetime &st, DefectType type, int r, int c, int dr, int dc, int layer,
                RecoveryPlan &plan) {
    const auto &layout = *st.layout;
    int d = layout.distance();
    bool periodic = layout.periodic();
    int max_coord = layout.vertex_extent() - 1;
    Pauli pauli = type == DefectType::x_type ? Pauli::Y : Pauli::X;
    auto step = [&](int sr, int sc) {
        int fr = sr > 0 ? r : r - 1;
        int fc = sc > 0 ? c : c - 1;
        if (periodic) {
            fr = wrap_index(fr, d);
            fc = wrap_index(fc, d);
        } else if (fr < 0 || fc < 0 || fr >= d || fc >= d) {
            throw InternalError("correction string left the lattice");
        }
        plan.layer_spatial[layer].apply(layout.face_index(fr, fc), pauli);
        r += sr;
        c += sc;
        if (periodic) {
            r = wrap_index(r, d);
            c = wrap_index(c, d);
        }
    };
    int sr = dr > 0 ? 1 : -1;
    int sc = dc > 0 ? 1 : -1;
    int straight = std::min(std::abs(dr), std::abs(dc));
    for (int k = 0; k < straight; k++) {
        step(sr, sc);
    }
    int extra = std::abs(std::abs(dr) - std::abs(dc));
    if (extra % 2) {
        throw InternalError("correction string joins vertices of different colour");
    }
    bool rows_remain = std::abs(dr) > std::abs(dc);
    // Zigzag across the other axis, away from the lattice edge first.
    int zig = periodic || (rows_remain ? c : r) < max_coord ? 1 : -1;
    for (int k = 0; k < extra; k++, zig = -zig) {
        if (rows_remain) {
            step(sr, zig);
        } else {
            step(zig, sc);
        }
    }
}

void add_time_segment(const Spacetime &st, int vertex, int t0, int steps, RecoveryPlan &plan) {
    int k = st.layout->stabilizer_index(vertex);
    int L = st.layers;
    auto flip = [&](int t) {
        if (st.periodic_time()) {
            t = wrap_index(t, L);
        } else if (t < 0 || t >= L - 1) {
            throw InternalError("measurement correction outside the measured rounds");
        }
        plan.flips[t].flip(k);
    };
    for (int s = 0; s < steps; s++) {
        flip(t0 + s);
    }
    for (int s = 1; s <= -steps; s++) {
        flip(t0 - s);
    }
}

// Correction removing defects a and b along the signed displacement `disp`
// from a to b.
void emit_pair(const ClusterEntry &a, const ClusterEntry &b, const Cluster::Displacement &disp, const Spacetime &st,
               RecoveryPlan &plan) {
    if (a.is_virtual && b.is_virtual) {
        return;
    }
    int layer = b.is_virtual ? a.t : b.t;
    add_string(st, a.type, a.r, a.c, disp.dr, disp.dc, layer, plan);
    if (!a.is_virtual && !b.is_virtual && disp.dt != 0) {
        add_time_segment(st, a.vertex, a.t, disp.dt, plan);
    }
}

Cluster::Displacement shortest(const ClusterEntry &a, const ClusterEntry &b, const Spacetime &st) {
    return {st.delta_row(a.r, b.r), st.delta_col(a.c, b.c), st.delta_time(a.t, b.t)};
}

PauliOperator compose_layers(const RecoveryPlan &plan, const CodeLayout &layout) {
    PauliOperator total(layout.num_faces());
    for (const auto &layer : plan.layer_spatial) {
        total *= layer;
    }
    return total;
}

}  // namespace

void apply_local_correction(const Cluster &cluster, const Spacetime &st, RecoveryPlan &plan) {
    for (const auto &pairs : cluster.pairs) {
        for (auto [i, j] : pairs) {
            emit_pair(cluster.entries[i], cluster.entries[j], cluster.path(i, j), st, plan);
        }
    }
}

PauliOperator local_correction(const Cluster &cluster, const Spacetime &st) {
    RecoveryPlan plan(*st.layout, st.layers);
    apply_local_correction(cluster, st, plan);
    return compose_layers(plan, *st.layout);
}

// ---------------------------------------------------------------------------
// Residual decoding

namespace {

struct ResidualGroup {
    std::vector<ClusterEntry> entries;
    int cluster = -1;  // index into the cluster list, -1 for corners
};

struct ResidualNode {
    int group = -1;  // -1 for the parity node
    bool is_virtual = false;
    int twin = -1;
};

class ResidualGraph final : public ImplicitGraph {
   public:
    ResidualGraph(std::vector<ResidualGroup> groups, std::vector<ResidualNode> nodes, const Spacetime &st)
        : groups_(std::move(groups)), nodes_(std::move(nodes)), st_(st), extent_(st.layout->vertex_extent()) {
        for (int u = 0; u < static_cast<int>(nodes_.size()); u++) {
            if (nodes_[u].group >= 0) {
                group_nodes_[nodes_[u].group].push_back(u);
            }
        }
        int sites = st.layers * extent_ * extent_;
        offsets_.assign(sites + 1, 0);
        for (const auto &g : groups_) {
            for (const auto &e : g.entries) {
                offsets_[site(e) + 1]++;
            }
        }
        std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
        members_.resize(offsets_.back());
        std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
        for (int g = 0; g < static_cast<int>(groups_.size()); g++) {
            for (const auto &e : groups_[g].entries) {
                members_[fill[site(e)]++] = g;
            }
        }
        int space = st.layout->periodic() ? 2 * (extent_ / 2) : 2 * (extent_ - 1);
        int time = st.periodic_time() ? st.layers / 2 : st.layers - 1;
        max_distance_ = space + time;
    }

    const ResidualGroup &group(int g) const {
        return groups_[g];
    }
    const ResidualNode &node(int u) const {
        return nodes_[u];
    }

    int num_nodes() const override {
        return static_cast<int>(nodes_.size());
    }

    double weight(int u, int v) const override {
        const auto &a = nodes_[u];
        const auto &b = nodes_[v];
        if (a.twin == v || (a.is_virtual && b.is_virtual)) {
            return 0;
        }
        if (a.group < 0 || b.group < 0) {
            return kInf;
        }
        return group_distance(a.group, b.group);
    }

    std::vector<WeightedEdge> forced_edges() const override {
        std::vector<WeightedEdge> out;
        int n = num_nodes();
        for (int u = 0; u < n; u++) {
            if (nodes_[u].twin > u) {
                out.push_back({u, nodes_[u].twin, 0});
            }
            if (nodes_[u].is_virtual) {
                for (int v = u + 1; v < n; v++) {
                    if (nodes_[v].is_virtual) {
                        out.push_back({u, v, 0});
                    }
                }
            }
        }
        return out;
    }

    double initial_radius() const override {
        return 2;
    }

    bool neighbors(int u, double radius, std::vector<std::pair<int, double>> &out) const override {
        const auto &a = nodes_[u];
        if (a.group < 0) {
            return true;
        }
        int reach = static_cast<int>(std::min<double>(radius, max_distance_));
        best_.clear();
        bool periodic_space = st_.layout->periodic();
        for (const auto &e : groups_[a.group].entries) {
            for (int dt = -reach; dt <= reach; dt++) {
                int t = e.t + dt;
                if (st_.periodic_time()) {
                    if (2 * std::abs(dt) > st_.layers + 1) {
                        continue;
                    }
                    t = wrap_index(t, st_.layers);
                } else if (t < 0 || t >= st_.layers) {
                    continue;
                }
                int rest = reach - std::abs(dt);
                for (int dr = -rest; dr <= rest; dr++) {
                    int r = e.r + dr;
                    if (periodic_space) {
                        if (2 * std::abs(dr) > extent_ + 1) {
                            continue;
                        }
                        r = wrap_index(r, extent_);
                    } else if (r < 0 || r >= extent_) {
                        continue;
                    }
                    int span = rest - std::abs(dr);
                    for (int dc = -span; dc <= span; dc++) {
                        int c = e.c + dc;
                        if (periodic_space) {
                            if (2 * std::abs(dc) > extent_ + 1) {
                                continue;
                            }
                            c = wrap_index(c, extent_);
                        } else if (c < 0 || c >= extent_) {
                            continue;
                        }
                        int s = (t * extent_ + r) * extent_ + c;
                        for (int k = offsets_[s]; k < offsets_[s + 1]; k++) {
                            int g = members_[k];
                            if (g != a.group) {
                                best_.push_back(g);
                            }
                        }
                    }
                }
            }
        }
        std::sort(best_.begin(), best_.end());
        best_.erase(std::unique(best_.begin(), best_.end()), best_.end());
        for (int g : best_) {
            double w = group_distance(a.group, g);
            for (int v : group_nodes_.at(g)) {
                if (!(a.is_virtual && nodes_[v].is_virtual)) {
                    out.push_back({v, w});
                }
            }
        }
        return radius >= max_distance_;
    }

   private:
    int site(const ClusterEntry &e) const {
        return (e.t * extent_ + e.r) * extent_ + e.c;
    }

    double group_distance(int g, int h) const {
        if (g > h) {
            std::swap(g, h);
        }
        uint64_t key = (static_cast<uint64_t>(g) << 32) | static_cast<uint32_t>(h);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        int best = std::numeric_limits<int>::max();
        for (const auto &a : groups_[g].entries) {
            for (const auto &b : groups_[h].entries) {
                best = std::min(best, manhattan(a, b, st_));
            }
        }
        cache_[key] = best;
        return best;
    }

    std::vector<ResidualGroup> groups_;
    std::vector<ResidualNode> nodes_;
    Spacetime st_;
    int extent_;
    int max_distance_ = 0;
    std::unordered_map<int, std::vector<int>> group_nodes_;
    std::vector<int> offsets_;
    std::vector<int> members_;
    mutable std::vector<int> best_;
    mutable std::unordered_map<uint64_t, double> cache_;
};

// Closest pair of same-type entries, first from group a and second from b.
std::pair<int, int> closest_entries(const ResidualGroup &a, const ResidualGroup &b, DefectType type,
                                    const Spacetime &st) {
    std::pair<int, int> best{-1, -1};
    int best_distance = std::numeric_limits<int>::max();
    for (int i = 0; i < static_cast<int>(a.entries.size()); i++) {
        if (a.entries[i].type != type) {
            continue;
        }
        for (int j = 0; j < static_cast<int>(b.entries.size()); j++) {
            if (b.entries[j].type != type) {
                continue;
            }
            int dist = manhattan(a.entries[i], b.entries[j], st);
            if (dist < best_distance) {
                best_distance = dist;
                best = {i, j};
            }
        }
    }
    return best;
}

}  // namespace

int apply_residual_correction(const std::vector<Cluster> &clusters, const Spacetime &st, RecoveryPlan &plan) {
    const auto &layout = *st.layout;
    std::vector<int> charged;
    std::vector<int> mixed;
    for (int i = 0; i < static_cast<int>(clusters.size()); i++) {
        const auto &cl = clusters[i];
        if (cl.charge == Charge::charged) {
            charged.push_back(i);
        } else if (cl.count(DefectType::x_type) > 0 && cl.count(DefectType::y_type) > 0) {
            mixed.push_back(i);
        }
    }
    if (charged.empty()) {
        return 0;
    }
    if (layout.periodic() && charged.size() % 2) {
        throw InternalError("odd number of charged clusters on a periodic layout");
    }

    std::vector<ResidualGroup> groups;
    std::vector<ResidualNode> nodes;
    for (int i : charged) {
        nodes.push_back({static_cast<int>(groups.size()), false, -1});
        groups.push_back({clusters[i].entries, i});
    }
    for (int i : mixed) {
        int g = static_cast<int>(groups.size());
        int u = static_cast<int>(nodes.size());
        nodes.push_back({g, false, u + 1});
        nodes.push_back({g, false, u});
        groups.push_back({clusters[i].entries, i});
    }
    if (!layout.periodic()) {
        int d = layout.distance();
        const std::array<std::array<int, 4>, 4> corners{{{0, 0, 0, 1}, {0, d, 1, d}, {d, 0, d - 1, 0}, {d, d, d, d - 1}}};
        for (int t = 0; t < st.layers; t++) {
            for (const auto &k : corners) {
                ResidualGroup g;
                for (int m = 0; m < 2; m++) {
                    int v = layout.vertex_index(k[2 * m], k[2 * m + 1]);
                    g.entries.push_back(ClusterEntry{v, k[2 * m], k[2 * m + 1], t, type_of_vertex(layout, v), true, -1});
                }
                nodes.push_back({static_cast<int>(groups.size()), true, -1});
                groups.push_back(std::move(g));
            }
        }
        if (charged.size() % 2) {
            nodes.push_back({-1, true, -1});
        }
    }

    ResidualGraph graph(std::move(groups), std::move(nodes), st);
    Matching m = certified_mwpm(graph);

    // Entries each real cluster must absorb, per type, beyond its local pairing.
    std::vector<std::array<std::vector<int>, 2>> extra(clusters.size());
    for (int i : charged) {
        for (int type = 0; type < 2; type++) {
            extra[i][type].push_back(clusters[i].leftover[type]);
        }
    }
    for (auto [u, v] : m.pairs) {
        const auto &a = graph.node(u);
        const auto &b = graph.node(v);
        if (a.twin == v || a.group < 0 || b.group < 0 || (a.is_virtual && b.is_virtual)) {
            continue;
        }
        const auto &ga = graph.group(a.group);
        const auto &gb = graph.group(b.group);
        for (auto type : {DefectType::x_type, DefectType::y_type}) {
            auto [i, j] = closest_entries(ga, gb, type, st);
            if (i < 0) {
                throw InternalError("residual match between clusters without a common defect type");
            }
            const auto &ea = ga.entries[i];
            const auto &eb = gb.entries[j];
            emit_pair(ea, eb, shortest(ea, eb, st), st, plan);
            if (ga.cluster >= 0) {
                extra[ga.cluster][static_cast<int>(type)].push_back(i);
            }
            if (gb.cluster >= 0) {
                extra[gb.cluster][static_cast<int>(type)].push_back(j);
            }
        }
    }
    for (int c = 0; c < static_cast<int>(clusters.size()); c++) {
        const auto &cl = clusters[c];
        for (auto &positions : extra[c]) {
            // Positions hit an odd number of times still need pairing.
            std::sort(positions.begin(), positions.end());
            std::vector<int> odd;
            for (size_t k = 0; k < positions.size();) {
                size_t run = k;
                while (run < positions.size() && positions[run] == positions[k]) {
                    run++;
                }
                if ((run - k) % 2) {
                    odd.push_back(positions[k]);
                }
                k = run;
            }
            if (odd.size() % 2) {
                throw InternalError("residual correction left a cluster with odd parity");
            }
            for (size_t k = 0; k < odd.size(); k += 2) {
                emit_pair(cl.entries[odd[k]], cl.entries[odd[k + 1]], cl.path(odd[k], odd[k + 1]), st, plan);
            }
        }
    }
    return graph.num_nodes();
}

PauliOperator residual_decode(const std::vector<Cluster> &clusters, const Spacetime &st) {
    RecoveryPlan plan(*st.layout, st.layers);
    apply_residual_correction(clusters, st, plan);
    return compose_layers(plan, *st.layout);
}

// ---------------------------------------------------------------------------

RecoveryPlan decode(const DefectSet &defects, const CodeLayout &layout, const NoiseParams &params,
                    const DecodeOptions &options) {
    if (defects.layers < 1) {
        throw UsageError("defect set needs at least one layer");
    }
    for (size_t i = 0; i < defects.size(); i++) {
        const auto &d = defects.defects[i];
        if (d.t < 0 || d.t >= defects.layers || d.vertex < 0 || d.vertex >= layout.num_vertices() ||
            !layout.is_stabilized(d.vertex)) {
            throw UsageError("defect does not belong to this layout");
        }
        if (i > 0) {
            const auto &prev = defects.defects[i - 1];
            if (std::pair{prev.t, prev.vertex} >= std::pair{d.t, d.vertex}) {
                throw UsageError("defects must be sorted by (t, vertex) without repeats");
            }
        }
    }
    Spacetime st(layout, defects);
    RecoveryPlan plan(layout, defects.layers);
    plan.diagnostics.defects = static_cast<int>(defects.size());
    if (defects.empty()) {
        return plan;
    }
    StepWeights weights = step_weights(params);
    auto nodes = decoder_nodes(defects, layout);
    plan.diagnostics.graph_nodes = static_cast<int>(nodes.size());
    Matching matching = match_nodes(nodes, weights, st, options.matching, &plan.diagnostics.matching);
    plan.clusters = form_clusters(nodes, matching, st);
    plan.diagnostics.clusters = static_cast<int>(plan.clusters.size());
    for (const auto &cl : plan.clusters) {
        plan.diagnostics.charged_clusters += cl.charge == Charge::charged;
        apply_local_correction(cl, st, plan);
    }
    plan.diagnostics.residual_nodes = apply_residual_correction(plan.clusters, st, plan);
    plan.spatial = compose_layers(plan, layout);

    if (options.verify_closure) {
        DefectSet check = chain_defects(layout, plan.layer_spatial, plan.flips, defects.time_boundary);
        if (check.defects != defects.defects) {
            throw InternalError("recovery does not reproduce the observed defects (" +
                                std::to_string(check.size()) + " vs " + std::to_string(defects.size()) + ")");
        }
    }
    return plan;
}

}  // namespace xysurf
