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

#include "xysurf/matching.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xysurf/errors.h"

namespace xysurf {

WeightedGraph::WeightedGraph(int num_nodes) : num_nodes_(num_nodes) {
    if (num_nodes < 0) {
        throw UsageError("negative node count");
    }
}

uint64_t WeightedGraph::key(int u, int v) {
    if (u > v) {
        std::swap(u, v);
    }
    return (static_cast<uint64_t>(u) << 32) | static_cast<uint32_t>(v);
}

void WeightedGraph::add_edge(int u, int v, double weight) {
    if (u < 0 || v < 0 || u >= num_nodes_ || v >= num_nodes_) {
        throw UsageError("edge endpoint out of range");
    }
    if (u == v) {
        throw UsageError("self loops are not allowed");
    }
    if (!std::isfinite(weight)) {
        throw UsageError("edge weights must be finite");
    }
    if (!keys_.insert(key(u, v)).second) {
        throw UsageError("repeated edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    edges_.push_back({u, v, weight});
}

bool WeightedGraph::has_edge(int u, int v) const {
    return keys_.count(key(u, v)) > 0;
}

std::vector<int> Matching::mates(int num_nodes) const {
    std::vector<int> m(num_nodes, -1);
    for (auto [u, v] : pairs) {
        m[u] = v;
        m[v] = u;
    }
    return m;
}

// The solver follows the classic formulation of Edmonds' algorithm as a
// maximum-weight, maximum-cardinality matching on negated weights: vertex
// duals are stored doubled, blossom duals plain, and each stage grows
// alternating trees from all exposed vertices until one augmentation.
// Bookkeeping that the textbook version resets in O(n) per stage is tracked
// in "touched" lists instead, so the cost of a stage follows the size of the
// trees it grows.
struct BlossomMatcher::Impl {
    int n = 0;
    int m = 0;
    double eps = 1e-10;
    std::vector<int> endpoint;
    std::vector<double> wt;  // negated weights
    std::vector<int> nb_off;
    std::vector<int> nb;  // remote endpoints

    std::vector<int> mate;
    std::vector<int> label;
    std::vector<int> labelend;
    std::vector<int> inblossom;
    std::vector<int> blossomparent;
    std::vector<std::vector<int>> blossomchilds;
    std::vector<int> blossombase;
    std::vector<std::vector<int>> blossomendps;
    std::vector<int> bestedge;
    std::vector<std::vector<int>> blossombestedges;
    std::vector<char> has_bbe;
    std::vector<int> unused;
    std::vector<double> dualvar;
    std::vector<char> allowedge;
    std::vector<int> queue;

    uint32_t stage = 1;
    std::vector<uint32_t> label_stamp, best_stamp, vert_stamp;
    std::vector<int> touched_labels, touched_best, touched_bbe, touched_allow, stage_vertices;
    std::vector<int> bestedgeto;
    std::vector<int> scratch;

    double slack(int k) const {
        return dualvar[endpoint[2 * k]] + dualvar[endpoint[2 * k + 1]] - 2 * wt[k];
    }

    void set_label(int b, int t) {
        label[b] = t;
        if (t != 0 && label_stamp[b] != stage) {
            label_stamp[b] = stage;
            touched_labels.push_back(b);
        }
    }
    void set_bestedge(int b, int k) {
        bestedge[b] = k;
        if (k != -1 && best_stamp[b] != stage) {
            best_stamp[b] = stage;
            touched_best.push_back(b);
        }
    }
    void allow(int k) {
        if (!allowedge[k]) {
            allowedge[k] = 1;
            touched_allow.push_back(k);
        }
    }

    void leaves(int b, std::vector<int> &out) const {
        if (b < n) {
            out.push_back(b);
            return;
        }
        std::vector<int> stack{b};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto it = blossomchilds[x].rbegin(); it != blossomchilds[x].rend(); ++it) {
                if (*it < n) {
                    out.push_back(*it);
                } else {
                    stack.push_back(*it);
                }
            }
        }
    }

    void touch_leaves(int b) {
        scratch.clear();
        leaves(b, scratch);
        for (int v : scratch) {
            if (vert_stamp[v] != stage) {
                vert_stamp[v] = stage;
                stage_vertices.push_back(v);
            }
        }
    }

    static int wrap(int j, int len) {
        return ((j % len) + len) % len;
    }

    void assign_label(int w, int t, int p) {
        int b = inblossom[w];
        set_label(w, t);
        set_label(b, t);
        labelend[w] = labelend[b] = p;
        bestedge[w] = bestedge[b] = -1;
        touch_leaves(b);
        if (t == 1) {
            queue.insert(queue.end(), scratch.begin(), scratch.end());
        } else {
            int base = blossombase[b];
            assign_label(endpoint[mate[base]], 1, mate[base] ^ 1);
        }
    }

    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom[v];
            if (label[b] & 4) {
                base = blossombase[b];
                break;
            }
            path.push_back(b);
            label[b] = 5;
            if (labelend[b] == -1) {
                v = -1;
            } else {
                v = endpoint[labelend[b]];
                b = inblossom[v];
                v = endpoint[labelend[b]];
            }
            if (w != -1) {
                std::swap(v, w);
            }
        }
        for (int b : path) {
            label[b] = 1;
        }
        return base;
    }

    void add_blossom(int base, int k) {
        int v = endpoint[2 * k];
        int w = endpoint[2 * k + 1];
        int bb = inblossom[base];
        int bv = inblossom[v];
        int bw = inblossom[w];
        int b = unused.back();
        unused.pop_back();
        blossombase[b] = base;
        blossomparent[b] = -1;
        blossomparent[bb] = b;
        std::vector<int> &path = blossomchilds[b];
        std::vector<int> &endps = blossomendps[b];
        path.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend[bv]);
            v = endpoint[labelend[bv]];
            bv = inblossom[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend[bw] ^ 1);
            w = endpoint[labelend[bw]];
            bw = inblossom[w];
        }
        set_label(b, 1);
        labelend[b] = labelend[bb];
        dualvar[b] = 0;

        scratch.clear();
        leaves(b, scratch);
        for (int x : scratch) {
            if (label[inblossom[x]] == 2) {
                queue.push_back(x);
            }
            inblossom[x] = b;
        }

        std::vector<int> used;
        auto consider = [&](int e) {
            int i = endpoint[2 * e];
            int j = endpoint[2 * e + 1];
            if (inblossom[j] == b) {
                std::swap(i, j);
            }
            int bj = inblossom[j];
            if (bj != b && label[bj] == 1 && (bestedgeto[bj] == -1 || slack(e) < slack(bestedgeto[bj]))) {
                if (bestedgeto[bj] == -1) {
                    used.push_back(bj);
                }
                bestedgeto[bj] = e;
            }
        };
        std::vector<int> sub_leaves;
        for (int sub : path) {
            if (!has_bbe[sub]) {
                sub_leaves.clear();
                leaves(sub, sub_leaves);
                for (int x : sub_leaves) {
                    for (int q = nb_off[x]; q < nb_off[x + 1]; q++) {
                        consider(nb[q] / 2);
                    }
                }
            } else {
                for (int e : blossombestedges[sub]) {
                    consider(e);
                }
            }
            blossombestedges[sub].clear();
            has_bbe[sub] = 0;
            bestedge[sub] = -1;
        }
        std::sort(used.begin(), used.end());
        blossombestedges[b].clear();
        for (int bj : used) {
            blossombestedges[b].push_back(bestedgeto[bj]);
            bestedgeto[bj] = -1;
        }
        if (!has_bbe[b]) {
            has_bbe[b] = 1;
            touched_bbe.push_back(b);
        }
        int best = -1;
        for (int e : blossombestedges[b]) {
            if (best == -1 || slack(e) < slack(best)) {
                best = e;
            }
        }
        bestedge[b] = -1;
        set_bestedge(b, best);
    }

    void expand_blossom(int b, bool endstage) {
        for (int s : blossomchilds[b]) {
            blossomparent[s] = -1;
            if (s < n) {
                inblossom[s] = s;
            } else if (endstage && dualvar[s] <= eps) {
                expand_blossom(s, endstage);
            } else {
                scratch.clear();
                leaves(s, scratch);
                for (int x : scratch) {
                    inblossom[x] = s;
                }
            }
        }
        if (!endstage && label[b] == 2) {
            const std::vector<int> &childs = blossomchilds[b];
            const std::vector<int> &endps = blossomendps[b];
            int len = static_cast<int>(childs.size());
            int entrychild = inblossom[endpoint[labelend[b] ^ 1]];
            int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
            int jstep, endptrick;
            if (j & 1) {
                j -= len;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend[b];
            while (j != 0) {
                label[endpoint[p ^ 1]] = 0;
                label[endpoint[endps[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
                assign_label(endpoint[p ^ 1], 2, p);
                allow(endps[wrap(j - endptrick, len)] / 2);
                j += jstep;
                p = endps[wrap(j - endptrick, len)] ^ endptrick;
                allow(p / 2);
                j += jstep;
            }
            int bv = childs[wrap(j, len)];
            set_label(endpoint[p ^ 1], 2);
            set_label(bv, 2);
            labelend[endpoint[p ^ 1]] = labelend[bv] = p;
            bestedge[bv] = -1;
            j += jstep;
            while (childs[wrap(j, len)] != entrychild) {
                bv = childs[wrap(j, len)];
                if (label[bv] == 1) {
                    j += jstep;
                    continue;
                }
                std::vector<int> sub;
                leaves(bv, sub);
                int reached = -1;
                for (int x : sub) {
                    if (label[x] != 0) {
                        reached = x;
                        break;
                    }
                }
                if (reached != -1) {
                    label[reached] = 0;
                    label[endpoint[mate[blossombase[bv]]]] = 0;
                    assign_label(reached, 2, labelend[reached]);
                }
                j += jstep;
            }
        }
        set_label(b, -1);
        labelend[b] = -1;
        blossomchilds[b].clear();
        blossomendps[b].clear();
        blossombase[b] = -1;
        blossombestedges[b].clear();
        has_bbe[b] = 0;
        bestedge[b] = -1;
        unused.push_back(b);
    }

    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent[t] != b) {
            t = blossomparent[t];
        }
        if (t >= n) {
            augment_blossom(t, v);
        }
        std::vector<int> &childs = blossomchilds[b];
        std::vector<int> &endps = blossomendps[b];
        int len = static_cast<int>(childs.size());
        int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
        int j = i;
        int jstep, endptrick;
        if (i & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = childs[wrap(j, len)];
            int p = endps[wrap(j - endptrick, len)] ^ endptrick;
            if (t >= n) {
                augment_blossom(t, endpoint[p]);
            }
            j += jstep;
            t = childs[wrap(j, len)];
            if (t >= n) {
                augment_blossom(t, endpoint[p ^ 1]);
            }
            mate[endpoint[p]] = p ^ 1;
            mate[endpoint[p ^ 1]] = p;
        }
        std::rotate(childs.begin(), childs.begin() + i, childs.end());
        std::rotate(endps.begin(), endps.begin() + i, endps.end());
        blossombase[b] = blossombase[childs[0]];
    }

    void augment_matching(int k) {
        int v = endpoint[2 * k];
        int w = endpoint[2 * k + 1];
        for (auto [s, p] : {std::pair<int, int>{v, 2 * k + 1}, std::pair<int, int>{w, 2 * k}}) {
            while (true) {
                int bs = inblossom[s];
                if (bs >= n) {
                    augment_blossom(bs, s);
                }
                mate[s] = p;
                if (labelend[bs] == -1) {
                    break;
                }
                int t = endpoint[labelend[bs]];
                int bt = inblossom[t];
                s = endpoint[labelend[bt]];
                int j = endpoint[labelend[bt] ^ 1];
                if (bt >= n) {
                    augment_blossom(bt, j);
                }
                mate[j] = labelend[bt];
                p = labelend[bt] ^ 1;
            }
        }
    }

    /// Feasible duals from greedy dual ascent plus a greedy matching on tight
    /// edges. Returns false if some vertex has no edges at all.
    bool jump_start() {
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> y(n, inf);
        for (int v = 0; v < n; v++) {
            for (int q = nb_off[v]; q < nb_off[v + 1]; q++) {
                y[v] = std::min(y[v], -wt[nb[q] / 2] / 2);
            }
            if (y[v] == inf) {
                return false;
            }
        }
        for (int v = 0; v < n; v++) {
            double s = inf;
            for (int q = nb_off[v]; q < nb_off[v + 1]; q++) {
                int u = endpoint[nb[q]];
                s = std::min(s, -wt[nb[q] / 2] - y[v] - y[u]);
            }
            y[v] += std::max(0.0, s);
        }
        for (int v = 0; v < n; v++) {
            if (mate[v] != -1) {
                continue;
            }
            int pick = -1;
            for (int q = nb_off[v]; q < nb_off[v + 1]; q++) {
                int u = endpoint[nb[q]];
                if (mate[u] == -1 && -wt[nb[q] / 2] - y[v] - y[u] <= eps &&
                    (pick == -1 || u < endpoint[pick])) {
                    pick = nb[q];
                }
            }
            if (pick != -1) {
                mate[v] = pick;
                mate[endpoint[pick]] = pick ^ 1;
            }
        }
        for (int v = 0; v < n; v++) {
            dualvar[v] = -2 * y[v];
        }
        return true;
    }

    void reset_stage() {
        for (int b : touched_labels) {
            label[b] = 0;
        }
        for (int b : touched_best) {
            bestedge[b] = -1;
        }
        for (int b : touched_bbe) {
            blossombestedges[b].clear();
            has_bbe[b] = 0;
        }
        for (int k : touched_allow) {
            allowedge[k] = 0;
        }
        touched_labels.clear();
        touched_best.clear();
        touched_bbe.clear();
        touched_allow.clear();
        stage_vertices.clear();
        queue.clear();
        stage++;
    }

    bool solve() {
        if (n == 0) {
            return true;
        }
        if (n % 2) {
            return false;
        }
        if (!jump_start()) {
            return false;
        }
        std::vector<int> exposed;
        for (int v = 0; v < n; v++) {
            if (mate[v] == -1) {
                exposed.push_back(v);
            }
        }
        for (int iteration = 0; iteration <= n; iteration++) {
            reset_stage();
            std::erase_if(exposed, [&](int v) { return mate[v] != -1; });
            if (exposed.empty()) {
                return true;
            }
            for (int v : exposed) {
                if (label[inblossom[v]] == 0) {
                    assign_label(v, 1, -1);
                }
            }
            bool augmented = false;
            while (true) {
                while (!queue.empty() && !augmented) {
                    int v = queue.back();
                    queue.pop_back();
                    for (int q = nb_off[v]; q < nb_off[v + 1]; q++) {
                        int p = nb[q];
                        int k = p / 2;
                        int w = endpoint[p];
                        if (inblossom[v] == inblossom[w]) {
                            continue;
                        }
                        double kslack = 0;
                        if (!allowedge[k]) {
                            kslack = slack(k);
                            if (kslack <= eps) {
                                allow(k);
                            }
                        }
                        if (allowedge[k]) {
                            if (label[inblossom[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label[inblossom[w]] == 1) {
                                int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label[w] == 0) {
                                set_label(w, 2);
                                labelend[w] = p ^ 1;
                            }
                        } else if (label[inblossom[w]] == 1) {
                            int b = inblossom[v];
                            if (bestedge[b] == -1 || kslack < slack(bestedge[b])) {
                                set_bestedge(b, k);
                            }
                        } else if (label[w] == 0) {
                            if (bestedge[w] == -1 || kslack < slack(bestedge[w])) {
                                set_bestedge(w, k);
                            }
                        }
                    }
                }
                if (augmented) {
                    break;
                }

                int deltatype = -1;
                double delta = 0;
                int deltaedge = -1;
                int deltablossom = -1;
                auto better = [&](double d, int e) {
                    return deltatype == -1 || d < delta || (d == delta && deltaedge != -1 && e < deltaedge);
                };
                for (int x : touched_best) {
                    if (x < n && label[inblossom[x]] == 0 && bestedge[x] != -1) {
                        double d = slack(bestedge[x]);
                        if (better(d, bestedge[x])) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge[x];
                        }
                    }
                }
                for (int x : touched_best) {
                    if (blossomparent[x] == -1 && label[x] == 1 && bestedge[x] != -1) {
                        double d = slack(bestedge[x]) / 2;
                        if (better(d, bestedge[x])) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge[x];
                        }
                    }
                }
                for (int x : touched_labels) {
                    if (x >= n && blossombase[x] >= 0 && blossomparent[x] == -1 && label[x] == 2 &&
                        (deltatype == -1 || dualvar[x] < delta)) {
                        delta = dualvar[x];
                        deltatype = 4;
                        deltablossom = x;
                    }
                }
                if (deltatype == -1) {
                    // No augmenting path: the graph has no perfect matching.
                    return false;
                }
                delta = std::max(delta, 0.0);
                for (int v : stage_vertices) {
                    int lb = label[inblossom[v]];
                    if (lb == 1) {
                        dualvar[v] -= delta;
                    } else if (lb == 2) {
                        dualvar[v] += delta;
                    }
                }
                for (int x : touched_labels) {
                    if (x >= n && blossombase[x] >= 0 && blossomparent[x] == -1) {
                        if (label[x] == 1) {
                            dualvar[x] += delta;
                        } else if (label[x] == 2) {
                            dualvar[x] -= delta;
                        }
                    }
                }
                if (deltatype == 2) {
                    allow(deltaedge);
                    int i = endpoint[2 * deltaedge];
                    int j = endpoint[2 * deltaedge + 1];
                    if (label[inblossom[i]] == 0) {
                        std::swap(i, j);
                    }
                    queue.push_back(i);
                } else if (deltatype == 3) {
                    allow(deltaedge);
                    queue.push_back(endpoint[2 * deltaedge]);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            std::vector<int> tops = touched_labels;
            for (int x : tops) {
                if (x >= n && blossomparent[x] == -1 && blossombase[x] >= 0 && label[x] == 1 &&
                    dualvar[x] <= eps) {
                    expand_blossom(x, true);
                }
            }
        }
        throw InternalError("blossom solver exceeded its stage bound");
    }

    double reduced_cost(int u, int v, double weight) const {
        double r = weight + 0.5 * (dualvar[u] + dualvar[v]);
        // Sum the duals of blossoms containing both endpoints.
        std::vector<int> up;
        for (int b = blossomparent[u]; b != -1; b = blossomparent[b]) {
            up.push_back(b);
        }
        if (up.empty()) {
            return r;
        }
        for (int b = blossomparent[v]; b != -1; b = blossomparent[b]) {
            if (std::find(up.begin(), up.end(), b) != up.end()) {
                for (int c = b; c != -1; c = blossomparent[c]) {
                    r += dualvar[c];
                }
                break;
            }
        }
        return r;
    }
};

BlossomMatcher::BlossomMatcher(int num_nodes, std::vector<WeightedEdge> edges) : impl_(std::make_unique<Impl>()) {
    Impl &s = *impl_;
    int n = num_nodes;
    for (auto &e : edges) {
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
    }
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge &a, const WeightedEdge &b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    s.n = n;
    s.m = static_cast<int>(edges.size());
    double scale = 1;
    for (const auto &e : edges) {
        scale = std::max(scale, std::abs(e.weight));
    }
    s.eps = 1e-10 * scale;
    s.endpoint.resize(2 * s.m);
    s.wt.resize(s.m);
    std::vector<int> degree(n + 1, 0);
    for (int k = 0; k < s.m; k++) {
        s.endpoint[2 * k] = edges[k].u;
        s.endpoint[2 * k + 1] = edges[k].v;
        s.wt[k] = -edges[k].weight;
        degree[edges[k].u]++;
        degree[edges[k].v]++;
    }
    s.nb_off.assign(n + 1, 0);
    for (int v = 0; v < n; v++) {
        s.nb_off[v + 1] = s.nb_off[v] + degree[v];
    }
    s.nb.resize(2 * s.m);
    std::vector<int> fill(s.nb_off.begin(), s.nb_off.end() - 1);
    for (int k = 0; k < s.m; k++) {
        s.nb[fill[edges[k].u]++] = 2 * k + 1;
        s.nb[fill[edges[k].v]++] = 2 * k;
    }
    s.mate.assign(n, -1);
    s.label.assign(2 * n, 0);
    s.labelend.assign(2 * n, -1);
    s.inblossom.resize(n);
    for (int v = 0; v < n; v++) {
        s.inblossom[v] = v;
    }
    s.blossomparent.assign(2 * n, -1);
    s.blossomchilds.assign(2 * n, {});
    s.blossombase.assign(2 * n, -1);
    for (int v = 0; v < n; v++) {
        s.blossombase[v] = v;
    }
    s.blossomendps.assign(2 * n, {});
    s.bestedge.assign(2 * n, -1);
    s.blossombestedges.assign(2 * n, {});
    s.has_bbe.assign(2 * n, 0);
    for (int b = 2 * n - 1; b >= n; b--) {
        s.unused.push_back(b);
    }
    s.dualvar.assign(2 * n, 0);
    s.allowedge.assign(s.m, 0);
    s.label_stamp.assign(2 * n, 0);
    s.best_stamp.assign(2 * n, 0);
    s.vert_stamp.assign(n, 0);
    s.bestedgeto.assign(2 * n, -1);
}

BlossomMatcher::~BlossomMatcher() = default;

bool BlossomMatcher::solve() {
    return impl_->solve();
}

int BlossomMatcher::mate(int v) const {
    int p = impl_->mate[v];
    return p == -1 ? -1 : impl_->endpoint[p];
}

double BlossomMatcher::node_dual(int v) const {
    return -0.5 * impl_->dualvar[v];
}

double BlossomMatcher::reduced_cost(int u, int v, double weight) const {
    return impl_->reduced_cost(u, v, weight);
}

double BlossomMatcher::epsilon() const {
    return impl_->eps;
}

Matching BlossomMatcher::matching() const {
    const Impl &s = *impl_;
    Matching out;
    for (int v = 0; v < s.n; v++) {
        int p = s.mate[v];
        if (p == -1) {
            continue;
        }
        int u = s.endpoint[p];
        if (v < u) {
            out.pairs.push_back({v, u});
            out.total_weight += -s.wt[p / 2];
        }
    }
    return out;
}

Matching mwpm(const WeightedGraph &graph) {
    int n = graph.num_nodes();
    if (n % 2) {
        throw DecodeInfeasible("odd number of nodes (" + std::to_string(n) + ") cannot be perfectly matched");
    }
    BlossomMatcher solver(n, graph.edges());
    if (!solver.solve()) {
        throw DecodeInfeasible("graph with " + std::to_string(n) + " nodes has no perfect matching");
    }
    return solver.matching();
}

namespace {

void brute_force_search(int n, const std::vector<double> &w, std::vector<int> &mate, double acc, double &best,
                        std::vector<int> &best_mate) {
    int first = -1;
    for (int v = 0; v < n; v++) {
        if (mate[v] == -1) {
            first = v;
            break;
        }
    }
    if (first == -1) {
        if (acc < best) {
            best = acc;
            best_mate = mate;
        }
        return;
    }
    for (int u = first + 1; u < n; u++) {
        double e = w[first * n + u];
        if (mate[u] != -1 || std::isnan(e)) {
            continue;
        }
        mate[first] = u;
        mate[u] = first;
        brute_force_search(n, w, mate, acc + e, best, best_mate);
        mate[first] = -1;
        mate[u] = -1;
    }
}

}  // namespace

Matching brute_force_matching(const WeightedGraph &graph) {
    int n = graph.num_nodes();
    if (n > 12) {
        throw UsageError("brute force matching supports at most 12 nodes");
    }
    if (n % 2) {
        throw DecodeInfeasible("odd number of nodes cannot be perfectly matched");
    }
    std::vector<double> w(n * n, std::numeric_limits<double>::quiet_NaN());
    for (const auto &e : graph.edges()) {
        w[e.u * n + e.v] = e.weight;
        w[e.v * n + e.u] = e.weight;
    }
    std::vector<int> mate(n, -1);
    std::vector<int> best_mate;
    double best = std::numeric_limits<double>::infinity();
    brute_force_search(n, w, mate, 0, best, best_mate);
    Matching out;
    if (n == 0) {
        return out;
    }
    if (best_mate.empty()) {
        throw DecodeInfeasible("graph has no perfect matching");
    }
    for (int v = 0; v < n; v++) {
        if (v < best_mate[v]) {
            out.pairs.push_back({v, best_mate[v]});
            out.total_weight += w[v * n + best_mate[v]];
        }
    }
    return out;
}

}  // namespace xysurf
