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

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "xysurf/errors.h"

using namespace xysurf;

namespace {

WeightedGraph random_graph(std::mt19937_64 &rng, int n, double density, bool integer_weights) {
    WeightedGraph g(n);
    std::uniform_real_distribution<double> coin(0, 1);
    std::uniform_int_distribution<int> iw(0, 20);
    for (int u = 0; u < n; u++) {
        for (int v = u + 1; v < n; v++) {
            if (coin(rng) < density) {
                g.add_edge(u, v, integer_weights ? iw(rng) : coin(rng) * 10);
            }
        }
    }
    return g;
}

void expect_perfect(const WeightedGraph &g, const Matching &m) {
    auto mates = m.mates(g.num_nodes());
    double total = 0;
    for (int v = 0; v < g.num_nodes(); v++) {
        ASSERT_GE(mates[v], 0);
        ASSERT_EQ(mates[mates[v]], v);
    }
    for (auto [u, v] : m.pairs) {
        ASSERT_TRUE(g.has_edge(u, v));
        for (const auto &e : g.edges()) {
            if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) {
                total += e.weight;
            }
        }
    }
    EXPECT_NEAR(total, m.total_weight, 1e-9);
}

}  // namespace

TEST(matching, four_node_example) {
    WeightedGraph g(4);
    g.add_edge(0, 1, 1);
    g.add_edge(2, 3, 1);
    g.add_edge(0, 2, 5);
    g.add_edge(1, 3, 5);
    g.add_edge(0, 3, 0.5);
    g.add_edge(1, 2, 0.5);
    auto m = mwpm(g);
    EXPECT_DOUBLE_EQ(m.total_weight, 1.0);
    ASSERT_EQ(m.pairs.size(), 2u);
    EXPECT_EQ(m.pairs[0], (std::pair<int, int>{0, 3}));
    EXPECT_EQ(m.pairs[1], (std::pair<int, int>{1, 2}));
}

TEST(matching, empty_graph) {
    EXPECT_TRUE(mwpm(WeightedGraph(0)).pairs.empty());
}

TEST(matching, odd_node_count) {
    WeightedGraph g(3);
    g.add_edge(0, 1, 1);
    g.add_edge(1, 2, 1);
    g.add_edge(0, 2, 1);
    EXPECT_THROW(mwpm(g), DecodeInfeasible);
}

TEST(matching, no_perfect_matching) {
    // Star: centre 0 with three leaves.
    WeightedGraph g(4);
    g.add_edge(0, 1, 1);
    g.add_edge(0, 2, 1);
    g.add_edge(0, 3, 1);
    EXPECT_THROW(mwpm(g), DecodeInfeasible);
    EXPECT_THROW(brute_force_matching(g), DecodeInfeasible);
}

TEST(matching, graph_validation) {
    WeightedGraph g(3);
    EXPECT_THROW(g.add_edge(0, 0, 1), UsageError);
    EXPECT_THROW(g.add_edge(0, 3, 1), UsageError);
    EXPECT_THROW(g.add_edge(0, 1, std::nan("")), UsageError);
    g.add_edge(0, 1, 1);
    EXPECT_THROW(g.add_edge(1, 0, 2), UsageError);
    EXPECT_TRUE(g.has_edge(1, 0));
    EXPECT_FALSE(g.has_edge(1, 2));
}

TEST(matching, agrees_with_brute_force) {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 1000; trial++) {
        int n = 2 * (1 + trial % 6);
        double density = trial % 3 == 0 ? 1.0 : 0.6;
        auto g = random_graph(rng, n, density, trial % 2 == 0);
        Matching expected;
        try {
            expected = brute_force_matching(g);
        } catch (const DecodeInfeasible &) {
            EXPECT_THROW(mwpm(g), DecodeInfeasible) << "trial " << trial;
            continue;
        }
        auto m = mwpm(g);
        expect_perfect(g, m);
        EXPECT_NEAR(m.total_weight, expected.total_weight, 1e-9) << "trial " << trial;
        checked++;
    }
    EXPECT_GT(checked, 700);
}

TEST(matching, negative_weights) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> w(-5, 5);
    for (int trial = 0; trial < 200; trial++) {
        int n = 2 * (1 + trial % 5);
        WeightedGraph g(n);
        for (int u = 0; u < n; u++) {
            for (int v = u + 1; v < n; v++) {
                g.add_edge(u, v, w(rng));
            }
        }
        EXPECT_NEAR(mwpm(g).total_weight, brute_force_matching(g).total_weight, 1e-9);
    }
}

TEST(matching, scale_invariance) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; trial++) {
        auto g = random_graph(rng, 2 * (2 + trial % 8), 1.0, false);
        auto base = mwpm(g);
        for (double c : {0.5, 2.0, 3.0, 4.0}) {
            WeightedGraph scaled(g.num_nodes());
            for (const auto &e : g.edges()) {
                scaled.add_edge(e.u, e.v, c * e.weight);
            }
            auto m = mwpm(scaled);
            EXPECT_NEAR(m.total_weight, c * base.total_weight, 1e-9 * c * (1 + base.total_weight));
            // Continuous random weights have a unique optimum.
            EXPECT_EQ(m.pairs, base.pairs);
        }
    }
}

TEST(matching, dual_certificate) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; trial++) {
        auto g = random_graph(rng, 40, 0.3, trial % 2 == 0);
        BlossomMatcher matcher(g.num_nodes(), g.edges());
        if (!matcher.solve()) {
            continue;
        }
        for (const auto &e : g.edges()) {
            double rc = matcher.reduced_cost(e.u, e.v, e.weight);
            EXPECT_GE(rc, -1e-7);
            if (matcher.mate(e.u) == e.v) {
                EXPECT_NEAR(rc, 0, 1e-7);
            }
        }
    }
}

TEST(matching, larger_instances_are_fast) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coord(0, 100);
    int n = 600;
    std::vector<std::pair<double, double>> pts(n);
    for (auto &p : pts) {
        p = {coord(rng), coord(rng)};
    }
    WeightedGraph g(n);
    for (int u = 0; u < n; u++) {
        for (int v = u + 1; v < n; v++) {
            g.add_edge(u, v, std::abs(pts[u].first - pts[v].first) + std::abs(pts[u].second - pts[v].second));
        }
    }
    auto start = std::chrono::steady_clock::now();
    auto m = mwpm(g);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect_perfect(g, m);
    EXPECT_LT(secs, 20.0);
}
