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

#include "xysurf/harness.h"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "xysurf/errors.h"

using namespace xysurf;

namespace {

TrialConfig config(int d, Boundary b, Bias eta, double p, double q, int rounds, long trials, uint64_t seed = 1) {
    TrialConfig c;
    c.d = d;
    c.boundary = b;
    c.noise = NoiseParams{eta, p, q};
    c.rounds = rounds;
    c.trials = trials;
    c.seed = seed;
    return c;
}

// Binomial samples of f = A + B x + C x^2, x = (p - p_th) d^(1 / nu).
std::vector<ThresholdPoint> synthetic(double p_th, double nu, long trials, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ThresholdPoint> out;
    for (int d : {8, 12, 16, 20}) {
        for (int k = 0; k <= 8; k++) {
            double p = 0.05 + 0.0025 * k;
            double x = (p - p_th) * std::pow(d, 1 / nu);
            double f = std::clamp(0.3 + 1.5 * x + 1.0 * x * x, 0.0, 1.0);
            std::binomial_distribution<long> draw(trials, f);
            out.push_back(ThresholdPoint{d, p, draw(rng), trials});
        }
    }
    return out;
}

}  // namespace

TEST(trial_config, validation) {
    EXPECT_NO_THROW(config(6, Boundary::periodic, Bias::finite(1), 0.1, 0.1, 6, 10).validate());
    EXPECT_THROW(config(6, Boundary::periodic, Bias::finite(1), 0.1, 0, 3, 10).validate(), UsageError);
    EXPECT_THROW(config(6, Boundary::periodic, Bias::finite(1), 0.1, 0, 1, 0).validate(), UsageError);
    EXPECT_THROW(config(5, Boundary::periodic, Bias::finite(1), 0.1, 0, 1, 10).validate(), UsageError);
    EXPECT_THROW(config(6, Boundary::open, Bias::finite(1), 0.1, 0, 1, 10).validate(), UsageError);
    EXPECT_THROW(config(6, Boundary::periodic, Bias::finite(1), 1.5, 0, 1, 10).validate(), UsageError);
}

TEST(run_batch, zero_noise_never_fails) {
    for (auto c : {config(6, Boundary::periodic, Bias::finite(10), 0, 0, 1, 50),
                   config(5, Boundary::open, Bias::infinite(), 0, 0, 1, 50)}) {
        auto r = run_batch(c);
        EXPECT_EQ(r.trials, 50);
        EXPECT_EQ(r.fail_either, 0);
        EXPECT_EQ(r.rate(), 0.0);
        EXPECT_EQ(r.mean_defects, 0.0);
    }
}

TEST(run_batch, far_above_threshold_fails_often) {
    auto r = run_batch(config(8, Boundary::periodic, Bias::infinite(), 0.6, 0, 1, 500));
    EXPECT_GT(r.rate(), 0.25);
    EXPECT_LE(r.rate(), 1.0);
    EXPECT_NEAR(r.std_error(), std::sqrt(r.rate() * (1 - r.rate()) / 500), 1e-12);
}

TEST(run_batch, counts_are_consistent) {
    auto r = run_batch(config(6, Boundary::periodic, Bias::finite(10), 0.1, 0.1, 6, 300));
    EXPECT_EQ(r.failures.size(), 300u);
    long ones = std::count(r.failures.begin(), r.failures.end(), 1);
    EXPECT_EQ(ones, r.fail_either);
    EXPECT_LE(r.fail_either, r.fail_spatial + r.fail_temporal);
    EXPECT_GE(r.fail_either, std::max(r.fail_spatial, r.fail_temporal));
}

TEST(run_batch, result_does_not_depend_on_worker_count) {
    auto c = config(6, Boundary::periodic, Bias::finite(10), 0.1, 0.1, 6, 200, 77);
    BatchOptions one, eight;
    one.workers = 1;
    eight.workers = 8;
    auto a = run_batch(c, one);
    auto b = run_batch(c, eight);
    EXPECT_EQ(a.failures, b.failures);
    EXPECT_EQ(a.fail_spatial, b.fail_spatial);
    EXPECT_EQ(a.fail_temporal, b.fail_temporal);
    EXPECT_EQ(a.mean_graph_nodes, b.mean_graph_nodes);
    EXPECT_EQ(to_json(a), to_json(b));
}

TEST(run_batch, seed_changes_the_sample) {
    auto a = run_batch(config(6, Boundary::periodic, Bias::finite(10), 0.12, 0, 1, 200, 1));
    auto b = run_batch(config(6, Boundary::periodic, Bias::finite(10), 0.12, 0, 1, 200, 2));
    EXPECT_NE(a.failures, b.failures);
}

TEST(run_batch, failure_rate_orders_by_distance_around_threshold) {
    // Depolarizing torus, crossing near 0.135: check at roughly +-30%.
    auto rate = [](int d, double p) {
        return run_batch(config(d, Boundary::periodic, Bias::finite(0.5), p, 0, 1, 2000, 5));
    };
    for (double p : {0.095, 0.175}) {
        std::vector<BatchResult> rs;
        for (int d : {8, 12, 16}) {
            rs.push_back(rate(d, p));
        }
        for (int i = 0; i + 1 < 3; i++) {
            double diff = rs[i + 1].rate() - rs[i].rate();
            double sigma = std::hypot(rs[i].std_error(), rs[i + 1].std_error());
            if (p < 0.135) {
                EXPECT_LT(diff, -3 * sigma) << "p=" << p << " i=" << i;
            } else {
                EXPECT_GT(diff, 3 * sigma) << "p=" << p << " i=" << i;
            }
        }
    }
}

TEST(threshold_point, sigma_rules) {
    ThresholdPoint none{8, 0.1, 0, 100};
    ThresholdPoint all{8, 0.1, 100, 100};
    ThresholdPoint half{8, 0.1, 50, 100};
    EXPECT_DOUBLE_EQ(none.sigma(), 0.03);
    EXPECT_DOUBLE_EQ(all.sigma(), 0.03);
    EXPECT_DOUBLE_EQ(half.sigma(), 0.05);
}

TEST(fit_threshold, recovers_synthetic_threshold) {
    auto pts = synthetic(0.06, 1.0, 10000, 3);
    auto est = fit_threshold(pts);
    EXPECT_GT(est.sigma, 0);
    EXPECT_LT(std::abs(est.p_th - 0.06), 2 * est.sigma) << est.p_th << " +- " << est.sigma;
    EXPECT_NEAR(est.nu, 1.0, 0.3);
    EXPECT_EQ(est.jackknife.size(), 4u);
    EXPECT_EQ(est.dof, est.n_points - 5);
}

TEST(fit_threshold, order_of_points_does_not_matter) {
    auto pts = synthetic(0.06, 1.0, 10000, 4);
    auto a = fit_threshold(pts);
    std::mt19937 rng(1);
    std::shuffle(pts.begin(), pts.end(), rng);
    auto b = fit_threshold(pts);
    std::reverse(pts.begin(), pts.end());
    auto c = fit_threshold(pts);
    EXPECT_DOUBLE_EQ(a.p_th, b.p_th);
    EXPECT_DOUBLE_EQ(a.p_th, c.p_th);
    EXPECT_DOUBLE_EQ(a.sigma, c.sigma);
}

TEST(fit_threshold, more_trials_give_smaller_error) {
    // Averaged over seeds, quadrupling the trials shrinks the jackknife error.
    double small = 0, large = 0;
    for (uint64_t seed = 10; seed < 16; seed++) {
        small += fit_threshold(synthetic(0.06, 1.0, 2500, seed)).sigma;
        large += fit_threshold(synthetic(0.06, 1.0, 10000, seed)).sigma;
    }
    EXPECT_LT(large, small);
}

TEST(fit_threshold, flat_data_is_degenerate) {
    std::vector<ThresholdPoint> pts;
    for (int d : {8, 12, 16}) {
        for (int k = 0; k < 6; k++) {
            pts.push_back(ThresholdPoint{d, 0.05 + 0.005 * k, 300, 1000});
        }
    }
    EXPECT_THROW(fit_threshold(pts), FitDegenerate);
    EXPECT_THROW(crossing_estimate(pts), FitDegenerate);
}

TEST(fit_threshold, needs_three_distances) {
    auto pts = synthetic(0.06, 1.0, 10000, 3);
    pts.erase(std::remove_if(pts.begin(), pts.end(), [](const ThresholdPoint &p) { return p.d > 12; }), pts.end());
    EXPECT_THROW(fit_threshold(pts), UsageError);
    EXPECT_NEAR(crossing_estimate(pts), 0.06, 0.005);
}

TEST(fit_threshold, p_max_drops_points) {
    auto pts = synthetic(0.06, 1.0, 10000, 3);
    // Poison everything above 0.065; the cap must keep it out.
    for (auto &pt : pts) {
        if (pt.p > 0.0651) {
            pt.failures = pt.d == 8 ? pt.trials : 0;
        }
    }
    FitOptions options;
    options.p_max = 0.065;
    auto est = fit_threshold(pts, options);
    EXPECT_NEAR(est.p_th, 0.06, 0.003);
}

TEST(crossing_estimate, touching_curves) {
    // Curves ordered by distance that merge at 0.5 without swapping.
    std::vector<ThresholdPoint> pts;
    for (int d : {9, 13, 17}) {
        for (int k = 0; k <= 5; k++) {
            double p = 0.4 + 0.02 * k;
            double f = 0.6 - (0.5 - p) * d * 0.05;
            pts.push_back(ThresholdPoint{d, p, static_cast<long>(std::lround(f * 5000)), 5000});
        }
    }
    EXPECT_NEAR(crossing_estimate(pts), 0.5, 1e-12);
}

TEST(identity_dominance_limit, values) {
    EXPECT_EQ(identity_dominance_limit(Bias::infinite()), 0.5);
    EXPECT_NEAR(identity_dominance_limit(Bias::finite(0.5)), 0.75, 1e-12);
    EXPECT_NEAR(identity_dominance_limit(Bias::finite(100)), 101.0 / 201.0, 1e-12);
    // At the limit the Z error is exactly as likely as no error.
    for (double eta : {0.5, 3.0, 100.0}) {
        double p = identity_dominance_limit(Bias::finite(eta));
        NoiseParams n{Bias::finite(eta), p, 0};
        EXPECT_NEAR(n.high_rate(), 1 - p, 1e-12);
    }
}

TEST(parse_grid, inclusive_ranges_and_lists) {
    auto g = parse_grid("0.05:0.075:0.005");
    ASSERT_EQ(g.size(), 6u);
    EXPECT_DOUBLE_EQ(g.front(), 0.05);
    EXPECT_DOUBLE_EQ(g.back(), 0.075);
    EXPECT_EQ(parse_grid("0.38:0.54:0.02").size(), 9u);
    EXPECT_EQ(parse_grid("0.1").size(), 1u);
    EXPECT_EQ(parse_grid("0.1,0.2,0.3"), (std::vector<double>{0.1, 0.2, 0.3}));
    EXPECT_EQ(parse_grid("0.1:0.1:0.05"), (std::vector<double>{0.1}));
}

TEST(parse_grid, rejects_bad_input) {
    for (const char *bad : {"", "abc", "0.1:0.2", "0.1:0.2:0", "0.2:0.1:0.01", "0.1:0.2:-1", "0.1,,0.2", "1e"}) {
        EXPECT_THROW(parse_grid(bad), UsageError) << bad;
    }
    EXPECT_EQ(parse_int_list("8,12,16"), (std::vector<int>{8, 12, 16}));
    EXPECT_THROW(parse_int_list("8,x"), UsageError);
    EXPECT_THROW(parse_int_list("8.5"), UsageError);
}

TEST(reports, json_record_is_self_describing) {
    auto r = run_batch(config(6, Boundary::periodic, Bias::infinite(), 0.05, 0.05, 6, 20, 9));
    auto j = nlohmann::json::parse(to_json(r));
    std::vector<std::string> keys;
    auto ordered = nlohmann::ordered_json::parse(to_json(r));
    for (const auto &[k, v] : ordered.items()) {
        keys.push_back(k);
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"d", "boundary", "eta", "p", "q", "T", "trials", "fail_spatial",
                                              "fail_temporal", "fail_either", "seed"}));
    EXPECT_EQ(j["eta"], "inf");
    EXPECT_EQ(j["boundary"], "periodic");
    EXPECT_EQ(j["T"], 6);
    EXPECT_EQ(j["seed"], 9);
    auto finite = run_batch(config(5, Boundary::open, Bias::finite(100), 0.05, 0, 1, 5));
    EXPECT_EQ(nlohmann::json::parse(to_json(finite))["eta"], 100.0);
}

TEST(reports, csv_matches_header) {
    auto r = run_batch(config(5, Boundary::open, Bias::finite(3), 0.05, 0, 1, 5));
    auto count = [](const std::string &s) { return std::count(s.begin(), s.end(), ','); };
    EXPECT_EQ(count(csv_header()), count(to_csv(r)));
    EXPECT_EQ(to_csv(r).substr(0, 7), "5,open,");
}

TEST(reports, threshold_json_fields) {
    auto est = fit_threshold(synthetic(0.06, 1.0, 10000, 3));
    std::vector<std::string> keys;
    auto ordered = nlohmann::ordered_json::parse(to_json(est));
    for (const auto &[k, v] : ordered.items()) {
        keys.push_back(k);
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"p_th", "sigma", "nu", "A", "B", "C", "n_points"}));
}
