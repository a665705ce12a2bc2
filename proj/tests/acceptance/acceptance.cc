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

// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the exit status is nonzero if any criterion fails.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "xysurf/decoder.h"
#include "xysurf/errors.h"
#include "xysurf/failure.h"
#include "xysurf/harness.h"
#include "xysurf/lattice.h"
#include "xysurf/matching.h"
#include "xysurf/noise.h"
#include "xysurf/syndrome.h"

namespace {

using namespace xysurf;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *pattern, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, a);
    return buf;
}

int workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs every (d, p) cell and logs the failure rates to stderr.
std::vector<ThresholdPoint> sweep(const std::vector<int> &distances, Boundary boundary, Bias eta,
                                  const std::vector<double> &grid, bool noisy_measurements, long trials,
                                  uint64_t seed) {
    std::vector<ThresholdPoint> out;
    BatchOptions options;
    options.workers = workers();
    for (int d : distances) {
        for (double p : grid) {
            TrialConfig c;
            c.d = d;
            c.boundary = boundary;
            c.noise = NoiseParams{eta, p, noisy_measurements ? p : 0.0};
            c.rounds = noisy_measurements ? d : 1;
            c.trials = trials;
            c.seed = seed;
            auto r = run_batch(c, options);
            std::cerr << "    d=" << d << " eta=" << eta.str() << " p=" << p << " f=" << r.rate() << "\n";
            out.push_back(to_point(r));
        }
    }
    return out;
}

Verdict threshold_in(const std::vector<ThresholdPoint> &points, Bias eta, double lo, double hi) {
    FitOptions options;
    options.p_max = identity_dominance_limit(eta);
    auto est = fit_threshold(points, options);
    Verdict v;
    v.pass = est.p_th >= lo && est.p_th <= hi;
    std::ostringstream s;
    s.precision(4);
    s << "p_th = " << est.p_th << " +- " << est.sigma << " (nu = " << est.nu << ", " << est.n_points
      << " points), want [" << lo << ", " << hi << "]";
    v.detail = s.str();
    return v;
}

// 1. Pure dephasing, ideal measurements, open boundaries.
Verdict open_pure_dephasing() {
    auto pts = sweep({9, 13, 17}, Boundary::open, Bias::infinite(), parse_grid("0.38:0.54:0.02"), false, 5000, 101);
    return threshold_in(pts, Bias::infinite(), 0.42, 0.52);
}

// 2. Pure dephasing with measurement errors, torus.
Verdict torus_pure_dephasing_noisy() {
    auto pts =
        sweep({8, 12, 16}, Boundary::periodic, Bias::infinite(), parse_grid("0.050:0.075:0.005"), true, 2000, 102);
    return threshold_in(pts, Bias::infinite(), 0.055, 0.072);
}

// 3. Bias 100 with measurement errors, open boundaries.
Verdict open_bias_100_noisy() {
    auto pts = sweep({9, 13, 17}, Boundary::open, Bias::finite(100), parse_grid("0.040:0.060:0.004"), true, 2000, 103);
    return threshold_in(pts, Bias::finite(100), 0.042, 0.058);
}

// 4. Ideal-measurement crossings on the torus grow with bias and stay near
// the hashing bound.
Verdict ordering_across_bias() {
    struct Cell {
        Bias eta;
        const char *grid;
    };
    std::vector<Cell> cells = {
        {Bias::finite(0.5), "0.10:0.17:0.01"},
        {Bias::finite(10), "0.15:0.25:0.01"},
        {Bias::finite(100), "0.18:0.30:0.02"},
        {Bias::infinite(), "0.16:0.30:0.02"},
    };
    Verdict v{true, ""};
    double previous = -1;
    std::ostringstream s;
    s.precision(4);
    for (const auto &cell : cells) {
        auto pts = sweep({12, 16}, Boundary::periodic, cell.eta, parse_grid(cell.grid), false, 4000, 104);
        double limit = identity_dominance_limit(cell.eta);
        pts.erase(std::remove_if(pts.begin(), pts.end(), [&](const ThresholdPoint &p) { return p.p > limit; }),
                  pts.end());
        double crossing = std::numeric_limits<double>::quiet_NaN();
        try {
            crossing = crossing_estimate(pts);
        } catch (const FitDegenerate &) {
        }
        double bound = hashing_bound(cell.eta);
        bool ok = std::isfinite(crossing) && crossing > previous && crossing <= bound + 0.01;
        v.pass = v.pass && ok;
        s << "eta=" << cell.eta.str() << ": " << crossing << " (bound " << bound << ")" << (ok ? "" : " [x]") << "; ";
        previous = std::isfinite(crossing) ? crossing : previous;
    }
    v.detail = s.str();
    return v;
}

// 5. Blossom matching against exhaustive search.
Verdict matching_oracle() {
    std::mt19937_64 rng(105);
    int agree = 0;
    const int graphs = 1000;
    for (int g = 0; g < graphs; g++) {
        int n = 4 + 2 * static_cast<int>(rng() % 4);
        std::uniform_real_distribution<double> weight(-5.0, 20.0);
        double density = 0.4 + 0.6 * (rng() % 1000) / 1000.0;
        WeightedGraph graph(n);
        for (int u = 0; u < n; u++) {
            for (int w = u + 1; w < n; w++) {
                if ((rng() % 1000) / 1000.0 < density) {
                    graph.add_edge(u, w, weight(rng));
                }
            }
        }
        bool fast_ok = true, slow_ok = true;
        Matching fast, slow;
        try {
            fast = mwpm(graph);
        } catch (const DecodeInfeasible &) {
            fast_ok = false;
        }
        try {
            slow = brute_force_matching(graph);
        } catch (const DecodeInfeasible &) {
            slow_ok = false;
        }
        if (fast_ok == slow_ok && (!fast_ok || std::abs(fast.total_weight - slow.total_weight) <= 1e-9)) {
            agree++;
        }
    }
    return {agree == graphs, std::to_string(agree) + "/" + std::to_string(graphs) + " graphs agree"};
}

ErrorHistory quiet(const CodeLayout &layout, int rounds) {
    ErrorHistory h;
    for (int t = 0; t < rounds; t++) {
        h.fresh.push_back(PauliOperator(layout.num_faces()));
        h.flips.push_back(BitVector(layout.num_stabilizers()));
    }
    return h;
}

// Decodes a fixed history; true when neither failure kind occurs.
bool corrected(const CodeLayout &layout, const ErrorHistory &h, const NoiseParams &noise) {
    auto defects = extract_defects(layout, measure_rounds(layout, h), time_boundary_for(layout, noise));
    auto plan = decode(defects, layout, noise);
    bool ok = !spatial_failure(h.final_error(), plan.spatial, layout);
    if (layout.periodic()) {
        ok = ok && !temporal_failure(h, plan, layout);
    }
    return ok;
}

// 6. Every weight-one fault is corrected.
Verdict weight_one_faults() {
    long cases = 0, good = 0;
    // Distance 5 has no torus layout; the torus runs at 6.
    for (auto [d, boundary] : {std::pair{5, Boundary::open}, std::pair{6, Boundary::periodic}}) {
        auto layout = build_code(d, boundary);
        NoiseParams ideal{Bias::finite(100), 0.05, 0};
        NoiseParams noisy{Bias::finite(100), 0.05, 0.05};
        for (int f = 0; f < layout.num_faces(); f++) {
            for (Pauli kind : {Pauli::X, Pauli::Y, Pauli::Z}) {
                auto h = quiet(layout, 1);
                h.fresh[0].set(f, kind);
                cases++;
                good += corrected(layout, h, ideal);
                for (int t = 0; t < 5; t++) {
                    auto hn = quiet(layout, 5);
                    hn.fresh[t].set(f, kind);
                    cases++;
                    good += corrected(layout, hn, noisy);
                }
            }
        }
        for (int t = 0; t < 5; t++) {
            for (int k = 0; k < layout.num_stabilizers(); k++) {
                auto h = quiet(layout, 5);
                h.flips[t].set(k, true);
                cases++;
                good += corrected(layout, h, noisy);
            }
        }
    }
    return {good == cases, std::to_string(good) + "/" + std::to_string(cases) + " single faults corrected"};
}

// 7. Pure-Z errors leave even defect parity on every symmetry line.
Verdict symmetry_parity() {
    auto layout = build_code(8, Boundary::periodic);
    auto lines = symmetry_lines(layout);
    NoiseParams noise{Bias::infinite(), 0.15, 0};
    long bad = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; i++) {
        TrialRng rng(107, i);
        auto h = sample_history(layout, noise, 1, rng);
        auto defects = extract_defects(layout, measure_rounds(layout, h), TimeBoundary::periodic);
        std::vector<uint8_t> lit(layout.num_vertices(), 0);
        for (const auto &d : defects.defects) {
            lit[d.vertex] = 1;
        }
        for (const auto &line : lines) {
            int count = 0;
            for (int v : line.vertices) {
                count += lit[v];
            }
            bad += count % 2;
        }
    }
    return {bad == 0, std::to_string(trials) + " trials x " + std::to_string(lines.size()) + " lines, " +
                          std::to_string(bad) + " odd"};
}

// 8. Recovery always reproduces the observed syndrome.
Verdict closure() {
    long trials = 0, open_residual = 0;
    for (Bias eta : {Bias::finite(0.5), Bias::finite(3), Bias::finite(100), Bias::infinite()}) {
        for (auto [d, boundary] : {std::pair{4, Boundary::periodic}, std::pair{5, Boundary::open}}) {
            auto layout = build_code(d, boundary);
            for (bool noisy : {false, true}) {
                NoiseParams noise{eta, 0.08, noisy ? 0.08 : 0.0};
                int rounds = noisy ? d : 1;
                for (int i = 0; i < 10000; i++) {
                    TrialRng rng(108, i);
                    auto h = sample_history(layout, noise, rounds, rng);
                    auto defects =
                        extract_defects(layout, measure_rounds(layout, h), time_boundary_for(layout, noise));
                    DecodeOptions options;
                    options.verify_closure = false;
                    auto plan = decode(defects, layout, noise, options);
                    bool ok = chain_defects(layout, plan.layer_spatial, plan.flips, defects.time_boundary) == defects;
                    if (!noisy) {
                        ok = ok && layout.syndrome(h.final_error() * plan.spatial).none();
                    }
                    open_residual += !ok;
                    trials++;
                }
            }
        }
    }
    return {open_residual == 0,
            std::to_string(trials) + " trials, " + std::to_string(open_residual) + " with a leftover syndrome"};
}

// Entropy of the biased channel, evaluated independently of the library.
double entropy_bits(double eta, double p) {
    double hr = eta / (eta + 1) * p;
    double lr = p / (2 * (eta + 1));
    auto term = [](double x) { return x > 0 ? -x * std::log2(x) : 0.0; };
    return term(1 - p) + term(hr) + 2 * term(lr);
}

// 9. Hashing bound values.
Verdict hashing_bound_values() {
    double lo = 1e-9, hi = 0.75;
    for (int i = 0; i < 200; i++) {
        double mid = (lo + hi) / 2;
        (entropy_bits(0.5, mid) < 1 ? lo : hi) = mid;
    }
    double oracle = (lo + hi) / 2;
    double got = hashing_bound(Bias::finite(0.5));
    double inf_bound = hashing_bound(Bias::infinite());
    bool pass = std::abs(got - oracle) <= 1e-4 && std::abs(got - 0.1893) <= 1e-4 && inf_bound == 0.5;
    return {pass, fmt("hashing_bound(0.5) = %.6f", got) + fmt(" (bisection %.6f)", oracle) +
                      fmt(", hashing_bound(inf) = %.17g", inf_bound)};
}

// 10. Step weights and distance spot values.
Verdict distance_spot_values() {
    auto torus12 = build_code(12, Boundary::periodic);
    auto torus20 = build_code(20, Boundary::periodic);
    auto node = [](int r, int c, int t) {
        DecoderNode n;
        n.r = r;
        n.c = c;
        n.t = t;
        return n;
    };
    auto w_inf = step_weights(NoiseParams{Bias::infinite(), 0.1, 0});
    auto w_100 = step_weights(NoiseParams{Bias::finite(100), 0.05, 0.05});
    double row = distance(node(2, 3, 0), node(2, 7, 0), w_inf, Spacetime(torus12, 1, TimeBoundary::periodic));
    double self = distance(node(2, 3, 0), node(2, 3, 0), w_inf, Spacetime(torus12, 1, TimeBoundary::periodic));
    double mixed = distance(node(0, 0, 0), node(2, 3, 1), w_100, Spacetime(torus20, 20, TimeBoundary::periodic));
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-4; };
    bool pass = near(w_inf.mu_p, std::log(9.0)) && std::isinf(w_inf.mu_d) && near(w_100.mu_t, 2.9444) &&
                near(w_100.mu_p, 2.9544) && near(w_100.mu_d, 8.2527) && near(row, 8.7889) && self == 0 &&
                near(mixed, 22.4042);
    std::ostringstream s;
    s.precision(6);
    s << "row " << row << ", same node " << self << ", mixed " << mixed << ", mu(100) = " << w_100.mu_t << "/"
      << w_100.mu_p << "/" << w_100.mu_d;
    return {pass, s.str()};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance checks"};
    std::vector<int> only;
    app.add_option("--only", only, "Run only these criteria")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    std::vector<std::pair<const char *, std::function<Verdict()>>> criteria = {
        {"open boundaries, pure dephasing, ideal measurements", open_pure_dephasing},
        {"torus, pure dephasing, noisy measurements", torus_pure_dephasing_noisy},
        {"open boundaries, bias 100, noisy measurements", open_bias_100_noisy},
        {"torus crossings increase with bias, below hashing bound", ordering_across_bias},
        {"blossom matching equals exhaustive search", matching_oracle},
        {"every weight-one fault is corrected", weight_one_faults},
        {"pure-Z symmetry lines have even defect parity", symmetry_parity},
        {"recovery closes the syndrome", closure},
        {"hashing bound", hashing_bound_values},
        {"distance spot values", distance_spot_values},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); i++) {
        int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) {
            continue;
        }
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception &e) {
            v = {false, std::string("error: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !v.pass;
        std::printf("%s %2d  %s: %s [%.0fs]\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first, v.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
