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

#ifndef XYSURF_HARNESS_H
#define XYSURF_HARNESS_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "xysurf/decoder.h"
#include "xysurf/lattice.h"
#include "xysurf/noise.h"

namespace xysurf {

struct TrialConfig {
    int d = 5;
    Boundary boundary = Boundary::periodic;
    NoiseParams noise;
    int rounds = 1;
    long trials = 1;
    uint64_t seed = 1;

    /// Throws UsageError on an invalid configuration.
    void validate() const;
};

struct BatchResult {
    TrialConfig config;
    long trials = 0;
    long fail_spatial = 0;
    long fail_temporal = 0;
    long fail_either = 0;
    double mean_defects = 0;
    double mean_graph_nodes = 0;
    std::vector<uint8_t> failures;  // per trial, 1 if either failure occurred

    double rate() const {
        return trials ? static_cast<double>(fail_either) / trials : 0;
    }
    double std_error() const;
};

struct BatchOptions {
    int workers = 1;
    DecodeOptions decode;
};

/// Runs config.trials independent trials. Trial i always uses the stream
/// TrialRng(seed, i), so results do not depend on the worker count.
BatchResult run_batch(const TrialConfig &config, const BatchOptions &options = {});

struct ThresholdPoint {
    int d = 0;
    double p = 0;
    long failures = 0;
    long trials = 0;

    double rate() const {
        return static_cast<double>(failures) / trials;
    }
    /// Binomial standard error, or 3 / trials when no (or only) failures were seen.
    double sigma() const;
};

ThresholdPoint to_point(const BatchResult &result);

struct ThresholdEstimate {
    double p_th = 0;
    double sigma = 0;
    double nu = 1;
    double A = 0;
    double B = 0;
    double C = 0;
    double residual = 0;  // weighted sum of squared residuals
    int dof = 0;
    int n_points = 0;
    std::vector<double> jackknife;  // leave-one-distance-out estimates
};

struct FitOptions {
    double window = 0.2;  // relative half-width of the fit window around the coarse crossing
    int min_points = 7;
    double p_max = std::numeric_limits<double>::infinity();  // points above this are left out
};

/// Largest p at which no error is still the most likely outcome on a qubit,
/// (eta + 1) / (2 eta + 1). Above it the matching weights turn negative and
/// failure rates stop growing with p, so threshold fits stay below it.
double identity_dominance_limit(Bias eta);

/// Crossing of the failure curves of two or more distances: the median over
/// distance pairs of the first swap of the interpolated curves. A pair that is clearly ordered
/// at low p and then meets within 2 sigma without swapping counts as crossing
/// where it comes closest. Throws FitDegenerate if no pair crosses.
double crossing_estimate(const std::vector<ThresholdPoint> &points);

/// Finite-size-scaling fit of f = A + B x + C x^2 with x = (p - p_th) d^(1/nu),
/// with jackknife errors over distances. Needs at least three distances.
ThresholdEstimate fit_threshold(const std::vector<ThresholdPoint> &points, const FitOptions &options = {});

/// Inclusive grid start:stop:step, also accepting a single value or a comma list.
std::vector<double> parse_grid(const std::string &text);
std::vector<int> parse_int_list(const std::string &text);

std::string to_json(const BatchResult &result);
std::string to_json(const ThresholdEstimate &estimate);
std::string csv_header();
std::string to_csv(const BatchResult &result);

}  // namespace xysurf

#endif  // XYSURF_HARNESS_H
