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

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "xysurf/errors.h"
#include "xysurf/failure.h"

namespace xysurf {

void TrialConfig::validate() const {
    if (trials < 1) {
        throw UsageError("trial count must be at least 1");
    }
    if (rounds < 1) {
        throw UsageError("rounds must be at least 1");
    }
    noise.validate();
    if (noise.q == 0 && rounds != 1) {
        throw UsageError("ideal measurements (q = 0) require a single round");
    }
    if (boundary == Boundary::periodic && (d < 4 || d % 2)) {
        throw UsageError("periodic layouts need an even distance of at least 4");
    }
    if (boundary == Boundary::open && (d < 3 || d % 2 == 0)) {
        throw UsageError("open layouts need an odd distance of at least 3");
    }
}

double BatchResult::std_error() const {
    if (trials == 0) {
        return 0;
    }
    double f = rate();
    return std::sqrt(f * (1 - f) / trials);
}

BatchResult run_batch(const TrialConfig &config, const BatchOptions &options) {
    config.validate();
    CodeLayout layout = build_code(config.d, config.boundary);
    long n = config.trials;
    std::vector<uint8_t> spatial(n), temporal(n);
    std::vector<int> defects(n), nodes(n);
    std::atomic<long> next{0};
    std::atomic<bool> stop{false};
    std::mutex error_mutex;
    std::exception_ptr error;
    long error_trial = -1;

    auto worker = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            long i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                TrialRng rng(config.seed, static_cast<uint64_t>(i));
                TrialOutcome out = run_trial(layout, config.noise, config.rounds, rng, options.decode);
                spatial[i] = out.spatial_failure;
                temporal[i] = out.temporal_failure;
                defects[i] = out.defect_count;
                nodes[i] = out.graph_node_count;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error || i < error_trial) {
                    error = std::current_exception();
                    error_trial = i;
                }
                stop = true;
            }
        }
    };
    int workers = std::max(1, options.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (error) {
        std::ostringstream where;
        where << " (d=" << config.d << " boundary=" << boundary_name(config.boundary)
              << " eta=" << config.noise.eta.str() << " p=" << config.noise.p << " q=" << config.noise.q
              << " seed=" << config.seed << " trial=" << error_trial << ")";
        try {
            std::rethrow_exception(error);
        } catch (const DecodeInfeasible &e) {
            throw DecodeInfeasible(e.what() + where.str());
        } catch (const InternalError &e) {
            throw InternalError(e.what() + where.str());
        }
    }

    BatchResult result;
    result.config = config;
    result.trials = n;
    result.failures.resize(n);
    double sum_defects = 0, sum_nodes = 0;
    for (long i = 0; i < n; i++) {
        result.fail_spatial += spatial[i];
        result.fail_temporal += temporal[i];
        result.failures[i] = spatial[i] | temporal[i];
        result.fail_either += result.failures[i];
        sum_defects += defects[i];
        sum_nodes += nodes[i];
    }
    result.mean_defects = sum_defects / n;
    result.mean_graph_nodes = sum_nodes / n;
    return result;
}

// ---------------------------------------------------------------------------
// Threshold estimation

double ThresholdPoint::sigma() const {
    if (failures == 0 || failures == trials) {
        return 3.0 / trials;
    }
    double f = rate();
    return std::sqrt(f * (1 - f) / trials);
}

ThresholdPoint to_point(const BatchResult &result) {
    return ThresholdPoint{result.config.d, result.config.noise.p, result.fail_either, result.trials};
}

namespace {

std::vector<ThresholdPoint> sorted_points(std::vector<ThresholdPoint> points) {
    for (const auto &pt : points) {
        if (pt.trials < 1 || pt.failures < 0 || pt.failures > pt.trials || pt.d < 1) {
            throw UsageError("invalid threshold data point");
        }
    }
    std::sort(points.begin(), points.end(), [](const auto &a, const auto &b) {
        return a.d != b.d ? a.d < b.d : a.p < b.p;
    });
    return points;
}

std::map<int, std::vector<ThresholdPoint>> by_distance(const std::vector<ThresholdPoint> &points) {
    std::map<int, std::vector<ThresholdPoint>> out;
    for (const auto &pt : points) {
        out[pt.d].push_back(pt);
    }
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Where the larger distance stops beating the smaller one, or NaN.
double pair_crossing(const std::vector<ThresholdPoint> &small, const std::vector<ThresholdPoint> &large) {
    struct Gap {
        double p, y, sigma;
    };
    std::vector<Gap> diff;
    for (const auto &a : small) {
        for (const auto &b : large) {
            if (std::abs(a.p - b.p) <= 1e-12) {
                diff.push_back({a.p, b.rate() - a.rate(), std::hypot(a.sigma(), b.sigma())});
            }
        }
    }
    // The first swap counts: once both curves saturate, noise makes them
    // swap back and forth without carrying information.
    for (size_t k = 0; k + 1 < diff.size(); k++) {
        auto [p0, y0, s0] = diff[k];
        auto [p1, y1, s1] = diff[k + 1];
        if (y0 <= 0 && y1 > 0) {
            return y0 == y1 ? p0 : p0 + (p1 - p0) * (-y0) / (y1 - y0);
        }
    }
    // Curves that separate clearly at low p and then meet within noise
    // without changing order touch at their closest approach.
    if (diff.empty()) {
        return std::nan("");
    }
    auto closest = std::max_element(diff.begin(), diff.end(), [](const Gap &a, const Gap &b) { return a.y < b.y; });
    bool separated = std::any_of(diff.begin(), closest, [](const Gap &g) { return g.y < -2 * g.sigma; });
    if (separated && closest->y >= -2 * closest->sigma) {
        return closest->p;
    }
    return std::nan("");
}

// The exponent enters through nu = nu_lo + (nu_hi - nu_lo) * sigmoid(s), so
// the optimiser cannot run off to nu -> infinity where every distance
// collapses onto the same curve and p_th stops being identifiable.
constexpr double nu_lo = 0.25;
constexpr double nu_hi = 8.0;

double nu_of(double s) {
    return nu_lo + (nu_hi - nu_lo) / (1 + std::exp(-s));
}

double s_of(double nu) {
    double u = (nu - nu_lo) / (nu_hi - nu_lo);
    return std::log(u / (1 - u));
}

struct ScalingModel : Eigen::DenseFunctor<double> {
    const std::vector<ThresholdPoint> &pts;

    explicit ScalingModel(const std::vector<ThresholdPoint> &points)
        : Eigen::DenseFunctor<double>(5, static_cast<int>(points.size())), pts(points) {
    }

    // Parameters: p_th, s (see nu_of), A, B, C.
    int operator()(const Eigen::VectorXd &theta, Eigen::VectorXd &out) const {
        double nu = nu_of(theta[1]);
        for (size_t i = 0; i < pts.size(); i++) {
            double x = (pts[i].p - theta[0]) * std::pow(pts[i].d, 1 / nu);
            out[i] = (theta[2] + theta[3] * x + theta[4] * x * x - pts[i].rate()) / pts[i].sigma();
        }
        return 0;
    }

    int df(const Eigen::VectorXd &theta, Eigen::MatrixXd &jac) const {
        double nu = nu_of(theta[1]);
        double sig = (nu - nu_lo) / (nu_hi - nu_lo);
        double dnu_ds = (nu_hi - nu_lo) * sig * (1 - sig);
        for (size_t i = 0; i < pts.size(); i++) {
            double scale = std::pow(pts[i].d, 1 / nu);
            double dp = pts[i].p - theta[0];
            double x = dp * scale;
            double slope = theta[3] + 2 * theta[4] * x;
            double s = pts[i].sigma();
            jac(i, 0) = -slope * scale / s;
            jac(i, 1) = -slope * dp * scale * std::log(pts[i].d) / (nu * nu) * dnu_ds / s;
            jac(i, 2) = 1 / s;
            jac(i, 3) = x / s;
            jac(i, 4) = x * x / s;
        }
        return 0;
    }
};

struct RawFit {
    Eigen::VectorXd theta;
    double residual = 0;
    Eigen::MatrixXd jacobian;
};

RawFit fit_model(const std::vector<ThresholdPoint> &pts, double p_start) {
    // Quadratic coefficients at nu = 1 by weighted linear least squares.
    int m = static_cast<int>(pts.size());
    Eigen::MatrixXd X(m, 3);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; i++) {
        double x = (pts[i].p - p_start) * pts[i].d;
        double s = pts[i].sigma();
        X(i, 0) = 1 / s;
        X(i, 1) = x / s;
        X(i, 2) = x * x / s;
        y[i] = pts[i].rate() / s;
    }
    Eigen::VectorXd abc = X.colPivHouseholderQr().solve(y);
    Eigen::VectorXd theta(5);
    theta << p_start, s_of(1.0), abc[0], abc[1], abc[2];

    ScalingModel model(pts);
    Eigen::LevenbergMarquardt<ScalingModel> lm(model);
    lm.setXtol(1e-10);
    lm.setFtol(1e-12);
    lm.setMaxfev(2000);
    lm.minimize(theta);

    RawFit out;
    out.theta = theta;
    Eigen::VectorXd r(m);
    model(theta, r);
    out.residual = r.squaredNorm();
    out.jacobian.resize(m, 5);
    model.df(theta, out.jacobian);
    if (!theta.allFinite() || !(theta[0] > 0 && theta[0] < 1)) {
        throw FitDegenerate("scaling fit did not converge to a threshold in (0, 1)");
    }
    out.theta[1] = nu_of(theta[1]);
    return out;
}

std::vector<ThresholdPoint> window_points(const std::vector<ThresholdPoint> &points, double centre, double window,
                                          int min_points) {
    std::vector<ThresholdPoint> chosen;
    for (double w = window;; w *= 1.5) {
        chosen.clear();
        for (const auto &pt : points) {
            if (std::abs(pt.p - centre) <= w * centre + 1e-12) {
                chosen.push_back(pt);
            }
        }
        if (static_cast<int>(chosen.size()) >= min_points || chosen.size() == points.size()) {
            return chosen;
        }
    }
}

}  // namespace

double crossing_estimate(const std::vector<ThresholdPoint> &input) {
    auto groups = by_distance(sorted_points(input));
    if (groups.size() < 2) {
        throw FitDegenerate("a crossing needs data at two or more distances");
    }
    std::vector<double> crossings;
    for (auto a = groups.begin(); a != groups.end(); ++a) {
        for (auto b = std::next(a); b != groups.end(); ++b) {
            double c = pair_crossing(a->second, b->second);
            if (std::isfinite(c)) {
                crossings.push_back(c);
            }
        }
    }
    if (crossings.empty()) {
        throw FitDegenerate(
            "failure curves do not cross; extend the p grid so larger distances fail less at the low end and "
            "more at the high end");
    }
    return median(crossings);
}

double identity_dominance_limit(Bias eta) {
    if (eta.is_infinite()) {
        return 0.5;
    }
    return (eta.value() + 1) / (2 * eta.value() + 1);
}

ThresholdEstimate fit_threshold(const std::vector<ThresholdPoint> &input, const FitOptions &options) {
    std::vector<ThresholdPoint> capped;
    for (const auto &pt : input) {
        if (pt.p <= options.p_max + 1e-12) {
            capped.push_back(pt);
        }
    }
    auto points = sorted_points(capped);
    auto groups = by_distance(points);
    if (groups.size() < 3) {
        throw UsageError("threshold fit needs at least three distances");
    }
    double start = crossing_estimate(points);
    auto chosen = window_points(points, start, options.window, options.min_points);
    if (chosen.size() < 6) {
        throw FitDegenerate("too few data points near the crossing for a five-parameter fit");
    }
    RawFit full = fit_model(chosen, start);

    ThresholdEstimate est;
    est.p_th = full.theta[0];
    est.nu = full.theta[1];
    est.A = full.theta[2];
    est.B = full.theta[3];
    est.C = full.theta[4];
    est.residual = full.residual;
    est.n_points = static_cast<int>(chosen.size());
    est.dof = est.n_points - 5;

    for (const auto &[d, unused] : groups) {
        std::vector<ThresholdPoint> rest;
        for (const auto &pt : chosen) {
            if (pt.d != d) {
                rest.push_back(pt);
            }
        }
        if (rest.size() < 6) {
            continue;
        }
        try {
            est.jackknife.push_back(fit_model(rest, start).theta[0]);
        } catch (const FitDegenerate &) {
            // A subset without a usable crossing adds no information.
        }
    }
    size_t k = est.jackknife.size();
    if (k >= 2) {
        double mean = 0;
        for (double v : est.jackknife) {
            mean += v;
        }
        mean /= k;
        double ss = 0;
        for (double v : est.jackknife) {
            ss += (v - mean) * (v - mean);
        }
        est.sigma = std::sqrt((k - 1.0) / k * ss);
    }
    if (!(est.sigma > 0)) {
        // Fall back to the curvature of the fit.
        Eigen::MatrixXd info = full.jacobian.transpose() * full.jacobian;
        double scale = est.dof > 0 ? std::max(1.0, full.residual / est.dof) : 1.0;
        est.sigma = std::sqrt(std::abs(info.inverse()(0, 0)) * scale);
    }
    if (!std::isfinite(est.sigma) || !(est.sigma > 0)) {
        throw FitDegenerate("threshold uncertainty is undefined for this data");
    }
    return est;
}

// ---------------------------------------------------------------------------
// Parsing and reports

std::vector<double> parse_grid(const std::string &text) {
    auto number = [&](const std::string &s) {
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != s.size() || s.empty() || !std::isfinite(v)) {
            throw UsageError("invalid number '" + s + "' in grid '" + text + "'");
        }
        return v;
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream in(text);
        std::string part;
        while (std::getline(in, part, ':')) {
            parts.push_back(part);
        }
        if (parts.size() != 3) {
            throw UsageError("grid '" + text + "' must look like start:stop:step");
        }
        double start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
        if (!(step > 0) || stop < start) {
            throw UsageError("grid '" + text + "' needs a positive step and stop >= start");
        }
        for (long k = 0;; k++) {
            double v = start + k * step;
            if (v > stop + 1e-12) {
                break;
            }
            out.push_back(std::round(v * 1e12) / 1e12);
        }
        return out;
    }
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        out.push_back(number(part));
    }
    if (out.empty()) {
        throw UsageError("empty grid");
    }
    return out;
}

std::vector<int> parse_int_list(const std::string &text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(part, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != part.size() || part.empty()) {
            throw UsageError("invalid integer '" + part + "' in list '" + text + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw UsageError("empty integer list");
    }
    return out;
}

namespace {

nlohmann::ordered_json record(const BatchResult &r) {
    nlohmann::ordered_json j;
    j["d"] = r.config.d;
    j["boundary"] = boundary_name(r.config.boundary);
    if (r.config.noise.eta.is_infinite()) {
        j["eta"] = "inf";
    } else {
        j["eta"] = r.config.noise.eta.value();
    }
    j["p"] = r.config.noise.p;
    j["q"] = r.config.noise.q;
    j["T"] = r.config.rounds;
    j["trials"] = r.trials;
    j["fail_spatial"] = r.fail_spatial;
    j["fail_temporal"] = r.fail_temporal;
    j["fail_either"] = r.fail_either;
    j["seed"] = r.config.seed;
    return j;
}

}  // namespace

std::string to_json(const BatchResult &result) {
    return record(result).dump();
}

std::string to_json(const ThresholdEstimate &e) {
    nlohmann::ordered_json j;
    j["p_th"] = e.p_th;
    j["sigma"] = e.sigma;
    j["nu"] = e.nu;
    j["A"] = e.A;
    j["B"] = e.B;
    j["C"] = e.C;
    j["n_points"] = e.n_points;
    return j.dump();
}

std::string csv_header() {
    return "d,boundary,eta,p,q,T,trials,fail_spatial,fail_temporal,fail_either,seed";
}

std::string to_csv(const BatchResult &result) {
    auto j = record(result);
    std::ostringstream out;
    bool first = true;
    for (const auto &[key, value] : j.items()) {
        out << (first ? "" : ",") << (value.is_string() ? value.get<std::string>() : value.dump());
        first = false;
    }
    return out.str();
}

}  // namespace xysurf
