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

#include "cli.h"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "xysurf/decoder.h"
#include "xysurf/errors.h"
#include "xysurf/failure.h"
#include "xysurf/harness.h"
#include "xysurf/noise.h"

namespace xysurf::cli {

namespace {

struct ExperimentFlags {
    std::string d = "5";
    std::string boundary = "periodic";
    std::string eta = "inf";
    std::string p = "0.1";
    double q = 0;
    bool q_equals_p = false;
    int rounds = 0;  // 0: d rounds with measurement errors, 1 without
    long trials = 1000;
    uint64_t seed = 1;
    int workers = 1;
    std::string output;
    std::string format = "json";
};

void add_experiment_flags(CLI::App *cmd, ExperimentFlags &f) {
    cmd->add_option("--d", f.d, "Code distances, comma separated")->capture_default_str();
    cmd->add_option("--boundary", f.boundary, "periodic or open")
        ->check(CLI::IsMember({"periodic", "open"}))
        ->capture_default_str();
    cmd->add_option("--eta", f.eta, "Noise bias, a number or 'inf' (comma list allowed)")->capture_default_str();
    cmd->add_option("--p", f.p, "Error rates: value, comma list or start:stop:step")->capture_default_str();
    auto *q = cmd->add_option("--q", f.q, "Measurement error rate")->capture_default_str();
    cmd->add_flag("--q-equals-p", f.q_equals_p, "Use q = p")->excludes(q);
    cmd->add_option("--rounds", f.rounds, "Measurement rounds (default d, or 1 when q = 0)");
    cmd->add_option("--trials", f.trials, "Trials per cell")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
    cmd->add_option("--workers", f.workers, "Worker threads")->capture_default_str();
    cmd->add_option("--output", f.output, "Write records to this file instead of stdout");
    cmd->add_option("--format", f.format, "Record format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

std::vector<Bias> parse_biases(const std::string &text) {
    std::vector<Bias> out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        out.push_back(Bias::parse(part));
    }
    if (out.empty()) {
        throw UsageError("empty bias list");
    }
    return out;
}

std::vector<TrialConfig> expand(const ExperimentFlags &f) {
    auto distances = parse_int_list(f.d);
    auto biases = parse_biases(f.eta);
    auto rates = parse_grid(f.p);
    Boundary boundary = parse_boundary(f.boundary);
    std::vector<TrialConfig> out;
    for (int d : distances) {
        for (const auto &eta : biases) {
            for (double p : rates) {
                TrialConfig c;
                c.d = d;
                c.boundary = boundary;
                c.noise = NoiseParams{eta, p, f.q_equals_p ? p : f.q};
                c.rounds = f.rounds > 0 ? f.rounds : (c.noise.q > 0 ? d : 1);
                c.trials = f.trials;
                c.seed = f.seed;
                c.validate();
                out.push_back(c);
            }
        }
    }
    if (f.workers < 1) {
        throw UsageError("--workers must be at least 1");
    }
    return out;
}

// Records go to --output when given, otherwise to `fallback`.
class RecordSink {
   public:
    RecordSink(const ExperimentFlags &f, std::ostream &fallback) : format_(f.format), out_(&fallback) {
        if (!f.output.empty()) {
            file_ = std::make_unique<std::ofstream>(f.output);
            if (!*file_) {
                throw UsageError("cannot open output file '" + f.output + "'");
            }
            out_ = file_.get();
        }
        if (format_ == "csv") {
            *out_ << csv_header() << "\n";
        }
    }
    void write(const BatchResult &r) {
        *out_ << (format_ == "csv" ? to_csv(r) : to_json(r)) << "\n";
        out_->flush();
    }

   private:
    std::string format_;
    std::ostream *out_;
    std::unique_ptr<std::ofstream> file_;
};

int cmd_run(const ExperimentFlags &f, std::ostream &out) {
    auto configs = expand(f);
    RecordSink sink(f, out);
    BatchOptions options;
    options.workers = f.workers;
    for (const auto &c : configs) {
        sink.write(run_batch(c, options));
    }
    return ok;
}

int cmd_threshold(const ExperimentFlags &f, std::ostream &out) {
    auto configs = expand(f);
    if (parse_biases(f.eta).size() != 1) {
        throw UsageError("threshold takes a single --eta");
    }
    std::ostringstream discard;
    ExperimentFlags record_flags = f;
    RecordSink sink(record_flags, f.output.empty() ? static_cast<std::ostream &>(discard) : out);
    BatchOptions options;
    options.workers = f.workers;
    std::vector<ThresholdPoint> points;
    for (const auto &c : configs) {
        auto r = run_batch(c, options);
        sink.write(r);
        points.push_back(to_point(r));
    }
    FitOptions fit;
    fit.p_max = identity_dominance_limit(configs.front().noise.eta);
    out << to_json(fit_threshold(points, fit)) << "\n";
    return ok;
}

int cmd_hashing_bound(const std::string &etas, std::ostream &out) {
    for (const auto &eta : parse_biases(etas)) {
        std::ostringstream line;
        line.precision(10);
        line << "{\"eta\":" << (eta.is_infinite() ? "\"inf\"" : eta.str()) << ",\"hashing_bound\":"
             << hashing_bound(eta) << "}";
        out << line.str() << "\n";
    }
    return ok;
}

struct DecodeFlags {
    int d = 5;
    std::string boundary = "periodic";
    std::string eta = "100";
    double p = 0.05;
    double q = 0;
    std::string input = "-";
};

int cmd_decode_one(const DecodeFlags &f, std::ostream &out) {
    CodeLayout layout = build_code(f.d, parse_boundary(f.boundary));
    NoiseParams noise{Bias::parse(f.eta), f.p, f.q};
    noise.validate();
    TimeBoundary tb = time_boundary_for(layout, noise);
    DefectSet defects;
    if (f.input == "-") {
        defects = read_defects(std::cin, layout, 1, tb);
    } else {
        std::ifstream in(f.input);
        if (!in) {
            throw UsageError("cannot open defect file '" + f.input + "'");
        }
        defects = read_defects(in, layout, 1, tb);
    }
    RecoveryPlan plan = decode(defects, layout, noise);
    out << "# defects " << plan.diagnostics.defects << " nodes " << plan.diagnostics.graph_nodes << " clusters "
        << plan.diagnostics.clusters << " charged " << plan.diagnostics.charged_clusters << "\n";
    for (size_t i = 0; i < plan.clusters.size(); i++) {
        const auto &cl = plan.clusters[i];
        out << "# cluster " << i << " " << (cl.charge == Charge::charged ? "charged" : "neutral");
        for (const auto &e : cl.entries) {
            out << " " << e.t << ":" << e.r << "," << e.c << (e.type == DefectType::x_type ? "X" : "Y")
                << (e.is_virtual ? "*" : "");
        }
        out << "\n";
    }
    for (int q = 0; q < layout.num_faces(); q++) {
        Pauli p = plan.spatial.get(q);
        if (p != Pauli::I) {
            out << "face " << layout.face_row(q) << " " << layout.face_col(q) << " " << pauli_char(p) << "\n";
        }
    }
    for (auto [v, t] : plan.temporal_corrections(layout)) {
        out << "flip " << t << " " << layout.vertex_row(v) << " " << layout.vertex_col(v) << "\n";
    }
    return ok;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Monte Carlo experiments for the XY surface code under biased noise", "xysurf"};
    app.require_subcommand(1);

    ExperimentFlags run_flags, threshold_flags;
    auto *run_cmd = app.add_subcommand("run", "Run trial batches and stream one record per cell");
    add_experiment_flags(run_cmd, run_flags);
    auto *threshold_cmd = app.add_subcommand("threshold", "Run batches and fit the threshold");
    add_experiment_flags(threshold_cmd, threshold_flags);

    std::string hashing_etas = "0.5";
    auto *hashing_cmd = app.add_subcommand("hashing-bound", "Print the zero-rate hashing bound");
    hashing_cmd->add_option("--eta", hashing_etas, "Bias values, comma separated ('inf' allowed)")
        ->capture_default_str();

    DecodeFlags decode_flags;
    auto *decode_cmd = app.add_subcommand("decode-one", "Decode a defect dump and print the recovery");
    decode_cmd->add_option("--d", decode_flags.d, "Code distance")->capture_default_str();
    decode_cmd->add_option("--boundary", decode_flags.boundary, "periodic or open")
        ->check(CLI::IsMember({"periodic", "open"}))
        ->capture_default_str();
    decode_cmd->add_option("--eta", decode_flags.eta, "Noise bias")->capture_default_str();
    decode_cmd->add_option("--p", decode_flags.p, "Data error rate")->capture_default_str();
    decode_cmd->add_option("--q", decode_flags.q, "Measurement error rate")->capture_default_str();
    decode_cmd->add_option("--input", decode_flags.input, "Defect dump file, '-' for stdin")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }
    try {
        if (*run_cmd) {
            return cmd_run(run_flags, out);
        }
        if (*threshold_cmd) {
            return cmd_threshold(threshold_flags, out);
        }
        if (*hashing_cmd) {
            return cmd_hashing_bound(hashing_etas, out);
        }
        return cmd_decode_one(decode_flags, out);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n" << app.help() << "\n";
        return usage;
    } catch (const DecodeInfeasible &e) {
        err << "decode infeasible: " << e.what() << "\n";
        return decode_infeasible;
    } catch (const FitDegenerate &e) {
        err << "threshold fit failed: " << e.what() << "\n";
        return fit_degenerate;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
}

}  // namespace xysurf::cli
