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

#include "xysurf/noise.h"

#include <cmath>
#include <sstream>

#include "xysurf/errors.h"

namespace xysurf {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

Bias Bias::finite(double eta) {
    if (!(eta > 0) || !std::isfinite(eta)) {
        throw UsageError("bias must be a positive finite number or 'inf'");
    }
    Bias b;
    b.eta_ = eta;
    return b;
}

Bias Bias::parse(const std::string &text) {
    if (text == "inf" || text == "infinity" || text == "Inf") {
        return infinite();
    }
    size_t used = 0;
    double v;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw UsageError("cannot parse bias '" + text + "'");
    }
    if (used != text.size()) {
        throw UsageError("cannot parse bias '" + text + "'");
    }
    return finite(v);
}

double Bias::value() const {
    if (infinite_) {
        throw UsageError("infinite bias has no finite value");
    }
    return eta_;
}

std::string Bias::str() const {
    if (infinite_) {
        return "inf";
    }
    std::ostringstream out;
    out << eta_;
    return out.str();
}

double NoiseParams::high_rate() const {
    if (eta.is_infinite()) {
        return p;
    }
    double e = eta.value();
    return p * e / (e + 1);
}

double NoiseParams::low_rate() const {
    if (eta.is_infinite()) {
        return 0;
    }
    return p / (2 * (eta.value() + 1));
}

void NoiseParams::validate() const {
    if (!(p >= 0 && p < 1)) {
        throw UsageError("p must lie in [0, 1)");
    }
    if (!(q >= 0 && q < 1)) {
        throw UsageError("q must lie in [0, 1)");
    }
}

PauliOperator ErrorHistory::accumulated(int t) const {
    if (fresh.empty()) {
        throw UsageError("empty error history");
    }
    PauliOperator acc(fresh[0].num_qubits());
    for (int k = 0; k <= t; k++) {
        acc *= fresh[k];
    }
    return acc;
}

TrialRng::TrialRng(uint64_t master_seed, uint64_t trial_index) {
    uint64_t a = splitmix64(master_seed);
    uint64_t b = splitmix64(a ^ splitmix64(trial_index + 0x632BE59BD9B4E019ULL));
    std::seed_seq seq{static_cast<uint32_t>(a), static_cast<uint32_t>(a >> 32), static_cast<uint32_t>(b),
                      static_cast<uint32_t>(b >> 32)};
    engine_.seed(seq);
}

ErrorHistory sample_history(const CodeLayout &layout, const NoiseParams &params, int rounds, TrialRng &rng) {
    params.validate();
    if (rounds < 1) {
        throw UsageError("need at least one round");
    }
    if (params.q == 0 && rounds != 1) {
        throw UsageError("ideal measurements require exactly one round");
    }
    double hr = params.high_rate();
    double lr = params.low_rate();
    // One draw per qubit: [Z | X | Y | identity].
    double cut_z = hr;
    double cut_x = hr + lr;
    double cut_y = hr + 2 * lr;

    ErrorHistory h;
    int n = layout.num_faces();
    int m = layout.num_stabilizers();
    for (int t = 0; t < rounds; t++) {
        PauliOperator e(n);
        for (int f = 0; f < n; f++) {
            double u = rng.uniform();
            if (u < cut_z) {
                e.set(f, Pauli::Z);
            } else if (u < cut_x) {
                e.set(f, Pauli::X);
            } else if (u < cut_y) {
                e.set(f, Pauli::Y);
            }
        }
        BitVector flips(m);
        if (params.q > 0) {
            for (int k = 0; k < m; k++) {
                if (rng.uniform() < params.q) {
                    flips.set(k, true);
                }
            }
        }
        h.fresh.push_back(std::move(e));
        h.flips.push_back(std::move(flips));
    }
    return h;
}

double channel_entropy(Bias eta, double p) {
    NoiseParams np{eta, p, 0};
    double probs[4] = {1 - p, np.low_rate(), np.low_rate(), np.high_rate()};
    double h = 0;
    for (double x : probs) {
        if (x > 0) {
            h -= x * std::log2(x);
        }
    }
    return h;
}

double hashing_bound(Bias eta) {
    if (eta.is_infinite()) {
        return 0.5;
    }
    // Entropy rises monotonically on [0, 1/2] and is >= 1 at 1/2.
    double lo = 0;
    double hi = 0.5;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (channel_entropy(eta, mid) < 1) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace xysurf
