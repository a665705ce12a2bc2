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

#ifndef XYSURF_NOISE_H
#define XYSURF_NOISE_H

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "xysurf/bit_vector.h"
#include "xysurf/lattice.h"
#include "xysurf/pauli.h"

namespace xysurf {

/// Noise bias eta = p_Z / (p_X + p_Y). Infinity is a distinct state rather
/// than a large number.
class Bias {
   public:
    static Bias finite(double eta);
    static Bias infinite() {
        Bias b;
        b.infinite_ = true;
        return b;
    }
    /// Accepts a positive number or "inf".
    static Bias parse(const std::string &text);

    bool is_infinite() const {
        return infinite_;
    }
    /// Finite value; throws for infinite bias.
    double value() const;
    std::string str() const;

    bool operator==(const Bias &other) const = default;

   private:
    bool infinite_ = false;
    double eta_ = 0.5;
};

struct NoiseParams {
    Bias eta = Bias::finite(0.5);
    double p = 0;  // data error probability per qubit per round
    double q = 0;  // measurement flip probability

    /// Z error rate, p * eta / (eta + 1).
    double high_rate() const;
    /// X (and separately Y) error rate, p / (2 (eta + 1)).
    double low_rate() const;
    void validate() const;
};

/// Fresh data errors and measurement flips for each round.
struct ErrorHistory {
    std::vector<PauliOperator> fresh;  // per round
    std::vector<BitVector> flips;      // per round, indexed by stabilizer

    int rounds() const {
        return static_cast<int>(fresh.size());
    }
    /// Composition of fresh errors from rounds 0..t.
    PauliOperator accumulated(int t) const;
    PauliOperator final_error() const {
        return accumulated(rounds() - 1);
    }
};

/// Per-trial random stream. Seeded from (master seed, trial index) so that
/// results do not depend on scheduling.
class TrialRng {
   public:
    TrialRng(uint64_t master_seed, uint64_t trial_index);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    std::mt19937_64 &engine() {
        return engine_;
    }

   private:
    std::mt19937_64 engine_;
};

ErrorHistory sample_history(const CodeLayout &layout, const NoiseParams &params, int rounds, TrialRng &rng);

/// Shannon entropy in bits of (1-p, p_lr, p_lr, p_hr).
double channel_entropy(Bias eta, double p);

/// Zero-rate hashing bound: the p where the channel entropy reaches 1 bit.
double hashing_bound(Bias eta);

}  // namespace xysurf

#endif  // XYSURF_NOISE_H
