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

#include <benchmark/benchmark.h>

#include "xysurf/failure.h"
#include "xysurf/lattice.h"
#include "xysurf/noise.h"

namespace {

using xysurf::Bias;
using xysurf::Boundary;
using xysurf::NoiseParams;

// One full sample-decode-classify trial per iteration.
void run(benchmark::State &state, Boundary boundary, Bias eta, double p, bool noisy_measurements) {
    const int d = static_cast<int>(state.range(0));
    auto layout = xysurf::build_code(d, boundary);
    NoiseParams noise{eta, p, noisy_measurements ? p : 0.0};
    int rounds = noisy_measurements ? d : 1;
    uint64_t i = 0;
    for (auto _ : state) {
        xysurf::TrialRng rng(12345, i++);
        benchmark::DoNotOptimize(xysurf::run_trial(layout, noise, rounds, rng));
    }
}

void BM_trial_open_pure_z(benchmark::State &state) {
    run(state, Boundary::open, Bias::infinite(), 0.45, false);
}
BENCHMARK(BM_trial_open_pure_z)->Arg(9)->Arg(13)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_trial_torus_pure_z_noisy(benchmark::State &state) {
    run(state, Boundary::periodic, Bias::infinite(), 0.06, true);
}
BENCHMARK(BM_trial_torus_pure_z_noisy)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_trial_open_bias100_noisy(benchmark::State &state) {
    run(state, Boundary::open, Bias::finite(100), 0.05, true);
}
BENCHMARK(BM_trial_open_bias100_noisy)->Arg(9)->Arg(13)->Unit(benchmark::kMillisecond);

}  // namespace
