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

#include <cstdlib>
#include <random>
#include <vector>

#include "xysurf/matching.h"

namespace {

// Complete graph on n random points in the plane with Manhattan weights.
void BM_blossom_manhattan(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coord(0, 100);
    std::vector<std::pair<int, int>> pts(n);
    for (auto &p : pts) {
        p = {coord(rng), coord(rng)};
    }
    for (auto _ : state) {
        xysurf::WeightedGraph g(n);
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) {
                g.add_edge(i, j, std::abs(pts[i].first - pts[j].first) + std::abs(pts[i].second - pts[j].second));
            }
        }
        benchmark::DoNotOptimize(xysurf::mwpm(g));
    }
}
BENCHMARK(BM_blossom_manhattan)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
