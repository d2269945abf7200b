// Copyright 2026 The exarray Authors.
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

#include "exarray/ahk.hpp"
#include "exarray/dgp.hpp"
#include "exarray/ks.hpp"

namespace {

using namespace exarray;

void BM_KsAllAssumptions(benchmark::State& state) {
  const JointArray a = generate_joint(make_dgp("ks-null-dyadic").model,
                                      static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(ks_compare_assumptions(a, 0, 1, 99, 1));
}
BENCHMARK(BM_KsAllAssumptions)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_KsRecenteredSup(benchmark::State& state) {
  const JointArray a = generate_joint(make_dgp("ks-null-dyadic").model, 100, 1);
  const KsGrid grid(a, 0, 1);
  StreamRng rng(3);
  const std::vector<double> w = ks_cell_weights(a, KsAssumption::kDyadic, rng);
  for (auto _ : state) benchmark::DoNotOptimize(grid.recentered_sup(w));
}
BENCHMARK(BM_KsRecenteredSup)->Unit(benchmark::kMicrosecond);

}  // namespace
