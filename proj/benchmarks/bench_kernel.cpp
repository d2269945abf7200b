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
#include "exarray/empirical.hpp"

namespace {

using namespace exarray;

void BM_JointKernel(benchmark::State& state) {
  const JointArray a = generate_joint(make_dgp("additive-uniform").model,
                                      static_cast<std::size_t>(state.range(0)), 1);
  const Statistic f = Statistic::component(0);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_kernel_joint(a, f, f));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.cell_count()));
}
BENCHMARK(BM_JointKernel)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_SeparateKernel(benchmark::State& state) {
  const std::size_t dims[] = {100, 400};
  const SeparateArray a = generate_separate(make_dgp("separable-additive").model, dims, 1);
  const Statistic f = Statistic::component(0);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_kernel_separate(a, f, f));
}
BENCHMARK(BM_SeparateKernel)->Unit(benchmark::kMillisecond);

void BM_GenerateJoint(benchmark::State& state) {
  const Dgp d = make_dgp("poisson-gravity");
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        generate_joint(d.model, static_cast<std::size_t>(state.range(0)), ++seed));
}
BENCHMARK(BM_GenerateJoint)->Arg(50)->Arg(136)->Unit(benchmark::kMillisecond);

}  // namespace
