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
#include "exarray/bootstrap.hpp"
#include "exarray/dgp.hpp"

namespace {

using namespace exarray;

void BM_PolyadicReplicates(benchmark::State& state) {
  const JointArray a = generate_joint(make_dgp("additive-uniform").model,
                                      static_cast<std::size_t>(state.range(0)), 1);
  BootstrapPlan plan;
  plan.replicates = 199;
  plan.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(bootstrap_process_joint(a, Statistic::component(0), plan));
  state.SetItemsProcessed(state.iterations() * plan.replicates);
}
BENCHMARK(BM_PolyadicReplicates)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MultiplierReplicates(benchmark::State& state) {
  const JointArray a = generate_joint(make_dgp("additive-uniform").model,
                                      static_cast<std::size_t>(state.range(0)), 1);
  BootstrapPlan plan;
  plan.scheme = Scheme::kMultiplier;
  plan.replicates = 500;
  plan.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(multiplier_process(a, Statistic::component(0), plan));
  state.SetItemsProcessed(state.iterations() * plan.replicates);
}
BENCHMARK(BM_MultiplierReplicates)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_PigeonholeReplicates(benchmark::State& state) {
  const std::size_t dims[] = {30, 120};
  const SeparateArray a = generate_separate(make_dgp("separable-additive").model, dims, 1);
  BootstrapPlan plan;
  plan.scheme = Scheme::kPigeonhole;
  plan.replicates = 199;
  plan.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(bootstrap_process_separate(a, Statistic::component(0), plan));
  state.SetItemsProcessed(state.iterations() * plan.replicates);
}
BENCHMARK(BM_PigeonholeReplicates)->Unit(benchmark::kMillisecond);

}  // namespace
