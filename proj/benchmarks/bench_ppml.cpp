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
#include "exarray/inference.hpp"
#include "exarray/ppml.hpp"

namespace {

using namespace exarray;

GravityData gravity(std::size_t n) {
  const std::size_t regressors[] = {1, 2, 3, 4};
  return gravity_from_array(generate_joint(make_dgp("poisson-gravity").model, n, 1), 0,
                            regressors);
}

void BM_PpmlFit(benchmark::State& state) {
  const GravityData data = gravity(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ppml_fit(data));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.rows()));
}
BENCHMARK(BM_PpmlFit)->Arg(50)->Arg(136)->Unit(benchmark::kMillisecond);

void BM_VarianceCompare(benchmark::State& state) {
  const GravityData data = gravity(static_cast<std::size_t>(state.range(0)));
  const PpmlFit fit = ppml_fit(data);
  for (auto _ : state) benchmark::DoNotOptimize(variance_compare(data, fit));
}
BENCHMARK(BM_VarianceCompare)->Arg(50)->Arg(136)->Unit(benchmark::kMillisecond);

void BM_DyadicBootstrapRefits(benchmark::State& state) {
  const GravityData data = gravity(50);
  const PpmlFit fit = ppml_fit(data);
  BootstrapPlan plan;
  plan.replicates = 50;
  plan.threads = 1;
  for (auto _ : state) {
    InferenceReport report = variance_compare(data, fit);
    ppml_bootstrap_pvalues(data, fit, plan, report);
    benchmark::DoNotOptimize(report);
  }
  state.SetItemsProcessed(state.iterations() * plan.replicates);
}
BENCHMARK(BM_DyadicBootstrapRefits)->Unit(benchmark::kMillisecond);

}  // namespace
