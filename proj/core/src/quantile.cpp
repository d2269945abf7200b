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

#include "exarray/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "exarray/empirical.hpp"
#include "exarray/error.hpp"
#include "exarray/parallel.hpp"

namespace exarray {

double weighted_quantile(std::span<const double> sorted_values,
                         std::span<const double> weights, double tau,
                         double fallback) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return fallback;
  const double target = tau * total;
  double running = 0.0;
  for (std::size_t i = 0; i < sorted_values.size(); ++i) {
    running += weights[i];
    // Only test at the last copy of a tied value.
    if (i + 1 < sorted_values.size() && sorted_values[i + 1] == sorted_values[i])
      continue;
    if (running >= target) return sorted_values[i];
  }
  return sorted_values.back();
}

QuantileEstimate quantile_estimate(const JointArray& array,
                                   std::size_t component, double tau,
                                   const BootstrapPlan& plan, double level) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau must be in (0, 1)");
  if (component >= array.dim()) throw DomainError("component out of range");
  if (plan.scheme != Scheme::kPolyadicMultinomial)
    throw PlanError("quantile intervals use the polyadic multinomial scheme");
  if (plan.replicates < 20)
    throw PlanError("percentile intervals need at least 20 replicates");

  const std::size_t cells = array.cell_count();
  std::vector<double> values(cells);
  for (std::size_t i = 0; i < cells; ++i) values[i] = array.value(i, component);
  const EmpiricalCdf cdf(values);

  QuantileEstimate out;
  out.point = cdf.quantile(tau);
  // Ties among the orientations of one unit set are a symmetry of the array,
  // not an atom of the distribution.
  std::vector<std::vector<Unit>> tied;
  for (std::size_t i = 0; i < cells; ++i) {
    if (values[i] != out.point) continue;
    const auto t = array.tuple(i);
    std::vector<Unit> units(t.begin(), t.end());
    std::sort(units.begin(), units.end());
    tied.push_back(std::move(units));
  }
  std::sort(tied.begin(), tied.end());
  out.atom = std::unique(tied.begin(), tied.end()) - tied.begin() > 1;
  if (out.atom)
    out.warnings.push_back(
        "sample has an atom at the quantile; the distribution may not be "
        "differentiable there and the interval may be unreliable");

  std::vector<std::size_t> order(cells);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> sorted(cells);
  for (std::size_t i = 0; i < cells; ++i) sorted[i] = values[order[i]];

  const double rate = std::sqrt(static_cast<double>(array.units()));
  out.replicates.scheme = plan.scheme;
  out.replicates.seed = plan.seed;
  out.replicates.rate = rate;
  out.replicates.draws.assign(plan.replicates, 0.0);
  parallel_for(plan.replicates, plan.threads, [&](std::size_t b) {
    StreamRng rng = replicate_stream(plan.seed, b);
    const UnitWeights w = draw_polyadic_weights(array.units(), rng);
    std::vector<double> weights(cells);
    for (std::size_t i = 0; i < cells; ++i)
      weights[i] = w.joint_weight(array.tuple(order[i]));
    const double star = weighted_quantile(sorted, weights, tau, out.point);
    out.replicates.draws[b] = rate * (star - out.point);
  });
  out.interval = percentile_interval(out.replicates, out.point, level);
  return out;
}

}  // namespace exarray
