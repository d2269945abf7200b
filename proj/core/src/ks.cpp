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

#include "exarray/ks.hpp"

#include <algorithm>
#include <cmath>

#include "exarray/empirical.hpp"
#include "exarray/error.hpp"
#include "exarray/parallel.hpp"
#include "exarray/random.hpp"

namespace exarray {

namespace {

constexpr std::uint64_t kKsTag = 0x6b732d74657374ULL;

void check_inputs(const JointArray& array, std::size_t comp_a,
                  std::size_t comp_b) {
  if (array.arity() != 2) throw UnsupportedArityError("KS test needs k = 2");
  if (array.dim() < 2)
    throw DomainError("KS test needs at least two components");
  if (comp_a >= array.dim() || comp_b >= array.dim())
    throw DomainError("component out of range");
}

std::uint64_t assumption_seed(std::uint64_t seed, KsAssumption assumption) {
  if (assumption == KsAssumption::kDyadic) return seed;
  return derive_key(seed, {kKsTag, static_cast<std::uint64_t>(assumption)});
}

}  // namespace

std::string_view to_string(KsAssumption assumption) {
  switch (assumption) {
    case KsAssumption::kIid:
      return "iid";
    case KsAssumption::kPairwise:
      return "pairwise";
    case KsAssumption::kOnewayExporter:
      return "oneway-exporter";
    case KsAssumption::kOnewayImporter:
      return "oneway-importer";
    case KsAssumption::kDyadic:
      return "dyadic";
  }
  return "unknown";
}

KsAssumption parse_ks_assumption(std::string_view name) {
  for (KsAssumption a : kKsAssumptions)
    if (to_string(a) == name) return a;
  throw ConfigError("unknown assumption '" + std::string(name) + "'");
}

KsGrid::KsGrid(const JointArray& array, std::size_t comp_a,
               std::size_t comp_b)
    : cells_(array.cell_count()) {
  check_inputs(array, comp_a, comp_b);
  events_.reserve(2 * cells_);
  for (std::size_t i = 0; i < cells_; ++i) {
    const auto c = static_cast<std::uint32_t>(i);
    const double a = array.value(i, comp_a);
    const double b = array.value(i, comp_b);
    if (std::isnan(a) || std::isnan(b))
      throw EvaluationError("NaN value in KS component", i);
    events_.push_back({a, c, +1});
    events_.push_back({b, c, -1});
  }
  std::sort(events_.begin(), events_.end(),
            [](const Event& x, const Event& y) {
              if (x.value != y.value) return x.value < y.value;
              if (x.cell != y.cell) return x.cell < y.cell;
              return x.sign > y.sign;
            });
  // Integer running sums keep the statistic exact.
  long long running = 0;
  long long best = 0;
  for (std::size_t e = 0; e < events_.size(); ++e) {
    running += events_[e].sign;
    if (e + 1 < events_.size() && events_[e + 1].value == events_[e].value)
      continue;
    ends_.push_back(e + 1);
    grid_.push_back(events_[e].value);
    const long long mag = running < 0 ? -running : running;
    if (ends_.size() == 1) argmax_ = events_[e].value;
    if (mag > best) {
      best = mag;
      argmax_ = events_[e].value;
    }
  }
  statistic_ = static_cast<double>(best) / static_cast<double>(cells_);
}

double KsGrid::recentered_sup(std::span<const double> weights) const {
  if (weights.size() != cells_)
    throw DomainError("one weight per cell required");
  double running = 0.0;
  double best = 0.0;
  std::size_t e = 0;
  for (std::size_t end : ends_) {
    for (; e < end; ++e)
      running += events_[e].sign * (weights[events_[e].cell] - 1.0);
    best = std::max(best, std::abs(running));
  }
  return best / static_cast<double>(cells_);
}

double KsGrid::difference_at(double u) const {
  long long running = 0;
  for (const Event& ev : events_) {
    if (ev.value > u) break;
    running += ev.sign;
  }
  return static_cast<double>(running) / static_cast<double>(cells_);
}

std::vector<double> ks_cell_weights(const JointArray& array,
                                    KsAssumption assumption, StreamRng& rng) {
  const std::size_t cells = array.cell_count();
  const std::size_t n = array.units();
  std::vector<double> w(cells);
  switch (assumption) {
    case KsAssumption::kIid: {
      const auto counts = multinomial_counts(cells, cells, rng);
      for (std::size_t i = 0; i < cells; ++i) w[i] = counts[i];
      break;
    }
    case KsAssumption::kPairwise: {
      // Unordered pair {a < b} has index b (b - 1) / 2 + a.
      const std::size_t pairs = n * (n - 1) / 2;
      const auto counts = multinomial_counts(pairs, pairs, rng);
      for (std::size_t i = 0; i < cells; ++i) {
        const auto t = array.tuple(i);
        const std::size_t lo = std::min(t[0], t[1]);
        const std::size_t hi = std::max(t[0], t[1]);
        w[i] = counts[hi * (hi - 1) / 2 + lo];
      }
      break;
    }
    case KsAssumption::kOnewayExporter:
    case KsAssumption::kOnewayImporter: {
      const std::size_t position =
          assumption == KsAssumption::kOnewayExporter ? 0 : 1;
      const auto counts = multinomial_counts(n, n, rng);
      for (std::size_t i = 0; i < cells; ++i)
        w[i] = counts[array.tuple(i)[position]];
      break;
    }
    case KsAssumption::kDyadic: {
      const UnitWeights u = draw_polyadic_weights(n, rng);
      for (std::size_t i = 0; i < cells; ++i)
        w[i] = u.joint_weight(array.tuple(i));
      break;
    }
  }
  return w;
}

double ks_pvalue(std::span<const double> draws, double statistic) {
  if (statistic == 0.0) return 1.0;
  return tail_pvalue(draws, statistic);
}

KsResult ks_compare_assumptions(const JointArray& array, std::size_t comp_a,
                                std::size_t comp_b, std::size_t replicates,
                                std::uint64_t seed,
                                std::span<const KsAssumption> assumptions,
                                unsigned threads) {
  if (replicates < 1) throw PlanError("at least one replicate required");
  const KsGrid grid(array, comp_a, comp_b);
  KsResult result;
  result.statistic = grid.statistic();
  result.argmax = grid.argmax();
  result.replicates = replicates;
  for (KsAssumption assumption : assumptions) {
    const std::uint64_t key = assumption_seed(seed, assumption);
    std::vector<double> draws(replicates);
    parallel_for(replicates, threads, [&](std::size_t b) {
      StreamRng rng = replicate_stream(key, b);
      draws[b] = grid.recentered_sup(ks_cell_weights(array, assumption, rng));
    });
    const std::string name(to_string(assumption));
    result.pvalues[name] = ks_pvalue(draws, result.statistic);
    result.draws[name] = std::move(draws);
  }
  const bool dyadic = std::find(assumptions.begin(), assumptions.end(),
                                KsAssumption::kDyadic) != assumptions.end();
  if (dyadic && result.statistic > 0.0) {
    const double u = result.argmax;
    const Statistic f{[=](std::span<const double> y) {
                        return (y[comp_a] <= u ? 1.0 : 0.0) -
                               (y[comp_b] <= u ? 1.0 : 0.0);
                      },
                      "ks-difference"};
    if (estimate_kernel_joint(array, f, f).near_degenerate())
      result.warnings.push_back(
          "unit projections of the difference process at the sup are at "
          "their noise floor (possibly degenerate design); the dyadic "
          "bootstrap p-value may be conservative");
  }
  return result;
}

KsResult ks_paired(const JointArray& array, std::size_t comp_a,
                   std::size_t comp_b, const BootstrapPlan& plan) {
  if (plan.scheme != Scheme::kPolyadicMultinomial)
    throw PlanError("KS bootstrap uses the polyadic multinomial scheme");
  const KsAssumption dyadic[] = {KsAssumption::kDyadic};
  return ks_compare_assumptions(array, comp_a, comp_b, plan.replicates,
                                plan.seed, dyadic, plan.threads);
}

double two_sample_ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() || j < b.size()) {
    double u;
    if (j == b.size() || (i < a.size() && a[i] <= b[j]))
      u = a[i];
    else
      u = b[j];
    while (i < a.size() && a[i] <= u) ++i;
    while (j < b.size() && b[j] <= u) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na -
                                   static_cast<double>(j) / nb));
  }
  return best;
}

}  // namespace exarray
