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

#include "exarray/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "exarray/error.hpp"
#include "exarray/parallel.hpp"
#include "exarray/summation.hpp"

namespace exarray {

namespace {
constexpr std::uint64_t kReplicateTag = 0x7265706c6963ULL;
}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kPolyadicMultinomial:
      return "polyadic-multinomial";
    case Scheme::kPigeonhole:
      return "pigeonhole";
    case Scheme::kMultiplier:
      return "multiplier";
  }
  return "unknown";
}

double UnitWeights::joint_weight(std::span<const Unit> tuple) const {
  const auto& w = counts.front();
  double weight = 1.0;
  for (Unit u : tuple) weight *= w[u];
  return weight;
}

double UnitWeights::grid_weight(std::span<const Unit> index) const {
  double weight = 1.0;
  for (std::size_t j = 0; j < index.size(); ++j) weight *= counts[j][index[j]];
  return weight;
}

std::vector<std::uint32_t> multinomial_counts(std::size_t categories,
                                              std::size_t draws,
                                              StreamRng& rng) {
  if (categories == 0) throw DomainError("multinomial needs categories");
  std::vector<std::uint32_t> counts(categories, 0);
  for (std::size_t t = 0; t < draws; ++t) ++counts[rng.below(categories)];
  return counts;
}

UnitWeights draw_polyadic_weights(std::size_t n, StreamRng& rng) {
  if (n == 0) throw DomainError("need at least one unit");
  return UnitWeights{{multinomial_counts(n, n, rng)}};
}

UnitWeights draw_pigeonhole_weights(std::span<const std::size_t> dims,
                                    StreamRng& rng) {
  if (dims.empty()) throw DomainError("need at least one dimension");
  UnitWeights weights;
  for (std::size_t n : dims) {
    if (n == 0) throw DomainError("every dimension needs at least one unit");
    weights.counts.push_back(multinomial_counts(n, n, rng));
  }
  return weights;
}

StreamRng replicate_stream(std::uint64_t seed, std::size_t replicate) {
  return StreamRng(derive_key(seed, {kReplicateTag, replicate}));
}

double joint_replicate(const JointArray& array, std::span<const double> values,
                       const UnitWeights& weights, double centre) {
  const std::size_t k = array.arity();
  const auto tuples = array.tuples();
  const auto& w = weights.counts.front();
  const std::size_t cells = array.cell_count();
  const double sum = pairwise_sum(cells, [&](std::size_t r) {
    const Unit* t = tuples.data() + r * k;
    double weight = w[t[0]];
    for (std::size_t p = 1; p < k; ++p) weight *= w[t[p]];
    return weight * values[r];
  });
  return std::sqrt(static_cast<double>(array.units())) *
         (sum / static_cast<double>(cells) - centre);
}

double joint_replicate_normalized(const JointArray& array,
                                  std::span<const double> values,
                                  const UnitWeights& weights, double centre) {
  const std::size_t k = array.arity();
  const auto tuples = array.tuples();
  const auto& w = weights.counts.front();
  const std::size_t cells = array.cell_count();
  auto weight_of = [&](std::size_t r) {
    const Unit* t = tuples.data() + r * k;
    double weight = w[t[0]];
    for (std::size_t p = 1; p < k; ++p) weight *= w[t[p]];
    return weight;
  };
  const double total = pairwise_sum(cells, weight_of);
  if (total == 0.0) return 0.0;
  const double sum = pairwise_sum(
      cells, [&](std::size_t r) { return weight_of(r) * values[r]; });
  return std::sqrt(static_cast<double>(array.units())) *
         (sum / total - centre);
}

double grid_replicate(const SeparateArray& array,
                      std::span<const double> values,
                      const UnitWeights& weights) {
  const auto dims = array.dims();
  const std::size_t k = dims.size();
  const std::size_t cells = array.cell_count();
  const double sum = pairwise_sum(cells, [&](std::size_t flat) {
    double weight = 1.0;
    std::size_t rest = flat;
    for (std::size_t j = k; j-- > 0;) {
      weight *= weights.counts[j][rest % dims[j]];
      rest /= dims[j];
    }
    return (weight - 1.0) * values[flat];
  });
  return std::sqrt(static_cast<double>(array.min_dim())) * sum /
         static_cast<double>(cells);
}

namespace {

void check_replicates(const BootstrapPlan& plan) {
  if (plan.replicates == 0) throw PlanError("need at least one replicate");
}

}  // namespace

ReplicateSet bootstrap_process_joint(const JointArray& array,
                                     const Statistic& f,
                                     const BootstrapPlan& plan) {
  if (plan.scheme != Scheme::kPolyadicMultinomial)
    throw PlanError("joint bootstrap requires the polyadic-multinomial scheme");
  check_replicates(plan);
  const std::vector<double> values = evaluate(array, f);
  double centre = pairwise_sum(values) / static_cast<double>(values.size());
  if (plan.recentering == Recentering::kBootstrapExpectation)
    centre = pairwise_sum(values) /
             std::pow(static_cast<double>(array.units()),
                      static_cast<double>(array.arity()));

  ReplicateSet out;
  out.scheme = plan.scheme;
  out.seed = plan.seed;
  out.rate = std::sqrt(static_cast<double>(array.units()));
  out.draws.resize(plan.replicates);
  parallel_for(plan.replicates, plan.threads, [&](std::size_t b) {
    StreamRng rng = replicate_stream(plan.seed, b);
    const UnitWeights w = draw_polyadic_weights(array.units(), rng);
    out.draws[b] = plan.recentering == Recentering::kSelfNormalized
                       ? joint_replicate_normalized(array, values, w, centre)
                       : joint_replicate(array, values, w, centre);
  });
  return out;
}

ReplicateSet bootstrap_process_separate(const SeparateArray& array,
                                        const Statistic& f,
                                        const BootstrapPlan& plan) {
  if (plan.scheme != Scheme::kPigeonhole)
    throw PlanError("separate-array bootstrap requires the pigeonhole scheme");
  check_replicates(plan);
  const std::vector<double> values = evaluate(array, f);
  ReplicateSet out;
  out.scheme = plan.scheme;
  out.seed = plan.seed;
  out.rate = std::sqrt(static_cast<double>(array.min_dim()));
  out.draws.resize(plan.replicates);
  parallel_for(plan.replicates, plan.threads, [&](std::size_t b) {
    StreamRng rng = replicate_stream(plan.seed, b);
    const UnitWeights w = draw_pigeonhole_weights(array.dims(), rng);
    out.draws[b] = grid_replicate(array, values, w);
  });
  return out;
}

std::vector<double> multiplier_terms(const JointArray& array,
                                     const Statistic& f) {
  if (array.arity() != 2)
    throw UnsupportedArityError("the multiplier process is defined for k = 2");
  const std::size_t n = array.units();
  const std::vector<double> values = evaluate(array, f);
  const double pn = pairwise_sum(values) / static_cast<double>(values.size());
  // Rank of (a, b) is a (n-1) + b - [b > a]; rows and columns are contiguous
  // sums over outgoing and incoming pairs.
  std::vector<double> h(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double outgoing = pairwise_sum(n - 1, [&](std::size_t c) {
      return values[a * (n - 1) + c];
    });
    const double incoming = pairwise_sum(n - 1, [&](std::size_t c) {
      const std::size_t b = c < a ? c : c + 1;
      const std::size_t col = a < b ? a : a - 1;
      return values[b * (n - 1) + col];
    });
    h[a] = (outgoing + incoming) / static_cast<double>(n - 1) - 2.0 * pn;
  }
  return h;
}

ReplicateSet multiplier_process(const JointArray& array, const Statistic& f,
                                const BootstrapPlan& plan) {
  if (plan.scheme != Scheme::kMultiplier)
    throw PlanError("multiplier process requires the multiplier scheme");
  check_replicates(plan);
  const std::vector<double> h = multiplier_terms(array, f);
  const std::size_t n = h.size();
  ReplicateSet out;
  out.scheme = plan.scheme;
  out.seed = plan.seed;
  out.rate = std::sqrt(static_cast<double>(n));
  out.draws.resize(plan.replicates);
  const bool rademacher =
      plan.multiplier == MultiplierDistribution::kRademacher;
  parallel_for(plan.replicates, plan.threads, [&](std::size_t b) {
    StreamRng rng = replicate_stream(plan.seed, b);
    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      sum += (rademacher ? rng.sign() : rng.normal()) * h[a];
    out.draws[b] = sum / std::sqrt(static_cast<double>(n));
  });
  return out;
}

double sample_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability out of [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Interval percentile_interval(const ReplicateSet& replicates, double point,
                             double level) {
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("level must be in (0, 1)");
  if (replicates.draws.size() < 20)
    throw PlanError("percentile intervals need at least 20 replicates");
  std::vector<double> sorted = replicates.draws;
  std::sort(sorted.begin(), sorted.end());
  const double alpha = 1.0 - level;
  const double q_low = sample_quantile(sorted, alpha / 2.0);
  const double q_high = sample_quantile(sorted, 1.0 - alpha / 2.0);
  return {point - q_high / replicates.rate, point - q_low / replicates.rate};
}

double tail_pvalue(std::span<const double> draws, double observed) {
  if (draws.empty()) throw PlanError("need at least one replicate");
  const auto exceed = std::count_if(draws.begin(), draws.end(),
                                    [observed](double d) { return d > observed; });
  return (1.0 + static_cast<double>(exceed)) /
         (static_cast<double>(draws.size()) + 1.0);
}

double bootstrap_standard_error(const ReplicateSet& replicates) {
  const auto& d = replicates.draws;
  if (d.size() < 2) throw PlanError("need at least two replicates");
  const double mean = pairwise_sum(d) / static_cast<double>(d.size());
  const double ss = pairwise_sum(d.size(), [&](std::size_t i) {
    return (d[i] - mean) * (d[i] - mean);
  });
  return std::sqrt(ss / static_cast<double>(d.size() - 1)) / replicates.rate;
}

}  // namespace exarray
