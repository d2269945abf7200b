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

#ifndef EXARRAY_BOOTSTRAP_HPP_
#define EXARRAY_BOOTSTRAP_HPP_

// Resampling schemes for exchangeable arrays.
//
//  * polyadic multinomial: units are drawn n times with replacement; a tuple
//    enters the replicate W_i = prod_j W_{i_j} times.
//  * pigeonhole: the same independently along each dimension of a grid.
//  * multiplier (k = 2): per-unit projection terms are perturbed by i.i.d.
//    mean-0, variance-1 multipliers.
//
// Replicate b draws its randomness from a counter-based substream keyed on
// (plan.seed, b), so a ReplicateSet is bit-identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "exarray/arrays.hpp"
#include "exarray/empirical.hpp"
#include "exarray/random.hpp"

namespace exarray {

enum class Scheme { kPolyadicMultinomial, kPigeonhole, kMultiplier };
enum class MultiplierDistribution { kStandardNormal, kRademacher };

// Form of the polyadic replicate sqrt(n)(P*_n f - c):
//  * kEmpiricalMean: c = P_n f.
//  * kBootstrapExpectation: c = P'_n f = n^{-k} sum_i f(Y_i), the
//    conditional mean of P*_n f.
//  * kSelfNormalized: P*_n f is replaced by the mean of the bootstrap sample,
//    sum_i W_i f(Y_i) / sum_i W_i, and c = P_n f.
enum class Recentering {
  kEmpiricalMean,
  kBootstrapExpectation,
  kSelfNormalized
};

std::string to_string(Scheme scheme);

struct BootstrapPlan {
  Scheme scheme = Scheme::kPolyadicMultinomial;
  std::size_t replicates = 999;
  std::uint64_t seed = 0;
  MultiplierDistribution multiplier = MultiplierDistribution::kStandardNormal;
  Recentering recentering = Recentering::kEmpiricalMean;
  unsigned threads = 1;  // 0 = hardware concurrency
};

// Per-dimension multiplicities: one vector for joint arrays, one per
// dimension for grids. Each vector sums to its dimension's unit count.
struct UnitWeights {
  std::vector<std::vector<std::uint32_t>> counts;

  // W_i for a joint-array tuple (single weight vector).
  double joint_weight(std::span<const Unit> tuple) const;
  // W_i for a grid index (one weight vector per dimension).
  double grid_weight(std::span<const Unit> index) const;
};

// Counts of `draws` uniform draws from {0, ..., categories-1}.
std::vector<std::uint32_t> multinomial_counts(std::size_t categories,
                                              std::size_t draws,
                                              StreamRng& rng);

UnitWeights draw_polyadic_weights(std::size_t n, StreamRng& rng);
UnitWeights draw_pigeonhole_weights(std::span<const std::size_t> dims,
                                    StreamRng& rng);

// Substream used by replicate b of a plan with the given seed.
StreamRng replicate_stream(std::uint64_t seed, std::size_t replicate);

struct ReplicateSet {
  std::vector<double> draws;
  Scheme scheme = Scheme::kPolyadicMultinomial;
  std::uint64_t seed = 0;
  // sqrt(n) for joint arrays, sqrt(min_j n_j) for grids: draws approximate
  // rate * (estimator - parameter).
  double rate = 1.0;
};

// sqrt(n) ((n-k)!/n! sum_i W_i v_i - centre) for one weight draw, where v
// holds f evaluated on the cells of `array`.
double joint_replicate(const JointArray& array, std::span<const double> values,
                       const UnitWeights& weights, double centre);

// sqrt(n) (sum_i W_i v_i / sum_i W_i - centre); 0 when every weight is 0.
double joint_replicate_normalized(const JointArray& array,
                                  std::span<const double> values,
                                  const UnitWeights& weights, double centre);

// sqrt(n_min) (1 / prod n_j) sum_i (W_i - 1) v_i for one weight draw.
double grid_replicate(const SeparateArray& array,
                      std::span<const double> values,
                      const UnitWeights& weights);

ReplicateSet bootstrap_process_joint(const JointArray& array,
                                     const Statistic& f,
                                     const BootstrapPlan& plan);

ReplicateSet bootstrap_process_separate(const SeparateArray& array,
                                        const Statistic& f,
                                        const BootstrapPlan& plan);

// Centered per-unit terms of the multiplier process,
//   h_a = (1/(n-1)) sum_{b != a} [f(Y_ab) + f(Y_ba)] - 2 P_n f.
std::vector<double> multiplier_terms(const JointArray& array,
                                     const Statistic& f);

ReplicateSet multiplier_process(const JointArray& array, const Statistic& f,
                                const BootstrapPlan& plan);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Type-7 (linear interpolation) sample quantile of sorted data, p in [0, 1].
double sample_quantile(std::span<const double> sorted, double p);

// Basic bootstrap interval [point - q_{1-a/2}/rate, point - q_{a/2}/rate],
// with q the type-7 quantiles of the draws and a = 1 - level.
Interval percentile_interval(const ReplicateSet& replicates, double point,
                             double level);

// (1 + #{draws > observed}) / (B + 1).
double tail_pvalue(std::span<const double> draws, double observed);

// Standard deviation of draws / rate: the bootstrap standard error of the
// estimator.
double bootstrap_standard_error(const ReplicateSet& replicates);

}  // namespace exarray

#endif  // EXARRAY_BOOTSTRAP_HPP_
