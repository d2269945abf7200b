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

#ifndef EXARRAY_EMPIRICAL_HPP_
#define EXARRAY_EMPIRICAL_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "exarray/arrays.hpp"

namespace exarray {

// A real function of one observation vector.
struct Statistic {
  std::function<double(std::span<const double>)> eval;
  std::string label;

  static Statistic component(std::size_t j);
  static Statistic constant(double c);
  // 1{y_j <= u}
  static Statistic indicator_at_most(std::size_t j, double u);
};

// f(Y_i) for every cell, in storage order. Throws EvaluationError naming the
// first cell where f is not finite.
std::vector<double> evaluate(const JointArray& array, const Statistic& f);
std::vector<double> evaluate(const SeparateArray& array, const Statistic& f);

// P_n f: the average of f over all cells.
double empirical_mean(const JointArray& array, const Statistic& f);
double empirical_mean(const SeparateArray& array, const Statistic& f);

// sqrt(n) (P_n f - pf); for separate arrays the rate is sqrt(min_j n_j).
double empirical_process_value(const JointArray& array, const Statistic& f,
                               double pf);
double empirical_process_value(const SeparateArray& array, const Statistic& f,
                               double pf);

// Right-continuous step function putting equal mass on every sample value.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values);

  double operator()(double u) const;
  // Distinct sample values, ascending.
  std::span<const double> jumps() const noexcept { return jumps_; }
  // Number of sample values <= jumps()[i].
  std::span<const std::size_t> cumulative_counts() const noexcept {
    return cumulative_;
  }
  std::size_t size() const noexcept { return size_; }
  // Left-continuous generalized inverse inf{y : F(y) >= tau}, tau in (0, 1].
  double quantile(double tau) const;
  // Number of sample values equal to y.
  std::size_t multiplicity(double y) const;

 private:
  std::vector<double> jumps_;
  std::vector<std::size_t> cumulative_;
  std::size_t size_;
};

EmpiricalCdf empirical_cdf(const JointArray& array, std::size_t component);

// Plug-in estimate of the limiting covariance K(f1, f2) of sqrt(n)(P_n - P)
// for a joint array, built from per-unit projections
//   g_f(a) = mean over tuples containing a of (f(Y_i) - P_n f),
//   K = (k^2 / n) sum_a g_f1(a) g_f2(a).
struct KernelEstimate {
  double value = 0.0;
  std::vector<double> projections_first;
  std::vector<double> projections_second;
  std::size_t units = 0;
  std::size_t arity = 0;
  // Expected value of the estimate if the cells were i.i.d. with the
  // observed (co)variance: k^2 cov / m, m = tuples per unit. A value close
  // to this floor signals a degenerate (K = 0) design.
  double noise_floor = 0.0;

  bool near_degenerate(double ratio = 3.0) const {
    return value <= ratio * noise_floor;
  }
};

KernelEstimate estimate_kernel_joint(const JointArray& array,
                                     const Statistic& f1,
                                     const Statistic& f2);

// Separate-array kernel
//   K_lambda = sum_j lambda_j (1/n_j) sum_a g^j_f1(a) g^j_f2(a),
// with g^j_f(a) the centered mean of f over cells whose j-th index is a and
// lambda_j = min_l n_l / n_j.
struct SeparateKernelEstimate {
  double value = 0.0;
  std::vector<double> lambda;
  std::vector<double> per_dimension;  // (1/n_j) sum_a g^j_f1 g^j_f2
  std::vector<std::vector<double>> projections_first;
  std::vector<std::vector<double>> projections_second;
};

SeparateKernelEstimate estimate_kernel_separate(const SeparateArray& array,
                                                const Statistic& f1,
                                                const Statistic& f2);

// Per-unit projections of p-dimensional row values. `tuples` holds the units
// of each row (arity entries per row). Values are row-major (rows x p) and
// are centered at their column means before averaging. Output is row-major
// (units x p); units that appear in no row get zeros. `counts`, if given,
// receives the number of rows containing each unit.
std::vector<double> unit_projections(std::span<const Unit> tuples,
                                     std::size_t arity, std::size_t units,
                                     std::span<const double> values,
                                     std::size_t p,
                                     std::vector<std::size_t>* counts = nullptr);

}  // namespace exarray

#endif  // EXARRAY_EMPIRICAL_HPP_
