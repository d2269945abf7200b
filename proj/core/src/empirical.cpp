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

#include "exarray/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exarray/error.hpp"
#include "exarray/summation.hpp"

namespace exarray {

Statistic Statistic::component(std::size_t j) {
  return {[j](std::span<const double> y) { return y[j]; },
          "v" + std::to_string(j + 1)};
}

Statistic Statistic::constant(double c) {
  return {[c](std::span<const double>) { return c; }, "constant"};
}

Statistic Statistic::indicator_at_most(std::size_t j, double u) {
  return {[j, u](std::span<const double> y) { return y[j] <= u ? 1.0 : 0.0; },
          "1{v" + std::to_string(j + 1) + "<=u}"};
}

namespace {

template <class Array>
std::vector<double> evaluate_cells(const Array& array, const Statistic& f) {
  if (!f.eval) throw EvaluationError("statistic has no function", 0);
  std::vector<double> out(array.cell_count());
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r] = f.eval(array.cell(r));
    if (!std::isfinite(out[r]))
      throw EvaluationError("statistic '" + f.label +
                                "' is not finite at cell " + std::to_string(r),
                            r);
  }
  return out;
}

double mean_of(std::span<const double> values) {
  if (values.empty()) throw DomainError("empty array");
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double centered_cross(std::span<const double> a, std::span<const double> b,
                      double mean_a, double mean_b) {
  return pairwise_sum(a.size(), [&](std::size_t i) {
           return (a[i] - mean_a) * (b[i] - mean_b);
         }) /
         static_cast<double>(a.size());
}

}  // namespace

std::vector<double> evaluate(const JointArray& array, const Statistic& f) {
  return evaluate_cells(array, f);
}

std::vector<double> evaluate(const SeparateArray& array, const Statistic& f) {
  return evaluate_cells(array, f);
}

double empirical_mean(const JointArray& array, const Statistic& f) {
  return mean_of(evaluate(array, f));
}

double empirical_mean(const SeparateArray& array, const Statistic& f) {
  return mean_of(evaluate(array, f));
}

double empirical_process_value(const JointArray& array, const Statistic& f,
                               double pf) {
  if (!std::isfinite(pf)) throw DomainError("Pf must be finite");
  return std::sqrt(static_cast<double>(array.units())) *
         (empirical_mean(array, f) - pf);
}

double empirical_process_value(const SeparateArray& array, const Statistic& f,
                               double pf) {
  if (!std::isfinite(pf)) throw DomainError("Pf must be finite");
  return std::sqrt(static_cast<double>(array.min_dim())) *
         (empirical_mean(array, f) - pf);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : size_(values.size()) {
  if (values.empty()) throw DomainError("empty sample");
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    jumps_.push_back(values[i]);
    cumulative_.push_back(i + 1);
  }
}

double EmpiricalCdf::operator()(double u) const {
  const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), u);
  if (it == jumps_.begin()) return 0.0;
  const auto i = static_cast<std::size_t>(it - jumps_.begin()) - 1;
  return static_cast<double>(cumulative_[i]) / static_cast<double>(size_);
}

double EmpiricalCdf::quantile(double tau) const {
  if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("tau must be in (0, 1]");
  // Smallest jump whose count reaches tau * size, compared in counts so that
  // exact ties such as tau = 1/2 with an even sample resolve to the lower
  // value.
  const double target = tau * static_cast<double>(size_);
  for (std::size_t i = 0; i < jumps_.size(); ++i)
    if (static_cast<double>(cumulative_[i]) >= target) return jumps_[i];
  return jumps_.back();
}

std::size_t EmpiricalCdf::multiplicity(double y) const {
  const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), y);
  if (it == jumps_.end() || *it != y) return 0;
  const auto i = static_cast<std::size_t>(it - jumps_.begin());
  return cumulative_[i] - (i == 0 ? 0 : cumulative_[i - 1]);
}

EmpiricalCdf empirical_cdf(const JointArray& array, std::size_t component) {
  if (component >= array.dim()) throw DomainError("component out of range");
  std::vector<double> values(array.cell_count());
  for (std::size_t r = 0; r < values.size(); ++r)
    values[r] = array.value(r, component);
  return EmpiricalCdf(std::move(values));
}

std::vector<double> unit_projections(std::span<const Unit> tuples,
                                     std::size_t arity, std::size_t units,
                                     std::span<const double> values,
                                     std::size_t p,
                                     std::vector<std::size_t>* counts) {
  const std::size_t rows = arity == 0 ? 0 : tuples.size() / arity;
  if (rows == 0 || values.size() != rows * p)
    throw DomainError("projection input sizes disagree");
  std::vector<double> means(p);
  for (std::size_t c = 0; c < p; ++c)
    means[c] = pairwise_sum(rows, [&](std::size_t r) {
                 return values[r * p + c];
               }) /
               static_cast<double>(rows);

  std::vector<double> sums(units * p, 0.0);
  std::vector<std::size_t> count(units, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t q = 0; q < arity; ++q) {
      const Unit a = tuples[r * arity + q];
      ++count[a];
      for (std::size_t c = 0; c < p; ++c)
        sums[a * p + c] += values[r * p + c] - means[c];
    }
  }
  for (std::size_t a = 0; a < units; ++a)
    if (count[a] > 0)
      for (std::size_t c = 0; c < p; ++c)
        sums[a * p + c] /= static_cast<double>(count[a]);
  if (counts != nullptr) *counts = std::move(count);
  return sums;
}

KernelEstimate estimate_kernel_joint(const JointArray& array,
                                     const Statistic& f1,
                                     const Statistic& f2) {
  const std::size_t n = array.units();
  const std::size_t k = array.arity();
  if (n <= k)
    throw DegenerateSampleError("kernel estimation needs more units than arity");
  const std::vector<double> v1 = evaluate(array, f1);
  const std::vector<double> v2 = evaluate(array, f2);
  std::vector<double> both(2 * v1.size());
  for (std::size_t r = 0; r < v1.size(); ++r) {
    both[2 * r] = v1[r];
    both[2 * r + 1] = v2[r];
  }
  const std::vector<double> g =
      unit_projections(array.tuples(), k, n, both, 2);

  KernelEstimate est;
  est.units = n;
  est.arity = k;
  est.projections_first.resize(n);
  est.projections_second.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    est.projections_first[a] = g[2 * a];
    est.projections_second[a] = g[2 * a + 1];
  }
  const double kk = static_cast<double>(k * k);
  est.value = kk / static_cast<double>(n) *
              pairwise_sum(n, [&](std::size_t a) {
                return g[2 * a] * g[2 * a + 1];
              });
  const double per_unit = static_cast<double>(array.cell_count() * k) /
                          static_cast<double>(n);
  est.noise_floor = kk *
                    centered_cross(v1, v2, mean_of(v1), mean_of(v2)) / per_unit;
  return est;
}

SeparateKernelEstimate estimate_kernel_separate(const SeparateArray& array,
                                                const Statistic& f1,
                                                const Statistic& f2) {
  const auto dims = array.dims();
  for (std::size_t n : dims)
    if (n < 2)
      throw DegenerateSampleError(
          "kernel estimation needs at least two units per dimension");
  const std::vector<double> v1 = evaluate(array, f1);
  const std::vector<double> v2 = evaluate(array, f2);
  const double m1 = mean_of(v1);
  const double m2 = mean_of(v2);
  const std::size_t k = dims.size();
  const std::size_t cells = array.cell_count();

  SeparateKernelEstimate est;
  est.projections_first.resize(k);
  est.projections_second.resize(k);
  std::vector<Unit> index(k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    est.projections_first[j].assign(dims[j], 0.0);
    est.projections_second[j].assign(dims[j], 0.0);
  }
  for (std::size_t flat = 0; flat < cells; ++flat) {
    for (std::size_t j = 0; j < k; ++j) {
      est.projections_first[j][index[j]] += v1[flat] - m1;
      est.projections_second[j][index[j]] += v2[flat] - m2;
    }
    for (std::size_t j = k; j-- > 0;) {
      if (++index[j] < dims[j]) break;
      index[j] = 0;
    }
  }
  const double n_min = static_cast<double>(array.min_dim());
  for (std::size_t j = 0; j < k; ++j) {
    const double per_index =
        static_cast<double>(cells) / static_cast<double>(dims[j]);
    auto& g1 = est.projections_first[j];
    auto& g2 = est.projections_second[j];
    for (std::size_t a = 0; a < dims[j]; ++a) {
      g1[a] /= per_index;
      g2[a] /= per_index;
    }
    const double term = pairwise_sum(dims[j], [&](std::size_t a) {
                          return g1[a] * g2[a];
                        }) /
                        static_cast<double>(dims[j]);
    const double lambda = n_min / static_cast<double>(dims[j]);
    est.lambda.push_back(lambda);
    est.per_dimension.push_back(term);
    est.value += lambda * term;
  }
  return est;
}

}  // namespace exarray
