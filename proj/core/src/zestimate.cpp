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

#include "exarray/zestimate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "exarray/error.hpp"
#include "exarray/summation.hpp"

namespace exarray {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_model(const MomentModel& model, std::size_t start_size) {
  if (!model.psi) throw DomainError("moment model has no psi");
  if (model.parameters == 0) throw DomainError("need at least one parameter");
  if (start_size != model.parameters)
    throw DomainError("starting value has wrong dimension");
}

Eigen::MatrixXd mean_jacobian(const JointArray& array, const MomentModel& model,
                              std::span<const double> theta, double fd_step) {
  const std::size_t p = model.parameters;
  Eigen::MatrixXd jac(p, p);
  if (model.jacobian) {
    std::vector<double> cell(p * p);
    std::vector<double> total(p * p, 0.0);
    for (std::size_t r = 0; r < array.cell_count(); ++r) {
      model.jacobian(array.cell(r), theta, cell);
      for (std::size_t e = 0; e < p * p; ++e) total[e] += cell[e];
    }
    for (std::size_t rr = 0; rr < p; ++rr)
      for (std::size_t c = 0; c < p; ++c)
        jac(rr, c) = total[rr * p + c] / static_cast<double>(array.cell_count());
    return jac;
  }
  std::vector<double> shifted(theta.begin(), theta.end());
  for (std::size_t c = 0; c < p; ++c) {
    const double h = fd_step * std::max(1.0, std::abs(theta[c]));
    shifted[c] = theta[c] + h;
    const auto up = moment_mean(array, model, shifted);
    shifted[c] = theta[c] - h;
    const auto down = moment_mean(array, model, shifted);
    shifted[c] = theta[c];
    for (std::size_t rr = 0; rr < p; ++rr) jac(rr, c) = (up[rr] - down[rr]) / (2 * h);
  }
  return jac;
}

ZResult newton(const JointArray& array, const MomentModel& model,
               std::span<const double> start, const ZOptions& options) {
  const std::size_t p = model.parameters;
  ZResult result;
  result.theta.assign(start.begin(), start.end());
  auto psi = moment_mean(array, model, result.theta);
  result.residual_norm = max_abs(psi);
  result.scale = 1.0 + result.residual_norm;
  const double target = options.tolerance * result.scale;

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    if (result.residual_norm <= target) return result;
    const Eigen::MatrixXd jac =
        mean_jacobian(array, model, result.theta, options.fd_step);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (lu.rank() < static_cast<Eigen::Index>(p))
      throw RankError("singular moment jacobian at iteration " +
                      std::to_string(it));
    const Eigen::VectorXd step =
        lu.solve(-Eigen::Map<const Eigen::VectorXd>(psi.data(), p));

    bool accepted = false;
    double t = 1.0;
    std::vector<double> trial(p);
    for (std::size_t h = 0; h <= options.max_halvings; ++h, t *= 0.5) {
      for (std::size_t c = 0; c < p; ++c) trial[c] = result.theta[c] + t * step[c];
      auto trial_psi = moment_mean(array, model, trial);
      const double norm = max_abs(trial_psi);
      if (std::isfinite(norm) && norm < result.residual_norm) {
        result.theta = trial;
        psi = std::move(trial_psi);
        result.residual_norm = norm;
        accepted = true;
        break;
      }
    }
    ++result.iterations;
    if (!accepted)
      throw ConvergenceError("line search failed to reduce the moment norm",
                             result.theta, result.residual_norm);
  }
  if (result.residual_norm <= target) return result;
  throw ConvergenceError("iteration cap reached", result.theta,
                         result.residual_norm);
}

ZResult bisection(const JointArray& array, const MomentModel& model,
                  std::span<const double> start, const ZOptions& options) {
  if (model.parameters != 1)
    throw DomainError("monotone bisection needs a scalar parameter");
  auto value = [&](double theta) {
    const double t[1] = {theta};
    return moment_mean(array, model, t)[0];
  };
  ZResult result;
  const double origin = start[0];
  result.scale = 1.0 + std::abs(value(origin));

  // Expand a symmetric bracket until both ends have strict, opposite signs.
  double span = std::max(1.0, std::abs(origin));
  double lo = origin - span;
  double hi = origin + span;
  double v_lo = value(lo);
  double v_hi = value(hi);
  std::size_t expansions = 0;
  while (!(v_lo * v_hi < 0.0)) {
    if (++expansions > 200 || !std::isfinite(span))
      throw ConvergenceError("no sign change found for monotone moment",
                             {origin}, std::abs(value(origin)));
    span *= 2.0;
    lo = origin - span;
    hi = origin + span;
    v_lo = value(lo);
    v_hi = value(hi);
  }
  // Predicate true to the right of the generalized root.
  const bool increasing = v_hi > 0.0;
  auto right_side = [&](double v) { return increasing ? v >= 0.0 : v <= 0.0; };

  for (;;) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (++result.iterations > options.max_iterations * 16)
      throw ConvergenceError("bisection did not collapse", {hi},
                             std::abs(value(hi)));
    if (right_side(value(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.theta = {hi};
  result.residual_norm = std::abs(value(hi));
  return result;
}

}  // namespace

std::vector<double> moment_mean(const JointArray& array,
                                const MomentModel& model,
                                std::span<const double> theta) {
  const std::size_t p = model.parameters;
  std::vector<double> cell_values(array.cell_count() * p);
  for (std::size_t r = 0; r < array.cell_count(); ++r)
    model.psi(array.cell(r), theta,
              std::span<double>(cell_values.data() + r * p, p));
  std::vector<double> out(p);
  for (std::size_t c = 0; c < p; ++c)
    out[c] = pairwise_sum(array.cell_count(), [&](std::size_t r) {
               return cell_values[r * p + c];
             }) /
             static_cast<double>(array.cell_count());
  return out;
}

ZResult zestimate(const JointArray& array, const MomentModel& model,
                  std::span<const double> start, const ZOptions& options) {
  check_model(model, start.size());
  if (options.method == ZMethod::kMonotoneBisection)
    return bisection(array, model, start, options);
  return newton(array, model, start, options);
}

}  // namespace exarray
