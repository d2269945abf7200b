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

#include "exarray/ppml.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exarray/error.hpp"

namespace exarray {

namespace {

// exp overflows just above 709.78.
constexpr double kMaxLinearIndex = 700.0;

double weight_at(std::span<const double> weights, std::size_t i) {
  return weights.empty() ? 1.0 : weights[i];
}

bool all_ones(const Eigen::MatrixXd& design, Eigen::Index column) {
  return (design.col(column).array() == 1.0).all();
}

// Returns false if some linear index would overflow.
bool fitted_means(const GravityData& data, const Eigen::VectorXd& theta,
                  Eigen::VectorXd& mu) {
  const Eigen::VectorXd eta = data.design * theta;
  if (!eta.allFinite() || eta.maxCoeff() > kMaxLinearIndex) return false;
  mu = eta.array().exp();
  return true;
}

double deviance(const GravityData& data, const Eigen::VectorXd& mu,
                std::span<const double> weights) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double t = data.flow[i];
    const double term = (t > 0.0 ? t * std::log(t / mu[i]) : 0.0) - (t - mu[i]);
    d += weight_at(weights, static_cast<std::size_t>(i)) * term;
  }
  return 2.0 * d;
}

void check_rank(const GravityData& data, std::span<const double> weights) {
  const Eigen::Index rows = data.design.rows();
  Eigen::Index used = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    if (weight_at(weights, static_cast<std::size_t>(i)) > 0.0) ++used;
  Eigen::MatrixXd active(used, data.design.cols());
  for (Eigen::Index i = 0, r = 0; i < rows; ++i)
    if (weight_at(weights, static_cast<std::size_t>(i)) > 0.0)
      active.row(r++) = data.design.row(i);
  // Scale columns so the rank threshold is not dominated by units.
  for (Eigen::Index c = 0; c < active.cols(); ++c) {
    const double norm = active.col(c).norm();
    if (norm > 0.0) active.col(c) /= norm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(active);
  qr.setThreshold(1e-10);
  if (qr.rank() == active.cols()) return;
  std::vector<std::string> offending;
  std::string list;
  for (Eigen::Index c = qr.rank(); c < active.cols(); ++c) {
    const auto column = static_cast<std::size_t>(qr.colsPermutation().indices()[c]);
    offending.push_back(data.names[column]);
    list += (list.empty() ? "" : ", ") + data.names[column];
  }
  throw CollinearityError("design matrix is rank deficient; collinear: " + list,
                          offending);
}

}  // namespace

void GravityData::validate() const {
  const auto n = static_cast<Eigen::Index>(rows());
  if (importer.size() != exporter.size() || flow.size() != n ||
      design.rows() != n || names.size() != parameters())
    throw DomainError("gravity data sizes disagree");
  if (n == 0 || parameters() == 0) throw DomainError("empty gravity data");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(flow[i] >= 0.0) || !std::isfinite(flow[i]))
      throw DomainError("flow must be finite and non-negative (row " +
                        std::to_string(i) + ")");
    const auto e = static_cast<std::size_t>(i);
    if (exporter[e] >= units || importer[e] >= units ||
        exporter[e] == importer[e])
      throw DomainError("invalid pair at row " + std::to_string(i));
  }
  if (!design.allFinite()) throw DomainError("regressors must be finite");
}

GravityData gravity_from_table(const DyadicTable& table,
                               const std::string& flow,
                               std::span<const std::string> regressors,
                               bool intercept) {
  auto column_of = [&](const std::string& name) {
    const auto it = std::find(table.columns.begin(), table.columns.end(), name);
    if (it == table.columns.end())
      throw ConfigError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - table.columns.begin());
  };
  const std::size_t flow_index = column_of(flow);
  std::vector<std::size_t> indices;
  for (const auto& r : regressors) indices.push_back(column_of(r));
  GravityData data = gravity_from_array(table.array, flow_index, indices,
                                        intercept);
  data.names.assign(intercept ? 1 : 0, kInterceptName);
  data.names.insert(data.names.end(), regressors.begin(), regressors.end());
  return data;
}

GravityData gravity_from_array(const JointArray& array, std::size_t flow,
                               std::span<const std::size_t> regressors,
                               bool intercept) {
  if (array.arity() != 2) throw DomainError("gravity data needs k = 2");
  if (flow >= array.dim()) throw ConfigError("flow component out of range");
  GravityData data;
  data.units = array.units();
  const auto rows = static_cast<Eigen::Index>(array.cell_count());
  const Eigen::Index offset = intercept ? 1 : 0;
  const auto p = offset + static_cast<Eigen::Index>(regressors.size());
  data.flow.resize(rows);
  data.design.resize(rows, p);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto rank = static_cast<std::size_t>(r);
    const auto t = array.tuple(rank);
    data.exporter.push_back(t[0]);
    data.importer.push_back(t[1]);
    data.flow[r] = array.value(rank, flow);
    if (intercept) data.design(r, 0) = 1.0;
    for (std::size_t c = 0; c < regressors.size(); ++c) {
      if (regressors[c] >= array.dim())
        throw ConfigError("regressor component out of range");
      data.design(r, offset + static_cast<Eigen::Index>(c)) =
          array.value(rank, regressors[c]);
    }
  }
  if (intercept) data.names.push_back(kInterceptName);
  for (std::size_t c : regressors) data.names.push_back("v" + std::to_string(c + 1));
  return data;
}

Eigen::VectorXd ppml_score(const GravityData& data,
                           std::span<const double> theta,
                           std::span<const double> weights) {
  const Eigen::Map<const Eigen::VectorXd> th(theta.data(),
                                             static_cast<Eigen::Index>(theta.size()));
  Eigen::VectorXd mu;
  if (!fitted_means(data, th, mu)) throw DomainError("exp(X theta) overflows");
  Eigen::VectorXd resid = data.flow - mu;
  double total = 0.0;
  for (Eigen::Index i = 0; i < resid.size(); ++i) {
    const double w = weight_at(weights, static_cast<std::size_t>(i));
    resid[i] *= w;
    total += w;
  }
  return data.design.transpose() * resid / total;
}

PpmlFit ppml_fit(const GravityData& data, const PpmlOptions& options,
                 std::span<const double> weights,
                 std::span<const double> start) {
  data.validate();
  const Eigen::Index p = data.design.cols();
  const Eigen::Index rows = data.design.rows();
  if (!weights.empty() && weights.size() != data.rows())
    throw DomainError("weight vector length differs from row count");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw DomainError("weights must be finite and non-negative");
  check_rank(data, weights);

  double total_weight = 0.0;
  double weighted_flow = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double w = weight_at(weights, static_cast<std::size_t>(i));
    total_weight += w;
    weighted_flow += w * data.flow[i];
  }
  const double mean_flow = weighted_flow / total_weight;
  if (!(mean_flow > 0.0)) throw DomainError("all flows are zero");

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  if (!start.empty()) {
    if (start.size() != static_cast<std::size_t>(p))
      throw DomainError("starting value has wrong dimension");
    theta = Eigen::Map<const Eigen::VectorXd>(start.data(), p);
  } else {
    for (Eigen::Index c = 0; c < p; ++c)
      if (all_ones(data.design, c)) {
        theta[c] = std::log(mean_flow);
        break;
      }
  }

  Eigen::VectorXd mu;
  if (!fitted_means(data, theta, mu))
    throw ConvergenceError("exp(X theta) overflows at the starting value",
                           {theta.data(), theta.data() + p},
                           std::numeric_limits<double>::infinity());
  double dev = deviance(data, mu, weights);
  const double score_target = options.score_tolerance * (1.0 + mean_flow);

  Eigen::VectorXd sqrt_w(rows);
  for (Eigen::Index i = 0; i < rows; ++i)
    sqrt_w[i] = std::sqrt(weight_at(weights, static_cast<std::size_t>(i)));

  PpmlFit fit;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    // Newton step for the canonical log link: solve
    //   min || sqrt(w mu) X step - sqrt(w / mu) (T - mu) ||.
    const Eigen::ArrayXd root_mu = mu.array().sqrt();
    const Eigen::MatrixXd lhs =
        data.design.array().colwise() * (sqrt_w.array() * root_mu);
    const Eigen::VectorXd rhs =
        (sqrt_w.array() * (data.flow - mu).array() / root_mu).matrix();
    const Eigen::VectorXd score =
        data.design.transpose() *
        (sqrt_w.array().square() * (data.flow - mu).array()).matrix() /
        total_weight;
    const double score_norm = score.cwiseAbs().maxCoeff();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(lhs);
    const Eigen::VectorXd step = qr.solve(rhs);
    const double step_norm = step.cwiseAbs().maxCoeff();
    const double theta_norm = theta.cwiseAbs().maxCoeff();
    if (score_norm <= score_target &&
        step_norm <= options.step_tolerance * (1.0 + theta_norm)) {
      fit.theta = theta;
      fit.iterations = it;
      fit.score_norm = score_norm;
      fit.deviance = dev;
      return fit;
    }
    if (!step.allFinite())
      throw ConvergenceError("non-finite IRLS step",
                             {theta.data(), theta.data() + p}, score_norm);

    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial_mu;
    for (std::size_t h = 0; h <= options.max_halvings; ++h, t *= 0.5) {
      const Eigen::VectorXd trial = theta + t * step;
      if (!fitted_means(data, trial, trial_mu)) continue;
      const double trial_dev = deviance(data, trial_mu, weights);
      // Allow round-off sized increases once the deviance is flat.
      if (std::isfinite(trial_dev) &&
          trial_dev <= dev + 1e-12 * (1.0 + std::abs(dev))) {
        theta = trial;
        mu = trial_mu;
        dev = trial_dev;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw ConvergenceError(
          "step halving failed (deviance increase or overflow in exp)",
          {theta.data(), theta.data() + p}, score_norm);
  }
  const Eigen::VectorXd score = ppml_score(
      data, std::span<const double>(theta.data(), static_cast<std::size_t>(p)),
      weights);
  throw ConvergenceError("IRLS iteration cap reached",
                         {theta.data(), theta.data() + p},
                         score.cwiseAbs().maxCoeff());
}

}  // namespace exarray
