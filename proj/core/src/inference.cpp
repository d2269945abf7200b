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

#include "exarray/inference.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <optional>

#include "exarray/empirical.hpp"
#include "exarray/error.hpp"
#include "exarray/parallel.hpp"

namespace exarray {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXd cluster_meat(const Eigen::MatrixXd& scores,
                             const std::vector<std::size_t>& cluster,
                             std::size_t clusters) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(clusters), scores.cols());
  for (Eigen::Index i = 0; i < scores.rows(); ++i)
    sums.row(static_cast<Eigen::Index>(cluster[static_cast<std::size_t>(i)])) +=
        scores.row(i);
  return sums.transpose() * sums;
}

// Returns true when a materially negative eigenvalue was clamped.
bool clamp_psd(Eigen::MatrixXd& m) {
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  Eigen::VectorXd values = eig.eigenvalues();
  const double top = std::max(values.cwiseAbs().maxCoeff(), 0.0);
  bool material = false;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values[i] < 0.0) {
      if (values[i] < -1e-10 * top) material = true;
      values[i] = 0.0;
    }
  m = eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
  return material;
}

}  // namespace

double normal_pvalue(double estimate, double se) {
  if (!(se > 0.0) || !std::isfinite(se)) return kNaN;
  return std::erfc(std::abs(estimate / se) / std::sqrt(2.0));
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

SandwichParts sandwich_parts(const GravityData& data,
                             std::span<const double> theta) {
  data.validate();
  const Eigen::Index p = data.design.cols();
  const Eigen::Index rows = data.design.rows();
  if (theta.size() != static_cast<std::size_t>(p))
    throw DomainError("theta has wrong dimension");
  const Eigen::Map<const Eigen::VectorXd> th(theta.data(), p);
  const Eigen::VectorXd mu = (data.design * th).array().exp();
  if (!mu.allFinite()) throw DomainError("exp(X theta) overflows");
  const Eigen::VectorXd resid = data.flow - mu;
  const Eigen::MatrixXd scores = data.design.array().colwise() * resid.array();

  SandwichParts parts;
  parts.bread = data.design.transpose() * (data.design.array().colwise() *
                                           mu.array()).matrix();
  parts.meat[std::string(kIid)] = scores.transpose() * scores;

  // Unordered pair clusters: both orientations share a cluster id.
  std::vector<std::size_t> pair(data.rows());
  std::vector<std::size_t> exporter(data.rows()), importer(data.rows());
  const std::size_t n = data.units;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const std::size_t a = std::min(data.exporter[i], data.importer[i]);
    const std::size_t b = std::max(data.exporter[i], data.importer[i]);
    pair[i] = a * n + b;
    exporter[i] = data.exporter[i];
    importer[i] = data.importer[i];
  }
  parts.meat[std::string(kPairwise)] = cluster_meat(scores, pair, n * n);
  parts.meat[std::string(kOnewayExporter)] = cluster_meat(scores, exporter, n);
  parts.meat[std::string(kOnewayImporter)] = cluster_meat(scores, importer, n);

  // Dyadic kernel on score projections, rescaled from the mean to the sum:
  // B = N^2 K / n with K = (k^2 / n) sum_a g_a g_a'.
  std::vector<Unit> tuples(2 * data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    tuples[2 * i] = data.exporter[i];
    tuples[2 * i + 1] = data.importer[i];
  }
  std::vector<double> flat(static_cast<std::size_t>(rows * p));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < p; ++c)
      flat[static_cast<std::size_t>(i * p + c)] = scores(i, c);
  const auto pu = static_cast<std::size_t>(p);
  const std::vector<double> g = unit_projections(tuples, 2, n, flat, pu);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
      proj(g.data(), static_cast<Eigen::Index>(n), p);
  const double nd = static_cast<double>(n);
  const double big_n = static_cast<double>(rows);
  const Eigen::MatrixXd kernel = (4.0 / nd) * proj.transpose() * proj;
  parts.meat[std::string(kDyadicKernel)] = (big_n * big_n / nd) * kernel;
  return parts;
}

InferenceReport variance_compare(const GravityData& data, const PpmlFit& fit,
                                 double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must be in (0, 1)");
  const auto p = static_cast<std::size_t>(fit.theta.size());
  InferenceReport report;
  report.names = data.names;
  report.theta.assign(fit.theta.data(), fit.theta.data() + p);
  report.level = level;
  report.diagnostics.iterations = fit.iterations;
  report.diagnostics.score_norm = fit.score_norm;

  SandwichParts parts = sandwich_parts(data, report.theta);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(parts.bread);
  if (!lu.isInvertible()) throw RankError("bread matrix is singular");
  const Eigen::MatrixXd inverse = lu.inverse();
  const double z = normal_quantile(0.5 + 0.5 * level);

  for (std::string_view name : kAssumptions) {
    auto it = parts.meat.find(name);
    if (it == parts.meat.end()) continue;
    Eigen::MatrixXd& meat = it->second;
    if (clamp_psd(meat))
      report.diagnostics.warnings.push_back(
          std::string(name) + ": meat matrix not PSD; negative eigenvalues "
                              "clamped to 0");
    const Eigen::MatrixXd v = inverse * meat * inverse.transpose();
    std::vector<double> se(p), pv(p);
    std::vector<Interval> ci(p);
    for (std::size_t j = 0; j < p; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double var = std::max(v(jj, jj), 0.0);
      se[j] = std::sqrt(var);
      pv[j] = normal_pvalue(report.theta[j], se[j]);
      ci[j] = {report.theta[j] - z * se[j], report.theta[j] + z * se[j]};
      if (name == kDyadicKernel && !(var > 0.0)) {
        report.diagnostics.degenerate.push_back(j);
        report.diagnostics.warnings.push_back(
            "dyadic-kernel variance of '" + data.names[j] +
            "' is zero: possible degenerate design; p-value withheld");
        pv[j] = kNaN;
      }
    }
    const std::string key(name);
    report.se[key] = std::move(se);
    report.pvalues[key] = std::move(pv);
    report.ci[key] = std::move(ci);
  }
  return report;
}

void ppml_bootstrap_pvalues(const GravityData& data, const PpmlFit& fit,
                            const BootstrapPlan& plan, InferenceReport& report,
                            const PpmlOptions& options) {
  if (plan.scheme != Scheme::kPolyadicMultinomial)
    throw PlanError("PPML bootstrap requires the polyadic multinomial scheme");
  if (plan.replicates < 1) throw PlanError("at least one replicate required");
  const auto p = static_cast<std::size_t>(fit.theta.size());
  const std::vector<double> theta(fit.theta.data(), fit.theta.data() + p);

  std::vector<std::optional<std::vector<double>>> draws(plan.replicates);
  parallel_for(plan.replicates, plan.threads, [&](std::size_t b) {
    StreamRng rng = replicate_stream(plan.seed, b);
    const UnitWeights w = draw_polyadic_weights(data.units, rng);
    std::vector<double> row_weights(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i)
      row_weights[i] = static_cast<double>(w.counts[0][data.exporter[i]]) *
                       static_cast<double>(w.counts[0][data.importer[i]]);
    try {
      const PpmlFit refit = ppml_fit(data, options, row_weights, theta);
      draws[b].emplace(refit.theta.data(), refit.theta.data() + p);
    } catch (const Error&) {
      // Dropped and counted below.
    }
  });

  std::vector<std::vector<double>> kept;
  for (auto& d : draws)
    if (d) kept.push_back(std::move(*d));
  const std::size_t failures = plan.replicates - kept.size();
  report.diagnostics.bootstrap_replicates = plan.replicates;
  report.diagnostics.bootstrap_failures = failures;
  if (10 * failures > plan.replicates)
    throw InferenceError(std::to_string(failures) + " of " +
                         std::to_string(plan.replicates) +
                         " bootstrap refits failed (more than 10%)");
  if (failures > 0)
    report.diagnostics.warnings.push_back(
        std::to_string(failures) + " bootstrap refits failed and were dropped");

  std::vector<double> se(p), pv(p);
  std::vector<Interval> ci(p);
  for (std::size_t j = 0; j < p; ++j) {
    ReplicateSet set;
    set.scheme = plan.scheme;
    set.seed = plan.seed;
    set.rate = 1.0;
    std::size_t exceed = 0;
    for (const auto& d : kept) {
      const double dev = d[j] - theta[j];
      set.draws.push_back(dev);
      if (std::abs(dev) > std::abs(theta[j])) ++exceed;
    }
    pv[j] = static_cast<double>(1 + exceed) /
            static_cast<double>(kept.size() + 1);
    se[j] = kept.size() > 1 ? bootstrap_standard_error(set) : 0.0;
    ci[j] = kept.size() >= 20
                ? percentile_interval(set, theta[j], report.level)
                : Interval{kNaN, kNaN};
  }
  const std::string key(kDyadicBootstrap);
  report.se[key] = std::move(se);
  report.pvalues[key] = std::move(pv);
  report.ci[key] = std::move(ci);
}

}  // namespace exarray
