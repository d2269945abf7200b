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

#ifndef EXARRAY_PPML_HPP_
#define EXARRAY_PPML_HPP_

// Poisson pseudo maximum likelihood for dyadic flows: solves
//   sum_i w_i X_i' (T_i - exp(X_i theta)) = 0
// by iteratively reweighted least squares with step halving on the Poisson
// deviance.

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "exarray/arrays.hpp"
#include "exarray/csv_io.hpp"

namespace exarray {

// One row per observed ordered pair. The design includes the intercept
// column when there is one.
struct GravityData {
  std::size_t units = 0;
  std::vector<Unit> exporter;
  std::vector<Unit> importer;
  Eigen::VectorXd flow;
  Eigen::MatrixXd design;
  std::vector<std::string> names;  // one per design column

  std::size_t rows() const noexcept { return exporter.size(); }
  std::size_t parameters() const noexcept {
    return static_cast<std::size_t>(design.cols());
  }
  // Checks sizes, T >= 0 and finiteness; throws DomainError.
  void validate() const;
};

inline constexpr const char* kInterceptName = "(intercept)";

// Builds gravity data from a dyadic table: `flow` names the flow column and
// `regressors` the covariates, in order. Throws ConfigError naming a
// missing column.
GravityData gravity_from_table(const DyadicTable& table,
                               const std::string& flow,
                               std::span<const std::string> regressors,
                               bool intercept = true);

// Same, directly from a joint array whose component `flow` is the flow and
// `regressors` are covariate components.
GravityData gravity_from_array(const JointArray& array, std::size_t flow,
                               std::span<const std::size_t> regressors,
                               bool intercept = true);

struct PpmlOptions {
  std::size_t max_iterations = 100;
  std::size_t max_halvings = 30;
  // max |mean score| <= score_tolerance * (1 + mean T)
  double score_tolerance = 1e-8;
  // max |step| <= step_tolerance * (1 + max |theta|)
  double step_tolerance = 1e-10;
};

struct PpmlFit {
  Eigen::VectorXd theta;
  std::size_t iterations = 0;
  double score_norm = 0.0;  // max |mean score| at theta
  double deviance = 0.0;
};

// `weights` (empty = all ones) multiply each row's score contribution;
// `start` (empty = intercept at log mean T, slopes 0) warm-starts IRLS.
PpmlFit ppml_fit(const GravityData& data, const PpmlOptions& options = {},
                 std::span<const double> weights = {},
                 std::span<const double> start = {});

// Mean score (1/sum w) sum_i w_i X_i (T_i - exp(X_i theta)).
Eigen::VectorXd ppml_score(const GravityData& data,
                           std::span<const double> theta,
                           std::span<const double> weights = {});

}  // namespace exarray

#endif  // EXARRAY_PPML_HPP_
