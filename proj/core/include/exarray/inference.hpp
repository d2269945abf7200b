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

#ifndef EXARRAY_INFERENCE_HPP_
#define EXARRAY_INFERENCE_HPP_

// Standard errors, p-values and intervals for PPML coefficients under
// competing dependence assumptions.

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "exarray/bootstrap.hpp"
#include "exarray/ppml.hpp"

namespace exarray {

inline constexpr std::string_view kIid = "iid";
inline constexpr std::string_view kPairwise = "pairwise";
inline constexpr std::string_view kOnewayExporter = "oneway-exporter";
inline constexpr std::string_view kOnewayImporter = "oneway-importer";
inline constexpr std::string_view kDyadicKernel = "dyadic-kernel";
inline constexpr std::string_view kDyadicBootstrap = "dyadic-bootstrap";

// Report column order.
inline constexpr std::array<std::string_view, 6> kAssumptions = {
    kIid, kPairwise, kOnewayExporter, kOnewayImporter, kDyadicKernel,
    kDyadicBootstrap};

struct InferenceDiagnostics {
  std::size_t iterations = 0;
  double score_norm = 0.0;
  std::vector<std::string> warnings;
  // Coordinates whose dyadic-kernel variance clamped to 0.
  std::vector<std::size_t> degenerate;
  std::size_t bootstrap_replicates = 0;
  std::size_t bootstrap_failures = 0;
};

struct InferenceReport {
  std::vector<std::string> names;
  std::vector<double> theta;
  double level = 0.95;
  // Keyed by assumption name. A NaN p-value is withheld.
  std::map<std::string, std::vector<double>, std::less<>> se;
  std::map<std::string, std::vector<double>, std::less<>> pvalues;
  std::map<std::string, std::vector<Interval>, std::less<>> ci;
  InferenceDiagnostics diagnostics;

  bool has(std::string_view assumption) const {
    return se.find(assumption) != se.end();
  }
};

// Sandwich pieces for the sum-form moment: A = sum_i mu_i X_i X_i', and B per
// assumption.
struct SandwichParts {
  Eigen::MatrixXd bread;
  std::map<std::string, Eigen::MatrixXd, std::less<>> meat;
};

SandwichParts sandwich_parts(const GravityData& data,
                             std::span<const double> theta);

// Fills se, p-values and normal intervals for iid, pairwise, both one-way
// clusterings and the dyadic kernel.
InferenceReport variance_compare(const GravityData& data, const PpmlFit& fit,
                                 double level = 0.95);

// Adds the dyadic-bootstrap column: refits on polyadic replicate weights,
// p_j = (1 + #{|t*_j - t_j| > |t_j|}) / (B_ok + 1). Requires a polyadic plan.
void ppml_bootstrap_pvalues(const GravityData& data, const PpmlFit& fit,
                            const BootstrapPlan& plan, InferenceReport& report,
                            const PpmlOptions& options = {});

// Two-sided normal p-value for estimate / se; NaN when se is 0.
double normal_pvalue(double estimate, double se);
// Standard normal quantile.
double normal_quantile(double p);

}  // namespace exarray

#endif  // EXARRAY_INFERENCE_HPP_
