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

#ifndef EXARRAY_MC_HPP_
#define EXARRAY_MC_HPP_

// Monte Carlo studies of the limit theorems on registered DGPs. Each run r
// uses its own seed derived from (config.seed, r), so a study is
// reproducible bit for bit regardless of the thread count.
//
// Config files are plain key = value lines; '#' starts a comment.
//
//   study = coverage            clt-variance | coverage | degenerate-limit |
//                               kernel | multiplier-agreement | ks-size |
//                               ppml-size
//   dgp = additive-uniform      any name from dgp_names()
//   dgp.k = 2                   DGP parameters
//   n = 50                      joint arrays, or
//   dims = 30,120               separate arrays
//   statistic = mean            mean | median
//   scheme = polyadic-multinomial  | pigeonhole | multiplier
//   multiplier = normal         normal | rademacher
//   recentering = self-normalized  | empirical-mean | bootstrap-expectation
//   B = 199
//   R = 500
//   seed = 1
//   level = 0.95
//   alpha = 0.05
//   threads = 0
//   target = 0.3333             overrides the analytic kernel
//   reference_draws = 1000000
//   assumptions = iid,dyadic    ks-size / ppml-size columns
//   coefficient = 4             ppml-size coordinate
//   band.coverage = 0.91,0.98   pre-registered acceptance band

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exarray/bootstrap.hpp"
#include "exarray/dgp.hpp"

namespace exarray {

struct Band {
  double lower = 0.0;
  double upper = 0.0;
};

struct McConfig {
  std::string study;
  std::string dgp;
  DgpParams dgp_params;
  std::size_t n = 0;
  std::vector<std::size_t> dims;
  std::string statistic = "mean";
  Scheme scheme = Scheme::kPolyadicMultinomial;
  MultiplierDistribution multiplier = MultiplierDistribution::kStandardNormal;
  Recentering recentering = Recentering::kSelfNormalized;
  std::size_t replicates = 199;  // B
  std::size_t runs = 500;        // R
  std::uint64_t seed = 1;
  double level = 0.95;
  double alpha = 0.05;
  unsigned threads = 0;
  std::optional<double> target;
  std::size_t reference_draws = 1000000;
  std::vector<std::string> assumptions;
  std::size_t coefficient = 4;
  std::vector<std::pair<std::string, Band>> bands;

  // Throws ConfigError on inconsistent settings (R < 50, B < 19, ...).
  void validate() const;
  // Canonical key = value text; parsing it back gives an equal config.
  std::string to_text() const;
};

// Throws ConfigError naming the offending line.
McConfig parse_mc_config(std::istream& in);
McConfig parse_mc_config_text(std::string_view text);
McConfig load_mc_config(const std::string& path);

struct BandResult {
  std::string metric;
  Band band;
  double value = 0.0;
  bool pass = false;
};

struct McSummary {
  std::string study;
  std::size_t runs = 0;
  // Ordered as produced by the study.
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<BandResult> bands;
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;

  std::optional<double> metric(std::string_view name) const;
  bool passed() const;
};

// sqrt(p (1 - p) / R).
double binomial_mc_se(double rate, std::size_t runs);

McSummary clt_variance_study(const McConfig& config);
McSummary coverage_study(const McConfig& config);
McSummary degenerate_limit_study(const McConfig& config);
McSummary kernel_study(const McConfig& config);
McSummary multiplier_agreement_study(const McConfig& config);
McSummary ks_size_study(const McConfig& config);
McSummary ppml_size_study(const McConfig& config);

// Dispatches on config.study and evaluates the bands. Throws ConfigError for
// an unknown study or a band naming a metric the study does not produce.
McSummary run_study(const McConfig& config);

std::vector<std::string> study_names();

}  // namespace exarray

#endif  // EXARRAY_MC_HPP_
