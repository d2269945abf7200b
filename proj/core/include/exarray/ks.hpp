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

#ifndef EXARRAY_KS_HPP_
#define EXARRAY_KS_HPP_

// Paired Kolmogorov-Smirnov test of equal marginals for two components of a
// dyadic array, with bootstrap p-values under several dependence
// assumptions.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exarray/arrays.hpp"
#include "exarray/bootstrap.hpp"

namespace exarray {

enum class KsAssumption {
  kIid,             // multinomial over cells
  kPairwise,        // multinomial over unordered pairs
  kOnewayExporter,  // multinomial over first-index units
  kOnewayImporter,  // multinomial over second-index units
  kDyadic,          // polyadic multinomial
};

// Report column order.
inline constexpr std::array<KsAssumption, 5> kKsAssumptions = {
    KsAssumption::kIid, KsAssumption::kPairwise,
    KsAssumption::kOnewayExporter, KsAssumption::kOnewayImporter,
    KsAssumption::kDyadic};

std::string_view to_string(KsAssumption assumption);
// Throws ConfigError on an unknown name.
KsAssumption parse_ks_assumption(std::string_view name);

// Pooled jump grid of D(u) = P_n(1{Y^a <= u} - 1{Y^b <= u}). The difference
// process is right-continuous and constant between pooled sample values, so
// its sup is attained on that grid.
class KsGrid {
 public:
  KsGrid(const JointArray& array, std::size_t comp_a, std::size_t comp_b);

  std::size_t cells() const noexcept { return cells_; }
  double statistic() const noexcept { return statistic_; }
  // Smallest grid point attaining the statistic.
  double argmax() const noexcept { return argmax_; }
  std::span<const double> grid() const noexcept { return grid_; }

  // sup_u | (1/N) sum_i (w_i - 1)(1{Y^a_i <= u} - 1{Y^b_i <= u}) | over the
  // grid, w holding one weight per cell in storage order.
  double recentered_sup(std::span<const double> weights) const;

  // D(u) at an arbitrary point.
  double difference_at(double u) const;

 private:
  struct Event {
    double value;
    std::uint32_t cell;
    int sign;  // +1 for component a, -1 for component b
  };
  std::size_t cells_ = 0;
  std::vector<Event> events_;       // sorted by value
  std::vector<std::size_t> ends_;   // one past the last event of each group
  std::vector<double> grid_;
  double statistic_ = 0.0;
  double argmax_ = 0.0;
};

// Per-cell bootstrap weights for one replicate under an assumption.
std::vector<double> ks_cell_weights(const JointArray& array,
                                    KsAssumption assumption, StreamRng& rng);

struct KsResult {
  double statistic = 0.0;
  double argmax = 0.0;
  std::size_t replicates = 0;
  std::map<std::string, double, std::less<>> pvalues;
  std::map<std::string, std::vector<double>, std::less<>> draws;
  std::vector<std::string> warnings;
};

// Dyadic (polyadic multinomial) bootstrap only. Requires k = 2 and d >= 2.
KsResult ks_paired(const JointArray& array, std::size_t comp_a,
                   std::size_t comp_b, const BootstrapPlan& plan);

// P-values under each requested assumption (all five by default). The
// dyadic column uses the same replicate streams as ks_paired.
KsResult ks_compare_assumptions(const JointArray& array, std::size_t comp_a,
                                std::size_t comp_b, std::size_t replicates,
                                std::uint64_t seed,
                                std::span<const KsAssumption> assumptions =
                                    kKsAssumptions,
                                unsigned threads = 1);

// p-value of a KS statistic from recentered draws: tail_pvalue, except that
// a zero statistic (identical empirical marginals) gives 1.
double ks_pvalue(std::span<const double> draws, double statistic);

// sup |F_a - F_b| for two i.i.d. samples.
double two_sample_ks_distance(std::vector<double> a, std::vector<double> b);

}  // namespace exarray

#endif  // EXARRAY_KS_HPP_
