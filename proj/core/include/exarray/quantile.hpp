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

#ifndef EXARRAY_QUANTILE_HPP_
#define EXARRAY_QUANTILE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "exarray/arrays.hpp"
#include "exarray/bootstrap.hpp"

namespace exarray {

struct QuantileEstimate {
  double point = 0.0;
  Interval interval;
  // Cells on two different unit sets tie at the point estimate; the
  // delta-method argument needs a positive density there, so the interval
  // may be unreliable.
  bool atom = false;
  std::vector<std::string> warnings;
  ReplicateSet replicates;
};

// inf{y : sum_{i: y_i <= y} w_i >= tau sum_i w_i} over values sorted
// ascending with matching weights. Returns `fallback` when all weights are 0.
double weighted_quantile(std::span<const double> sorted_values,
                         std::span<const double> weights, double tau,
                         double fallback);

// Plug-in quantile F^{-1}(tau) of one component with a polyadic bootstrap
// basic interval at `level`.
QuantileEstimate quantile_estimate(const JointArray& array,
                                   std::size_t component, double tau,
                                   const BootstrapPlan& plan,
                                   double level = 0.95);

}  // namespace exarray

#endif  // EXARRAY_QUANTILE_HPP_
