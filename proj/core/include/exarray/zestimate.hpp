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

#ifndef EXARRAY_ZESTIMATE_HPP_
#define EXARRAY_ZESTIMATE_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "exarray/arrays.hpp"

namespace exarray {

// Moment condition psi(y, theta) with values in R^p, p = parameters.
struct MomentModel {
  using Psi = std::function<void(std::span<const double> y,
                                 std::span<const double> theta,
                                 std::span<double> out)>;
  std::size_t parameters = 1;
  Psi psi;
  // Optional d psi_r / d theta_c, row-major p x p. Central finite
  // differences of the averaged moment are used when absent.
  Psi jacobian;
};

enum class ZMethod {
  // Damped Newton on the averaged moment.
  kNewton,
  // Scalar monotone moments, including step functions such as the median
  // moment 1{y <= theta} - 1/2. Returns the leftmost point of the sign change,
  // i.e. inf{theta : psi_n(theta) >= 0} for increasing moments.
  kMonotoneBisection,
};

struct ZOptions {
  ZMethod method = ZMethod::kNewton;
  std::size_t max_iterations = 200;
  // Converged when max |Psi_n| <= tolerance * (1 + max |Psi_n(start)|).
  double tolerance = 1e-8;
  std::size_t max_halvings = 40;
  double fd_step = 1e-6;
};

struct ZResult {
  std::vector<double> theta;
  std::size_t iterations = 0;
  double residual_norm = 0.0;  // max |Psi_n(theta)|
  double scale = 1.0;          // 1 + max |Psi_n(start)|
};

// Psi_n(theta) = P_n psi(., theta).
std::vector<double> moment_mean(const JointArray& array,
                                const MomentModel& model,
                                std::span<const double> theta);

ZResult zestimate(const JointArray& array, const MomentModel& model,
                  std::span<const double> start, const ZOptions& options = {});

}  // namespace exarray

#endif  // EXARRAY_ZESTIMATE_HPP_
