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

#ifndef EXARRAY_DGP_HPP_
#define EXARRAY_DGP_HPP_

// Registered data generating processes with known population quantities.
//
//   additive-uniform    Y = sum_j U_{i_j} + U_i; mean (k+1)/2, K = k^2/12.
//   separable-additive  Y_ij = U_i + V_j + U_ij on a grid;
//                       K_lambda = (lambda_1 + lambda_2) / 12.
//   product-degenerate  Y_ab = X_a X_b, X ~ N(0,1); K = 0, n P_n -> Z^2 - 1.
//   iid-pair            Y_ab = U_{ab} (shared by both orientations unless
//                       symmetric = 0); K = 0.
//   constant            Y = c.
//   poisson-gravity     (T, g_exp, g_imp, log d, z, ...) with
//                       E[T | X] = exp(X theta).
//   ks-null-dyadic      two components with equal marginals and shared
//                       exporter / importer effects.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exarray/ahk.hpp"

namespace exarray {

using DgpParams = std::map<std::string, double, std::less<>>;

struct Dgp {
  std::string name;
  DgpParams params;
  AhkModel model;
  bool joint = true;
  bool separate = false;
  // Population mean of component 0 (NaN if not tracked).
  double mean = 0.0;
  // Population median of component 0 (NaN if unknown).
  double median = 0.0;
  // K(f, f) of the identity on component 0 for joint arrays.
  double kernel = 0.0;
  // Per-dimension K of the identity on component 0 for grids:
  // K_lambda = sum_j lambda_j kernel_per_dimension[j].
  std::vector<double> kernel_per_dimension;
  // Coefficients for poisson-gravity, in design order (intercept first).
  std::vector<double> theta;
  std::vector<std::string> component_names;

  double separate_kernel(std::span<const std::size_t> dims) const;
};

std::vector<std::string> dgp_names();

// Throws ConfigError for an unknown name, unknown parameter or bad value.
Dgp make_dgp(std::string_view name, const DgpParams& params = {});

}  // namespace exarray

#endif  // EXARRAY_DGP_HPP_
