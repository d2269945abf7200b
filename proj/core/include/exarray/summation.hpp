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

#ifndef EXARRAY_SUMMATION_HPP_
#define EXARRAY_SUMMATION_HPP_

#include <cstddef>
#include <span>

namespace exarray {

// Pairwise (tree) summation of term(0) + ... + term(count - 1) with a fixed
// split schedule, so the result is bit-identical for a given count.
template <class Term>
double pairwise_sum(std::size_t begin, std::size_t end, const Term& term) {
  constexpr std::size_t kLeaf = 64;
  if (end - begin <= kLeaf) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

template <class Term>
double pairwise_sum(std::size_t count, const Term& term) {
  return pairwise_sum(std::size_t{0}, count, term);
}

inline double pairwise_sum(std::span<const double> values) {
  return pairwise_sum(values.size(),
                      [values](std::size_t i) { return values[i]; });
}

}  // namespace exarray

#endif  // EXARRAY_SUMMATION_HPP_
