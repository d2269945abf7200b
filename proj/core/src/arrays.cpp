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

#include "exarray/arrays.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "exarray/error.hpp"

namespace exarray {

bool TupleIndex::distinct() const noexcept {
  for (std::size_t a = 0; a < entries_.size(); ++a)
    for (std::size_t b = a + 1; b < entries_.size(); ++b)
      if (entries_[a] == entries_[b]) return false;
  return true;
}

std::size_t falling_factorial(std::size_t n, std::size_t k) {
  if (n < k) throw DomainError("sample smaller than arity");
  std::size_t result = 1;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t factor = n - i;
    if (result > std::numeric_limits<std::size_t>::max() / factor)
      throw DomainError("tuple count overflows");
    result *= factor;
  }
  return result;
}

namespace {

void append_tuples(std::size_t n, std::size_t k, std::vector<Unit>& prefix,
                   std::vector<bool>& used, std::vector<Unit>& out) {
  if (prefix.size() == k) {
    out.insert(out.end(), prefix.begin(), prefix.end());
    return;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (used[v]) continue;
    used[v] = true;
    prefix.push_back(static_cast<Unit>(v));
    append_tuples(n, k, prefix, used, out);
    prefix.pop_back();
    used[v] = false;
  }
}

}  // namespace

std::vector<Unit> enumerate_tuples_flat(std::size_t n, std::size_t k) {
  if (k == 0) throw DomainError("arity must be positive");
  std::vector<Unit> out;
  out.reserve(falling_factorial(n, k) * k);
  std::vector<Unit> prefix;
  std::vector<bool> used(n, false);
  append_tuples(n, k, prefix, used, out);
  return out;
}

std::vector<TupleIndex> enumerate_tuples(std::size_t n, std::size_t k) {
  const std::vector<Unit> flat = enumerate_tuples_flat(n, k);
  std::vector<TupleIndex> tuples;
  tuples.reserve(flat.size() / k);
  for (std::size_t i = 0; i < flat.size(); i += k)
    tuples.emplace_back(std::vector<Unit>(flat.begin() + i,
                                          flat.begin() + i + k));
  return tuples;
}

std::size_t tuple_rank(std::span<const Unit> tuple, std::size_t n) {
  const std::size_t k = tuple.size();
  std::size_t rank = 0;
  for (std::size_t p = 0; p < k; ++p) {
    if (tuple[p] >= n) throw DomainError("unit label out of range");
    std::size_t smaller_unused = tuple[p];
    for (std::size_t q = 0; q < p; ++q) {
      if (tuple[q] == tuple[p]) throw DomainError("tuple has repeated units");
      if (tuple[q] < tuple[p]) --smaller_unused;
    }
    // Number of completions of a fixed prefix of length p + 1.
    std::size_t block = 1;
    for (std::size_t r = 0; r + p + 1 < k; ++r) block *= n - p - 1 - r;
    rank += smaller_unused * block;
  }
  return rank;
}

JointArray::JointArray(std::size_t units, std::size_t arity, std::size_t dim,
                       std::vector<double> values)
    : units_(units), arity_(arity), dim_(dim), values_(std::move(values)) {
  if (arity < 2) throw DomainError("joint arrays need arity >= 2");
  if (dim == 0) throw DomainError("cell dimension must be positive");
  cells_ = falling_factorial(units, arity);
  if (values_.size() != cells_ * dim_)
    throw DomainError("expected " + std::to_string(cells_ * dim_) +
                      " values, got " + std::to_string(values_.size()));
  tuples_ = std::make_shared<const std::vector<Unit>>(
      enumerate_tuples_flat(units, arity));
}

std::span<const double> JointArray::cell(const TupleIndex& index) const {
  return cell(rank_of(index.entries()));
}

std::size_t JointArray::rank_of(std::span<const Unit> tuple) const {
  if (tuple.size() != arity_) throw DomainError("tuple arity mismatch");
  return tuple_rank(tuple, units_);
}

SeparateArray::SeparateArray(std::vector<std::size_t> dims, std::size_t dim,
                             std::vector<double> values)
    : dims_(std::move(dims)), dim_(dim), values_(std::move(values)) {
  if (dims_.empty()) throw DomainError("separate array needs dimensions");
  if (dim_ == 0) throw DomainError("cell dimension must be positive");
  cells_ = 1;
  for (std::size_t n : dims_) {
    if (n == 0) throw DomainError("every dimension needs at least one unit");
    cells_ *= n;
  }
  if (values_.size() != cells_ * dim_)
    throw DomainError("expected " + std::to_string(cells_ * dim_) +
                      " values, got " + std::to_string(values_.size()));
}

std::size_t SeparateArray::min_dim() const noexcept {
  return *std::min_element(dims_.begin(), dims_.end());
}

std::size_t SeparateArray::flat_of(std::span<const Unit> index) const {
  if (index.size() != dims_.size()) throw DomainError("index arity mismatch");
  std::size_t flat = 0;
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (index[j] >= dims_[j]) throw DomainError("index out of range");
    flat = flat * dims_[j] + index[j];
  }
  return flat;
}

std::vector<Unit> SeparateArray::index_of(std::size_t flat) const {
  std::vector<Unit> index(dims_.size());
  for (std::size_t j = dims_.size(); j-- > 0;) {
    index[j] = static_cast<Unit>(flat % dims_[j]);
    flat /= dims_[j];
  }
  return index;
}

JointArray relabel(const JointArray& array, std::span<const Unit> permutation) {
  const std::size_t n = array.units();
  if (permutation.size() != n)
    throw DomainError("permutation size differs from unit count");
  std::vector<bool> seen(n, false);
  for (Unit image : permutation) {
    if (image >= n || seen[image])
      throw DomainError("relabeling is not a bijection");
    seen[image] = true;
  }
  const std::size_t d = array.dim();
  std::vector<double> values(array.data().size());
  std::vector<Unit> image(array.arity());
  for (std::size_t r = 0; r < array.cell_count(); ++r) {
    const auto t = array.tuple(r);
    for (std::size_t p = 0; p < t.size(); ++p) image[p] = permutation[t[p]];
    const std::size_t target = tuple_rank(image, n);
    const auto source = array.cell(r);
    std::copy(source.begin(), source.end(), values.begin() + target * d);
  }
  return JointArray(n, array.arity(), d, std::move(values));
}

}  // namespace exarray
