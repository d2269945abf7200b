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

#ifndef EXARRAY_ARRAYS_HPP_
#define EXARRAY_ARRAYS_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

namespace exarray {

// Zero-based unit label. External (1-based or string) labels are mapped at
// the I/O boundary.
using Unit = std::uint32_t;

// An ordered k-tuple of unit labels.
class TupleIndex {
 public:
  TupleIndex() = default;
  TupleIndex(std::initializer_list<Unit> entries) : entries_(entries) {}
  explicit TupleIndex(std::vector<Unit> entries)
      : entries_(std::move(entries)) {}

  std::size_t size() const noexcept { return entries_.size(); }
  Unit operator[](std::size_t position) const { return entries_[position]; }
  std::span<const Unit> entries() const noexcept { return entries_; }

  // True when no unit appears twice.
  bool distinct() const noexcept;

  friend auto operator<=>(const TupleIndex&, const TupleIndex&) = default;

 private:
  std::vector<Unit> entries_;
};

// n! / (n - k)!, the number of k-tuples without repetition over n units.
// Throws DomainError on overflow or n < k.
std::size_t falling_factorial(std::size_t n, std::size_t k);

// All k-tuples of distinct units in {0, ..., n-1}, lexicographic order.
std::vector<TupleIndex> enumerate_tuples(std::size_t n, std::size_t k);

// Same enumeration, flattened: k consecutive entries per tuple.
std::vector<Unit> enumerate_tuples_flat(std::size_t n, std::size_t k);

// Position of `tuple` in the lexicographic enumeration of k-tuples without
// repetition over n units (mixed-radix rank).
std::size_t tuple_rank(std::span<const Unit> tuple, std::size_t n);

// Observations on all k-tuples of distinct units among n, each cell a real
// vector of fixed dimension. Cells are stored densely in tuple-rank order.
// Immutable after construction and safe to share across threads.
class JointArray {
 public:
  // `values` holds cell_count * dim numbers, cell-major in rank order.
  JointArray(std::size_t units, std::size_t arity, std::size_t dim,
             std::vector<double> values);

  std::size_t units() const noexcept { return units_; }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t cell_count() const noexcept { return cells_; }

  std::span<const double> cell(std::size_t rank) const {
    return {values_.data() + rank * dim_, dim_};
  }
  std::span<const double> cell(const TupleIndex& index) const;
  double value(std::size_t rank, std::size_t component) const {
    return values_[rank * dim_ + component];
  }
  // Units of the cell at `rank`.
  std::span<const Unit> tuple(std::size_t rank) const {
    return {tuples_->data() + rank * arity_, arity_};
  }
  // All cell tuples, flattened in rank order (arity entries per cell).
  std::span<const Unit> tuples() const noexcept { return *tuples_; }
  std::size_t rank_of(std::span<const Unit> tuple) const;
  std::span<const double> data() const noexcept { return values_; }

  friend bool operator==(const JointArray& a, const JointArray& b) {
    return a.units_ == b.units_ && a.arity_ == b.arity_ && a.dim_ == b.dim_ &&
           a.values_ == b.values_;
  }

 private:
  std::size_t units_;
  std::size_t arity_;
  std::size_t dim_;
  std::size_t cells_;
  std::vector<double> values_;
  std::shared_ptr<const std::vector<Unit>> tuples_;
};

// Observations on the full grid n_1 x ... x n_k (repeated labels across
// dimensions allowed). Row-major: the last dimension varies fastest.
class SeparateArray {
 public:
  SeparateArray(std::vector<std::size_t> dims, std::size_t dim,
                std::vector<double> values);

  std::span<const std::size_t> dims() const noexcept { return dims_; }
  std::size_t arity() const noexcept { return dims_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t cell_count() const noexcept { return cells_; }
  std::size_t min_dim() const noexcept;

  std::span<const double> cell(std::size_t flat) const {
    return {values_.data() + flat * dim_, dim_};
  }
  double value(std::size_t flat, std::size_t component) const {
    return values_[flat * dim_ + component];
  }
  std::size_t flat_of(std::span<const Unit> index) const;
  std::vector<Unit> index_of(std::size_t flat) const;
  std::span<const double> data() const noexcept { return values_; }

  friend bool operator==(const SeparateArray& a, const SeparateArray& b) {
    return a.dims_ == b.dims_ && a.dim_ == b.dim_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::size_t> dims_;
  std::size_t dim_;
  std::size_t cells_;
  std::vector<double> values_;
};

// Output cell at pi(i) equals input cell at i. `permutation[a]` is the new
// label of unit a; it must be a bijection on {0, ..., n-1}.
JointArray relabel(const JointArray& array, std::span<const Unit> permutation);

}  // namespace exarray

#endif  // EXARRAY_ARRAYS_HPP_
