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

#ifndef EXARRAY_ERROR_HPP_
#define EXARRAY_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exarray {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid sizes, labels or permutations.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A generating model produced inconsistent output.
class ModelError : public Error {
 public:
  using Error::Error;
};

// A statistic evaluated to a non-finite value on some cell.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::size_t cell)
      : Error(what), cell_(cell) {}
  std::size_t cell() const noexcept { return cell_; }

 private:
  std::size_t cell_;
};

// Too few units for the requested estimator.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

// A bootstrap plan does not match the operation it was passed to.
class PlanError : public Error {
 public:
  using Error::Error;
};

class UnsupportedArityError : public Error {
 public:
  using Error::Error;
};

// Singular jacobian in a Z-estimation step.
class RankError : public Error {
 public:
  using Error::Error;
};

// Design matrix lacks full column rank.
class CollinearityError : public Error {
 public:
  CollinearityError(const std::string& what, std::vector<std::string> columns)
      : Error(what), columns_(std::move(columns)) {}
  const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::vector<std::string> columns_;
};

// Iteration cap reached. Carries the last iterate and its residual norm.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate,
                   double residual_norm)
      : Error(what),
        last_iterate_(std::move(last_iterate)),
        residual_norm_(residual_norm) {}
  const std::vector<double>& last_iterate() const noexcept {
    return last_iterate_;
  }
  double residual_norm() const noexcept { return residual_norm_; }

 private:
  std::vector<double> last_iterate_;
  double residual_norm_;
};

// Bootstrap inference could not be completed (too many failed replicates).
class InferenceError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `row` is 1-based and counts the header as row 1;
// zero when the problem is not tied to a row.
class IngestionError : public Error {
 public:
  IngestionError(const std::string& what, std::size_t row)
      : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Monte Carlo study aborted (e.g. too many degenerate runs).
class StudyError : public Error {
 public:
  using Error::Error;
};

}  // namespace exarray

#endif  // EXARRAY_ERROR_HPP_
