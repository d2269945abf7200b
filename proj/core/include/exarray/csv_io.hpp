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

#ifndef EXARRAY_CSV_IO_HPP_
#define EXARRAY_CSV_IO_HPP_

// Long-format CSV for dyadic (k = 2) arrays:
//
//   unit_i,unit_j,v1,...,vd
//
// Unit labels are arbitrary strings, mapped to 0..n-1 in order of first
// appearance (scanning unit_i then unit_j, row by row). Unless zero-fill is
// requested, every ordered pair of distinct units must appear exactly once.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exarray/arrays.hpp"

namespace exarray {

struct DyadicTable {
  JointArray array;
  std::vector<std::string> labels;   // labels[u] is the external name of u
  std::vector<std::string> columns;  // value column names, in file order
};

struct CsvReadOptions {
  // Absent ordered pairs become 0 in every component.
  bool zero_fill = false;
};

DyadicTable read_dyadic_csv(std::istream& in, const CsvReadOptions& options = {});
DyadicTable read_dyadic_csv_file(const std::string& path,
                                 const CsvReadOptions& options = {});

void write_dyadic_csv(std::ostream& out, const JointArray& array,
                      std::span<const std::string> labels,
                      std::span<const std::string> columns);

// Grid arrays in the same long format; unit_i indexes the first dimension
// and unit_j the second. Only two-dimensional grids are supported.
void write_separate_csv(std::ostream& out, const SeparateArray& array,
                        std::span<const std::string> columns);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

// Splits one CSV record; double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_record(std::string_view line);

}  // namespace exarray

#endif  // EXARRAY_CSV_IO_HPP_
