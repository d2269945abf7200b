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

#include "exarray/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "exarray/error.hpp"

namespace exarray {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, std::size_t row,
                    const std::string& column) {
  text = trim(text);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [end, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || end != last)
    throw IngestionError("row " + std::to_string(row) + ": column '" + column +
                             "' is not a number: '" + std::string(text) + "'",
                         row);
  return value;
}

}  // namespace

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.emplace_back(trim(field));
  return fields;
}

DyadicTable read_dyadic_csv(std::istream& in, const CsvReadOptions& options) {
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++row;
    if (!trim(line).empty()) {
      header = split_csv_record(line);
      break;
    }
  }
  if (header.size() < 3 || header[0] != "unit_i" || header[1] != "unit_j")
    throw IngestionError(
        "header must be unit_i,unit_j followed by at least one value column",
        row);
  const std::vector<std::string> columns(header.begin() + 2, header.end());
  const std::size_t d = columns.size();

  struct Row {
    Unit i, j;
    std::size_t line;
    std::vector<double> values;
  };
  std::unordered_map<std::string, Unit> lookup;
  std::vector<std::string> labels;
  auto unit_of = [&](const std::string& label) {
    auto [it, inserted] =
        lookup.try_emplace(label, static_cast<Unit>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_record(line);
    if (fields.size() != header.size())
      throw IngestionError("row " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()),
                           row);
    if (fields[0].empty() || fields[1].empty())
      throw IngestionError("row " + std::to_string(row) + ": empty unit label",
                           row);
    if (fields[0] == fields[1])
      throw IngestionError("row " + std::to_string(row) +
                               ": self pair '" + fields[0] + "'",
                           row);
    Row r{unit_of(fields[0]), unit_of(fields[1]), row, {}};
    r.values.reserve(d);
    for (std::size_t c = 0; c < d; ++c)
      r.values.push_back(parse_number(fields[c + 2], row, columns[c]));
    rows.push_back(std::move(r));
  }

  const std::size_t n = labels.size();
  if (n < 2) throw IngestionError("need at least two units", 0);
  const std::size_t cells = n * (n - 1);
  std::vector<double> values(cells * d, 0.0);
  std::vector<std::size_t> source(cells, 0);
  for (const Row& r : rows) {
    const Unit t[2] = {r.i, r.j};
    const std::size_t rank = tuple_rank(t, n);
    if (source[rank] != 0)
      throw IngestionError("row " + std::to_string(r.line) +
                               ": duplicate pair (" + labels[r.i] + ", " +
                               labels[r.j] + ") first seen at row " +
                               std::to_string(source[rank]),
                           r.line);
    source[rank] = r.line;
    std::copy(r.values.begin(), r.values.end(), values.begin() + rank * d);
  }
  if (!options.zero_fill) {
    for (std::size_t rank = 0; rank < cells; ++rank) {
      if (source[rank] != 0) continue;
      const Unit i = static_cast<Unit>(rank / (n - 1));
      Unit j = static_cast<Unit>(rank % (n - 1));
      if (j >= i) ++j;
      throw IngestionError("missing pair (" + labels[i] + ", " + labels[j] +
                               "); " + std::to_string(cells - rows.size()) +
                               " pairs absent (use zero-fill to accept)",
                           0);
    }
  }
  return DyadicTable{JointArray(n, 2, d, std::move(values)), std::move(labels),
                     columns};
}

DyadicTable read_dyadic_csv_file(const std::string& path,
                                 const CsvReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open '" + path + "'", 0);
  return read_dyadic_csv(in, options);
}

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

void write_dyadic_csv(std::ostream& out, const JointArray& array,
                      std::span<const std::string> labels,
                      std::span<const std::string> columns) {
  if (array.arity() != 2) throw DomainError("CSV output supports k = 2 only");
  if (labels.size() != array.units() || columns.size() != array.dim())
    throw DomainError("label or column count mismatch");
  out << "unit_i,unit_j";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < array.cell_count(); ++r) {
    const auto t = array.tuple(r);
    out << labels[t[0]] << ',' << labels[t[1]];
    for (double v : array.cell(r)) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_separate_csv(std::ostream& out, const SeparateArray& array,
                        std::span<const std::string> columns) {
  if (array.arity() != 2) throw DomainError("CSV output supports k = 2 only");
  if (columns.size() != array.dim()) throw DomainError("column count mismatch");
  out << "unit_i,unit_j";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (std::size_t flat = 0; flat < array.cell_count(); ++flat) {
    const auto index = array.index_of(flat);
    out << 'r' << index[0] + 1 << ",c" << index[1] + 1;
    for (double v : array.cell(flat)) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace exarray
