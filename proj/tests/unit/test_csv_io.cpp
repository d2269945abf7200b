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

#include <cstdlib>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "exarray/csv_io.hpp"
#include "exarray/error.hpp"

namespace exarray {
namespace {

DyadicTable parse(const std::string& text, bool zero_fill = false) {
  std::istringstream in(text);
  return read_dyadic_csv(in, CsvReadOptions{zero_fill});
}

std::size_t error_row(const std::string& text) {
  try {
    parse(text);
  } catch (const IngestionError& e) {
    return e.row();
  }
  ADD_FAILURE() << "no IngestionError";
  return 0;
}

const char* kThreeUnits =
    "unit_i,unit_j,x,y\n"
    "FRA,DEU,1,10\n"
    "DEU,FRA,2,20\n"
    "FRA,ITA,3,30\n"
    "ITA,FRA,4,40\n"
    "DEU,ITA,5,50\n"
    "ITA,DEU,6,60\n";

TEST(ReadDyadicCsv, LabelsInOrderOfFirstAppearance) {
  const DyadicTable t = parse(kThreeUnits);
  EXPECT_EQ(t.labels, (std::vector<std::string>{"FRA", "DEU", "ITA"}));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"x", "y"}));
  ASSERT_EQ(t.array.units(), 3u);
  EXPECT_EQ(t.array.cell({0, 1})[0], 1.0);
  EXPECT_EQ(t.array.cell({1, 0})[1], 20.0);
  EXPECT_EQ(t.array.cell({2, 1})[0], 6.0);
}

TEST(ReadDyadicCsv, RoundTripThroughWriter) {
  const DyadicTable t = parse(kThreeUnits);
  std::ostringstream out;
  write_dyadic_csv(out, t.array, t.labels, t.columns);
  const DyadicTable back = parse(out.str());
  EXPECT_EQ(back.array, t.array);
  EXPECT_EQ(back.labels, t.labels);
}

TEST(ReadDyadicCsv, QuotedFieldsAndBlankLines) {
  const DyadicTable t = parse(
      "unit_i,unit_j,v\n\n\"Korea, Rep.\",\"Says \"\"hi\"\"\",1.5\n"
      "\"Says \"\"hi\"\"\",\"Korea, Rep.\",-2e-3\n");
  EXPECT_EQ(t.labels[0], "Korea, Rep.");
  EXPECT_EQ(t.labels[1], "Says \"hi\"");
  EXPECT_EQ(t.array.cell({1, 0})[0], -2e-3);
}

TEST(ReadDyadicCsv, ErrorsCarryRowNumbers) {
  EXPECT_EQ(error_row("unit_i,unit_j,v\nA,B,1\nB,A,x\n"), 3u);
  EXPECT_EQ(error_row("unit_i,unit_j,v\nA,B,1\nB,A\n"), 3u);
  EXPECT_EQ(error_row("unit_i,unit_j,v\nA,A,1\n"), 2u);
  EXPECT_EQ(error_row("unit_i,unit_j,v\nA,B,1\nB,A,2\nA,B,3\n"), 4u);
  EXPECT_EQ(error_row("unit_i,unit_j,v\n,B,1\n"), 2u);
  EXPECT_EQ(error_row("i,j,v\nA,B,1\n"), 1u);
  EXPECT_EQ(error_row("unit_i,unit_j,v\nA,B,nan1\n"), 2u);
}

TEST(ReadDyadicCsv, MessagesNameTheProblem) {
  try {
    parse("unit_i,unit_j,v\nA,B,1\nB,A,oops\n");
    FAIL();
  } catch (const IngestionError& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("'v'"), std::string::npos);
  }
}

TEST(ReadDyadicCsv, MissingPairsNeedZeroFill) {
  const std::string partial = "unit_i,unit_j,v\nA,B,1\nB,C,2\n";
  EXPECT_THROW(parse(partial), IngestionError);
  const DyadicTable t = parse(partial, true);
  EXPECT_EQ(t.array.cell_count(), 6u);
  EXPECT_EQ(t.array.cell({0, 1})[0], 1.0);
  EXPECT_EQ(t.array.cell({1, 0})[0], 0.0);
  EXPECT_EQ(t.array.cell({1, 2})[0], 2.0);
  EXPECT_THROW(parse("unit_i,unit_j,v\n"), IngestionError);
}

TEST(ReadDyadicCsv, MissingFileIsIngestionError) {
  EXPECT_THROW(read_dyadic_csv_file("/nonexistent/x.csv"), IngestionError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324}) {
    const std::string text = format_double(v);
    EXPECT_EQ(std::strtod(text.c_str(), nullptr), v) << text;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(3.0), "3");
}

TEST(SplitCsvRecord, TrimsAndHandlesQuotes) {
  EXPECT_EQ(split_csv_record(" a , b ,\"c,d\""),
            (std::vector<std::string>{"a", "b", "c,d"}));
  EXPECT_EQ(split_csv_record("x,,"), (std::vector<std::string>{"x", "", ""}));
}

TEST(WriteSeparateCsv, GridRowsInRowMajorOrder) {
  const SeparateArray s({2, 2}, 1, {1.0, 2.0, 3.0, 4.0});
  const std::string cols[] = {"v"};
  std::ostringstream out;
  write_separate_csv(out, s, cols);
  EXPECT_EQ(out.str(), "unit_i,unit_j,v\nr1,c1,1\nr1,c2,2\nr2,c1,3\nr2,c2,4\n");
}

}  // namespace
}  // namespace exarray
