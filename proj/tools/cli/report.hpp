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

#ifndef EXARRAY_TOOLS_REPORT_HPP_
#define EXARRAY_TOOLS_REPORT_HPP_

// Text and JSON renderings of the command reports. Schemas are versioned by
// the "schema" field (exarray.<command>/<version>).

#include <string>
#include <vector>

#include "exarray/inference.hpp"
#include "exarray/ks.hpp"
#include "exarray/mc.hpp"
#include "json.hpp"

namespace exarray::cli {

using Json = nlohmann::ordered_json;

// Fixed-point text; "n/a" for NaN.
std::string fixed(double value, int decimals);

struct KsReportInput {
  std::string input;
  std::string column_a;
  std::string column_b;
  std::size_t units = 0;
  std::size_t cells = 0;
  std::uint64_t seed = 0;
  std::vector<KsAssumption> assumptions;
};

std::string ks_text(const KsReportInput& in, const KsResult& result);
Json ks_json(const KsReportInput& in, const KsResult& result);

struct PpmlReportInput {
  std::string input;
  std::string flow;
  std::size_t units = 0;
  std::size_t pairs = 0;
};

std::string ppml_text(const PpmlReportInput& in, const InferenceReport& report);
Json ppml_json(const PpmlReportInput& in, const InferenceReport& report);

std::string mc_text(const McConfig& config, const McSummary& summary);
Json mc_json(const McConfig& config, const McSummary& summary);

}  // namespace exarray::cli

#endif  // EXARRAY_TOOLS_REPORT_HPP_
