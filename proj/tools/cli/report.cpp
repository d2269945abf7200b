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

#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace exarray::cli {

namespace {

// NaN and infinities have no JSON representation.
Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? " " + s : std::string(width - s.size(), ' ') + s;
}

std::size_t name_width(const std::vector<std::string>& names,
                       std::size_t minimum) {
  std::size_t w = minimum;
  for (const auto& n : names) w = std::max(w, n.size() + 2);
  return w;
}

}  // namespace

std::string fixed(double value, int decimals) {
  if (std::isnan(value)) return "n/a";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  // Avoid printing "-0.000".
  std::string s(buffer);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos)
    s.erase(0, 1);
  return s;
}

// -------------------------------------------------------------------- ks

std::string ks_text(const KsReportInput& in, const KsResult& result) {
  std::ostringstream out;
  out << "exarray ks report (exarray.ks/1)\n";
  out << "input  " << in.input << "\n";
  out << "units  " << in.units << "   cells  " << in.cells
      << "   B  " << result.replicates << "   seed  " << in.seed << "\n\n";
  const std::string comparison = in.column_a + " vs " + in.column_b;
  const std::size_t first = std::max<std::size_t>(14, comparison.size() + 2);
  out << pad_right("comparison", first) << pad_left("statistic", 10);
  for (KsAssumption a : in.assumptions)
    out << pad_left(std::string(to_string(a)), std::max<std::size_t>(
                                                   10, to_string(a).size() + 2));
  out << "\n" << pad_right(comparison, first)
      << pad_left(fixed(result.statistic, 3), 10);
  for (KsAssumption a : in.assumptions)
    out << pad_left(fixed(result.pvalues.at(std::string(to_string(a))), 3),
                    std::max<std::size_t>(10, to_string(a).size() + 2));
  out << "\n\nsup attained at u = " << fixed(result.argmax, 6) << "\n";
  for (const auto& w : result.warnings) out << "warning: " << w << "\n";
  return out.str();
}

Json ks_json(const KsReportInput& in, const KsResult& result) {
  Json j;
  j["schema"] = "exarray.ks/1";
  j["input"] = in.input;
  j["comparison"] = {{"a", in.column_a}, {"b", in.column_b}};
  j["units"] = in.units;
  j["cells"] = in.cells;
  j["B"] = result.replicates;
  j["seed"] = in.seed;
  j["statistic"] = number(result.statistic);
  j["argmax"] = number(result.argmax);
  Json assumptions = Json::array();
  Json pvalues = Json::object();
  for (KsAssumption a : in.assumptions) {
    const std::string name(to_string(a));
    assumptions.push_back(name);
    pvalues[name] = number(result.pvalues.at(name));
  }
  j["assumptions"] = assumptions;
  j["pvalues"] = pvalues;
  j["warnings"] = result.warnings;
  return j;
}

// ------------------------------------------------------------------ ppml

std::string ppml_text(const PpmlReportInput& in, const InferenceReport& r) {
  std::vector<std::string> columns;
  for (std::string_view a : kAssumptions)
    if (r.has(a)) columns.emplace_back(a);
  const std::size_t first = name_width(r.names, 14);
  auto col_width = [](const std::string& c) {
    return std::max<std::size_t>(10, c.size() + 2);
  };
  std::ostringstream out;
  out << "exarray ppml report (exarray.ppml/1)\n";
  out << "input  " << in.input << "   flow  " << in.flow << "\n";
  out << "units  " << in.units << "   pairs  " << in.pairs << "   level  "
      << fixed(r.level, 3) << "\n";
  out << "IRLS iterations  " << r.diagnostics.iterations
      << "   max |mean score|  " << std::scientific << std::setprecision(2)
      << r.diagnostics.score_norm << std::defaultfloat << "\n";
  if (r.diagnostics.bootstrap_replicates > 0)
    out << "bootstrap  B = " << r.diagnostics.bootstrap_replicates
        << "   failed  " << r.diagnostics.bootstrap_failures << "\n";

  out << "\np-values under different assumptions\n";
  out << pad_right("coefficient", first) << pad_left("estimate", 10);
  for (const auto& c : columns) out << pad_left(c, col_width(c));
  out << "\n";
  for (std::size_t j = 0; j < r.names.size(); ++j) {
    out << pad_right(r.names[j], first) << pad_left(fixed(r.theta[j], 3), 10);
    for (const auto& c : columns)
      out << pad_left(fixed(r.pvalues.find(c)->second[j], 3), col_width(c));
    out << "\n";
  }
  out << "\nstandard errors\n";
  out << pad_right("coefficient", first) << pad_left("estimate", 10);
  for (const auto& c : columns) out << pad_left(c, col_width(c));
  out << "\n";
  for (std::size_t j = 0; j < r.names.size(); ++j) {
    out << pad_right(r.names[j], first) << pad_left(fixed(r.theta[j], 4), 10);
    for (const auto& c : columns)
      out << pad_left(fixed(r.se.find(c)->second[j], 4), col_width(c));
    out << "\n";
  }
  out << "\n" << fixed(100.0 * r.level, 1) << "% intervals\n";
  for (const auto& c : columns) {
    out << c << "\n";
    const auto& ci = r.ci.find(c)->second;
    for (std::size_t j = 0; j < r.names.size(); ++j)
      out << "  " << pad_right(r.names[j], first) << "[" << fixed(ci[j].lower, 4)
          << ", " << fixed(ci[j].upper, 4) << "]\n";
  }
  for (const auto& w : r.diagnostics.warnings) out << "warning: " << w << "\n";
  return out.str();
}

Json ppml_json(const PpmlReportInput& in, const InferenceReport& r) {
  Json j;
  j["schema"] = "exarray.ppml/1";
  j["input"] = in.input;
  j["flow"] = in.flow;
  j["units"] = in.units;
  j["pairs"] = in.pairs;
  j["level"] = r.level;
  j["coefficients"] = r.names;
  j["theta"] = numbers(r.theta);
  Json assumptions = Json::array();
  Json se = Json::object(), pv = Json::object(), ci = Json::object();
  for (std::string_view a : kAssumptions) {
    if (!r.has(a)) continue;
    const std::string name(a);
    assumptions.push_back(name);
    se[name] = numbers(r.se.find(a)->second);
    pv[name] = numbers(r.pvalues.find(a)->second);
    Json intervals = Json::array();
    for (const Interval& iv : r.ci.find(a)->second)
      intervals.push_back({number(iv.lower), number(iv.upper)});
    ci[name] = intervals;
  }
  j["assumptions"] = assumptions;
  j["se"] = se;
  j["pvalues"] = pv;
  j["ci"] = ci;
  Json diag;
  diag["iterations"] = r.diagnostics.iterations;
  diag["score_norm"] = number(r.diagnostics.score_norm);
  diag["bootstrap_replicates"] = r.diagnostics.bootstrap_replicates;
  diag["bootstrap_failures"] = r.diagnostics.bootstrap_failures;
  diag["degenerate_coordinates"] = r.diagnostics.degenerate;
  diag["warnings"] = r.diagnostics.warnings;
  j["diagnostics"] = diag;
  return j;
}

// -------------------------------------------------------------------- mc

std::string mc_text(const McConfig& config, const McSummary& s) {
  std::vector<std::string> names;
  for (const auto& [k, v] : s.metrics) names.push_back(k);
  for (const auto& b : s.bands) names.push_back(b.metric);
  const std::size_t first = name_width(names, 16);
  std::ostringstream out;
  out << "exarray mc report (exarray.mc/1)\n";
  out << "study  " << s.study << "   dgp  " << config.dgp << "   runs  "
      << s.runs << "   seed  " << config.seed << "\n\n";
  out << pad_right("metric", first) << pad_left("value", 12) << "\n";
  for (const auto& [k, v] : s.metrics)
    out << pad_right(k, first) << pad_left(fixed(v, 6), 12) << "\n";
  if (!s.bands.empty()) {
    out << "\n" << pad_right("band", first) << pad_left("lower", 10)
        << pad_left("upper", 10) << pad_left("value", 12) << "  result\n";
    for (const auto& b : s.bands)
      out << pad_right(b.metric, first) << pad_left(fixed(b.band.lower, 4), 10)
          << pad_left(fixed(b.band.upper, 4), 10)
          << pad_left(fixed(b.value, 6), 12) << (b.pass ? "  PASS" : "  FAIL")
          << "\n";
  }
  for (const auto& n : s.notes) out << "note: " << n << "\n";
  return out.str();
}

Json mc_json(const McConfig& config, const McSummary& s) {
  Json j;
  j["schema"] = "exarray.mc/1";
  j["study"] = s.study;
  j["dgp"] = config.dgp;
  j["runs"] = s.runs;
  j["seed"] = config.seed;
  Json metrics = Json::object();
  for (const auto& [k, v] : s.metrics) metrics[k] = number(v);
  j["metrics"] = metrics;
  Json bands = Json::array();
  for (const auto& b : s.bands)
    bands.push_back({{"metric", b.metric},
                     {"lower", number(b.band.lower)},
                     {"upper", number(b.band.upper)},
                     {"value", number(b.value)},
                     {"pass", b.pass}});
  j["bands"] = bands;
  j["passed"] = s.passed();
  j["notes"] = s.notes;
  return j;
}

}  // namespace exarray::cli
