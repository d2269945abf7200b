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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "exarray/csv_io.hpp"
#include "exarray/dgp.hpp"
#include "exarray/error.hpp"
#include "exarray/inference.hpp"
#include "exarray/ks.hpp"
#include "exarray/mc.hpp"
#include "exarray/ppml.hpp"
#include "manifest.hpp"
#include "report.hpp"

namespace exarray::cli {

namespace {

constexpr const char* kSeedEnv = "EXARRAY_SEED";

std::uint64_t parse_seed(std::string_view text, std::string_view origin) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(std::string(origin) + ": not a seed: '" +
                      std::string(text) + "'");
  return v;
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  return env ? parse_seed(env, kSeedEnv) : 1;
}

struct Outputs {
  std::string out;
  std::string json;
};

void add_outputs(CLI::App* sub, Outputs& o) {
  sub->add_option("--out", o.out, "Text report path (default: stdout)");
  sub->add_option("--json", o.json, "Structured JSON report path");
}

// Produced by every command.
struct Emission {
  std::string text;
  Json json;
  RunManifest manifest;
};

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << bytes;
}

void emit(const Outputs& o, Emission& e, std::ostream& out, double seconds) {
  if (o.out.empty())
    out << e.text;
  else
    write_file(o.out, e.text);
  if (!o.json.empty()) {
    e.json["manifest"] = e.manifest.to_json();
    write_file(o.json, e.json.dump(2) + "\n");
  }
  const std::string& base = o.json.empty() ? o.out : o.json;
  if (!base.empty())
    write_sidecar(base + ".manifest.json", e.manifest, seconds);
}

// The arguments with the seed made explicit, so a replay does not depend on
// the environment.
std::vector<std::string> effective_args(const std::vector<std::string>& args,
                                        bool seed_given, std::uint64_t seed) {
  std::vector<std::string> a = args;
  if (!seed_given) {
    a.push_back("--seed");
    a.push_back(std::to_string(seed));
  }
  return a;
}

DgpParams parse_params(const std::vector<std::string>& entries) {
  DgpParams params;
  for (const auto& e : entries) {
    const auto eq = e.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--param expects key=value, got '" + e + "'");
    const std::string value = e.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size())
      throw ConfigError("--param " + e.substr(0, eq) + ": not a number");
    params[e.substr(0, eq)] = v;
  }
  return params;
}

std::size_t column_index(const DyadicTable& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  if (it == t.columns.end()) throw ConfigError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - t.columns.begin());
}

// Replaces the named columns by their natural logarithm.
DyadicTable log_columns(const DyadicTable& t,
                        const std::vector<std::string>& names) {
  if (names.empty()) return t;
  std::vector<std::size_t> idx;
  for (const auto& n : names) idx.push_back(column_index(t, n));
  const std::size_t d = t.array.dim();
  std::vector<double> values(t.array.data().begin(), t.array.data().end());
  for (std::size_t r = 0; r < t.array.cell_count(); ++r)
    for (std::size_t c : idx) {
      double& v = values[r * d + c];
      if (!(v > 0.0))
        throw DomainError("log of non-positive value in column '" +
                          t.columns[c] + "' (cell " + std::to_string(r) + ")");
      v = std::log(v);
    }
  return DyadicTable{JointArray(t.array.units(), 2, d, std::move(values)),
                     t.labels, t.columns};
}

// ------------------------------------------------------------- commands

struct SimulateArgs {
  std::string dgp;
  std::vector<std::string> params;
  std::size_t n = 0;
  std::vector<std::size_t> dims;
  std::uint64_t seed = 0;
  Outputs outputs;
};

Emission simulate(const SimulateArgs& a, const std::vector<std::string>& args,
                  bool seed_given) {
  const Dgp d = make_dgp(a.dgp, parse_params(a.params));
  if ((a.n == 0) == a.dims.empty())
    throw ConfigError("give exactly one of --n and --dims");
  Emission e;
  std::ostringstream csv;
  Json config;
  config["dgp"] = a.dgp;
  Json params = Json::object();
  for (const auto& [k, v] : d.params) params[k] = v;
  config["params"] = params;
  if (a.n > 0) {
    if (!d.joint) throw ConfigError("dgp '" + a.dgp + "' needs --dims");
    if (d.model.arity != 2)
      throw ConfigError("CSV output supports k = 2 arrays only");
    const JointArray array = generate_joint(d.model, a.n, a.seed);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < a.n; ++i) labels.push_back("u" + std::to_string(i + 1));
    write_dyadic_csv(csv, array, labels, d.component_names);
    config["n"] = a.n;
    e.json["rows"] = array.cell_count();
  } else {
    if (!d.separate) throw ConfigError("dgp '" + a.dgp + "' needs --n");
    if (a.dims.size() != 2) throw ConfigError("--dims needs two entries");
    const SeparateArray array = generate_separate(d.model, a.dims, a.seed);
    write_separate_csv(csv, array, d.component_names);
    config["dims"] = a.dims;
    e.json["rows"] = array.cell_count();
  }
  e.text = csv.str();
  e.json["schema"] = "exarray.simulate/1";
  e.json["dgp"] = a.dgp;
  e.json["columns"] = d.component_names;
  e.manifest.command = "simulate";
  e.manifest.args = effective_args(args, seed_given, a.seed);
  e.manifest.config = config;
  e.manifest.seed = a.seed;
  return e;
}

struct KsArgs {
  std::string input;
  std::vector<std::string> columns;
  std::size_t replicates = 999;
  std::vector<std::string> assumptions;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool zero_fill = false;
  Outputs outputs;
};

Emission ks(const KsArgs& a, const std::vector<std::string>& args,
            bool seed_given) {
  const DyadicTable table = read_dyadic_csv_file(a.input, {a.zero_fill});
  if (table.columns.size() < 2)
    throw DomainError("KS needs at least two value columns");
  std::vector<std::string> cols = a.columns;
  if (cols.empty()) cols = {table.columns[0], table.columns[1]};
  if (cols.size() != 2) throw ConfigError("--columns takes two names");
  const std::size_t ca = column_index(table, cols[0]);
  const std::size_t cb = column_index(table, cols[1]);

  std::vector<KsAssumption> assumptions;
  for (KsAssumption k : kKsAssumptions) {
    const bool wanted =
        a.assumptions.empty() ||
        std::find(a.assumptions.begin(), a.assumptions.end(), to_string(k)) !=
            a.assumptions.end();
    if (wanted) assumptions.push_back(k);
  }
  for (const auto& name : a.assumptions) parse_ks_assumption(name);

  const KsResult result = ks_compare_assumptions(
      table.array, ca, cb, a.replicates, a.seed, assumptions, a.threads);
  KsReportInput in{a.input, cols[0], cols[1], table.array.units(),
                   table.array.cell_count(), a.seed, assumptions};
  Emission e;
  e.text = ks_text(in, result);
  e.json = ks_json(in, result);
  e.manifest.command = "ks";
  e.manifest.args = effective_args(args, seed_given, a.seed);
  e.manifest.inputs.emplace_back(a.input, sha256_file(a.input));
  Json config;
  config["columns"] = cols;
  config["B"] = a.replicates;
  Json names = Json::array();
  for (KsAssumption k : assumptions) names.push_back(std::string(to_string(k)));
  config["assumptions"] = names;
  config["zero_fill"] = a.zero_fill;
  e.manifest.config = config;
  e.manifest.seed = a.seed;
  e.manifest.unit_labels = table.labels;
  return e;
}

struct PpmlArgs {
  std::string input;
  std::string config_path;
  std::string flow;
  std::vector<std::string> regressors;
  std::vector<std::string> logs;
  bool no_intercept = false;
  double level = 0.95;
  std::size_t bootstrap_b = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool zero_fill = false;
  Outputs outputs;
};

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

// Fills unset options from a key = value file (flags take precedence).
void apply_ppml_config(PpmlArgs& a, const CLI::App& sub, bool& seed_given) {
  if (a.config_path.empty()) return;
  std::ifstream in(a.config_path);
  if (!in) throw ConfigError("cannot open config '" + a.config_path + "'");
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const auto key_list = split_names(line.substr(0, eq));
    const std::string key = key_list.empty() ? "" : key_list[0];
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r") + 1);
    auto unset = [&](const char* flag) { return sub.count(flag) == 0; };
    try {
      if (key == "flow") {
        if (unset("--flow")) a.flow = value;
      } else if (key == "regressors") {
        if (unset("--regressors")) a.regressors = split_names(value);
      } else if (key == "log") {
        if (unset("--log")) a.logs = split_names(value);
      } else if (key == "intercept") {
        if (value != "true" && value != "false")
          throw ConfigError("intercept must be true or false");
        if (unset("--no-intercept")) a.no_intercept = value == "false";
      } else if (key == "level") {
        if (unset("--level")) a.level = std::stod(value);
      } else if (key == "bootstrap_b") {
        if (unset("--bootstrap-b")) a.bootstrap_b = std::stoul(value);
      } else if (key == "seed") {
        if (unset("--seed")) {
          a.seed = parse_seed(value, "seed");
          seed_given = true;
        }
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ConfigError("line " + std::to_string(number) + ": bad value for '" +
                        key + "'");
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
}

Emission ppml(const PpmlArgs& a, const std::vector<std::string>& args,
              bool seed_given) {
  if (a.flow.empty()) throw ConfigError("missing flow column (--flow)");
  std::vector<std::string> regressors;
  for (const auto& r : a.regressors)
    if (!r.empty()) regressors.push_back(r);
  if (!(a.level > 0.0 && a.level < 1.0))
    throw ConfigError("--level must be in (0, 1)");
  const DyadicTable raw = read_dyadic_csv_file(a.input, {a.zero_fill});
  column_index(raw, a.flow);
  for (const auto& r : regressors) column_index(raw, r);
  const DyadicTable table = log_columns(raw, a.logs);
  GravityData data =
      gravity_from_table(table, a.flow, regressors, !a.no_intercept);
  for (auto& name : data.names)
    if (std::find(a.logs.begin(), a.logs.end(), name) != a.logs.end())
      name = "log(" + name + ")";

  const PpmlFit fit = ppml_fit(data);
  InferenceReport report = variance_compare(data, fit, a.level);
  if (a.bootstrap_b > 0) {
    BootstrapPlan plan;
    plan.replicates = a.bootstrap_b;
    plan.seed = a.seed;
    plan.threads = a.threads;
    ppml_bootstrap_pvalues(data, fit, plan, report);
  }
  PpmlReportInput in{a.input, a.flow, data.units, data.rows()};
  Emission e;
  e.text = ppml_text(in, report);
  e.json = ppml_json(in, report);
  e.manifest.command = "ppml";
  e.manifest.args = effective_args(args, seed_given, a.seed);
  e.manifest.inputs.emplace_back(a.input, sha256_file(a.input));
  if (!a.config_path.empty())
    e.manifest.inputs.emplace_back(a.config_path, sha256_file(a.config_path));
  Json config;
  config["flow"] = a.flow;
  config["regressors"] = regressors;
  config["log"] = a.logs;
  config["intercept"] = !a.no_intercept;
  config["level"] = a.level;
  config["bootstrap_b"] = a.bootstrap_b;
  config["zero_fill"] = a.zero_fill;
  e.manifest.config = config;
  e.manifest.seed = a.seed;
  e.manifest.unit_labels = table.labels;
  return e;
}

struct McArgs {
  std::string config_path;
  unsigned threads = 0;
  Outputs outputs;
};

Emission mc(const McArgs& a, const std::vector<std::string>& args,
            const CLI::App& sub, McSummary& summary) {
  McConfig config = load_mc_config(a.config_path);
  if (sub.count("--threads") > 0) config.threads = a.threads;
  summary = run_study(config);
  Emission e;
  e.text = mc_text(config, summary);
  e.json = mc_json(config, summary);
  e.manifest.command = "mc";
  e.manifest.args = args;
  e.manifest.inputs.emplace_back(a.config_path, sha256_file(a.config_path));
  e.manifest.config = {{"text", config.to_text()}};
  e.manifest.seed = config.seed;
  return e;
}

int replay(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed manifest: " + std::string(e.what()));
  }
  if (j.contains("manifest")) j = j["manifest"];
  if (!j.contains("args") || !j.contains("inputs"))
    throw ConfigError("manifest lacks args or inputs");
  for (const auto& input : j["inputs"]) {
    const std::string p = input.at("path").get<std::string>();
    if (sha256_file(p) != input.at("sha256").get<std::string>())
      throw ConfigError("input '" + p + "' changed since the manifest was written");
  }
  return run(j["args"].get<std::vector<std::string>>(), out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Estimation and bootstrap inference for exchangeable arrays",
               "exarray"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Generate an array from a registered DGP");
  s->add_option("--dgp", sim.dgp, "DGP name")->required();
  s->add_option("--param", sim.params, "DGP parameter key=value (repeatable)");
  s->add_option("--n", sim.n, "Units (joint array)");
  s->add_option("--dims", sim.dims, "Grid dimensions")->delimiter(',');
  s->add_option("--seed", sim.seed, "Seed (default $EXARRAY_SEED or 1)");
  add_outputs(s, sim.outputs);

  KsArgs ksa;
  auto* k = app.add_subcommand("ks", "Paired Kolmogorov-Smirnov test");
  k->add_option("--input", ksa.input, "Long-format CSV")->required();
  k->add_option("--columns", ksa.columns, "Two value columns to compare")
      ->delimiter(',');
  k->add_option("--b", ksa.replicates, "Bootstrap replicates")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  k->add_option("--assumptions", ksa.assumptions,
                "Subset of iid,pairwise,oneway-exporter,oneway-importer,dyadic")
      ->delimiter(',');
  k->add_option("--seed", ksa.seed, "Seed (default $EXARRAY_SEED or 1)");
  k->add_option("--threads", ksa.threads, "Worker cap (0 = all cores)");
  k->add_flag("--zero-fill", ksa.zero_fill, "Absent pairs become zero");
  add_outputs(k, ksa.outputs);

  PpmlArgs pa;
  auto* p = app.add_subcommand("ppml", "PPML gravity fit with competing p-values");
  p->add_option("--input", pa.input, "Long-format CSV")->required();
  p->add_option("--config", pa.config_path, "key = value file (flow, regressors, ...)");
  p->add_option("--flow", pa.flow, "Flow column");
  p->add_option("--regressors", pa.regressors, "Regressor columns")->delimiter(',');
  p->add_option("--log", pa.logs, "Columns to log-transform")->delimiter(',');
  p->add_flag("--no-intercept", pa.no_intercept, "Omit the intercept");
  p->add_option("--level", pa.level, "Interval level");
  p->add_option("--bootstrap-b", pa.bootstrap_b,
                "Dyadic bootstrap replicates (0 = off)");
  p->add_option("--seed", pa.seed, "Seed (default $EXARRAY_SEED or 1)");
  p->add_option("--threads", pa.threads, "Worker cap (0 = all cores)");
  p->add_flag("--zero-fill", pa.zero_fill, "Absent pairs become zero");
  add_outputs(p, pa.outputs);

  McArgs ma;
  auto* m = app.add_subcommand("mc", "Run a Monte Carlo study from a config file");
  m->add_option("--config", ma.config_path, "Study config")->required();
  m->add_option("--threads", ma.threads, "Worker cap (0 = all cores)");
  add_outputs(m, ma.outputs);

  std::string manifest_path;
  auto* r = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  r->add_option("manifest", manifest_path, "Manifest or JSON report")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };
  try {
    if (s->parsed()) {
      const bool given = s->count("--seed") > 0;
      if (!given) sim.seed = default_seed();
      Emission e = simulate(sim, args, given);
      emit(sim.outputs, e, out, seconds());
    } else if (k->parsed()) {
      const bool given = k->count("--seed") > 0;
      if (!given) ksa.seed = default_seed();
      Emission e = ks(ksa, args, given);
      emit(ksa.outputs, e, out, seconds());
    } else if (p->parsed()) {
      bool given = p->count("--seed") > 0;
      apply_ppml_config(pa, *p, given);
      if (!given) pa.seed = default_seed();
      Emission e = ppml(pa, args, given);
      emit(pa.outputs, e, out, seconds());
    } else if (m->parsed()) {
      McSummary summary;
      Emission e = mc(ma, args, *m, summary);
      emit(ma.outputs, e, out, seconds());
      if (!summary.passed()) {
        for (const auto& b : summary.bands)
          if (!b.pass)
            err << "band failure: " << b.metric << " = " << fixed(b.value, 6)
                << " outside [" << fixed(b.band.lower, 4) << ", "
                << fixed(b.band.upper, 4) << "]\n";
        return kExitBandFailure;
      }
    } else if (r->parsed()) {
      return replay(manifest_path, out, err);
    }
  } catch (const StudyError& e) {
    err << "study aborted: " << e.what() << "\n";
    return kExitBandFailure;
  } catch (const IngestionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CollinearityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (max |score| " << e.residual_norm()
        << ", last iterate";
    for (double v : e.last_iterate()) err << " " << v;
    err << ")\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace exarray::cli
