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

#include "exarray/mc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "exarray/csv_io.hpp"
#include "exarray/empirical.hpp"
#include "exarray/error.hpp"
#include "exarray/inference.hpp"
#include "exarray/ks.hpp"
#include "exarray/parallel.hpp"
#include "exarray/ppml.hpp"
#include "exarray/quantile.hpp"
#include "exarray/random.hpp"
#include "exarray/summation.hpp"

namespace exarray {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kRunTag = 0x6d632d72756eULL;
constexpr std::uint64_t kBootTag = 0x6d632d626f6f74ULL;
constexpr std::uint64_t kReferenceTag = 0x6d632d726566ULL;

// ---------------------------------------------------------------- parsing

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = s.find(',');
    out.emplace_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double to_double(std::string_view raw, std::string_view key) {
  const std::string text(trim(raw));
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || std::isnan(v))
    throw ConfigError("'" + std::string(key) + "': not a number: '" + text +
                      "'");
  return v;
}

std::uint64_t to_unsigned(std::string_view raw, std::string_view key) {
  const std::string_view text = trim(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("'" + std::string(key) +
                      "': not a non-negative integer: '" + std::string(text) +
                      "'");
  return v;
}

Scheme to_scheme(std::string_view s) {
  if (s == "polyadic-multinomial" || s == "polyadic")
    return Scheme::kPolyadicMultinomial;
  if (s == "pigeonhole") return Scheme::kPigeonhole;
  if (s == "multiplier") return Scheme::kMultiplier;
  throw ConfigError("unknown scheme '" + std::string(s) + "'");
}

// ----------------------------------------------------------------- helpers

std::uint64_t run_seed(const McConfig& c, std::size_t r) {
  return derive_key(c.seed, {kRunTag, r});
}

std::uint64_t boot_seed(std::uint64_t run) {
  return derive_key(run, {kBootTag});
}

unsigned run_threads(const McConfig& c) { return c.threads; }

double mean_of(std::span<const double> x) {
  return pairwise_sum(x) / static_cast<double>(x.size());
}

// Unbiased variance, shifted by the first value so that identical inputs give
// exactly zero.
double variance_of(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double shift = x[0];
  const double m = pairwise_sum(x.size(), [&](std::size_t i) { return x[i] - shift; }) /
                   static_cast<double>(x.size());
  const double ss = pairwise_sum(x.size(), [&](std::size_t i) {
    const double d = x[i] - shift - m;
    return d * d;
  });
  return ss / static_cast<double>(x.size() - 1);
}

double fraction(const std::vector<char>& flags) {
  std::size_t c = 0;
  for (char f : flags) c += f ? 1 : 0;
  return static_cast<double>(c) / static_cast<double>(flags.size());
}

Dgp study_dgp(const McConfig& c) {
  Dgp d = make_dgp(c.dgp, c.dgp_params);
  if (c.dims.empty()) {
    if (!d.joint)
      throw ConfigError("dgp '" + c.dgp + "' generates grids; set dims");
    if (c.n < d.model.arity)
      throw ConfigError("n must be at least the arity");
  } else {
    if (!d.separate)
      throw ConfigError("dgp '" + c.dgp + "' does not generate grids");
    if (c.dims.size() != d.model.arity)
      throw ConfigError("dims must have one entry per array dimension");
  }
  return d;
}

double tracked_mean(const Dgp& d) {
  if (std::isnan(d.mean))
    throw ConfigError("dgp '" + d.name + "' has no tracked mean");
  return d.mean;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

McSummary start_summary(const McConfig& c, std::string_view study) {
  McSummary s;
  s.study = std::string(study);
  s.runs = c.runs;
  return s;
}

void put(McSummary& s, std::string name, double value) {
  s.metrics.emplace_back(std::move(name), value);
}

BootstrapPlan run_plan(const McConfig& c, std::uint64_t run, Scheme scheme) {
  BootstrapPlan plan;
  plan.scheme = scheme;
  plan.replicates = c.replicates;
  plan.seed = boot_seed(run);
  plan.multiplier = c.multiplier;
  plan.recentering = c.recentering;
  plan.threads = 1;
  return plan;
}

double grid_noise_floor(const SeparateArray& a,
                        const SeparateKernelEstimate& k) {
  std::vector<double> v(a.cell_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.value(i, 0);
  const double var = variance_of(v);
  double floor = 0.0;
  const auto dims = a.dims();
  for (std::size_t j = 0; j < dims.size(); ++j)
    floor += k.lambda[j] * var * static_cast<double>(dims[j]) /
             static_cast<double>(a.cell_count());
  return floor;
}

const Statistic& identity() {
  static const Statistic s = Statistic::component(0);
  return s;
}

}  // namespace

// ------------------------------------------------------------------ config

void McConfig::validate() const {
  const auto names = study_names();
  if (std::find(names.begin(), names.end(), study) == names.end())
    throw ConfigError("unknown study '" + study + "'");
  if (dgp.empty()) throw ConfigError("missing key 'dgp'");
  if (runs < 50) throw ConfigError("R must be at least 50");
  if (replicates < 19) throw ConfigError("B must be at least 19");
  if (n == 0 && dims.empty()) throw ConfigError("set either n or dims");
  if (n != 0 && !dims.empty()) throw ConfigError("set only one of n and dims");
  for (std::size_t d : dims)
    if (d < 2) throw ConfigError("every entry of dims must be at least 2");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must be in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
  if (statistic != "mean" && statistic != "median")
    throw ConfigError("statistic must be 'mean' or 'median'");
  if (reference_draws < 1000)
    throw ConfigError("reference_draws must be at least 1000");
  for (const auto& [metric, band] : bands)
    if (!(band.lower <= band.upper))
      throw ConfigError("band." + metric + ": lower bound exceeds upper bound");
}

std::string McConfig::to_text() const {
  std::ostringstream out;
  out << "study = " << study << "\n";
  out << "dgp = " << dgp << "\n";
  for (const auto& [key, value] : dgp_params)
    out << "dgp." << key << " = " << format_double(value) << "\n";
  if (dims.empty()) {
    out << "n = " << n << "\n";
  } else {
    out << "dims = ";
    for (std::size_t j = 0; j < dims.size(); ++j)
      out << (j ? "," : "") << dims[j];
    out << "\n";
  }
  out << "statistic = " << statistic << "\n";
  out << "scheme = " << exarray::to_string(scheme) << "\n";
  out << "multiplier = "
      << (multiplier == MultiplierDistribution::kRademacher ? "rademacher"
                                                            : "normal")
      << "\n";
  out << "recentering = "
      << (recentering == Recentering::kBootstrapExpectation ? "bootstrap-expectation"
          : recentering == Recentering::kSelfNormalized     ? "self-normalized"
                                                            : "empirical-mean")
      << "\n";
  out << "B = " << replicates << "\n";
  out << "R = " << runs << "\n";
  out << "seed = " << seed << "\n";
  out << "level = " << format_double(level) << "\n";
  out << "alpha = " << format_double(alpha) << "\n";
  out << "threads = " << threads << "\n";
  if (target) out << "target = " << format_double(*target) << "\n";
  out << "reference_draws = " << reference_draws << "\n";
  if (!assumptions.empty()) {
    out << "assumptions = ";
    for (std::size_t j = 0; j < assumptions.size(); ++j)
      out << (j ? "," : "") << assumptions[j];
    out << "\n";
  }
  out << "coefficient = " << coefficient << "\n";
  for (const auto& [metric, band] : bands)
    out << "band." << metric << " = " << format_double(band.lower) << ","
        << format_double(band.upper) << "\n";
  return out.str();
}

McConfig parse_mc_config(std::istream& in) {
  McConfig c;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_number) + ": ";
    if (eq == std::string_view::npos)
      throw ConfigError(where + "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "empty key");
    if (!seen.insert(key).second)
      throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      if (key == "study") {
        c.study = std::string(value);
      } else if (key == "dgp") {
        c.dgp = std::string(value);
      } else if (key.rfind("dgp.", 0) == 0) {
        c.dgp_params[key.substr(4)] = to_double(value, key);
      } else if (key == "n") {
        c.n = to_unsigned(value, key);
      } else if (key == "dims") {
        for (const auto& d : split_list(value))
          c.dims.push_back(to_unsigned(d, key));
      } else if (key == "statistic") {
        c.statistic = std::string(value);
      } else if (key == "scheme") {
        c.scheme = to_scheme(value);
      } else if (key == "multiplier") {
        if (value == "normal")
          c.multiplier = MultiplierDistribution::kStandardNormal;
        else if (value == "rademacher")
          c.multiplier = MultiplierDistribution::kRademacher;
        else
          throw ConfigError("multiplier must be 'normal' or 'rademacher'");
      } else if (key == "recentering") {
        if (value == "empirical-mean")
          c.recentering = Recentering::kEmpiricalMean;
        else if (value == "bootstrap-expectation")
          c.recentering = Recentering::kBootstrapExpectation;
        else if (value == "self-normalized")
          c.recentering = Recentering::kSelfNormalized;
        else
          throw ConfigError(
              "recentering must be 'empirical-mean', 'bootstrap-expectation' "
              "or 'self-normalized'");
      } else if (key == "B") {
        c.replicates = to_unsigned(value, key);
      } else if (key == "R") {
        c.runs = to_unsigned(value, key);
      } else if (key == "seed") {
        c.seed = to_unsigned(value, key);
      } else if (key == "level") {
        c.level = to_double(value, key);
      } else if (key == "alpha") {
        c.alpha = to_double(value, key);
      } else if (key == "threads") {
        c.threads = static_cast<unsigned>(to_unsigned(value, key));
      } else if (key == "target") {
        c.target = to_double(value, key);
      } else if (key == "reference_draws") {
        c.reference_draws = to_unsigned(value, key);
      } else if (key == "assumptions") {
        c.assumptions = split_list(value);
      } else if (key == "coefficient") {
        c.coefficient = to_unsigned(value, key);
      } else if (key.rfind("band.", 0) == 0) {
        const auto parts = split_list(value);
        if (parts.size() != 2)
          throw ConfigError("band needs 'lower,upper'");
        c.bands.emplace_back(key.substr(5), Band{to_double(parts[0], key),
                                                 to_double(parts[1], key)});
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  c.validate();
  return c;
}

McConfig parse_mc_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_mc_config(in);
}

McConfig load_mc_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_mc_config(in);
}

// ----------------------------------------------------------------- summary

std::optional<double> McSummary::metric(std::string_view name) const {
  for (const auto& [key, value] : metrics)
    if (key == name) return value;
  return std::nullopt;
}

bool McSummary::passed() const {
  return std::all_of(bands.begin(), bands.end(),
                     [](const BandResult& b) { return b.pass; });
}

double binomial_mc_se(double rate, std::size_t runs) {
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(runs));
}

// ----------------------------------------------------------------- studies

McSummary clt_variance_study(const McConfig& c) {
  const Stopwatch clock;
  const Dgp d = study_dgp(c);
  const double truth = tracked_mean(d);
  std::vector<double> g(c.runs);
  parallel_for(c.runs, run_threads(c), [&](std::size_t r) {
    const std::uint64_t seed = run_seed(c, r);
    if (c.dims.empty()) {
      g[r] = empirical_process_value(generate_joint(d.model, c.n, seed),
                                     identity(), truth);
    } else {
      g[r] = empirical_process_value(generate_separate(d.model, c.dims, seed),
                                     identity(), truth);
    }
  });
  const double kernel =
      c.target ? *c.target : (c.dims.empty() ? d.kernel : d.separate_kernel(c.dims));
  const double var = variance_of(g);
  McSummary s = start_summary(c, "clt-variance");
  put(s, "mean", mean_of(g));
  put(s, "variance", var);
  put(s, "variance_se", var * std::sqrt(2.0 / static_cast<double>(c.runs - 1)));
  put(s, "kernel", kernel);
  put(s, "variance_ratio", kernel > 0.0 ? var / kernel : kNaN);
  s.runtime_seconds = clock.seconds();
  return s;
}

McSummary coverage_study(const McConfig& c) {
  const Stopwatch clock;
  const Dgp d = study_dgp(c);
  const bool grid = !c.dims.empty();
  const bool median = c.statistic == "median";
  const double truth = median ? d.median : tracked_mean(d);
  if (std::isnan(truth))
    throw ConfigError("dgp '" + d.name + "' has no tracked median");
  if (grid && c.scheme != Scheme::kPigeonhole)
    throw ConfigError("grids use the pigeonhole scheme");
  if (!grid && c.scheme == Scheme::kPigeonhole)
    throw ConfigError("the pigeonhole scheme needs dims");
  if (median && c.scheme != Scheme::kPolyadicMultinomial)
    throw ConfigError("median coverage uses the polyadic multinomial scheme");

  std::vector<char> covered(c.runs), flagged(c.runs);
  std::vector<double> width(c.runs);
  parallel_for(c.runs, run_threads(c), [&](std::size_t r) {
    const std::uint64_t seed = run_seed(c, r);
    const BootstrapPlan plan = run_plan(c, seed, c.scheme);
    Interval interval;
    if (grid) {
      const SeparateArray a = generate_separate(d.model, c.dims, seed);
      const SeparateKernelEstimate k =
          estimate_kernel_separate(a, identity(), identity());
      flagged[r] = k.value <= 3.0 * grid_noise_floor(a, k);
      const ReplicateSet set = bootstrap_process_separate(a, identity(), plan);
      interval = percentile_interval(set, empirical_mean(a, identity()), c.level);
    } else {
      const JointArray a = generate_joint(d.model, c.n, seed);
      flagged[r] = estimate_kernel_joint(a, identity(), identity()).near_degenerate();
      if (median) {
        interval = quantile_estimate(a, 0, 0.5, plan, c.level).interval;
      } else {
        const ReplicateSet set =
            c.scheme == Scheme::kMultiplier
                ? multiplier_process(a, identity(), plan)
                : bootstrap_process_joint(a, identity(), plan);
        interval =
            percentile_interval(set, empirical_mean(a, identity()), c.level);
      }
    }
    covered[r] = interval.lower <= truth && truth <= interval.upper;
    width[r] = interval.upper - interval.lower;
  });
  const double degenerate = fraction(flagged);
  if (degenerate > 0.2)
    throw StudyError("coverage study aborted: degeneracy flag raised in " +
                     format_double(100.0 * degenerate) +
                     "% of runs (limit 20%); the kernel estimate is at its "
                     "noise floor, so the Gaussian limit does not apply");
  const double rate = fraction(covered);
  McSummary s = start_summary(c, "coverage");
  put(s, "coverage", rate);
  put(s, "mc_se", binomial_mc_se(rate, c.runs));
  put(s, "nominal", c.level);
  put(s, "mean_width", mean_of(width));
  put(s, "degenerate_rate", degenerate);
  s.runtime_seconds = clock.seconds();
  return s;
}

McSummary degenerate_limit_study(const McConfig& c) {
  const Stopwatch clock;
  if (c.dgp != "product-degenerate")
    throw ConfigError("degenerate-limit study needs dgp = product-degenerate");
  if (!c.dims.empty()) throw ConfigError("degenerate-limit study needs n");
  const Dgp d = study_dgp(c);
  std::vector<double> t(c.runs);
  parallel_for(c.runs, run_threads(c), [&](std::size_t r) {
    const JointArray a = generate_joint(d.model, c.n, run_seed(c, r));
    t[r] = static_cast<double>(c.n) * empirical_mean(a, identity());
  });
  std::vector<double> reference(c.reference_draws);
  StreamRng rng(derive_key(c.seed, {kReferenceTag}));
  for (double& x : reference) {
    const double z = rng.normal();
    x = z * z - 1.0;
  }
  const double var = variance_of(t);
  McSummary s = start_summary(c, "degenerate-limit");
  put(s, "mean", mean_of(t));
  put(s, "mean_se", std::sqrt(var / static_cast<double>(c.runs)));
  put(s, "variance", var);
  put(s, "ks_distance", two_sample_ks_distance(t, std::move(reference)));
  s.runtime_seconds = clock.seconds();
  return s;
}

McSummary kernel_study(const McConfig& c) {
  const Stopwatch clock;
  const Dgp d = study_dgp(c);
  std::vector<double> k(c.runs);
  parallel_for(c.runs, run_threads(c), [&](std::size_t r) {
    const std::uint64_t seed = run_seed(c, r);
    if (c.dims.empty()) {
      k[r] = estimate_kernel_joint(generate_joint(d.model, c.n, seed),
                                   identity(), identity())
                 .value;
    } else {
      k[r] = estimate_kernel_separate(generate_separate(d.model, c.dims, seed),
                                      identity(), identity())
                 .value;
    }
  });
  const double kernel =
      c.target ? *c.target : (c.dims.empty() ? d.kernel : d.separate_kernel(c.dims));
  const double m = mean_of(k);
  McSummary s = start_summary(c, "kernel");
  put(s, "kernel_mean", m);
  put(s, "kernel_se", std::sqrt(variance_of(k) / static_cast<double>(c.runs)));
  put(s, "kernel", kernel);
  put(s, "kernel_ratio", kernel > 0.0 ? m / kernel : kNaN);
  s.runtime_seconds = clock.seconds();
  return s;
}

McSummary multiplier_agreement_study(const McConfig& c) {
  const Stopwatch clock;
  if (!c.dims.empty()) throw ConfigError("multiplier study needs n");
  const Dgp d = study_dgp(c);
  if (d.model.arity != 2) throw ConfigError("multiplier study needs k = 2");
  std::vector<double> ratio(c.runs);
  parallel_for(c.runs, run_threads(c), [&](std::size_t r) {
    const std::uint64_t seed = run_seed(c, r);
    const JointArray a = generate_joint(d.model, c.n, seed);
    const double k = estimate_kernel_joint(a, identity(), identity()).value;
    const ReplicateSet set =
        multiplier_process(a, identity(), run_plan(c, seed, Scheme::kMultiplier));
    ratio[r] = variance_of(set.draws) / k;
  });
  std::vector<char> within(c.runs);
  for (std::size_t r = 0; r < c.runs; ++r)
    within[r] = std::abs(ratio[r] - 1.0) <= 0.15;
  McSummary s = start_summary(c, "multiplier-agreement");
  put(s, "ratio_mean", mean_of(ratio));
  put(s, "ratio_sd", std::sqrt(variance_of(ratio)));
  put(s, "within_15", fraction(within));
  s.runtime_seconds = clock.seconds();
  return s;
}

McSummary ks_size_study(const McConfig& c) {
  const Stopwatch clock;
  if (!c.dims.empty()) throw ConfigError("ks-size study needs n");
  const Dgp d = study_dgp(c);
  if (d.model.arity != 2) throw ConfigError("ks-size study needs k = 2");
  std::vector<KsAssumption> assumptions;
  if (c.assumptions.empty())
    assumptions.assign(kKsAssumptions.begin(), kKsAssumptions.end());
  for (const auto& name : c.assumptions)
    assumptions.push_back(parse_ks_assumption(name));
  const std::size_t m = assumptions.size();
  std::vector<char> reject(c.runs * m);
  std::vector<double> statistic(c.runs);
  parallel_for(c.runs, run_threads(c), [&](std::size_t r) {
    const std::uint64_t seed = run_seed(c, r);
    const JointArray a = generate_joint(d.model, c.n, seed);
    if (a.dim() < 2) throw ConfigError("ks-size study needs two components");
    const KsResult res = ks_compare_assumptions(a, 0, 1, c.replicates,
                                                boot_seed(seed), assumptions, 1);
    statistic[r] = res.statistic;
    for (std::size_t j = 0; j < m; ++j)
      reject[r * m + j] =
          res.pvalues.find(to_string(assumptions[j]))->second <= c.alpha;
  });
  McSummary s = start_summary(c, "ks-size");
  put(s, "statistic_mean", mean_of(statistic));
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<char> col(c.runs);
    for (std::size_t r = 0; r < c.runs; ++r) col[r] = reject[r * m + j];
    const double rate = fraction(col);
    const std::string name(to_string(assumptions[j]));
    put(s, "rejection." + name, rate);
    put(s, "mc_se." + name, binomial_mc_se(rate, c.runs));
  }
  s.runtime_seconds = clock.seconds();
  return s;
}

McSummary ppml_size_study(const McConfig& c) {
  const Stopwatch clock;
  if (c.dgp != "poisson-gravity")
    throw ConfigError("ppml-size study needs dgp = poisson-gravity");
  if (!c.dims.empty()) throw ConfigError("ppml-size study needs n");
  const Dgp d = study_dgp(c);
  if (c.coefficient >= d.theta.size())
    throw ConfigError("coefficient out of range");
  std::vector<std::string> assumptions = c.assumptions;
  if (assumptions.empty())
    assumptions.assign(kAssumptions.begin(), kAssumptions.end());
  bool bootstrap = false;
  for (const auto& a : assumptions) {
    if (std::find(kAssumptions.begin(), kAssumptions.end(), a) ==
        kAssumptions.end())
      throw ConfigError("unknown assumption '" + a + "'");
    bootstrap = bootstrap || a == kDyadicBootstrap;
  }
  const std::size_t m = assumptions.size();
  const std::size_t regressors[] = {1, 2, 3, 4};
  std::vector<char> reject(c.runs * m), withheld(c.runs * m);
  std::vector<double> estimate(c.runs);
  parallel_for(c.runs, run_threads(c), [&](std::size_t r) {
    const std::uint64_t seed = run_seed(c, r);
    const GravityData data =
        gravity_from_array(generate_joint(d.model, c.n, seed), 0, regressors);
    const PpmlFit fit = ppml_fit(data);
    InferenceReport report = variance_compare(data, fit, c.level);
    if (bootstrap)
      ppml_bootstrap_pvalues(
          data, fit, run_plan(c, seed, Scheme::kPolyadicMultinomial), report);
    estimate[r] = fit.theta[static_cast<Eigen::Index>(c.coefficient)];
    for (std::size_t j = 0; j < m; ++j) {
      const double p = report.pvalues.find(assumptions[j])->second[c.coefficient];
      withheld[r * m + j] = std::isnan(p);
      reject[r * m + j] = p <= c.alpha;
    }
  });
  McSummary s = start_summary(c, "ppml-size");
  put(s, "theta_mean", mean_of(estimate));
  put(s, "theta_sd", std::sqrt(variance_of(estimate)));
  put(s, "theta_true", d.theta[c.coefficient]);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<char> col(c.runs), held(c.runs);
    for (std::size_t r = 0; r < c.runs; ++r) {
      col[r] = reject[r * m + j];
      held[r] = withheld[r * m + j];
    }
    const double rate = fraction(col);
    put(s, "rejection." + assumptions[j], rate);
    put(s, "mc_se." + assumptions[j], binomial_mc_se(rate, c.runs));
    if (fraction(held) > 0.0)
      s.notes.push_back(assumptions[j] + ": p-value withheld in " +
                        format_double(100.0 * fraction(held)) + "% of runs");
  }
  s.runtime_seconds = clock.seconds();
  return s;
}

std::vector<std::string> study_names() {
  return {"clt-variance", "coverage",  "degenerate-limit", "kernel",
          "multiplier-agreement", "ks-size", "ppml-size"};
}

McSummary run_study(const McConfig& config) {
  config.validate();
  McSummary s;
  const std::string& study = config.study;
  if (study == "clt-variance")
    s = clt_variance_study(config);
  else if (study == "coverage")
    s = coverage_study(config);
  else if (study == "degenerate-limit")
    s = degenerate_limit_study(config);
  else if (study == "kernel")
    s = kernel_study(config);
  else if (study == "multiplier-agreement")
    s = multiplier_agreement_study(config);
  else if (study == "ks-size")
    s = ks_size_study(config);
  else
    s = ppml_size_study(config);
  for (const auto& [metric, band] : config.bands) {
    const auto value = s.metric(metric);
    if (!value)
      throw ConfigError("band names unknown metric '" + metric +
                        "' for study '" + study + "'");
    s.bands.push_back({metric, band, *value,
                       band.lower <= *value && *value <= band.upper});
  }
  return s;
}

}  // namespace exarray
