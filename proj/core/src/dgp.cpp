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

#include "exarray/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exarray/error.hpp"

namespace exarray {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Poisson(mu) quantile at u by a walk from the mode; p(mode) comes from
// lgamma so large means do not underflow.
double poisson_inverse(double mu, double u) {
  if (mu <= 0.0) return 0.0;
  const auto mode = std::floor(mu);
  const double log_pm = mode * std::log(mu) - mu - std::lgamma(mode + 1.0);
  double pm = std::exp(log_pm);
  // F(mode) by summing downward.
  double cdf = 0.0;
  {
    double p = pm;
    for (double x = mode; x >= 0.0; x -= 1.0) {
      cdf += p;
      if (p < 1e-17 * cdf) break;
      p *= x / mu;
    }
  }
  if (u <= cdf) {
    double x = mode;
    double p = pm;
    double f = cdf;
    while (x > 0.0) {
      if (u > f - p) return x;
      f -= p;
      p *= x / mu;
      x -= 1.0;
    }
    return 0.0;
  }
  double x = mode;
  double p = pm;
  double f = cdf;
  while (f < u) {
    x += 1.0;
    p *= mu / x;
    f += p;
    if (p == 0.0) break;
  }
  return x;
}

double take(const DgpParams& given, DgpParams& used, std::string_view key,
            double fallback) {
  const auto it = given.find(key);
  const double v = it == given.end() ? fallback : it->second;
  used[std::string(key)] = v;
  return v;
}

void reject_unknown(const DgpParams& given, const DgpParams& used,
                    std::string_view dgp) {
  for (const auto& [key, value] : given)
    if (used.find(key) == used.end())
      throw ConfigError("unknown parameter '" + key + "' for dgp '" +
                        std::string(dgp) + "'");
}

Dgp additive_uniform(const DgpParams& given) {
  Dgp d;
  const double k = take(given, d.params, "k", 2.0);
  if (k != std::floor(k) || k < 2.0 || k > 8.0)
    throw ConfigError("additive-uniform: k must be an integer in [2, 8]");
  d.model.arity = static_cast<std::size_t>(k);
  d.model.kernel = [](const LatentTuple& t, std::vector<double>& out) {
    double y = t.full();
    for (std::size_t p = 0; p < t.arity(); ++p) y += t.unit(p);
    out.push_back(y);
  };
  d.separate = true;
  d.mean = (k + 1.0) / 2.0;
  d.median = d.mean;
  d.kernel = k * k / 12.0;
  d.kernel_per_dimension.assign(d.model.arity, 1.0 / 12.0);
  d.component_names = {"y"};
  return d;
}

Dgp separable_additive(const DgpParams&) {
  Dgp d = additive_uniform({});
  d.params.clear();
  d.joint = false;
  d.component_names = {"y"};
  return d;
}

Dgp product_degenerate(const DgpParams&) {
  Dgp d;
  d.model.sampler = normal_latent();
  d.model.kernel = [](const LatentTuple& t, std::vector<double>& out) {
    out.push_back(t.unit(0) * t.unit(1));
  };
  d.mean = 0.0;
  d.median = 0.0;
  d.kernel = 0.0;
  d.component_names = {"y"};
  return d;
}

Dgp iid_pair(const DgpParams& given) {
  Dgp d;
  const bool symmetric = take(given, d.params, "symmetric", 1.0) != 0.0;
  d.model.latent_dim = 2;
  d.model.kernel = [symmetric](const LatentTuple& t, std::vector<double>& out) {
    const auto u = t.units();
    out.push_back(t.full(symmetric || u[0] < u[1] ? 0 : 1));
  };
  d.mean = 0.5;
  d.median = 0.5;
  d.kernel = 0.0;
  d.component_names = {"y"};
  return d;
}

Dgp constant(const DgpParams& given) {
  Dgp d;
  const double c = take(given, d.params, "c", 1.0);
  if (!std::isfinite(c)) throw ConfigError("constant: c must be finite");
  d.model.kernel = [c](const LatentTuple&, std::vector<double>& out) {
    out.push_back(c);
  };
  d.separate = true;
  d.mean = c;
  d.median = c;
  d.kernel = 0.0;
  d.kernel_per_dimension = {0.0, 0.0};
  d.component_names = {"y"};
  return d;
}

// Unit latents: 0 log GDP, 1 location, 2 exporter covariate z, 3 exporter
// effect, 4 importer effect. Pair latents: 0 and 1 Poisson draws for the two
// orientations, 2 shared pair shock.
Dgp poisson_gravity(const DgpParams& given) {
  Dgp d;
  const double t0 = take(given, d.params, "theta0", 1.0);
  const double t1 = take(given, d.params, "theta1", 0.8);
  const double t2 = take(given, d.params, "theta2", 0.8);
  const double t3 = take(given, d.params, "theta3", -0.7);
  const double t4 = take(given, d.params, "theta4", 0.0);
  const double sigma = take(given, d.params, "sigma", 0.5);
  const double pair = take(given, d.params, "pair_sigma", 0.0);
  if (!(sigma >= 0.0) || !(pair >= 0.0))
    throw ConfigError("poisson-gravity: sigma values must be non-negative");
  d.model.latent_dim = 5;
  d.model.sampler = normal_latent();
  d.model.kernel = [=](const LatentTuple& t, std::vector<double>& out) {
    const auto u = t.units();
    const double g_exp = t.unit(0, 0);
    const double g_imp = t.unit(1, 0);
    const double dist = std::abs(standard_normal_cdf(t.unit(0, 1)) -
                                 standard_normal_cdf(t.unit(1, 1)));
    const double log_dist = std::log(0.05 + dist);
    const double z = t.unit(0, 2);
    const double effect = sigma * (t.unit(0, 3) + t.unit(1, 4)) - sigma * sigma +
                          pair * t.full(2) - 0.5 * pair * pair;
    const double eta = t0 + t1 * g_exp + t2 * g_imp + t3 * log_dist + t4 * z;
    const double draw = standard_normal_cdf(t.full(u[0] < u[1] ? 0 : 1));
    const double mu = std::exp(eta + effect);
    out.push_back(poisson_inverse(mu, draw));
    out.push_back(g_exp);
    out.push_back(g_imp);
    out.push_back(log_dist);
    out.push_back(z);
  };
  d.mean = kNaN;
  d.median = kNaN;
  d.kernel = kNaN;
  d.theta = {t0, t1, t2, t3, t4};
  d.component_names = {"flow", "log_gdp_exp", "log_gdp_imp", "log_dist", "z"};
  return d;
}

// Unit latents: 0 exporter effect, 1 importer effect, 2 / 3 exporter /
// importer shocks of the first year, 4 / 5 of the second. Pair latents 0 / 1
// and 2 / 3 are the idiosyncratic terms of the two years by orientation.
Dgp ks_null_dyadic(const DgpParams& given) {
  Dgp d;
  const double unit = take(given, d.params, "unit", 1.0);
  const double shock = take(given, d.params, "shock", 1.0);
  const double noise = take(given, d.params, "noise", 0.5);
  d.model.latent_dim = 6;
  d.model.sampler = normal_latent();
  d.model.kernel = [=](const LatentTuple& t, std::vector<double>& out) {
    const std::size_t o = t.units()[0] < t.units()[1] ? 0 : 1;
    const double base = unit * (t.unit(0, 0) + t.unit(1, 1));
    out.push_back(base + shock * (t.unit(0, 2) + t.unit(1, 3)) +
                  noise * t.full(o));
    out.push_back(base + shock * (t.unit(0, 4) + t.unit(1, 5)) +
                  noise * t.full(2 + o));
  };
  d.mean = 0.0;
  d.median = 0.0;
  d.kernel = 2.0 * (unit * unit + shock * shock);
  d.component_names = {"year1", "year2"};
  return d;
}

struct Entry {
  std::string_view name;
  Dgp (*make)(const DgpParams&);
};

constexpr Entry kCatalog[] = {
    {"additive-uniform", additive_uniform},
    {"separable-additive", separable_additive},
    {"product-degenerate", product_degenerate},
    {"iid-pair", iid_pair},
    {"constant", constant},
    {"poisson-gravity", poisson_gravity},
    {"ks-null-dyadic", ks_null_dyadic},
};

}  // namespace

double Dgp::separate_kernel(std::span<const std::size_t> dims) const {
  if (dims.size() != kernel_per_dimension.size())
    throw ConfigError("dgp '" + name + "' has no grid kernel for these dims");
  const double n_min = static_cast<double>(*std::min_element(dims.begin(), dims.end()));
  double k = 0.0;
  for (std::size_t j = 0; j < dims.size(); ++j)
    k += n_min / static_cast<double>(dims[j]) * kernel_per_dimension[j];
  return k;
}

std::vector<std::string> dgp_names() {
  std::vector<std::string> names;
  for (const Entry& e : kCatalog) names.emplace_back(e.name);
  return names;
}

Dgp make_dgp(std::string_view name, const DgpParams& params) {
  for (const Entry& e : kCatalog) {
    if (e.name != name) continue;
    Dgp d = e.make(params);
    d.name = std::string(name);
    reject_unknown(params, d.params, name);
    return d;
  }
  throw ConfigError("unknown dgp '" + std::string(name) + "'");
}

}  // namespace exarray
