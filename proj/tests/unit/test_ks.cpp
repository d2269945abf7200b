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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "exarray/ahk.hpp"
#include "exarray/bootstrap.hpp"
#include "exarray/dgp.hpp"
#include "exarray/error.hpp"
#include "exarray/ks.hpp"
#include "oracles.hpp"

namespace exarray {
namespace {

std::vector<double> column(const JointArray& a, std::size_t c) {
  std::vector<double> out(a.cell_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value(i, c);
  return out;
}

JointArray transformed(const JointArray& a, double (*f)(double)) {
  std::vector<double> data(a.data().begin(), a.data().end());
  for (double& v : data) v = f(v);
  return JointArray(a.units(), a.arity(), a.dim(), std::move(data));
}

TEST(KsGrid, StatisticMatchesBruteForce) {
  std::mt19937_64 gen(1);
  for (std::size_t n = 2; n <= 6; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const JointArray a = trial % 2 ? testing::random_joint(gen, n, 2, 3, 3)
                                     : testing::random_joint_continuous(gen, n, 2, 3);
      for (std::size_t c : {1u, 2u}) {
        const KsGrid g(a, 0, c);
        EXPECT_EQ(g.statistic(), testing::brute_ks(column(a, 0), column(a, c)));
        EXPECT_EQ(std::abs(g.difference_at(g.argmax())), g.statistic());
        for (double u : g.grid())
          if (u < g.argmax()) {
            EXPECT_LT(std::abs(g.difference_at(u)), g.statistic());
          }
      }
    }
}

TEST(KsGrid, IdenticalAndSeparatedComponents) {
  std::mt19937_64 gen(2);
  JointArray a = testing::random_joint_continuous(gen, 5, 2, 2);
  std::vector<double> same(a.data().begin(), a.data().end());
  for (std::size_t i = 0; i < a.cell_count(); ++i) same[2 * i + 1] = same[2 * i];
  const JointArray twin(5, 2, 2, same);
  EXPECT_EQ(KsGrid(twin, 0, 1).statistic(), 0.0);
  const KsResult r = ks_compare_assumptions(twin, 0, 1, 50, 3);
  for (const auto& [name, p] : r.pvalues) EXPECT_EQ(p, 1.0) << name;

  std::vector<double> split(2 * a.cell_count());
  for (std::size_t i = 0; i < a.cell_count(); ++i) split[2 * i + 1] = 1.0;
  EXPECT_EQ(KsGrid(JointArray(5, 2, 2, split), 0, 1).statistic(), 1.0);
}

TEST(KsGrid, InvariantUnderRelabelingAndMonotoneMaps) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const JointArray a = testing::random_joint_continuous(gen, 6, 2, 2);
    const double s = KsGrid(a, 0, 1).statistic();
    const auto perm = testing::random_permutation(gen, 6);
    EXPECT_EQ(KsGrid(relabel(a, perm), 0, 1).statistic(), s);
    EXPECT_EQ(KsGrid(transformed(a, [](double v) { return std::exp(v); }), 0, 1)
                  .statistic(),
              s);
    EXPECT_EQ(KsGrid(transformed(a, [](double v) { return std::atan(3.0 * v); }), 0, 1)
                  .statistic(),
              s);
  }
}

TEST(KsGrid, RecenteredSupMatchesBruteForce) {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> count(0, 3);
  for (std::size_t n = 2; n <= 6; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const JointArray a = testing::random_joint(gen, n, 2, 2, 4);
      const KsGrid g(a, 0, 1);
      const std::vector<double> ones(a.cell_count(), 1.0);
      EXPECT_EQ(g.recentered_sup(ones), 0.0);
      std::vector<double> w(a.cell_count());
      for (double& x : w) x = count(gen);
      EXPECT_NEAR(g.recentered_sup(w),
                  testing::brute_recentered_sup(column(a, 0), column(a, 1), w), 1e-15);
    }
  const JointArray a(2, 2, 2, {0, 1, 1, 0});
  EXPECT_THROW(KsGrid(a, 0, 1).recentered_sup(std::vector<double>(3, 1.0)), DomainError);
}

// Every dyadic draw is a support point of the exact polyadic law, and the
// draw mean matches the exact expectation.
TEST(KsPaired, DyadicDrawsFollowTheExhaustiveLaw) {
  std::mt19937_64 gen(5);
  for (std::size_t n : {3u, 4u}) {
    const JointArray a = testing::random_joint(gen, n, 2, 2, 3);
    const auto a0 = column(a, 0), a1 = column(a, 1);
    std::vector<std::pair<double, double>> support;
    double mean = 0.0, second = 0.0;
    for (const auto& [counts, prob] : testing::exhaustive_multinomial(n)) {
      std::vector<double> w(a.cell_count());
      for (std::size_t i = 0; i < w.size(); ++i) {
        const auto t = a.tuple(i);
        w[i] = static_cast<double>(counts[t[0]]) * counts[t[1]];
      }
      const double s = testing::brute_recentered_sup(a0, a1, w);
      support.emplace_back(s, prob);
      mean += prob * s;
      second += prob * s * s;
    }
    BootstrapPlan plan;
    plan.replicates = 20000;
    plan.seed = 9;
    const KsResult r = ks_paired(a, 0, 1, plan);
    const auto& draws = r.draws.at("dyadic");
    ASSERT_EQ(draws.size(), plan.replicates);
    double sum = 0.0;
    for (double d : draws) {
      sum += d;
      const bool found = std::any_of(support.begin(), support.end(), [&](const auto& s) {
        return std::abs(s.first - d) < 1e-12;
      });
      EXPECT_TRUE(found) << d;
    }
    const double sd = std::sqrt(second - mean * mean);
    EXPECT_NEAR(sum / plan.replicates, mean, 4.0 * sd / std::sqrt(20000.0)) << n;
  }
}

TEST(KsCellWeights, StructureUnderEachAssumption) {
  std::mt19937_64 gen(6);
  const std::size_t n = 7;
  const JointArray a = testing::random_joint(gen, n, 2, 2);
  auto at = [&](const std::vector<double>& w, Unit i, Unit j) {
    return w[tuple_rank(std::vector<Unit>{i, j}, n)];
  };
  for (std::uint64_t b = 0; b < 20; ++b) {
    StreamRng rng = replicate_stream(11, b);
    const auto iid = ks_cell_weights(a, KsAssumption::kIid, rng);
    const auto pair = ks_cell_weights(a, KsAssumption::kPairwise, rng);
    const auto exp = ks_cell_weights(a, KsAssumption::kOnewayExporter, rng);
    const auto imp = ks_cell_weights(a, KsAssumption::kOnewayImporter, rng);
    StreamRng copy = rng;
    const auto dyad = ks_cell_weights(a, KsAssumption::kDyadic, rng);
    const UnitWeights u = draw_polyadic_weights(n, copy);
    const double cells = static_cast<double>(a.cell_count());
    auto total = [](const std::vector<double>& w) {
      double s = 0.0;
      for (double x : w) s += x;
      return s;
    };
    EXPECT_EQ(total(iid), cells);
    EXPECT_EQ(total(pair), cells);
    EXPECT_EQ(total(exp), cells);
    EXPECT_EQ(total(imp), cells);
    for (Unit i = 0; i < n; ++i)
      for (Unit j = 0; j < n; ++j) {
        if (i == j) continue;
        EXPECT_EQ(at(pair, i, j), at(pair, j, i));
        // One-way weights depend only on the clustered position.
        EXPECT_EQ(at(exp, i, j), at(exp, i, i == 0 ? 1 : 0));
        EXPECT_EQ(at(imp, i, j), at(imp, j == 0 ? 1 : 0, j));
        EXPECT_EQ(at(dyad, i, j), static_cast<double>(u.joint_weight(std::vector<Unit>{i, j})));
      }
  }
}

TEST(KsCompare, ColumnsDeterminismAndErrors) {
  const Dgp d = make_dgp("ks-null-dyadic");
  const JointArray a = generate_joint(d.model, 20, 7);
  const KsResult r1 = ks_compare_assumptions(a, 0, 1, 99, 5);
  const KsResult r3 = ks_compare_assumptions(a, 0, 1, 99, 5, kKsAssumptions, 3);
  ASSERT_EQ(r1.pvalues.size(), 5u);
  for (KsAssumption k : kKsAssumptions) {
    const std::string name(to_string(k));
    EXPECT_EQ(r1.draws.at(name), r3.draws.at(name)) << name;
    EXPECT_EQ(r1.pvalues.at(name), ks_pvalue(r1.draws.at(name), r1.statistic));
    EXPECT_EQ(parse_ks_assumption(name), k);
  }
  BootstrapPlan plan;
  plan.replicates = 99;
  plan.seed = 5;
  EXPECT_EQ(ks_paired(a, 0, 1, plan).draws.at("dyadic"), r1.draws.at("dyadic"));
  EXPECT_THROW(parse_ks_assumption("cluster"), ConfigError);
  EXPECT_THROW(ks_compare_assumptions(a, 0, 1, 0, 5), PlanError);
  plan.scheme = Scheme::kPigeonhole;
  EXPECT_THROW(ks_paired(a, 0, 1, plan), PlanError);
  const JointArray one(3, 2, 1, {1, 2, 3, 4, 5, 6});
  EXPECT_THROW(KsGrid(one, 0, 0), DomainError);
  const JointArray triad(3, 3, 2, std::vector<double>(12, 0.0));
  EXPECT_THROW(KsGrid(triad, 0, 1), UnsupportedArityError);
  EXPECT_THROW(KsGrid(a, 0, 2), DomainError);
  const JointArray nan(2, 2, 2, {0, NAN, 1, 1});
  EXPECT_THROW(KsGrid(nan, 0, 1), EvaluationError);
}

TEST(KsPvalue, ZeroStatisticAndTail) {
  const std::vector<double> draws = {0.1, 0.2, 0.3, 0.4};
  EXPECT_EQ(ks_pvalue(draws, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(ks_pvalue(draws, 0.25), 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(ks_pvalue(draws, 0.5), 1.0 / 5.0);
}

TEST(TwoSampleKs, KnownDistances) {
  EXPECT_EQ(two_sample_ks_distance({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_EQ(two_sample_ks_distance({0, 0}, {1, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(two_sample_ks_distance({1, 2, 3, 4}, {3, 4, 5, 6}), 0.5);
  EXPECT_THROW(two_sample_ks_distance({}, {1.0}), DomainError);
}

}  // namespace
}  // namespace exarray
