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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "exarray/csv_io.hpp"

namespace exarray {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

std::string config_path(const char* name) {
  return (fs::path(EXARRAY_TEST_DATA_DIR) / name).string();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::current_path() / "cli_test_tmp" /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("EXARRAY_SEED");
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Simulated CSV on disk.
  std::string simulate(const std::string& dgp, int n, int seed,
                       const std::string& name) {
    const Result r = run({"simulate", "--dgp", dgp, "--n", std::to_string(n), "--seed",
                          std::to_string(seed), "--out", path(name)});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    return path(name);
  }

  fs::path dir_;
};

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

TEST_F(Cli, SimulateWritesEveryOrderedPairDeterministically) {
  const Result a = run({"simulate", "--dgp", "additive-uniform", "--n", "10", "--seed", "7"});
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(count_lines(a.out), 91u);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "unit_i,unit_j,y");
  const Result b = run({"simulate", "--dgp", "additive-uniform", "--n", "10", "--seed", "7"});
  EXPECT_EQ(a.out, b.out);
  const Result c = run({"simulate", "--dgp", "additive-uniform", "--n", "10", "--seed", "8"});
  EXPECT_NE(a.out, c.out);
  std::istringstream in(a.out);
  EXPECT_EQ(read_dyadic_csv(in).array.units(), 10u);
}

TEST_F(Cli, SimulateSeedFromEnvironment) {
  setenv("EXARRAY_SEED", "7", 1);
  const Result env = run({"simulate", "--dgp", "additive-uniform", "--n", "5"});
  unsetenv("EXARRAY_SEED");
  const Result flag = run({"simulate", "--dgp", "additive-uniform", "--n", "5", "--seed", "7"});
  EXPECT_EQ(env.out, flag.out);
  setenv("EXARRAY_SEED", "seven", 1);
  EXPECT_EQ(run({"simulate", "--dgp", "additive-uniform", "--n", "5"}).code, cli::kExitUsage);
  unsetenv("EXARRAY_SEED");
}

TEST_F(Cli, SimulateUsageErrors) {
  const Result unknown = run({"simulate", "--dgp", "unknown", "--n", "10"});
  EXPECT_EQ(unknown.code, cli::kExitUsage);
  EXPECT_NE(unknown.err.find("unknown"), std::string::npos);
  EXPECT_EQ(run({"simulate", "--dgp", "additive-uniform"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"simulate", "--dgp", "poisson-gravity", "--dims", "3,4"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"simulate", "--dgp", "constant", "--param", "c", "--n", "4"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"simulate", "--dgp", "constant", "--param", "d=1", "--n", "4"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--version"}).code, cli::kExitOk);
}

TEST_F(Cli, SimulateGrid) {
  const Result r = run({"simulate", "--dgp", "separable-additive", "--dims", "3,4"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(count_lines(r.out), 13u);
}

TEST_F(Cli, KsIdenticalColumnsReportZero) {
  std::string csv = "unit_i,unit_j,a,b\n";
  const char* labels[] = {"AUS", "BRA", "CHN", "DEU"};
  int v = 0;
  for (const char* i : labels)
    for (const char* j : labels)
      if (i != j) {
        csv += std::string(i) + "," + j + "," + std::to_string(v) + "," + std::to_string(v) + "\n";
        v = (v * 7 + 3) % 11;
      }
  spit(path("same.csv"), csv);
  const Result r = run({"ks", "--input", path("same.csv"), "--b", "49"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const std::string header = r.out.substr(r.out.find("comparison"));
  std::istringstream rows(header);
  std::string line;
  std::getline(rows, line);
  std::getline(rows, line);
  std::istringstream fields(line);
  std::string cmp, vs, cmp_b, stat;
  fields >> cmp >> vs >> cmp_b >> stat;
  EXPECT_EQ(stat, "0.000");
  std::string p;
  int columns = 0;
  for (; fields >> p; ++columns) EXPECT_EQ(p, "1.000");
  EXPECT_EQ(columns, 5);
}

TEST_F(Cli, KsColumnOrderAndSchema) {
  const std::string input = simulate("ks-null-dyadic", 12, 3, "null.csv");
  const Result r = run({"ks", "--input", input, "--b", "99", "--seed", "5", "--json",
                        path("ks.json"), "--out", path("ks.txt")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const std::string text = slurp(path("ks.txt"));
  const std::string header = text.substr(text.find("comparison"));
  const std::vector<std::string> order = {"iid", "pairwise", "oneway-exporter",
                                          "oneway-importer", "dyadic"};
  std::size_t at = 0;
  for (const auto& name : order) {
    const std::size_t pos = header.find(name, at);
    ASSERT_NE(pos, std::string::npos) << name;
    at = pos + name.size();
  }
  const auto j = nlohmann::json::parse(slurp(path("ks.json")));
  EXPECT_EQ(j["schema"], "exarray.ks/1");
  EXPECT_EQ(j["assumptions"].get<std::vector<std::string>>(), order);
  const double dyadic = j["pvalues"]["dyadic"].get<double>();
  EXPECT_GE(dyadic, 0.0);
  EXPECT_LE(dyadic, 1.0);
  EXPECT_TRUE(j.contains("manifest"));
  EXPECT_TRUE(fs::exists(path("ks.json.manifest.json")));

  const Result subset = run({"ks", "--input", input, "--b", "19", "--assumptions",
                             "dyadic,iid", "--json", path("sub.json"), "--out",
                             path("sub.txt")});
  ASSERT_EQ(subset.code, cli::kExitOk) << subset.err;
  const auto js = nlohmann::json::parse(slurp(path("sub.json")));
  EXPECT_EQ(js["assumptions"].get<std::vector<std::string>>(),
            (std::vector<std::string>{"iid", "dyadic"}));
  EXPECT_EQ(run({"ks", "--input", input, "--assumptions", "cluster"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"ks", "--input", input, "--columns", "y1,nope"}).code, cli::kExitUsage);
}

TEST_F(Cli, KsIngestionErrorsCarryRowNumbers) {
  spit(path("bad.csv"), "unit_i,unit_j,a,b\nA,B,1,2\nB,A,x,2\n");
  const Result r = run({"ks", "--input", path("bad.csv")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("row 3"), std::string::npos) << r.err;
  const Result missing = run({"ks", "--input", path("absent.csv")});
  EXPECT_EQ(missing.code, cli::kExitUsage);
}

TEST_F(Cli, PpmlInterceptOnlyAndColumnErrors) {
  const std::string input = simulate("poisson-gravity", 10, 4, "gravity.csv");
  const Result r = run({"ppml", "--input", input, "--flow", "flow", "--json",
                        path("int.json"), "--out", path("int.txt")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::ifstream in(input);
  const DyadicTable t = read_dyadic_csv(in);
  double mean = 0.0;
  for (std::size_t i = 0; i < t.array.cell_count(); ++i) mean += t.array.value(i, 0);
  mean /= static_cast<double>(t.array.cell_count());
  const auto j = nlohmann::json::parse(slurp(path("int.json")));
  EXPECT_EQ(j["schema"], "exarray.ppml/1");
  EXPECT_NEAR(j["theta"][0].get<double>(), std::log(mean), 1e-10);

  const Result missing = run({"ppml", "--input", input, "--flow", "flow", "--regressors",
                              "log_gdp_exp,tariff"});
  EXPECT_EQ(missing.code, cli::kExitUsage);
  EXPECT_NE(missing.err.find("'tariff'"), std::string::npos) << missing.err;
  EXPECT_EQ(run({"ppml", "--input", input}).code, cli::kExitUsage);
  const Result collinear = run({"ppml", "--input", input, "--flow", "flow", "--regressors",
                                "log_gdp_exp,log_gdp_exp"});
  EXPECT_EQ(collinear.code, cli::kExitUsage);
  EXPECT_NE(collinear.err.find("log_gdp_exp"), std::string::npos);
}

TEST_F(Cli, PpmlFullReportWithBootstrapAndConfigFile) {
  const std::string input = simulate("poisson-gravity", 12, 5, "gravity.csv");
  spit(path("ppml.conf"),
       "flow = flow\nregressors = log_gdp_exp, log_gdp_imp, log_dist, z\n"
       "bootstrap_b = 30\nseed = 3\n");
  const Result r = run({"ppml", "--input", input, "--config", path("ppml.conf"), "--json",
                        path("full.json"), "--out", path("full.txt")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("full.json")));
  EXPECT_EQ(j["coefficients"].size(), 5u);
  const auto assumptions = j["assumptions"].get<std::vector<std::string>>();
  EXPECT_EQ(assumptions.back(), "dyadic-bootstrap");
  EXPECT_EQ(assumptions.size(), 6u);
  const std::string text = slurp(path("full.txt"));
  EXPECT_NE(text.find("log_dist"), std::string::npos);
  spit(path("bad.conf"), "flow = flow\nwibble = 3\n");
  const Result bad = run({"ppml", "--input", input, "--config", path("bad.conf")});
  EXPECT_EQ(bad.code, cli::kExitUsage);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos);
}

TEST_F(Cli, McExitCodes) {
  const Result ok = run({"mc", "--config", config_path("coverage.conf"), "--json",
                         path("cov.json"), "--out", path("cov.txt")});
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.err << slurp(path("cov.txt"));
  const auto j = nlohmann::json::parse(slurp(path("cov.json")));
  EXPECT_TRUE(j.contains("manifest"));

  spit(path("impossible.conf"),
       "study = coverage\ndgp = additive-uniform\nn = 20\nB = 49\nR = 50\n"
       "band.coverage = 1.01,1.1\n");
  const Result fail = run({"mc", "--config", path("impossible.conf")});
  EXPECT_EQ(fail.code, cli::kExitBandFailure);
  EXPECT_NE(fail.err.find("band failure: coverage"), std::string::npos) << fail.err;

  spit(path("malformed.conf"), "study = coverage\nthis is not a config\n");
  const Result bad = run({"mc", "--config", path("malformed.conf")});
  EXPECT_EQ(bad.code, cli::kExitUsage);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos);

  spit(path("degenerate.conf"), "study = coverage\ndgp = iid-pair\nn = 20\nB = 49\nR = 50\n");
  EXPECT_EQ(run({"mc", "--config", path("degenerate.conf")}).code, cli::kExitBandFailure);
}

TEST_F(Cli, ReplayReproducesReportsByteForByte) {
  const std::string input = simulate("ks-null-dyadic", 10, 6, "null.csv");
  ASSERT_EQ(run({"ks", "--input", input, "--b", "49", "--json", path("r.json"), "--out",
                 path("r.txt")})
                .code,
            cli::kExitOk);
  const std::string json = slurp(path("r.json"));
  const std::string text = slurp(path("r.txt"));
  fs::remove(path("r.json"));
  fs::remove(path("r.txt"));
  const Result replay = run({"replay", path("r.json.manifest.json")});
  ASSERT_EQ(replay.code, cli::kExitOk) << replay.err;
  EXPECT_EQ(slurp(path("r.json")), json);
  EXPECT_EQ(slurp(path("r.txt")), text);
  const Result from_report = run({"replay", path("r.json")});
  ASSERT_EQ(from_report.code, cli::kExitOk) << from_report.err;
  EXPECT_EQ(slurp(path("r.json")), json);

  // A changed input is refused.
  spit(input, slurp(input) + "\n");
  EXPECT_EQ(run({"replay", path("r.json")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"replay", path("missing.json")}).code, cli::kExitUsage);
}

}  // namespace
}  // namespace exarray
