// Copyright 2026 The qcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcausal/campaign.hpp"
#include "qcausal/cli.hpp"

namespace qcausal {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "qcausal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

/// Column index by header name.
std::size_t col(const std::vector<std::vector<std::string>>& rows, const std::string& name) {
  for (std::size_t i = 0; i < rows.at(0).size(); ++i) {
    if (rows[0][i] == name) return i;
  }
  ADD_FAILURE() << "missing column " << name;
  return 0;
}

double num(const std::vector<std::vector<std::string>>& rows, std::size_t row, const std::string& name) {
  return std::stod(rows.at(row).at(col(rows, name)));
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qcausal_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  EXPECT_EQ(run({"sweep", "--help"}).code, kExitOk);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep", "--process", "upsilon1", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep", "--process", "upsilon1", "--lambda-steps", "many"}).code, kExitUsage);
}

TEST(Cli, UnknownProcessIsUsageError) {
  const CliRun r = run({"sweep", "--process", "upsilon3"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("upsilon3"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, InvalidSweepSettingsAreUsageErrors) {
  EXPECT_EQ(run({"sweep", "--process", "upsilon1", "--entropy", "renyi:-2"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep", "--process", "upsilon1", "--entropy", "tsallis"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep", "--process", "upsilon1", "--backend", "gpu"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep", "--process", "upsilon1", "--lambda-steps", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep", "--process", "upsilon1", "--lambda-min", "0.6", "--lambda-max", "0.4"}).code,
            kExitUsage);
  EXPECT_EQ(run({"sweep", "--process", "upsilon1", "--lambda-max", "1.5"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--campaign", "thm2"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--campaign", "ssa", "--trials", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"reproduce", "--figure", "7"}).code, kExitUsage);
}

TEST(Cli, SweepCsvFormat) {
  const CliRun r = run({"sweep", "--process", "upsilon1", "--lambda-steps", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "lambda,dp_ab,bound_ab,dp_ba,bound_ba,violated_ab,violated_ba,i1_ab,i2_ab,i1_ba,i2_ba,"
            "verdict");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 12u);
    for (const char* flag : {"violated_ab", "violated_ba"}) {
      const std::string& v = rows[i][col(rows, flag)];
      EXPECT_TRUE(v == "0" || v == "1") << v;
    }
  }
  EXPECT_EQ(rows[3][col(rows, "lambda")], "0.5");
  EXPECT_EQ(rows[5][col(rows, "lambda")], "1");
}

TEST(Cli, TracedControlEndpointRow) {
  const CliRun r = run({"sweep", "--process", "upsilon1", "--lambda-steps", "3"});
  ASSERT_EQ(r.code, kExitOk);
  const auto rows = parse_csv(r.out);
  EXPECT_NEAR(num(rows, 1, "lambda"), 0.0, 0.0);
  EXPECT_NEAR(num(rows, 1, "dp_ab"), -2.0, 1e-9);
  EXPECT_NEAR(num(rows, 1, "dp_ba"), 0.0, 1e-9);
  EXPECT_EQ(rows[1][col(rows, "verdict")], "ExcludesOnlyAB");
  EXPECT_EQ(rows[2][col(rows, "verdict")], "BeyondFixedOrder");
  EXPECT_EQ(rows[3][col(rows, "verdict")], "ExcludesOnlyBA");
}

TEST(Cli, TracedTargetVerdicts) {
  const CliRun r = run({"sweep", "--process", "upsilon2"});
  ASSERT_EQ(r.code, kExitOk);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 102u);
  EXPECT_EQ(rows[1 + 50][col(rows, "verdict")], "BeyondFixedOrder");
  EXPECT_NE(rows[1 + 5][col(rows, "verdict")], "BeyondFixedOrder");
  EXPECT_NE(rows[1 + 95][col(rows, "verdict")], "BeyondFixedOrder");
}

TEST(Cli, NonVonNeumannSweepLeavesMarginalColumnsEmpty) {
  const CliRun r = run({"sweep", "--process", "upsilon2", "--lambda-steps", "3", "--entropy", "renyi:2"});
  ASSERT_EQ(r.code, kExitOk);
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[2][col(rows, "i1_ab")], "");
  const CliRun low = run({"sweep", "--process", "upsilon2", "--lambda-steps", "3", "--entropy", "renyi:0.3"});
  ASSERT_EQ(low.code, kExitOk);
  EXPECT_NE(low.err.find("warning"), std::string::npos);
  EXPECT_EQ(parse_csv(low.out)[2].back(), "Inconclusive");
}

TEST(Cli, SweepIsDeterministic) {
  for (const char* backend : {"statevector", "contraction"}) {
    const std::vector<std::string> args{"sweep",        "--process", "switch_full", "--lambda-steps",
                                        "7",            "--entropy", "renyi:0.8",   "--backend",
                                        backend,        "--seed",    "9"};
    const CliRun a = run(args), b = run(args);
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, BothBackendsAgree) {
  const CliRun r = run({"sweep", "--process", "upsilon2", "--lambda-steps", "5", "--backend", "both"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("max backend trace distance"), std::string::npos);
  const CliRun sv = run({"sweep", "--process", "upsilon2", "--lambda-steps", "5"});
  const auto a = parse_csv(r.out), b = parse_csv(sv.out);
  for (std::size_t i = 1; i < a.size(); ++i) {
    EXPECT_NEAR(num(a, i, "dp_ab"), num(b, i, "dp_ab"), 1e-9);
    EXPECT_EQ(a[i].back(), b[i].back());
  }
}

TEST(Cli, OrdersSwapUnderLambdaReflection) {
  for (const char* process : {"switch_full", "upsilon1", "upsilon2"}) {
    const CliRun r = run({"sweep", "--process", process, "--lambda-steps", "11"});
    ASSERT_EQ(r.code, kExitOk);
    const auto rows = parse_csv(r.out);
    for (std::size_t i = 1; i <= 11; ++i) {
      const std::size_t j = 12 - i;
      EXPECT_NEAR(num(rows, i, "dp_ab"), num(rows, j, "dp_ba"), 1e-9) << process << " " << i;
      EXPECT_NEAR(num(rows, i, "i1_ab"), num(rows, j, "i1_ba"), 1e-9) << process << " " << i;
      EXPECT_NEAR(num(rows, i, "i2_ab"), num(rows, j, "i2_ba"), 1e-9) << process << " " << i;
    }
  }
}

TEST(Cli, SweepWritesOutputFile) {
  const fs::path dir = scratch_dir("sweep");
  fs::create_directories(dir);
  const fs::path file = dir / "s.csv";
  const CliRun r = run({"sweep", "--process", "upsilon1", "--lambda-steps", "2", "--out", file.string()});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(file);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.substr(0, 6), "lambda");
  fs::remove_all(dir);
}

TEST(Cli, VerifyEmitsJsonAndExitsZero) {
  const CliRun r = run({"verify", "--campaign", "ssa", "--trials", "25", "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["campaign"], "ssa");
  EXPECT_EQ(doc["trials"], 25);
  EXPECT_EQ(doc["seed"], 3);
  EXPECT_EQ(doc["passes"], 25);
  EXPECT_EQ(doc["failures"], 0);
  EXPECT_EQ(doc["per_trial"].size(), 25u);
  EXPECT_GE(doc["worst_slack"].get<double>(), -1e-9);
  const CliRun again = run({"verify", "--campaign", "ssa", "--trials", "25", "--seed", "3"});
  EXPECT_EQ(r.out, again.out);
}

TEST(Cli, VerifyCampaignsPassAtSmallScale) {
  for (const char* campaign : {"thm1", "lemma1", "lemma3", "crosscheck", "marginal_bounds"}) {
    const CliRun r = run({"verify", "--campaign", campaign, "--trials", "5"});
    EXPECT_EQ(r.code, kExitOk) << campaign << "\n" << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["failures"], 0) << campaign;
  }
}

TEST(Cli, ReproduceWritesFigureFiles) {
  const fs::path dir = scratch_dir("figs");
  const CliRun r = run({"reproduce", "--figure", "5b", "--outdir", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"fig5b_vn.csv", "fig5b_renyi2.csv", "fig5b_renyi3.csv", "fig5b_renyi4.csv",
                        "fig5b_renyiinf.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
    EXPECT_NE(r.out.find(f), std::string::npos) << f;
  }
  std::ifstream in(dir / "fig5b_vn.csv");
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(parse_csv(text.str()).size(), 102u);
  fs::remove_all(dir);
}

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(-2.0), "-2");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(0.1 * 3.0), "0.3");
}

TEST(LambdaGrid, IncludesEndpoints) {
  const auto g = lambda_grid(0.0, 1.0, 101);
  ASSERT_EQ(g.size(), 101u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_NEAR(g[20], 0.2, 1e-15);
}

}  // namespace
}  // namespace qcausal
