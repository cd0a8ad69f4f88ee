// Copyright 2026 The Metagame Authors
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

// Drives the metagame binary end to end. METAGAME_BIN and SCENARIO_DIR are
// injected by the build.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "metagame/json_io.h"

namespace metagame {
namespace {

namespace fs = std::filesystem;

int RunCli(const std::string& args) {
  const std::string cmd =
      std::string(METAGAME_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Scenario(const std::string& name) {
  return std::string(SCENARIO_DIR) + "/" + name;
}

std::string Slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("metagame_cli_") + info->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(CliTest, SimulateSmokeRun) {
  ASSERT_EQ(RunCli("simulate --scenario " + Scenario("oi_mw.json") +
                " --horizon 100 --seeds 1..2 --out " + dir_.string()),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "summary.json"));
  EXPECT_TRUE(fs::exists(dir_ / "trace_seed1.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "trace_seed2.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "strategies.svg"));
  EXPECT_TRUE(fs::exists(dir_ / "pq_path.svg"));
  const Json summary = Json::parse(Slurp(dir_ / "summary.json"));
  EXPECT_EQ(summary.at("runs").size(), 2u);
  EXPECT_EQ(summary.at("horizon"), 100);
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  const std::string args = "simulate --scenario " + Scenario("oi_ftpl.json") +
                           " --horizon 2000 --seeds 3..4 --format csv,json";
  ASSERT_EQ(RunCli(args + " --out " + a.string() + " --threads 1"), 0);
  ASSERT_EQ(RunCli(args + " --out " + b.string() + " --threads 2"), 0);
  for (const char* f : {"summary.json", "trace_seed3.csv", "trace_seed4.csv"}) {
    EXPECT_EQ(Slurp(a / f), Slurp(b / f)) << f;
  }
  EXPECT_FALSE(fs::exists(a / "strategies.svg"));
}

TEST_F(CliTest, FailedCheckExitsTwo) {
  EXPECT_EQ(RunCli("simulate --scenario " + Scenario("oi_mw.json") +
                " --horizon 100 --seeds 1 --check --out " + dir_.string()),
            2);
}

TEST_F(CliTest, ErrorsExitOne) {
  EXPECT_EQ(RunCli("simulate --scenario /nonexistent.json --out " +
                dir_.string()),
            1);
  EXPECT_EQ(RunCli("simulate --scenario " + Scenario("oi_mw.json") +
                " --format pdf --out " + dir_.string()),
            1);
  EXPECT_EQ(RunCli("bogus"), 1);
  EXPECT_EQ(RunCli(""), 1);
}

TEST_F(CliTest, EquilibriumAndMetagame) {
  ASSERT_EQ(RunCli("equilibrium --scenario " + Scenario("oi_equilibrium.json") +
                " --out " + dir_.string()),
            0);
  const Json eq = Json::parse(Slurp(dir_ / "equilibrium.json"));
  EXPECT_NEAR(eq.at("mixed_nash").at("p").get<double>(), 2.0 / 3, 1e-12);
  ASSERT_EQ(RunCli("metagame --scenario " + Scenario("cournot_metagame.json") +
                " --check --out " + dir_.string()),
            0);
  const Json report = Json::parse(Slurp(dir_ / "report.json"));
  EXPECT_NEAR(report.at("equilibrium").at("declarations")[0][0].get<double>(),
              0.4, 1e-9);
  EXPECT_FALSE(report.at("manipulation").at("manipulation_free").get<bool>());
}

TEST_F(CliTest, ScalingSingleHorizon) {
  ASSERT_EQ(RunCli("scaling --scenario " + Scenario("oi_scaling.json") +
                " --horizon 5000 --seeds 1..3 --out " + dir_.string()),
            0);
  const std::string csv = Slurp(dir_ / "scaling.csv");
  const CsvTable table = ParseCsv(csv);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0][0], 5000);
  EXPECT_EQ(table.rows[0][3], 3);
}

TEST_F(CliTest, OscillateWritesPhaseReport) {
  ASSERT_EQ(RunCli("oscillate --scenario " + Scenario("bos_oscillate.json") +
                " --check --out " + dir_.string()),
            0);
  const Json rep = Json::parse(Slurp(dir_ / "oscillation.json"));
  ASSERT_EQ(rep.at("phases").size(), 3u);
  EXPECT_EQ(rep.at("phases")[1].at("active"), 2);
  EXPECT_TRUE(fs::exists(dir_ / "phases.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "oscillation.svg"));
}

}  // namespace
}  // namespace metagame
