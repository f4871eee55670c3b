// Copyright 2026 The Pandemic ABM Authors
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


#include "pandemic_abm/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pandemic_abm/outputs.hpp"
#include "test_support.hpp"

namespace pabm {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pandemic-abm");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pabm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Small scenario so each command finishes in well under a second.
  std::vector<std::string> small(std::vector<std::string> args) const {
    for (const char* s : {"num_agents=1500", "stage_ix_pop_dict.0=1495", "num_steps=40", "num_runs=2"}) {
      args.push_back("--set");
      args.push_back(s);
    }
    return args;
  }

  fs::path dir_;
};

TEST(Format, NumbersAreCanonical) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(2.5), "2.5");
  EXPECT_EQ(format_number(1e6), "1000000");
}

TEST_F(CliTest, ZeroStepsWritesHeaderOnly) {
  auto args = small({"run", testing::appendix_path(), "--out", dir_.string()});
  args.insert(args.end(), {"--set", "num_steps=0"});  // later settings win
  ASSERT_EQ(cli(args), 0);
  const std::string csv = slurp(dir_ / "timeseries_CT.csv");
  EXPECT_EQ(csv.find("step,new_infections_mean"), 0u);
  EXPECT_EQ(csv.find("\r\n"), csv.size() - 2);
}

TEST_F(CliTest, SameSeedIdenticalOutputs) {
  const auto a = dir_ / "a";
  const auto b = dir_ / "b";
  ASSERT_EQ(cli(small({"run", testing::appendix_path(), "--out", a.string(), "--set", "seed=7"})), 0);
  ASSERT_EQ(cli(small({"run", testing::appendix_path(), "--out", b.string(), "--set", "seed=7",
                       "--jobs", "2"})),
            0);
  EXPECT_EQ(slurp(a / "timeseries_CT.csv"), slurp(b / "timeseries_CT.csv"));
  EXPECT_EQ(slurp(a / "summary_CT.json"), slurp(b / "summary_CT.json"));
}

TEST_F(CliTest, AppendixRunsParallelTracing) {
  const ScenarioConfig c = load_config(testing::appendix_path());
  EXPECT_TRUE(c.logic.use_den_logic && c.logic.use_mct_logic && c.logic.use_quarantine_logic &&
              c.logic.use_rtpcr_test_logic);
  EXPECT_FALSE(c.logic.use_vaccination_logic);
  ASSERT_EQ(cli(small({"run", testing::appendix_path(), "--out", dir_.string(), "--plot", "--events"})), 0);
  for (const char* f : {"timeseries_CT.csv", "summary_CT.json", "infections_CT.svg",
                        "hospital_CT.svg", "cost_CT.svg", "cumulative_CT.svg", "events_CT.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
}

TEST_F(CliTest, NoInterventionSummaryHasZeroCost) {
  ASSERT_EQ(cli(small({"compare", testing::appendix_path(), "--out", dir_.string(), "--scenarios", "NI"})), 0);
  const auto j = nlohmann::json::parse(slurp(dir_ / "summary_NI.json"));
  EXPECT_EQ(j["total_cost"]["mean"].get<double>(), 0.0);
  EXPECT_EQ(j["scenario"], "NI");
  EXPECT_EQ(j["num_runs"], 2);
  std::istringstream rows(slurp(dir_ / "comparison.csv"));
  int lines = 0;
  for (std::string line; std::getline(rows, line);) ++lines;
  EXPECT_EQ(lines, 2);  // header plus one scenario
}

TEST_F(CliTest, SingleValueSweepMatchesRun) {
  ASSERT_EQ(cli(small({"sweep", testing::appendix_path(), "--out", dir_.string(), "--param",
                       "quarantine_break_prob", "--values", "0.01", "--metrics", "total_cost"})),
            0);
  ASSERT_EQ(cli(small({"run", testing::appendix_path(), "--out", dir_.string()})), 0);
  const auto j = nlohmann::json::parse(slurp(dir_ / "summary_CT.json"));
  std::istringstream sweep(slurp(dir_ / "sweep.csv"));
  std::string header;
  std::string row;
  std::getline(sweep, header);
  std::getline(sweep, row);
  EXPECT_EQ(row, "0.01,total_cost," + format_number(j["total_cost"]["mean"].get<double>()) + "," +
                     format_number(j["total_cost"]["std"].get<double>()) + "\r");
}

TEST_F(CliTest, CalibrateZeroTargetWritesZeroBeta) {
  const auto overlay = dir_ / "overlay.yaml";
  ASSERT_EQ(cli(small({"calibrate", testing::appendix_path(), "--target", "0", "--index-cases",
                       "200", "--overlay", overlay.string()})),
            0);
  EXPECT_NE(slurp(overlay).find("beta: 0\n"), std::string::npos);
}

TEST_F(CliTest, CalibrationIsDeterministic) {
  const auto a = dir_ / "a.yaml";
  const auto b = dir_ / "b.yaml";
  for (const auto& p : {a, b}) {
    ASSERT_EQ(cli(small({"calibrate", testing::appendix_path(), "--index-cases", "300",
                         "--overlay", p.string()})),
              0);
  }
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(CliTest, ErrorsMapToExitCodes) {
  EXPECT_EQ(cli({"run", testing::appendix_path(), "--out", dir_.string(), "--set", "quarantine_days=-1"}), 2);
  EXPECT_EQ(cli({"run", testing::appendix_path(), "--out", dir_.string(), "--set", "nope=1"}), 2);
  EXPECT_EQ(cli({"compare", testing::appendix_path(), "--out", dir_.string(), "--scenarios", "XX"}), 2);
  EXPECT_EQ(cli({"sweep", testing::appendix_path(), "--out", dir_.string(), "--param", "a.b", "--values", "1"}), 2);
  EXPECT_EQ(cli({"calibrate", testing::appendix_path(), "--target", "100000", "--index-cases", "50",
                 "--out", dir_.string()}),
            3);
  EXPECT_EQ(cli({"run", (dir_ / "missing.yaml").string()}), 2);
}

TEST(Presets, UnknownNameRejected) {
  const ScenarioConfig base = load_config(testing::appendix_path());
  EXPECT_THROW(apply_preset(base, "XYZ"), ConfigError);
  for (const std::string& name : preset_names()) {
    EXPECT_EQ(apply_preset(base, name).results_file_postfix, name);
  }
}

TEST(Outputs, SweepMetricNames) {
  Summary s;
  s.num_agents = 10;
  s.scalar_mean[4] = 0.5;
  s.scalar_std[4] = 0.1;
  EXPECT_EQ(sweep_metric(s, "cumulative_infections").first, 5.0);
  EXPECT_THROW(sweep_metric(s, "bogus"), std::invalid_argument);
}

}  // namespace
}  // namespace pabm
