/*
 * Copyright 2026 The fslsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fslsim/runner.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"

namespace fslsim {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class RunnerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fslsim_runner_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int run(const fs::path& config, const fs::path& out, std::size_t workers = 1) {
    std::ostringstream sout, serr;
    const int status = cmd_run({config, out, workers, std::nullopt}, sout, serr);
    err_ = serr.str();
    return status;
  }

  fs::path dir_;
  std::string err_;
};

TEST_F(RunnerTest, GoldenSummary) {
  const fs::path data = FSLSIM_TESTDATA_DIR;
  ASSERT_EQ(run(data / "golden.cfg", dir_ / "a"), 0) << err_;
  EXPECT_EQ(slurp(dir_ / "a" / "summary.csv"), slurp(data / "golden_summary.csv"));
}

TEST_F(RunnerTest, SameConfigByteIdenticalAcrossWorkers) {
  const fs::path data = FSLSIM_TESTDATA_DIR;
  ASSERT_EQ(run(data / "golden.cfg", dir_ / "a", 1), 0);
  ASSERT_EQ(run(data / "golden.cfg", dir_ / "b", 4), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "summary.csv"), slurp(dir_ / "b" / "summary.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "records.jsonl"), slurp(dir_ / "b" / "records.jsonl"));
}

TEST_F(RunnerTest, ZeroRoundsWritesEmptyRecords) {
  const fs::path cfg = write_config("t0.cfg", "rounds = 0\n");
  ASSERT_EQ(run(cfg, dir_ / "out"), 0) << err_;
  EXPECT_EQ(slurp(dir_ / "out" / "records.jsonl"), "");
  EXPECT_EQ(slurp(dir_ / "out" / "summary.csv"), std::string(kSummaryHeader) + "\n");
}

TEST_F(RunnerTest, InvalidConfigNamesField) {
  const fs::path cfg = write_config("bad.cfg", "k = 1.5\n");
  EXPECT_NE(run(cfg, dir_ / "out"), 0);
  EXPECT_NE(err_.find("k:"), std::string::npos) << err_;
  EXPECT_FALSE(fs::exists(dir_ / "out" / "manifest.json"));
}

TEST_F(RunnerTest, ManifestReproducesRun) {
  const fs::path data = FSLSIM_TESTDATA_DIR;
  ASSERT_EQ(run(data / "golden.cfg", dir_ / "a"), 0);
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "a" / "manifest.json"));
  EXPECT_EQ(manifest["version"], std::string(kArtifactVersion));
  EXPECT_FALSE(manifest["started_at"].is_null());
  EXPECT_FALSE(manifest["finished_at"].is_null());
  EXPECT_EQ(manifest["config"]["seed"], "2024");
  const fs::path replay = write_config("replay.cfg", manifest["config_text"].get<std::string>());
  ASSERT_EQ(run(replay, dir_ / "b"), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "summary.csv"), slurp(dir_ / "b" / "summary.csv"));
}

TEST_F(RunnerTest, RecordsAreJsonLines) {
  const fs::path data = FSLSIM_TESTDATA_DIR;
  ASSERT_EQ(run(data / "golden.cfg", dir_ / "a"), 0);
  std::ifstream in(dir_ / "a" / "records.jsonl");
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["round"], 3 * (count + 1));
    EXPECT_EQ(j["selected"].size(), 4u);
    EXPECT_TRUE(j.contains("mean_acc"));
    ++count;
  }
  EXPECT_EQ(count, 2u);
}

TEST_F(RunnerTest, OutDirFallsBackToEnvironment) {
  ::setenv(kOutDirEnv, (dir_ / "env").c_str(), 1);
  EXPECT_EQ(resolve_out_dir(std::nullopt), dir_ / "env");
  EXPECT_EQ(resolve_out_dir(fs::path("flag")), fs::path("flag"));
  ::unsetenv(kOutDirEnv);
  EXPECT_EQ(resolve_out_dir(std::nullopt), fs::path("runs/latest"));
}

TEST(FormatFixedTest, SixDecimals) {
  EXPECT_EQ(format_fixed(0.09375), "0.093750");
  EXPECT_EQ(format_fixed(-0.0), "0.000000");
  EXPECT_EQ(format_fixed(1.0), "1.000000");
}

TEST(CmdBoundTest, SinglePoint) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_bound({25, 0.9, 0.9, 1, {0.1}}, out, err), 0);
  EXPECT_EQ(out.str(), "alpha,p,bound\n0.100000,0.900000,0.093750\n");
}

TEST(CmdBoundTest, GridCrossingHalfClampsToOne) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_bound({25, 0.3, 0.7, 5, {0.0}}, out, err), 0);
  EXPECT_NE(out.str().find("0.000000,0.300000,1.000000"), std::string::npos);
  EXPECT_NE(out.str().find("0.000000,0.500000,1.000000"), std::string::npos);
}

TEST(CmdBoundTest, EmptyAlphaListIsUsageError) {
  std::ostringstream out, err;
  EXPECT_NE(cmd_bound({25, 0.6, 0.99, 10, {}}, out, err), 0);
  EXPECT_NE(err.str().find("usage"), std::string::npos);
  EXPECT_NE(cmd_bound({25, 0.6, 0.99, 10, {1.0}}, out, err), 0);
}

TEST(CmdCommcostTest, PresetTable) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_commcost({"lenet-mnist", {}, false}, out, err), 0);
  EXPECT_NE(out.str().find("lenet-mnist,FSL,4.054478,4.054478\n"), std::string::npos);
  EXPECT_EQ(out.str().rfind(std::string(kCostHeader) + "\n", 0), 0u);
}

TEST(CmdCommcostTest, ExplicitCountsAndErrors) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_commcost({std::nullopt, {6}, true}, out, err), 0);
  // 18 bits.
  EXPECT_NE(out.str().find("custom,FSL,0.000002,0.000002\n"), std::string::npos);
  EXPECT_NE(out.str().find("custom,FSL-ideal,"), std::string::npos);
  EXPECT_NE(cmd_commcost({"vgg", {}, false}, out, err), 0);
  EXPECT_NE(cmd_commcost({std::nullopt, {}, false}, out, err), 0);
}

}  // namespace
}  // namespace fslsim
