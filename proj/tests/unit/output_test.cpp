#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "nbsim/config.hpp"
#include "nbsim/output.hpp"

namespace nbsim {
namespace {

namespace fs = std::filesystem;

class OutputTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("nbsim_output_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static std::size_t data_rows(const fs::path& csv) {
    const std::string text = slurp(csv);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) - 1;
  }

  fs::path root_;
};

TEST_F(OutputTest, SameSeedGivesByteIdenticalBundles) {
  RunRequest req;
  req.preset = "fig3a";
  req.seed = 42;
  req.trace = true;
  req.out_dir = root_ / "a";
  ASSERT_EQ(execute(req).exit_code, 0);
  req.out_dir = root_ / "b";
  ASSERT_EQ(execute(req).exit_code, 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(root_ / "a")) {
    EXPECT_EQ(slurp(entry.path()), slurp(root_ / "b" / entry.path().filename())) << entry.path();
    ++files;
  }
  EXPECT_EQ(files, 6u);  // four tables, resolved.conf, trace.log
}

TEST_F(OutputTest, BadConfigPathExitsOneWithoutOutputs) {
  RunRequest req;
  req.config_path = root_ / "missing.conf";
  req.out_dir = root_ / "out";
  const auto r = execute(req);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_FALSE(r.message.empty());
  EXPECT_FALSE(fs::exists(root_ / "out"));
}

TEST_F(OutputTest, RequestNeedsExactlyOneSource) {
  RunRequest none;
  none.out_dir = root_ / "out";
  EXPECT_EQ(execute(none).exit_code, 1);
  RunRequest both = none;
  both.preset = "fig3a";
  both.config_path = root_ / "x.conf";
  EXPECT_EQ(execute(both).exit_code, 1);
  RunRequest unknown = none;
  unknown.preset = "fig9";
  EXPECT_EQ(execute(unknown).exit_code, 1);
  EXPECT_FALSE(fs::exists(root_ / "out"));
}

TEST_F(OutputTest, UnwritableDirectoryExitsTwo) {
  std::ofstream(root_ / "plain-file") << "x";
  RunRequest req;
  req.preset = "homogeneous";
  req.out_dir = root_ / "plain-file" / "out";
  const auto r = execute(req);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(fs::exists(root_ / "plain-file" / "out"));
}

TEST_F(OutputTest, JsonSummaryIsOneDocument) {
  RunRequest req;
  req.preset = "decoupled-demo";
  req.format = OutputFormat::Json;
  req.out_dir = root_;
  ASSERT_EQ(execute(req).exit_code, 0);
  const auto doc = nlohmann::json::parse(slurp(root_ / "summary.json"));
  EXPECT_TRUE(doc.is_object());
  EXPECT_EQ(doc["drops"], 10);
  EXPECT_TRUE(doc["coverage_probability"].contains("p95"));
  const auto ues = nlohmann::json::parse(slurp(root_ / "ues.json"));
  ASSERT_EQ(ues.size(), 500u);
  for (const char* key : {"ue_id", "x", "y", "dl_cell", "ul_cell", "ce_level", "reps", "tx_power_dbm", "energy_proxy"}) {
    EXPECT_TRUE(ues[0].contains(key)) << key;
  }
  const auto cells = nlohmann::json::parse(slurp(root_ / "cells.json"));
  EXPECT_TRUE(cells[0].contains("cell_id"));
  EXPECT_TRUE(cells[0].contains("iot_db"));
}

TEST_F(OutputTest, CsvRowCountsAndHeaders) {
  RunRequest req;
  req.preset = "homogeneous";
  req.overrides = {{"ue_count", "2"}, {"drops", "1"}};
  req.out_dir = root_;
  ASSERT_EQ(execute(req).exit_code, 0);
  EXPECT_EQ(data_rows(root_ / "ues.csv"), 2u);
  EXPECT_EQ(data_rows(root_ / "cells.csv"), 1u);
  EXPECT_EQ(data_rows(root_ / "drops.csv"), 1u);
  const std::string ues = slurp(root_ / "ues.csv");
  EXPECT_EQ(ues.substr(0, ues.find('\n')),
            "drop,ue_id,x,y,dl_cell,ul_cell,ce_level,reps,tx_power_dbm,energy_proxy,outcome");
  EXPECT_EQ(ues.find('\r'), std::string::npos);
  const std::string cells = slurp(root_ / "cells.csv");
  EXPECT_EQ(cells.substr(0, cells.find('\n')), "drop,cell_id,iot_db");
}

TEST_F(OutputTest, ResolvedConfigReparsesToRunConfig) {
  RunRequest req;
  req.preset = "fig3b";
  req.seed = 99;
  req.overrides = {{"policy.kind", "path-loss"}};
  req.out_dir = root_;
  ASSERT_EQ(execute(req).exit_code, 0);
  auto expected = expand_preset(PresetScenario::Fig3b, {{"policy.kind", "path-loss"}});
  expected.seed = 99;
  EXPECT_EQ(load_config(root_ / "resolved.conf"), expected);
}

TEST_F(OutputTest, RerunReplacesFilesAndLeavesNoStaging) {
  RunRequest req;
  req.preset = "homogeneous";
  req.out_dir = root_;
  req.seed = 1;
  ASSERT_EQ(execute(req).exit_code, 0);
  const std::string first = slurp(root_ / "ues.csv");
  req.seed = 2;
  ASSERT_EQ(execute(req).exit_code, 0);
  EXPECT_NE(slurp(root_ / "ues.csv"), first);
  EXPECT_FALSE(fs::exists(root_ / ".nbsim-staging"));
}

TEST_F(OutputTest, ConfigFileWithOverrides) {
  std::ofstream(root_ / "s.conf") << "seed = 3\nue_count = 4\n[[cell]]\nid = 1\n";
  RunRequest req;
  req.config_path = root_ / "s.conf";
  req.overrides = {{"drops", "2"}};
  req.out_dir = root_ / "out";
  ASSERT_EQ(execute(req).exit_code, 0);
  EXPECT_EQ(data_rows(root_ / "out" / "ues.csv"), 8u);

  req.overrides = {{"ue_count", "0"}};
  req.out_dir = root_ / "bad";
  EXPECT_EQ(execute(req).exit_code, 1);
  EXPECT_FALSE(fs::exists(root_ / "bad"));
}

TEST_F(OutputTest, OutDirFallsBackToEnvironment) {
  const fs::path env_dir = root_ / "from-env";
  ::setenv("NBSIM_OUT", env_dir.c_str(), 1);
  RunRequest req;
  req.preset = "homogeneous";
  const auto r = execute(req);
  ::unsetenv("NBSIM_OUT");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(fs::exists(env_dir / "summary.csv"));
}

}  // namespace
}  // namespace nbsim
