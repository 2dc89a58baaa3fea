#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "wiretap/cli.hpp"

namespace wiretap {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("wiretap_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

cli::RunManifest manifest(const std::string& scenario, const fs::path& out) {
  cli::RunManifest m;
  m.scenario_path = testing::kScenarioDir + "/" + scenario;
  m.output_dir = out.string();
  m.threads = 1;
  return m;
}

TEST(CliSweep, WeakBothModesTwoDemandSets) {
  const auto out = scratch_dir("both");
  auto m = manifest("weak.json", out);
  m.grid = 5;
  m.eh_overrides = {{0.0, 0.0}, {0.8, 0.8}};
  std::ostringstream log, err;
  ASSERT_EQ(cli::run_sweep(m, log, err), cli::kExitOk) << err.str();
  for (const char* f : {"boundary_reliable_E0_0.csv", "boundary_secure_E0_0.csv", "boundary_reliable_E0.8_0.8.csv",
                        "boundary_secure_E0.8_0.8.csv", "hull_reliable_E0_0.csv", "report.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const std::string header = "alpha1,alpha2,Rs1,Rs2,p1,p2,eta1,eta2,order,iterations,converged\n0,1,";
  EXPECT_EQ(slurp(out / "boundary_reliable_E0_0.csv").rfind(header, 0), 0u);

  const std::pair<const char*, double> anchors[] = {{"boundary_reliable_E0_0.csv", 1.22239},
                                                    {"boundary_reliable_E0.8_0.8.csv", 1.04026}};
  for (const auto& [file, want] : anchors) {
    bool found = false;
    for (const auto& row : csv_rows(out / file)) {
      if (row[0] != "0.5") continue;
      EXPECT_NEAR(std::stod(row[2]), want, 1e-3);
      EXPECT_NEAR(std::stod(row[3]), want, 1e-3);
      EXPECT_EQ(row[8], "none");
      found = true;
    }
    EXPECT_TRUE(found) << file;
  }
}

TEST(CliSweep, RowsReEvaluateExactly) {
  const auto out = scratch_dir("reeval");
  auto m = manifest("strong.json", out);
  m.grid = 5;
  std::ostringstream log, err;
  ASSERT_EQ(cli::run_sweep(m, log, err), cli::kExitOk) << err.str();
  const auto cfg = load_config(m.scenario_path);
  for (const char* mode : {"reliable", "secure"}) {
    const auto rows = csv_rows(out / (std::string("boundary_") + mode + "_E1_1.csv"));
    EXPECT_EQ(rows.size(), std::string(mode) == "secure" ? 10u : 5u);
    for (const auto& row : rows) {
      ASSERT_EQ(row.size(), 11u);
      const OperatingPoint op{{std::stod(row[4]), std::stod(row[5])}, {std::stod(row[6]), std::stod(row[7])}};
      RateTuple want;
      if (row[8] == "none") {
        want = legitimate_rates(cfg, op);
      } else {
        want = secrecy_corner(cfg, op, row[8] == "1-2" ? DecodingOrder({0, 1}) : DecodingOrder({1, 0}));
      }
      EXPECT_NEAR(std::stod(row[2]), want[0], 1e-6);
      EXPECT_NEAR(std::stod(row[3]), want[1], 1e-6);
    }
  }
}

TEST(CliSweep, Deterministic) {
  const auto a = scratch_dir("det_a");
  const auto b = scratch_dir("det_b");
  std::ostringstream log, err;
  auto ma = manifest("weak.json", a);
  ma.grid = 3;
  auto mb = manifest("weak.json", b);
  mb.grid = 3;
  mb.threads = 2;
  ASSERT_EQ(cli::run_sweep(ma, log, err), cli::kExitOk);
  ASSERT_EQ(cli::run_sweep(mb, log, err), cli::kExitOk);
  for (const char* f : {"boundary_secure_E0_0.csv", "boundary_reliable_E0_0.csv", "hull_secure_E0_0.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(CliSweep, GridTwoGivesEndpointsOnly) {
  const auto out = scratch_dir("grid2");
  auto m = manifest("weak.json", out);
  m.grid = 2;
  m.mode = cli::ModeSelection::Reliable;
  std::ostringstream log, err;
  ASSERT_EQ(cli::run_sweep(m, log, err), cli::kExitOk);
  const auto rows = csv_rows(out / "boundary_reliable_E0_0.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], "0");
  EXPECT_EQ(rows[1][0], "1");
  EXPECT_FALSE(fs::exists(out / "boundary_secure_E0_0.csv"));
}

TEST(CliSweep, OracleReport) {
  const auto out = scratch_dir("oracle");
  auto m = manifest("weak.json", out);
  m.grid = 3;
  m.mode = cli::ModeSelection::Reliable;
  m.oracle = true;
  m.oracle_resolution = 21;
  std::ostringstream log, err;
  ASSERT_EQ(cli::run_sweep(m, log, err), cli::kExitOk);
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  const auto& run = report["runs"][0];
  EXPECT_EQ(run["oracle_comparison"].size(), 3u);
  EXPECT_LE(run["max_abs_relative_gap"].get<double>(), 0.05);
}

TEST(CliSweep, FailedPointsGiveExitTwo) {
  const auto out = scratch_dir("infeasible");
  auto m = manifest("weak_infeasible.json", out);
  m.grid = 3;
  m.mode = cli::ModeSelection::Reliable;
  std::ostringstream log, err;
  EXPECT_EQ(cli::run_sweep(m, log, err), cli::kExitPointFailed);
  EXPECT_EQ(csv_rows(out / "boundary_reliable_E2_2.csv").size(), 0u);
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  EXPECT_EQ(report["runs"][0]["failed"].size(), 3u);
  EXPECT_EQ(report["runs"][0]["failed"][0]["error"], "Infeasible");
}

TEST(CliSweep, MissingScenarioGivesExitOne) {
  auto m = manifest("does_not_exist.json", scratch_dir("missing"));
  std::ostringstream log, err;
  EXPECT_EQ(cli::run_sweep(m, log, err), cli::kExitConfig);
  EXPECT_NE(err.str().find("cannot open"), std::string::npos);
}

TEST(CliSweep, BadOverrideGivesExitOne) {
  auto m = manifest("weak.json", scratch_dir("badeh"));
  m.eh_overrides = {{0.1, 0.2, 0.3}};
  std::ostringstream log, err;
  EXPECT_EQ(cli::run_sweep(m, log, err), cli::kExitConfig);
}

TEST(CliVerify, InfeasibleScenarioPasses) {
  auto m = manifest("weak_infeasible.json", scratch_dir("verify"));
  m.oracle_resolution = 21;
  std::ostringstream log, err;
  EXPECT_EQ(cli::run_verify(m, log, err), cli::kExitOk) << log.str();
  EXPECT_NE(log.str().find("NoFeasiblePoint"), std::string::npos);
}

TEST(CliVerify, WeakScenarioPasses) {
  auto m = manifest("weak.json", scratch_dir("verify_weak"));
  m.grid = 5;
  m.oracle_resolution = 21;
  std::ostringstream log, err;
  EXPECT_EQ(cli::run_verify(m, log, err), cli::kExitOk) << log.str();
  EXPECT_EQ(log.str().find("FAIL"), std::string::npos);
}

}  // namespace
}  // namespace wiretap
