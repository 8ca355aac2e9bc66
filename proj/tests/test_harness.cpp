#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "qwa/errors.hpp"
#include "qwa/harness.hpp"

using namespace qwa;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qwa_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args) {
  const int status = std::system(fmt::format("{} {} > /dev/null 2>&1", QWA_CLI_PATH, args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig chain_config(int n, CouplingDist dist, const fs::path& out) {
  ExperimentConfig cfg;
  cfg.instance = {GraphKind::chain(), n, dist, 4};
  cfg.out_dir = out;
  return cfg;
}

}  // namespace

TEST(FitLogScaling, ExactLogarithm) {
  std::vector<std::pair<int, double>> pts;
  for (int n : {8, 16, 32, 64}) pts.emplace_back(n, std::log(static_cast<double>(n)));
  const auto fit = fit_log_scaling(pts);
  EXPECT_NEAR(fit.alpha, 1.0, 1e-12);
  EXPECT_NEAR(fit.beta, 0.0, 1e-12);
  EXPECT_NEAR(fit.residual, 0.0, 1e-12);
}

TEST(FitLogScaling, Constant) {
  std::vector<std::pair<int, double>> pts{{4, 0.7}, {9, 0.7}, {20, 0.7}};
  const auto fit = fit_log_scaling(pts);
  EXPECT_NEAR(fit.alpha, 0.0, 1e-12);
  EXPECT_NEAR(fit.beta, 0.7, 1e-12);
}

TEST(FitLogScaling, NeedsThreeSizes) {
  std::vector<std::pair<int, double>> two{{4, 0.1}, {8, 0.2}};
  EXPECT_THROW(fit_log_scaling(two), InvalidInputError);
  std::vector<std::pair<int, double>> repeated{{4, 0.1}, {4, 0.2}, {8, 0.3}};
  EXPECT_THROW(fit_log_scaling(repeated), InvalidInputError);
}

TEST(Telemetry, HeaderAndRows) {
  RunReport report;
  report.steps.resize(2);
  report.steps[0].s = 0.05;
  report.steps[0].wall_time_ms = 17;
  report.steps[1].s = 0.15;
  const auto csv = telemetry_csv(report, false);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, kTelemetryHeader);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "0");
  }
  EXPECT_EQ(rows, 2);
  EXPECT_NE(telemetry_csv(report, true).find(",17\n"), std::string::npos);
}

TEST(Aggregate, SortedWithOptionalSolved) {
  const auto csv = aggregate_csv({{32, 0.5, 4, 0.6, std::nullopt}, {8, 0.3, 2, 0.5, true}});
  std::istringstream lines(csv);
  std::string header, first, second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(first.substr(0, 2), "8,");
  EXPECT_EQ(first.back(), '1');
  EXPECT_EQ(second.substr(0, 3), "32,");
  EXPECT_EQ(second.back(), ',');
}

TEST(WriteFileAtomic, LeavesOnlyTarget) {
  const auto dir = scratch("atomic");
  write_file_atomic(dir / "a.txt", "first");
  write_file_atomic(dir / "a.txt", "second");
  EXPECT_EQ(slurp(dir / "a.txt"), "second");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1);
}

TEST(Scenario, ParseRejectsUnknown) {
  EXPECT_EQ(parse_scenario("strip_2d"), Scenario::strip_2d);
  EXPECT_THROW(parse_scenario("bogus"), InvalidInputError);
  EXPECT_THROW(PathChoice::parse("0,0,1"), Error);
}

TEST(RunScenario, ValidateMatchesBruteForce) {
  const auto dir = scratch("validate");
  auto cfg = chain_config(8, CouplingDist::gaussian, dir);
  cfg.scenario = Scenario::validate;
  std::ostringstream log;
  EXPECT_EQ(run_scenario(cfg, log), 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "validation.json"));
  EXPECT_TRUE(doc.at("match").get<bool>());
  EXPECT_TRUE(fs::exists(dir / "validate_telemetry.csv"));
  EXPECT_TRUE(fs::exists(dir / "validate_summary.json"));
}

TEST(RunScenario, RerunIsByteIdentical) {
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  std::ostringstream log;
  ASSERT_EQ(run_scenario(chain_config(10, CouplingDist::pm1, a), log), 0);
  ASSERT_EQ(run_scenario(chain_config(10, CouplingDist::pm1, b), log), 0);
  EXPECT_EQ(slurp(a / "run_telemetry.csv"), slurp(b / "run_telemetry.csv"));
  EXPECT_EQ(slurp(a / "run_summary.json"), slurp(b / "run_summary.json"));
}

TEST(RunScenario, MissingInstanceFile) {
  auto cfg = chain_config(4, CouplingDist::pm1, scratch("missing"));
  cfg.instance_file = "/nonexistent/instance.json";
  std::ostringstream log;
  EXPECT_EQ(run_scenario(cfg, log), 2);
}

TEST(RunScenario, ScalingWritesAggregateAndFit) {
  const auto dir = scratch("scaling");
  ExperimentConfig cfg;
  cfg.scenario = Scenario::scaling_1d;
  cfg.sizes = {6, 8, 10};
  cfg.out_dir = dir;
  std::ostringstream log;
  ASSERT_EQ(run_scenario(cfg, log), 0);
  for (const char* dist : {"ferro", "gaussian"}) {
    EXPECT_TRUE(fs::exists(dir / fmt::format("aggregate_chain_{}.csv", dist)));
    const auto fit = nlohmann::json::parse(slurp(dir / fmt::format("fit_chain_{}.json", dist)));
    EXPECT_TRUE(fit.contains("alpha"));
  }
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  EXPECT_EQ(cli("scaling --scenario bogus --sizes 4,6,8 --out " + dir.string()), 2);
  EXPECT_EQ(cli("run --instance /nonexistent.json --out " + dir.string()), 2);
  EXPECT_EQ(cli("validate --kind chain --n 8 --dist gaussian --seed 11 --out " + dir.string()), 0);
  EXPECT_EQ(cli("gen --kind chain --n 5 --seed 1 --out " + (dir / "inst.json").string()), 0);
  EXPECT_EQ(cli("run --instance " + (dir / "inst.json").string() + " --out " + dir.string()), 0);
}
