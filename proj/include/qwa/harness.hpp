#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qwa/annealer.hpp"
#include "qwa/instance.hpp"
#include "qwa/ordering.hpp"

namespace qwa {

enum class Scenario { run, validate, scaling_1d, strip_2d };

Scenario parse_scenario(std::string_view name);
std::string_view to_string(Scenario scenario);

enum class PathMode { identity, heuristic, explicit_order };

struct PathChoice {
  PathMode mode = PathMode::identity;
  std::vector<int> order;  // explicit_order only

  /// "identity", "heuristic", or a comma-separated permutation.
  static PathChoice parse(std::string_view text);
  SitePath resolve(const GraphInstance& inst) const;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::run;
  std::optional<std::filesystem::path> instance_file;
  InstanceSpec instance;             // used when no file is given
  std::vector<int> sizes;            // scaling_1d: chain lengths, strip_2d: strip lengths
  std::vector<int> strip_widths{2, 4};
  AnnealParams params;
  PathChoice path;
  std::filesystem::path out_dir = ".";
  bool record_wall_time = false;     // off keeps telemetry byte-reproducible

  /// Throws InvalidInputError on inconsistent settings.
  void validate() const;
};

inline constexpr std::string_view kTelemetryHeader =
    "step,s,ds,fidelity,energy,max_bond_dim,max_vn_entropy,max_index_sigma,m_eff_1e2,m_eff_1e3,sweeps_used,"
    "wall_time_ms";

/// One row per accepted step. wall_time_ms is written as 0 unless
/// record_wall_time is set.
std::string telemetry_csv(const RunReport& report, bool record_wall_time);

nlohmann::json summary_json(const RunReport& report);

struct ScalingRow {
  int n = 0;
  double global_max_entropy = 0.0;
  int global_max_bond_dim = 1;
  double s_peak_entropy = 0.0;
  std::optional<bool> solved;  // only when brute force was feasible
};

std::string aggregate_csv(std::vector<ScalingRow> rows);

struct LogFit {
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;  // root mean square
};

/// Least-squares S = alpha ln n + beta. Needs at least three distinct sizes.
LogFit fit_log_scaling(std::span<const std::pair<int, double>> points);

/// Writes through a temporary file and a rename so the target is either
/// complete or absent.
void write_file_atomic(const std::filesystem::path& target, std::string_view content);

/// Exit status: 0 on success, 1 on an aborted run or failed validation,
/// 2 on malformed configuration or unreadable input.
int run_scenario(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace qwa
