#include "qwa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "qwa/errors.hpp"
#include "qwa/exact.hpp"

namespace qwa {
namespace {

constexpr double kOracleTolerance = 1e-9;

GraphInstance load_instance(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InvalidInputError(fmt::format("cannot open instance file '{}'", file.string()));
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidInputError(fmt::format("instance file '{}' is not valid JSON: {}", file.string(), ex.what()));
  }
  return instance_from_json(doc);
}

struct InstanceRun {
  RunReport report;
  std::optional<double> brute_force_energy;
};

InstanceRun run_and_write(const GraphInstance& inst, const ExperimentConfig& cfg, const std::string& stem,
                          bool with_oracle, std::ostream& log) {
  const auto path = cfg.path.resolve(inst);
  InstanceRun out{run_qwa(inst, path, cfg.params), std::nullopt};
  write_file_atomic(cfg.out_dir / (stem + "_telemetry.csv"), telemetry_csv(out.report, cfg.record_wall_time));
  write_file_atomic(cfg.out_dir / (stem + "_summary.json"), summary_json(out.report).dump(2) + "\n");
  if (with_oracle && inst.n() <= kBruteForceMaxSites) out.brute_force_energy = brute_force_minimum(inst).second;
  log << fmt::format("{}: n={} steps={} E={} max_m={} S_max={}{}\n", stem, inst.n(), out.report.steps.size(),
                     out.report.final_classical_energy, out.report.global_max_bond_dim,
                     out.report.global_max_entropy, out.report.aborted ? " ABORTED: " + out.report.abort_reason : "");
  return out;
}

bool matches_oracle(const InstanceRun& run) {
  return run.brute_force_energy &&
         std::abs(run.report.final_classical_energy - *run.brute_force_energy) <= kOracleTolerance;
}

ScalingRow scaling_row(int n, const InstanceRun& run) {
  ScalingRow row{n, run.report.global_max_entropy, run.report.global_max_bond_dim, run.report.s_peak_entropy,
                 std::nullopt};
  if (run.brute_force_energy) row.solved = matches_oracle(run);
  return row;
}

int run_single(const ExperimentConfig& cfg, std::ostream& log) {
  const auto inst = cfg.instance_file ? load_instance(*cfg.instance_file) : generate_instance(cfg.instance);
  const bool validating = cfg.scenario == Scenario::validate;
  if (validating && inst.n() > kBruteForceMaxSites) {
    throw InvalidInputError(fmt::format("validate needs n <= {}, got {}", kBruteForceMaxSites, inst.n()));
  }
  const auto run = run_and_write(inst, cfg, std::string(to_string(cfg.scenario)), validating, log);
  if (!validating) return run.report.aborted ? 1 : 0;

  const bool match = matches_oracle(run);
  nlohmann::json report = {{"n", inst.n()},
                           {"qwa_energy", run.report.final_classical_energy},
                           {"brute_force_energy", *run.brute_force_energy},
                           {"tolerance", kOracleTolerance},
                           {"match", match},
                           {"aborted", run.report.aborted}};
  write_file_atomic(cfg.out_dir / "validation.json", report.dump(2) + "\n");
  log << fmt::format("validation: qwa={} brute_force={} {}\n", run.report.final_classical_energy,
                     *run.brute_force_energy, match ? "MATCH" : "MISMATCH");
  return (match && !run.report.aborted) ? 0 : 1;
}

int finish_family(const std::string& label, std::vector<ScalingRow> rows, const ExperimentConfig& cfg,
                  std::ostream& log) {
  write_file_atomic(cfg.out_dir / fmt::format("aggregate_{}.csv", label), aggregate_csv(rows));
  int failures = 0;
  for (const auto& row : rows) failures += (row.solved && !*row.solved) ? 1 : 0;

  std::vector<std::pair<int, double>> points;
  for (const auto& row : rows) points.emplace_back(row.n, row.global_max_entropy);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end(),
                           [](const auto& a, const auto& b) { return a.first == b.first; }),
               points.end());
  if (points.size() >= 3) {
    const auto fit = fit_log_scaling(points);
    nlohmann::json doc = {{"alpha", fit.alpha}, {"beta", fit.beta}, {"residual", fit.residual}};
    write_file_atomic(cfg.out_dir / fmt::format("fit_{}.json", label), doc.dump(2) + "\n");
    log << fmt::format("{}: S_max ~ {} ln n + {} (rms {})\n", label, fit.alpha, fit.beta, fit.residual);
  }
  return failures;
}

int run_scaling_1d(const ExperimentConfig& cfg, std::ostream& log) {
  int failures = 0;
  for (const auto dist : {CouplingDist::ferro, CouplingDist::gaussian}) {
    const std::string label = fmt::format("chain_{}", to_string(dist));
    std::vector<ScalingRow> rows;
    for (int n : cfg.sizes) {
      const auto inst = generate_instance({GraphKind::chain(), n, dist, cfg.instance.seed});
      const auto run = run_and_write(inst, cfg, fmt::format("{}_n{}", label, n), true, log);
      failures += run.report.aborted ? 1 : 0;
      rows.push_back(scaling_row(n, run));
    }
    failures += finish_family(label, std::move(rows), cfg, log);
  }
  return failures == 0 ? 0 : 1;
}

int run_strip_2d(const ExperimentConfig& cfg, std::ostream& log) {
  int failures = 0;
  for (int width : cfg.strip_widths) {
    const std::string label = fmt::format("strip_w{}_{}", width, to_string(cfg.instance.dist));
    std::vector<ScalingRow> rows;
    for (int length : cfg.sizes) {
      const auto inst =
          generate_instance({GraphKind::grid(width, length), width * length, cfg.instance.dist, cfg.instance.seed});
      const auto run = run_and_write(inst, cfg, fmt::format("{}_L{}", label, length), true, log);
      failures += run.report.aborted ? 1 : 0;
      rows.push_back(scaling_row(inst.n(), run));
    }
    failures += finish_family(label, std::move(rows), cfg, log);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

Scenario parse_scenario(std::string_view name) {
  if (name == "run") return Scenario::run;
  if (name == "validate") return Scenario::validate;
  if (name == "scaling_1d") return Scenario::scaling_1d;
  if (name == "strip_2d") return Scenario::strip_2d;
  throw InvalidInputError(fmt::format("unknown scenario '{}'", name));
}

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::run:
      return "run";
    case Scenario::validate:
      return "validate";
    case Scenario::scaling_1d:
      return "scaling_1d";
    case Scenario::strip_2d:
      return "strip_2d";
  }
  return "";
}

PathChoice PathChoice::parse(std::string_view text) {
  if (text == "identity") return {PathMode::identity, {}};
  if (text == "heuristic") return {PathMode::heuristic, {}};
  const auto path = parse_path(text);
  return {PathMode::explicit_order, {path.order().begin(), path.order().end()}};
}

SitePath PathChoice::resolve(const GraphInstance& inst) const {
  switch (mode) {
    case PathMode::identity:
      return identity_path(inst.n());
    case PathMode::heuristic:
      return heuristic_path(inst);
    case PathMode::explicit_order: {
      SitePath path(order);
      if (path.size() != inst.n()) {
        throw InvalidInputError(fmt::format("explicit path has {} entries, instance has {}", path.size(), inst.n()));
      }
      return path;
    }
  }
  return identity_path(inst.n());
}

void ExperimentConfig::validate() const {
  const bool scaling = scenario == Scenario::scaling_1d || scenario == Scenario::strip_2d;
  if (scaling && sizes.empty()) throw InvalidInputError("scaling scenarios need a non-empty size list");
  for (int n : sizes) {
    if (n < 2) throw InvalidInputError(fmt::format("size {} is too small", n));
  }
  if (scenario == Scenario::strip_2d && strip_widths.empty()) throw InvalidInputError("strip_2d needs widths");
  if (scaling && path.mode == PathMode::explicit_order) {
    throw InvalidInputError("an explicit path cannot apply to several instance sizes");
  }
  try {
    params.validate();
  } catch (const RangeError& ex) {
    throw InvalidInputError(ex.what());
  }
}

std::string telemetry_csv(const RunReport& report, bool record_wall_time) {
  std::string out(kTelemetryHeader);
  out += '\n';
  for (std::size_t k = 0; k < report.steps.size(); ++k) {
    const auto& r = report.steps[k];
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", k + 1, r.s, r.ds, r.fidelity, r.energy, r.max_bond_dim,
                       r.max_vn_entropy, r.max_index_sigma, r.m_eff_1e2, r.m_eff_1e3, r.sweeps_used,
                       record_wall_time ? r.wall_time_ms : 0L);
  }
  return out;
}

nlohmann::json summary_json(const RunReport& report) {
  const auto values = report.final_config.values();
  return {{"final_config", std::vector<int>(values.begin(), values.end())},
          {"final_classical_energy", report.final_classical_energy},
          {"global_max_bond_dim", report.global_max_bond_dim},
          {"global_max_entropy", report.global_max_entropy},
          {"s_peak_entropy", report.s_peak_entropy},
          {"refinements", report.refinements},
          {"aborted", report.aborted},
          {"abort_reason", report.aborted ? nlohmann::json(report.abort_reason) : nlohmann::json(nullptr)}};
}

std::string aggregate_csv(std::vector<ScalingRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  std::string out = "n,global_max_entropy,global_max_bond_dim,s_peak_entropy,solved\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{}\n", r.n, r.global_max_entropy, r.global_max_bond_dim, r.s_peak_entropy,
                       r.solved ? (*r.solved ? "1" : "0") : "");
  }
  return out;
}

LogFit fit_log_scaling(std::span<const std::pair<int, double>> points) {
  std::vector<int> sizes;
  for (const auto& [n, _] : points) {
    if (n < 1) throw InvalidInputError(fmt::format("size {} has no logarithm", n));
    sizes.push_back(n);
  }
  std::sort(sizes.begin(), sizes.end());
  if (std::unique(sizes.begin(), sizes.end()) - sizes.begin() < 3) {
    throw InvalidInputError("log fit needs at least three distinct sizes");
  }
  const double count = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [n, s] : points) {
    mx += std::log(static_cast<double>(n));
    my += s;
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [n, s] : points) {
    const double dx = std::log(static_cast<double>(n)) - mx;
    sxx += dx * dx;
    sxy += dx * (s - my);
  }
  LogFit fit;
  fit.alpha = sxy / sxx;
  fit.beta = my - fit.alpha * mx;
  double sq = 0.0;
  for (const auto& [n, s] : points) {
    const double r = s - (fit.alpha * std::log(static_cast<double>(n)) + fit.beta);
    sq += r * r;
  }
  fit.residual = std::sqrt(sq / count);
  return fit;
}

void write_file_atomic(const std::filesystem::path& target, std::string_view content) {
  auto tmp = target;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInputError(fmt::format("cannot write '{}'", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw InvalidInputError(fmt::format("failed writing '{}'", tmp.string()));
    }
  }
  std::filesystem::rename(tmp, target);
}

int run_scenario(const ExperimentConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw InvalidInputError(fmt::format("cannot create output directory '{}'", cfg.out_dir.string()));
    switch (cfg.scenario) {
      case Scenario::run:
      case Scenario::validate:
        return run_single(cfg, log);
      case Scenario::scaling_1d:
        return run_scaling_1d(cfg, log);
      case Scenario::strip_2d:
        return run_strip_2d(cfg, log);
    }
  } catch (const NumericalError& ex) {
    log << "error: " << ex.what() << "\n";
    return 1;
  } catch (const Error& ex) {
    // Everything else is a bad configuration or unusable input.
    log << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& ex) {
    log << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace qwa
