// qwa: command-line front end for instance generation, annealing runs,
// oracle validation and the scaling scenarios.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <fmt/format.h>

#include "qwa/errors.hpp"
#include "qwa/harness.hpp"
#include "qwa/instance.hpp"

namespace {

struct CliOptions {
  qwa::ExperimentConfig cfg;
  std::string instance_file;
  std::string kind = "chain";
  int n = 8;
  int width = 2;
  int height = 2;
  int degree = 3;
  std::string dist = "gaussian";
  std::string path = "identity";
  std::string scenario = "scaling_1d";
  std::string out = ".";
  std::string gen_out;
};

void add_instance_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--instance", o.instance_file, "Instance JSON file (overrides the generator flags)");
  cmd->add_option("--kind", o.kind, "Generated instance kind: chain, grid, regular");
  cmd->add_option("--n", o.n, "Spin count for chain and regular instances");
  cmd->add_option("--width", o.width, "Grid width");
  cmd->add_option("--height", o.height, "Grid height");
  cmd->add_option("--d", o.degree, "Degree of regular instances");
  cmd->add_option("--dist", o.dist, "Coupling distribution: pm1, gaussian, ferro");
}

void add_shared_flags(CLI::App* cmd, CliOptions& o) {
  auto& p = o.cfg.params;
  cmd->add_option("--seed", o.cfg.instance.seed, "Instance seed");
  cmd->add_option("--eps", p.dmrg.epsilon, "Discarded-probability tolerance per bond");
  cmd->add_option("--m-max", p.dmrg.m_max, "Bond-dimension cap");
  cmd->add_option("--f-min", p.f_min, "Fidelity acceptance threshold");
  cmd->add_option("--ds", p.ds_init, "Initial annealing step");
  cmd->add_option("--ds-min", p.ds_min, "Step size below which the run aborts");
  cmd->add_option("--ds-max", p.ds_max, "Largest annealing step");
  cmd->add_option("--growth-after", p.growth_after, "Accepted steps before the step doubles");
  cmd->add_option("--s-final", p.s_final, "Readout point");
  cmd->add_option("--energy-tol", p.dmrg.energy_tol, "Relative energy change that ends DMRG");
  cmd->add_option("--max-sweeps", p.dmrg.max_sweeps, "DMRG sweep limit per step");
  cmd->add_option("--eig-tol", p.dmrg.eig_tol, "Local eigensolver residual tolerance");
  cmd->add_option("--eig-max-iter", p.dmrg.eig_max_iter, "Local eigensolver matrix-vector budget");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--path", o.path, "DMRG path: identity, heuristic, or a comma-separated permutation");
  cmd->add_flag("--wall-time", o.cfg.record_wall_time, "Write measured wall times into the telemetry");
}

qwa::InstanceSpec instance_spec(const CliOptions& o) {
  qwa::InstanceSpec spec;
  spec.dist = qwa::parse_coupling_dist(o.dist);
  spec.seed = o.cfg.instance.seed;
  spec.n = o.n;
  switch (qwa::parse_graph_family(o.kind)) {
    case qwa::GraphFamily::chain:
      spec.kind = qwa::GraphKind::chain();
      break;
    case qwa::GraphFamily::grid:
      spec.kind = qwa::GraphKind::grid(o.width, o.height);
      spec.n = o.width * o.height;
      break;
    case qwa::GraphFamily::regular:
      spec.kind = qwa::GraphKind::regular(o.degree);
      break;
    case qwa::GraphFamily::custom:
      throw qwa::InvalidInputError("custom instances must come from --instance");
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum wavefunction annealing with matrix product states"};
  app.require_subcommand(1);
  CliOptions o;

  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  add_instance_flags(gen, o);
  gen->add_option("--seed", o.cfg.instance.seed, "Instance seed");
  gen->add_option("--out", o.gen_out, "Output file (stdout when omitted)");

  auto* run = app.add_subcommand("run", "Anneal one instance and write telemetry");
  add_instance_flags(run, o);
  add_shared_flags(run, o);

  auto* validate = app.add_subcommand("validate", "Anneal one instance and compare with brute force");
  add_instance_flags(validate, o);
  add_shared_flags(validate, o);

  auto* scaling = app.add_subcommand("scaling", "Run a scaling scenario over a list of sizes");
  add_shared_flags(scaling, o);
  scaling->add_option("--scenario", o.scenario, "scaling_1d or strip_2d");
  scaling->add_option("--sizes", o.cfg.sizes, "Chain lengths (scaling_1d) or strip lengths (strip_2d)")->delimiter(',');
  scaling->add_option("--widths", o.cfg.strip_widths, "Strip widths for strip_2d")->delimiter(',');
  scaling->add_option("--dist", o.dist, "Coupling distribution for strip_2d");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      const auto inst = qwa::generate_instance(instance_spec(o));
      const auto text = qwa::instance_to_json(inst).dump(2) + "\n";
      if (o.gen_out.empty()) {
        std::cout << text;
      } else {
        qwa::write_file_atomic(o.gen_out, text);
      }
      return 0;
    }

    auto& cfg = o.cfg;
    cfg.out_dir = o.out;
    cfg.path = qwa::PathChoice::parse(o.path);
    if (scaling->parsed()) {
      cfg.scenario = qwa::parse_scenario(o.scenario);
      if (cfg.scenario != qwa::Scenario::scaling_1d && cfg.scenario != qwa::Scenario::strip_2d) {
        throw qwa::InvalidInputError(fmt::format("'{}' is not a scaling scenario", o.scenario));
      }
      cfg.instance.dist = qwa::parse_coupling_dist(o.dist);
      if (cfg.scenario == qwa::Scenario::strip_2d && o.path == "identity") {
        cfg.path = qwa::PathChoice::parse("heuristic");
      }
    } else {
      cfg.scenario = validate->parsed() ? qwa::Scenario::validate : qwa::Scenario::run;
      if (!o.instance_file.empty()) {
        cfg.instance_file = o.instance_file;
      } else {
        cfg.instance = instance_spec(o);
      }
    }
    return qwa::run_scenario(cfg, std::cerr);
  } catch (const qwa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
