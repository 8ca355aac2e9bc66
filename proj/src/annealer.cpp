#include "qwa/annealer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "qwa/errors.hpp"
#include "qwa/mpo.hpp"
#include "qwa/spectrum.hpp"

namespace qwa {

void AnnealParams::validate() const {
  if (!(ds_min > 0.0 && ds_min <= ds_init && ds_init <= ds_max && ds_max <= 1.0)) {
    throw RangeError(fmt::format("need 0 < ds_min <= ds_init <= ds_max <= 1, got {}, {}, {}", ds_min, ds_init, ds_max));
  }
  if (!(f_min > 0.0 && f_min < 1.0)) throw RangeError(fmt::format("f_min must lie in (0, 1), got {}", f_min));
  if (!(s_final > 0.0 && s_final <= 1.0)) throw RangeError(fmt::format("s_final must lie in (0, 1], got {}", s_final));
  if (growth_after < 1) throw RangeError(fmt::format("growth_after must be positive, got {}", growth_after));
  dmrg.validate();
}

namespace {

void fill_entanglement(StepRecord& rec, const Mps& psi, std::span<const EntanglementSpectrum> spectra) {
  rec.max_bond_dim = psi.max_bond_dim();
  rec.max_vn_entropy = 0.0;
  rec.max_index_sigma = 0.0;
  rec.m_eff_1e2 = 1;
  rec.m_eff_1e3 = 1;
  for (const auto& spec : spectra) {
    rec.max_vn_entropy = std::max(rec.max_vn_entropy, von_neumann(spec));
    rec.max_index_sigma = std::max(rec.max_index_sigma, std::sqrt(index_variance(spec).variance));
    rec.m_eff_1e2 = std::max(rec.m_eff_1e2, m_eff(spec, 1e-2));
    rec.m_eff_1e3 = std::max(rec.m_eff_1e3, m_eff(spec, 1e-3));
  }
}

SpinConfiguration to_spin_order(const SpinConfiguration& by_slot, const SitePath& path) {
  std::vector<int> spins(static_cast<std::size_t>(path.size()));
  for (int slot = 0; slot < path.size(); ++slot) spins[static_cast<std::size_t>(path.spin_at(slot))] = by_slot[slot];
  return SpinConfiguration(std::move(spins));
}

// H commutes with the global flip and its ground state is flip-even. Deep in
// the ordered phase the even and odd cat states are degenerate below solver
// precision and DMRG may return a broken-symmetry mix.
GroundResult solve_even(const Mps& seed, const GraphInstance& inst, const SitePath& path, double s,
                        const DmrgSettings& cfg) {
  constexpr double kEvenTolerance = 1e-10;
  const Mpo h = build_hamiltonian(inst, path, SchedulePoint(s));
  GroundResult ground = solve_ground(seed, h, cfg);
  if (inner_product(ground.psi, flipped(ground.psi)) < 1.0 - kEvenTolerance) {
    ground.psi = flip_even_projection(ground.psi, cfg.epsilon, cfg.m_max);
    ground.energy = expectation(h, ground.psi);
  }
  return ground;
}

}  // namespace

RunReport run_qwa(const GraphInstance& inst, const SitePath& path, const AnnealParams& params,
                  const StepObserver& observer) {
  params.validate();
  if (path.size() != inst.n()) {
    throw DimensionError(fmt::format("path has {} sites, instance has {}", path.size(), inst.n()));
  }
  using Clock = std::chrono::steady_clock;

  RunReport report;
  Mps current = product_plus_x(inst.n());
  double s = 0.0;
  double ds = params.ds_init;
  int accepted_in_row = 0;
  // Proposals closer than this to s_final land exactly on it.
  constexpr double kSnap = 1e-12;
  constexpr int kMaxRefinements = 8;

  while (s < params.s_final) {
    double proposal = s + ds;
    if (proposal > params.s_final - kSnap) proposal = params.s_final;
    const double step = proposal - s;

    const auto started = Clock::now();
    GroundResult ground{current};
    try {
      ground = solve_even(current, inst, path, proposal, params.dmrg);
    } catch (const NumericalError& ex) {
      report.aborted = true;
      report.abort_reason = fmt::format("DMRG failure at s = {}: {}", proposal, ex.what());
      break;
    }
    const double fidelity = std::min(overlap(current, ground.psi), 1.0);

    if (fidelity < params.f_min) {
      ds *= 0.5;
      accepted_in_row = 0;
      if (ds < params.ds_min && report.refinements < kMaxRefinements) {
        // A jump that survives tiny steps means the tracked state is not the
        // ground state at s. Re-solve at s from the lower-energy proposal.
        try {
          const Mpo h_here = build_hamiltonian(inst, path, SchedulePoint(s));
          const double stale = expectation(h_here, current);
          auto refined = solve_even(ground.psi, inst, path, s, params.dmrg);
          if (refined.energy < stale - params.dmrg.energy_tol * std::max(1.0, std::abs(stale))) {
            current = std::move(refined.psi);
            ++report.refinements;
            ds = params.ds_init;
            continue;
          }
        } catch (const NumericalError&) {
        }
      }
      if (ds < params.ds_min) {
        report.aborted = true;
        report.abort_reason =
            fmt::format("step size underflow at s = {} (fidelity {} below {})", s, fidelity, params.f_min);
        break;
      }
      continue;
    }

    current = std::move(ground.psi);
    s = proposal;
    const auto spectra = all_spectra(current);
    StepRecord rec;
    rec.s = s;
    rec.ds = step;
    rec.fidelity = fidelity;
    rec.energy = ground.energy;
    rec.sweeps_used = ground.sweeps_used;
    fill_entanglement(rec, current, spectra);
    rec.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
    report.steps.push_back(rec);
    if (observer) observer(rec, current, spectra);

    if (++accepted_in_row >= params.growth_after) {
      ds = std::min(2.0 * ds, params.ds_max);
      accepted_in_row = 0;
    }
  }

  report.final_config = to_spin_order(readout_conditional(current), path);
  report.final_classical_energy = classical_energy(inst, report.final_config);
  for (const auto& rec : report.steps) {
    report.global_max_bond_dim = std::max(report.global_max_bond_dim, rec.max_bond_dim);
    report.global_max_entropy = std::max(report.global_max_entropy, rec.max_vn_entropy);
  }
  if (!report.steps.empty()) report.s_peak_entropy = peak_entropy_location(report).s;
  return report;
}

EntropyPeak peak_entropy_location(std::span<const StepRecord> steps) {
  if (steps.empty()) throw InvalidInputError("no accepted steps to locate an entropy peak");
  EntropyPeak peak{steps.front().s, steps.front().max_vn_entropy};
  for (const auto& rec : steps) {
    if (rec.max_vn_entropy > peak.entropy || (rec.max_vn_entropy == peak.entropy && rec.s < peak.s)) {
      peak = {rec.s, rec.max_vn_entropy};
    }
  }
  return peak;
}

EntropyPeak peak_entropy_location(const RunReport& report) { return peak_entropy_location(report.steps); }

}  // namespace qwa
