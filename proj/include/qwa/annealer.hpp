#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwa/dmrg.hpp"
#include "qwa/instance.hpp"
#include "qwa/mps.hpp"
#include "qwa/ordering.hpp"

namespace qwa {

struct AnnealParams {
  double ds_init = 0.05;
  double ds_min = 1e-6;
  double ds_max = 0.1;
  double f_min = 0.9;
  double s_final = 0.999;
  int growth_after = 2;  // consecutive accepted steps before ds doubles
  DmrgSettings dmrg;

  /// Throws RangeError unless 0 < ds_min <= ds_init <= ds_max <= 1,
  /// 0 < f_min < 1, 0 < s_final <= 1 and growth_after >= 1.
  void validate() const;
};

struct StepRecord {
  double s = 0.0;
  double ds = 0.0;
  double fidelity = 1.0;
  double energy = 0.0;
  int max_bond_dim = 1;
  double max_vn_entropy = 0.0;
  double max_index_sigma = 0.0;
  int m_eff_1e2 = 1;
  int m_eff_1e3 = 1;
  int sweeps_used = 0;
  long wall_time_ms = 0;
};

struct RunReport {
  std::vector<StepRecord> steps;
  SpinConfiguration final_config;   // indexed by original spin
  double final_classical_energy = 0.0;
  int global_max_bond_dim = 1;
  double global_max_entropy = 0.0;
  double s_peak_entropy = 0.0;
  bool aborted = false;
  std::string abort_reason;
  int refinements = 0;  // times the tracked state was replaced by a re-solve at the same s
};

/// Called after every accepted step with the record, the accepted state and
/// its spectra at bonds 1..n-1.
using StepObserver =
    std::function<void(const StepRecord&, const Mps&, std::span<const EntanglementSpectrum>)>;

/// Tracks the ground state of H(s) from s = 0 to s_final. Each proposal
/// s + ds is solved by DMRG seeded with the current state and accepted when
/// |<current|proposed>| >= f_min; rejected proposals halve ds. The run aborts
/// (without throwing) when ds falls below ds_min or DMRG fails numerically,
/// unless re-solving at the current s from the rejected proposal finds a
/// lower energy; that state then replaces the tracked one and ds resets.
/// The final configuration comes from slot-by-slot conditional readout.
RunReport run_qwa(const GraphInstance& inst, const SitePath& path, const AnnealParams& params,
                  const StepObserver& observer = {});

struct EntropyPeak {
  double s = 0.0;
  double entropy = 0.0;
};

/// Step with the largest max_vn_entropy, ties to the smaller s.
/// Throws InvalidInputError on an empty report.
EntropyPeak peak_entropy_location(std::span<const StepRecord> steps);
EntropyPeak peak_entropy_location(const RunReport& report);

}  // namespace qwa
