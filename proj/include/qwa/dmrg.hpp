#pragma once

#include <utility>
#include <vector>

#include "qwa/mpo.hpp"
#include "qwa/mps.hpp"

namespace qwa {

struct DmrgSettings {
  double epsilon = 1e-8;     // discarded-probability tolerance per bond
  int m_max = 256;           // bond-dimension cap
  double energy_tol = 1e-10; // relative energy change between full sweeps
  int max_sweeps = 20;
  double eig_tol = 1e-10;    // relative residual of the local eigensolver
  int eig_max_iter = 200;    // matrix-vector products per local solve

  /// Throws RangeError on non-positive fields or m_max < 2.
  void validate() const;
};

struct GroundResult {
  explicit GroundResult(Mps state) : psi(std::move(state)) {}

  Mps psi;
  double energy = 0.0;
  int sweeps_used = 0;
  int max_bond_dim = 1;
  bool cap_saturated = false;
  bool converged = false;
  std::vector<double> sweep_energies;  // after each full (right + left) sweep
  std::vector<double> bond_discarded;  // last sweep, bonds 1..n-1
};

/// Two-site DMRG from seed. Each full sweep optimizes every neighboring pair
/// left to right and then right to left; the returned state has its
/// canonical center at site 0.
///
/// Throws DimensionError when seed and h disagree in size, NumericalError on
/// non-finite intermediate values.
GroundResult solve_ground(const Mps& seed, const Mpo& h, const DmrgSettings& cfg);

}  // namespace qwa
