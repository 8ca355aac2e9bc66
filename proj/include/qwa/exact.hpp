#pragma once

#include <utility>

#include <Eigen/Core>

#include "qwa/entanglement.hpp"
#include "qwa/instance.hpp"
#include "qwa/mpo.hpp"
#include "qwa/ordering.hpp"

namespace qwa {

/// Dense real amplitudes over {up, down}^n, ordered by path slot with slot 0
/// as the most significant bit (bit 1 means down).
struct StateVector {
  int n = 0;
  Eigen::VectorXd amplitudes;
};

struct ExactGround {
  StateVector state;
  double energy = 0.0;
};

inline constexpr int kDenseOracleMaxSites = 8;
inline constexpr int kKrylovOracleMaxSites = 14;
inline constexpr int kBruteForceMaxSites = 24;

/// H(s) assembled from Kronecker products of spin-1/2 operators, without
/// going through the MPO. Throws CapacityError above 12 sites.
Eigen::MatrixXd dense_hamiltonian(const GraphInstance& inst, const SitePath& path, SchedulePoint s);

/// Matrix-free H(s) |in>.
void apply_hamiltonian(const GraphInstance& inst, const SitePath& path, SchedulePoint s,
                       const Eigen::VectorXd& in, Eigen::VectorXd& out);

/// Lowest eigenpair of H(s): dense diagonalization up to
/// kDenseOracleMaxSites, restarted Lanczos up to kKrylovOracleMaxSites.
/// The returned state has a non-negative amplitude sum.
ExactGround exact_ground(const GraphInstance& inst, const SitePath& path, SchedulePoint s);

/// Exhaustive minimum of the classical energy with sigma_0 fixed to +1,
/// walking configurations in Gray-code order. Ties go to the configuration
/// that is lexicographically smallest with +1 ordered before -1.
std::pair<SpinConfiguration, double> brute_force_minimum(const GraphInstance& inst);

/// Schmidt spectrum of a statevector across bond cut (1 <= cut <= n-1).
EntanglementSpectrum exact_cut_spectrum(const StateVector& v, int cut);

/// <v|H|v> with the dense or matrix-free Hamiltonian.
double exact_energy(const GraphInstance& inst, const SitePath& path, SchedulePoint s, const StateVector& v);

}  // namespace qwa
