#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "qwa/entanglement.hpp"
#include "qwa/instance.hpp"
#include "qwa/rng.hpp"

namespace qwa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Physical index: 0 is spin up (S^z = +1/2, sigma = +1), 1 is spin down.
inline constexpr int kPhysDim = 2;

/// Rank-3 site tensor stored as one (left bond x right bond) matrix per
/// physical index.
struct SiteTensor {
  std::array<Matrix, kPhysDim> block;

  Eigen::Index left_dim() const { return block[0].rows(); }
  Eigen::Index right_dim() const { return block[0].cols(); }

  // (2 * left) x right, row index s * left + alpha.
  Matrix stacked_rows() const;
  // left x (2 * right), column index s * right + beta.
  Matrix stacked_cols() const;
  static SiteTensor from_stacked_rows(const Matrix& m, Eigen::Index left);
  static SiteTensor from_stacked_cols(const Matrix& m, Eigen::Index right);
};

/// Open-boundary matrix-product state with real amplitudes.
class Mps {
 public:
  /// Validates shape chaining and unit boundary bonds.
  explicit Mps(std::vector<SiteTensor> sites);

  int size() const { return static_cast<int>(sites_.size()); }
  const SiteTensor& site(int k) const { return sites_[static_cast<std::size_t>(k)]; }

  // Bond k sits between sites k-1 and k; bond 0 and bond n are 1.
  int bond_dim(int bond) const;
  std::vector<int> bond_dims() const;
  int max_bond_dim() const;

  std::optional<int> center() const { return center_; }

  /// Sites left of c become left isometries, right of c right isometries,
  /// and the state is normalized at c.
  void canonicalize(int c);

  /// Writes an updated pair (k, k+1). The caller asserts the resulting
  /// canonical center, or nullopt if it does not know.
  void replace_pair(int k, SiteTensor left, SiteTensor right, std::optional<int> new_center);

  double norm() const;

 private:
  void left_orthonormalize(int k);
  void right_orthonormalize(int k);

  std::vector<SiteTensor> sites_;
  std::optional<int> center_;
};

/// Product state with every spin along +x: amplitudes (1/sqrt2, 1/sqrt2).
Mps product_plus_x(int n);

/// Computational basis state; values follow slot order (+1 is up).
Mps basis_state(std::span<const int> spins);

/// Random normalized state with bonds capped at max_bond (also capped by the
/// exact Hilbert-space dimension on either side).
Mps random_mps(int n, int max_bond, Xoshiro256& rng);

/// <a|b> with sign; requires equal sizes.
double inner_product(const Mps& a, const Mps& b);

/// |<a|b>| by left-to-right transfer contraction.
double overlap(const Mps& a, const Mps& b);

/// Schmidt spectrum at bond cut (1 <= cut <= n-1).
EntanglementSpectrum entanglement_spectrum(const Mps& psi, int cut);

/// Spectra at bonds 1..n-1 from one canonical sweep.
std::vector<EntanglementSpectrum> all_spectra(const Mps& psi);

struct TruncationReport {
  std::vector<double> discarded;  // per bond 1..n-1 (index 0 is bond 1)
  std::vector<int> kept;
  bool cap_bound = false;
};

/// Keeps at each bond the smallest m whose discarded probability tail is
/// below epsilon, capped at m_max; renormalizes. Sweeps right to left from a
/// left-canonical form, so the result has its center at site 0.
std::pair<Mps, TruncationReport> truncate(Mps psi, double epsilon, int m_max);

/// Every spin flipped: the two physical blocks of each site swap.
Mps flipped(const Mps& psi);

/// (|psi> + P|psi>) for the global spin flip P, recompressed with truncate
/// and normalized. Throws NumericalError when psi has no flip-even part.
Mps flip_even_projection(const Mps& psi, double epsilon, int m_max);

/// <S^z> per slot.
std::vector<double> sz_expectations(const Mps& psi);

/// sign(<S^z_k>) per slot with |<S^z_k>| < 1e-12 read as +1.
SpinConfiguration readout_z(const Mps& psi);

/// Slot-by-slot conditional decoding: each slot is pinned to its more
/// probable value given the slots already pinned (ties to +1). Picks one
/// sector of a globally flip-symmetric state.
SpinConfiguration readout_conditional(const Mps& psi);

/// Dense amplitudes, slot 0 most significant, bit value 1 meaning down.
Vector to_statevector(const Mps& psi);

/// Exact MPS of a dense state by successive SVDs (singular values below
/// 1e-14 relative are dropped).
Mps from_statevector(const Vector& amplitudes, int n);

nlohmann::json mps_to_json(const Mps& psi);

}  // namespace qwa
