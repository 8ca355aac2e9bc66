#pragma once

#include <vector>

#include <Eigen/Core>

#include "qwa/instance.hpp"
#include "qwa/mps.hpp"
#include "qwa/ordering.hpp"

namespace qwa {

/// Annealing parameter s in [0, 1]. Throws RangeError otherwise.
class SchedulePoint {
 public:
  explicit SchedulePoint(double s);
  double value() const { return s_; }

 private:
  double s_;
};

namespace spin_ops {
Eigen::Matrix2d identity();
Eigen::Matrix2d sz();  // diag(1/2, -1/2)
Eigen::Matrix2d sx();  // offdiag(1/2, 1/2)
}  // namespace spin_ops

/// One non-zero (left, right) entry of an MPO site: a 2x2 operator indexed
/// (physical out, physical in).
struct MpoTerm {
  int left = 0;
  int right = 0;
  Eigen::Matrix2d op;
};

struct MpoSite {
  int left_dim = 1;
  int right_dim = 1;
  std::vector<MpoTerm> terms;

  /// Dense rank-4 element W[left][right](out, in).
  double element(int left, int right, int out, int in) const;
};

class Mpo {
 public:
  explicit Mpo(std::vector<MpoSite> sites);

  int size() const { return static_cast<int>(sites_.size()); }
  const MpoSite& site(int k) const { return sites_[static_cast<std::size_t>(k)]; }
  // Entries 0..n; boundary entries are 1.
  std::vector<int> op_bond_dims() const;

 private:
  std::vector<MpoSite> sites_;
};

/// H(s) = (1-s) * (-sum_i S^x_i) + s * (-sum_{ij} J_ij S^z_i S^z_j) with
/// spin-1/2 operators, laid out along path.
///
/// Operator-bond states at each cut: "start" (identities so far), "done"
/// (a complete term has been placed), and one channel per slot left of the
/// cut that still has couplings to the right of it. A channel carries the
/// pending S^z of its source slot; the coupling and the factor s are applied
/// where the partner slot closes the term. At s = 0 no channels are created.
Mpo build_hamiltonian(const GraphInstance& inst, const SitePath& path, SchedulePoint s);

/// Full contraction to a 2^n x 2^n matrix, slot 0 most significant.
/// Throws CapacityError above 12 sites.
Matrix dense_matrix(const Mpo& h);

/// <psi|H|psi> / <psi|psi>.
double expectation(const Mpo& h, const Mps& psi);

/// Contraction environments: one (bra bond x ket bond) matrix per operator
/// bond index.
using Environment = std::vector<Matrix>;

Environment left_boundary();
Environment right_boundary();
Environment extend_left(const Environment& env, const SiteTensor& bra, const SiteTensor& ket, const MpoSite& w);
Environment extend_right(const Environment& env, const SiteTensor& bra, const SiteTensor& ket, const MpoSite& w);

}  // namespace qwa
