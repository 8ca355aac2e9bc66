#include "qwa/dmrg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "qwa/errors.hpp"
#include "qwa/lanczos.hpp"
#include "qwa/spectrum.hpp"

namespace qwa {
namespace {

// Effective Hamiltonian of a two-site block (s1, s2) between environments.
// The block vector stores four (left x right) column-major matrices in the
// order (s1, s2) = (0,0), (0,1), (1,0), (1,1).
class TwoSiteOperator {
 public:
  TwoSiteOperator(const Environment& left, const MpoSite& w1, const MpoSite& w2, const Environment& right,
                  Eigen::Index left_dim, Eigen::Index right_dim)
      : left_(left), w1_(w1), w2_(w2), ml_(left_dim), mr_(right_dim) {
    right_t_.reserve(right.size());
    for (const auto& r : right) right_t_.push_back(r.transpose());
  }

  Eigen::Index dim() const { return 4 * ml_ * mr_; }

  void apply(const Vector& in, Vector& out) const {
    const Eigen::Index blk = ml_ * mr_;
    auto block_in = [&](int s1, int s2) {
      return Eigen::Map<const Matrix>(in.data() + (2 * s1 + s2) * blk, ml_, mr_);
    };

    // lx[a][s1'][s2'] = L[a] X[s1'][s2']
    std::vector<std::array<Matrix, 4>> lx(left_.size());
    std::vector<char> have_l(left_.size(), 0);
    for (const auto& t : w1_.terms) {
      const auto a = static_cast<std::size_t>(t.left);
      if (have_l[a]) continue;
      have_l[a] = 1;
      for (int s = 0; s < 4; ++s) lx[a][static_cast<std::size_t>(s)].noalias() = left_[a] * block_in(s / 2, s % 2);
    }

    // mid[b][s1][s2'] = sum op1(s1, s1') lx[a][s1'][s2']
    std::vector<std::array<Matrix, 4>> mid(static_cast<std::size_t>(w1_.right_dim));
    std::vector<char> have_mid(mid.size(), 0);
    for (const auto& t : w1_.terms) {
      const auto a = static_cast<std::size_t>(t.left);
      const auto b = static_cast<std::size_t>(t.right);
      if (!have_mid[b]) {
        for (auto& m : mid[b]) m = Matrix::Zero(ml_, mr_);
        have_mid[b] = 1;
      }
      for (int s1 = 0; s1 < 2; ++s1) {
        for (int s1p = 0; s1p < 2; ++s1p) {
          const double c = t.op(s1, s1p);
          if (c == 0.0) continue;
          for (int s2p = 0; s2p < 2; ++s2p) mid[b][static_cast<std::size_t>(2 * s1 + s2p)] += c * lx[a][static_cast<std::size_t>(2 * s1p + s2p)];
        }
      }
    }

    // acc[c][s1][s2] = sum op2(s2, s2') mid[b][s1][s2']
    std::vector<std::array<Matrix, 4>> acc(static_cast<std::size_t>(w2_.right_dim));
    std::vector<char> have_acc(acc.size(), 0);
    for (const auto& t : w2_.terms) {
      const auto b = static_cast<std::size_t>(t.left);
      const auto c = static_cast<std::size_t>(t.right);
      if (!have_mid[b]) continue;
      if (!have_acc[c]) {
        for (auto& m : acc[c]) m = Matrix::Zero(ml_, mr_);
        have_acc[c] = 1;
      }
      for (int s2 = 0; s2 < 2; ++s2) {
        for (int s2p = 0; s2p < 2; ++s2p) {
          const double coef = t.op(s2, s2p);
          if (coef == 0.0) continue;
          for (int s1 = 0; s1 < 2; ++s1) acc[c][static_cast<std::size_t>(2 * s1 + s2)] += coef * mid[b][static_cast<std::size_t>(2 * s1 + s2p)];
        }
      }
    }

    out.setZero(dim());
    for (std::size_t c = 0; c < acc.size(); ++c) {
      if (!have_acc[c]) continue;
      for (int s = 0; s < 4; ++s) {
        Eigen::Map<Matrix> block_out(out.data() + s * blk, ml_, mr_);
        block_out.noalias() += acc[c][static_cast<std::size_t>(s)] * right_t_[c];
      }
    }
  }

 private:
  const Environment& left_;
  const MpoSite& w1_;
  const MpoSite& w2_;
  std::vector<Matrix> right_t_;
  Eigen::Index ml_;
  Eigen::Index mr_;
};

Vector pack_pair(const SiteTensor& a, const SiteTensor& b) {
  const Eigen::Index ml = a.left_dim();
  const Eigen::Index mr = b.right_dim();
  Vector theta(4 * ml * mr);
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      Eigen::Map<Matrix>(theta.data() + (2 * s1 + s2) * ml * mr, ml, mr) =
          a.block[static_cast<std::size_t>(s1)] * b.block[static_cast<std::size_t>(s2)];
    }
  }
  return theta;
}

// (s1, alpha) x (s2, beta) matrix of a packed block.
Matrix unpack_pair(const Vector& theta, Eigen::Index ml, Eigen::Index mr) {
  Matrix m(2 * ml, 2 * mr);
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      m.block(s1 * ml, s2 * mr, ml, mr) = Eigen::Map<const Matrix>(theta.data() + (2 * s1 + s2) * ml * mr, ml, mr);
    }
  }
  return m;
}

struct Split {
  SiteTensor left;
  SiteTensor right;
  double discarded = 0.0;
  bool cap_bound = false;
};

// Truncated SVD of the block; the singular values go to the right tensor
// when moving right and to the left tensor when moving left.
Split split_pair(const Vector& theta, Eigen::Index ml, Eigen::Index mr, bool move_right, const DmrgSettings& cfg) {
  Eigen::BDCSVD<Matrix> svd(unpack_pair(theta, ml, mr), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double total = sv.squaredNorm();
  if (!(total > 0.0) || !std::isfinite(total)) throw NumericalError("two-site block has zero or non-finite norm");
  std::vector<double> probs(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) probs[static_cast<std::size_t>(i)] = sv[i] * sv[i] / total;

  const int wanted = m_eff(probs, cfg.epsilon);
  const int keep = std::min(wanted, cfg.m_max);
  Split out;
  out.cap_bound = wanted > cfg.m_max;
  for (std::size_t i = static_cast<std::size_t>(keep); i < probs.size(); ++i) out.discarded += probs[i];

  const Vector s = sv.head(keep) / std::sqrt(sv.head(keep).squaredNorm());
  if (move_right) {
    out.left = SiteTensor::from_stacked_rows(svd.matrixU().leftCols(keep), ml);
    out.right = SiteTensor::from_stacked_cols(s.asDiagonal() * svd.matrixV().leftCols(keep).transpose(), mr);
  } else {
    out.left = SiteTensor::from_stacked_rows(svd.matrixU().leftCols(keep) * s.asDiagonal(), ml);
    out.right = SiteTensor::from_stacked_cols(svd.matrixV().leftCols(keep).transpose(), mr);
  }
  return out;
}

GroundResult solve_single_site(const Mps& seed, const Mpo& h) {
  Eigen::Matrix2d local = Eigen::Matrix2d::Zero();
  for (const auto& t : h.site(0).terms) local += t.op;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(local);
  Eigen::Vector2d v = eig.eigenvectors().col(0);
  // Keep the seed's sign convention.
  const double proj = v[0] * seed.site(0).block[0](0, 0) + v[1] * seed.site(0).block[1](0, 0);
  if (proj < 0.0) v = -v;
  GroundResult result{Mps({SiteTensor{{Matrix::Constant(1, 1, v[0]), Matrix::Constant(1, 1, v[1])}}})};
  result.psi.canonicalize(0);
  result.energy = eig.eigenvalues()[0];
  result.sweeps_used = 1;
  result.converged = true;
  result.sweep_energies = {result.energy};
  return result;
}

}  // namespace

void DmrgSettings::validate() const {
  if (!(epsilon > 0.0)) throw RangeError(fmt::format("epsilon must be positive, got {}", epsilon));
  if (m_max < 2) throw RangeError(fmt::format("m_max must be at least 2, got {}", m_max));
  if (!(energy_tol > 0.0)) throw RangeError(fmt::format("energy_tol must be positive, got {}", energy_tol));
  if (max_sweeps < 1) throw RangeError(fmt::format("max_sweeps must be positive, got {}", max_sweeps));
  if (!(eig_tol > 0.0)) throw RangeError(fmt::format("eig_tol must be positive, got {}", eig_tol));
  if (eig_max_iter < 1) throw RangeError(fmt::format("eig_max_iter must be positive, got {}", eig_max_iter));
}

GroundResult solve_ground(const Mps& seed, const Mpo& h, const DmrgSettings& cfg) {
  cfg.validate();
  if (seed.size() != h.size()) {
    throw DimensionError(fmt::format("seed has {} sites, Hamiltonian has {}", seed.size(), h.size()));
  }
  const int n = seed.size();
  if (n == 1) return solve_single_site(seed, h);

  Mps psi = seed;
  psi.canonicalize(0);

  std::vector<Environment> left(static_cast<std::size_t>(n) + 1);
  std::vector<Environment> right(static_cast<std::size_t>(n) + 1);
  left[0] = left_boundary();
  right[static_cast<std::size_t>(n)] = right_boundary();
  for (int k = n - 1; k >= 1; --k) {
    right[static_cast<std::size_t>(k)] =
        extend_right(right[static_cast<std::size_t>(k) + 1], psi.site(k), psi.site(k), h.site(k));
  }

  const LanczosOptions lanczos{cfg.eig_tol, cfg.eig_max_iter, 40};
  GroundResult result{psi};
  result.bond_discarded.assign(static_cast<std::size_t>(n) - 1, 0.0);
  double energy = 0.0;

  auto optimize = [&](int k, bool move_right, int sweep) {
    const auto& a = psi.site(k);
    const auto& b = psi.site(k + 1);
    const Eigen::Index ml = a.left_dim();
    const Eigen::Index mr = b.right_dim();
    TwoSiteOperator op(left[static_cast<std::size_t>(k)], h.site(k), h.site(k + 1),
                       right[static_cast<std::size_t>(k) + 2], ml, mr);
    auto pair = lowest_eigenpair([&op](const Vector& x, Vector& y) { op.apply(x, y); }, pack_pair(a, b), lanczos);
    if (!std::isfinite(pair.value)) {
      throw NumericalError(fmt::format("non-finite local energy at bond {} in sweep {}", k + 1, sweep));
    }
    energy = pair.value;
    Split split = split_pair(pair.vector, ml, mr, move_right, cfg);
    result.cap_saturated = result.cap_saturated || split.cap_bound;
    result.bond_discarded[static_cast<std::size_t>(k)] = split.discarded;
    psi.replace_pair(k, std::move(split.left), std::move(split.right), move_right ? k + 1 : k);
    if (move_right) {
      left[static_cast<std::size_t>(k) + 1] =
          extend_left(left[static_cast<std::size_t>(k)], psi.site(k), psi.site(k), h.site(k));
    } else {
      right[static_cast<std::size_t>(k) + 1] =
          extend_right(right[static_cast<std::size_t>(k) + 2], psi.site(k + 1), psi.site(k + 1), h.site(k + 1));
    }
  };

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    for (int k = 0; k + 1 < n; ++k) optimize(k, true, sweep);
    for (int k = n - 2; k >= 0; --k) optimize(k, false, sweep);
    result.sweep_energies.push_back(energy);
    result.sweeps_used = sweep;
    if (sweep >= 2) {
      const double previous = result.sweep_energies[result.sweep_energies.size() - 2];
      if (std::abs(energy - previous) < cfg.energy_tol * std::max(1.0, std::abs(energy))) {
        result.converged = true;
        break;
      }
    }
  }

  result.psi = std::move(psi);
  result.energy = energy;
  result.max_bond_dim = result.psi.max_bond_dim();
  return result;
}

}  // namespace qwa
