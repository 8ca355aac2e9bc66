#include "qwa/mpo.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <unsupported/Eigen/KroneckerProduct>
#include <fmt/format.h>

#include "qwa/errors.hpp"

namespace qwa {

SchedulePoint::SchedulePoint(double s) : s_(s) {
  if (!(s >= 0.0 && s <= 1.0)) throw RangeError(fmt::format("schedule point s = {} outside [0, 1]", s));
}

namespace spin_ops {
Eigen::Matrix2d identity() { return Eigen::Matrix2d::Identity(); }
Eigen::Matrix2d sz() {
  Eigen::Matrix2d m;
  m << 0.5, 0.0, 0.0, -0.5;
  return m;
}
Eigen::Matrix2d sx() {
  Eigen::Matrix2d m;
  m << 0.0, 0.5, 0.5, 0.0;
  return m;
}
}  // namespace spin_ops

double MpoSite::element(int left, int right, int out, int in) const {
  double value = 0.0;
  for (const auto& t : terms) {
    if (t.left == left && t.right == right) value += t.op(out, in);
  }
  return value;
}

Mpo::Mpo(std::vector<MpoSite> sites) : sites_(std::move(sites)) {
  if (sites_.empty()) throw InvalidSizeError("MPO needs at least one site");
  if (sites_.front().left_dim != 1 || sites_.back().right_dim != 1) {
    throw DimensionError("MPO boundary operator bonds must be 1");
  }
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    const auto& w = sites_[k];
    if (k > 0 && sites_[k - 1].right_dim != w.left_dim) {
      throw DimensionError(fmt::format("MPO bond {} mismatch", k));
    }
    for (const auto& t : w.terms) {
      if (t.left < 0 || t.left >= w.left_dim || t.right < 0 || t.right >= w.right_dim) {
        throw DimensionError(fmt::format("MPO term out of range at site {}", k));
      }
    }
  }
}

std::vector<int> Mpo::op_bond_dims() const {
  std::vector<int> dims;
  for (const auto& w : sites_) dims.push_back(w.left_dim);
  dims.push_back(sites_.back().right_dim);
  return dims;
}

Mpo build_hamiltonian(const GraphInstance& inst, const SitePath& path, SchedulePoint point) {
  const int n = inst.n();
  if (path.size() != n) throw DimensionError(fmt::format("path has {} sites, instance has {}", path.size(), n));
  const double s = point.value();
  const double field = -(1.0 - s);

  // Couplings in slot coordinates: coupling[q] maps source slot p < q to J.
  std::vector<std::map<int, double>> closing(static_cast<std::size_t>(n));
  std::vector<int> reach(static_cast<std::size_t>(n), -1);  // farthest partner slot to the right
  if (s != 0.0) {
    for (const auto& e : inst.edges()) {
      const int p = std::min(path.slot_of(e.i), path.slot_of(e.j));
      const int q = std::max(path.slot_of(e.i), path.slot_of(e.j));
      closing[static_cast<std::size_t>(q)][p] += e.coupling;
      reach[static_cast<std::size_t>(p)] = std::max(reach[static_cast<std::size_t>(p)], q);
    }
  }

  // channels[b]: source slots open across bond b (between slots b-1 and b).
  std::vector<std::vector<int>> channels(static_cast<std::size_t>(n) + 1);
  for (int b = 1; b < n; ++b) {
    for (int p = 0; p < b; ++p) {
      if (reach[static_cast<std::size_t>(p)] >= b) channels[static_cast<std::size_t>(b)].push_back(p);
    }
  }
  constexpr int kStart = 0;
  constexpr int kDone = 1;
  auto dim_at = [&](int b) {
    if (b == 0 || b == n) return 1;
    return 2 + static_cast<int>(channels[static_cast<std::size_t>(b)].size());
  };
  // Index of a state at bond b, or -1 when the state does not exist there.
  auto start_at = [&](int b) { return b == n ? -1 : kStart; };
  auto done_at = [&](int b) { return b == 0 ? -1 : (b == n ? 0 : kDone); };
  auto channel_at = [&](int b, int p) {
    const auto& list = channels[static_cast<std::size_t>(b)];
    const auto it = std::find(list.begin(), list.end(), p);
    return it == list.end() ? -1 : 2 + static_cast<int>(it - list.begin());
  };

  const auto id = spin_ops::identity();
  const auto sz = spin_ops::sz();
  const auto sx = spin_ops::sx();

  std::vector<MpoSite> sites;
  for (int k = 0; k < n; ++k) {
    MpoSite w;
    w.left_dim = dim_at(k);
    w.right_dim = dim_at(k + 1);
    const int ls = start_at(k);
    const int rs = start_at(k + 1);
    const int ld = done_at(k);
    const int rd = done_at(k + 1);
    if (ls >= 0 && rs >= 0) w.terms.push_back({ls, rs, id});
    if (ls >= 0 && rd >= 0 && field != 0.0) w.terms.push_back({ls, rd, field * sx});
    if (ld >= 0 && rd >= 0) w.terms.push_back({ld, rd, id});
    if (const int open = channel_at(k + 1, k); ls >= 0 && open >= 0) w.terms.push_back({ls, open, sz});
    for (int p : channels[static_cast<std::size_t>(k)]) {
      const int from = channel_at(k, p);
      if (const int to = channel_at(k + 1, p); to >= 0) w.terms.push_back({from, to, id});
      const auto& closes = closing[static_cast<std::size_t>(k)];
      if (const auto it = closes.find(p); it != closes.end() && rd >= 0) {
        w.terms.push_back({from, rd, -s * it->second * sz});
      }
    }
    sites.push_back(std::move(w));
  }
  return Mpo(std::move(sites));
}

Matrix dense_matrix(const Mpo& h) {
  if (h.size() > 12) throw CapacityError(fmt::format("dense MPO contraction of {} sites is too large", h.size()));
  std::vector<Matrix> acc{Matrix::Ones(1, 1)};
  for (int k = 0; k < h.size(); ++k) {
    const auto& w = h.site(k);
    const Eigen::Index dim = acc[0].rows() * 2;
    std::vector<Matrix> next(static_cast<std::size_t>(w.right_dim), Matrix::Zero(dim, dim));
    for (const auto& t : w.terms) {
      next[static_cast<std::size_t>(t.right)] +=
          Eigen::kroneckerProduct(acc[static_cast<std::size_t>(t.left)], Matrix(t.op)).eval();
    }
    acc = std::move(next);
  }
  return acc[0];
}

Environment left_boundary() { return {Matrix::Ones(1, 1)}; }
Environment right_boundary() { return {Matrix::Ones(1, 1)}; }

Environment extend_left(const Environment& env, const SiteTensor& bra, const SiteTensor& ket, const MpoSite& w) {
  if (static_cast<int>(env.size()) != w.left_dim) throw DimensionError("left environment does not match MPO site");
  // L'[b] = sum op(s, s') A[s]^T L[a] B[s']
  std::vector<std::array<Matrix, 2>> l_ket(env.size());
  std::vector<char> ready(env.size(), 0);
  Environment out(static_cast<std::size_t>(w.right_dim), Matrix::Zero(bra.right_dim(), ket.right_dim()));
  for (const auto& t : w.terms) {
    const auto a = static_cast<std::size_t>(t.left);
    if (!ready[a]) {
      l_ket[a] = {env[a] * ket.block[0], env[a] * ket.block[1]};
      ready[a] = 1;
    }
    for (int so = 0; so < 2; ++so) {
      const double c0 = t.op(so, 0);
      const double c1 = t.op(so, 1);
      if (c0 == 0.0 && c1 == 0.0) continue;
      Matrix mixed = c0 * l_ket[a][0] + c1 * l_ket[a][1];
      out[static_cast<std::size_t>(t.right)].noalias() += bra.block[static_cast<std::size_t>(so)].transpose() * mixed;
    }
  }
  return out;
}

Environment extend_right(const Environment& env, const SiteTensor& bra, const SiteTensor& ket, const MpoSite& w) {
  if (static_cast<int>(env.size()) != w.right_dim) throw DimensionError("right environment does not match MPO site");
  // R'[a] = sum op(s, s') A[s] R[b] B[s']^T
  std::vector<std::array<Matrix, 2>> ket_r(env.size());
  std::vector<char> ready(env.size(), 0);
  Environment out(static_cast<std::size_t>(w.left_dim), Matrix::Zero(bra.left_dim(), ket.left_dim()));
  for (const auto& t : w.terms) {
    const auto b = static_cast<std::size_t>(t.right);
    if (!ready[b]) {
      ket_r[b] = {env[b] * ket.block[0].transpose(), env[b] * ket.block[1].transpose()};
      ready[b] = 1;
    }
    for (int so = 0; so < 2; ++so) {
      const double c0 = t.op(so, 0);
      const double c1 = t.op(so, 1);
      if (c0 == 0.0 && c1 == 0.0) continue;
      Matrix mixed = c0 * ket_r[b][0] + c1 * ket_r[b][1];
      out[static_cast<std::size_t>(t.left)].noalias() += bra.block[static_cast<std::size_t>(so)] * mixed;
    }
  }
  return out;
}

double expectation(const Mpo& h, const Mps& psi) {
  if (h.size() != psi.size()) {
    throw DimensionError(fmt::format("MPO has {} sites, state has {}", h.size(), psi.size()));
  }
  Environment env = left_boundary();
  for (int k = 0; k < h.size(); ++k) env = extend_left(env, psi.site(k), psi.site(k), h.site(k));
  const double norm2 = inner_product(psi, psi);
  if (!(norm2 > 0.0)) throw NumericalError("expectation of a zero state");
  return env[0](0, 0) / norm2;
}

}  // namespace qwa
