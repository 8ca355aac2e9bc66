#include "qwa/mps.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "qwa/errors.hpp"
#include "qwa/spectrum.hpp"

namespace qwa {
namespace {

struct ThinQr {
  Matrix q;
  Matrix r;
};

ThinQr thin_qr(const Matrix& m) {
  const Eigen::Index rank = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Matrix> qr(m);
  ThinQr out;
  out.q = qr.householderQ() * Matrix::Identity(m.rows(), rank);
  out.r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  return out;
}

void check_same_size(const Mps& a, const Mps& b) {
  if (a.size() != b.size()) {
    throw DimensionError(fmt::format("states have {} and {} sites", a.size(), b.size()));
  }
}

// Left transfer environments: env[k] contracts sites < k of <psi|psi>.
std::vector<Matrix> left_norm_envs(const Mps& psi) {
  std::vector<Matrix> env(static_cast<std::size_t>(psi.size()) + 1);
  env[0] = Matrix::Ones(1, 1);
  for (int k = 0; k < psi.size(); ++k) {
    const auto& a = psi.site(k);
    env[static_cast<std::size_t>(k) + 1] = a.block[0].transpose() * env[static_cast<std::size_t>(k)] * a.block[0] +
                                           a.block[1].transpose() * env[static_cast<std::size_t>(k)] * a.block[1];
  }
  return env;
}

std::vector<Matrix> right_norm_envs(const Mps& psi) {
  const auto n = static_cast<std::size_t>(psi.size());
  std::vector<Matrix> env(n + 1);
  env[n] = Matrix::Ones(1, 1);
  for (int k = psi.size() - 1; k >= 0; --k) {
    const auto& a = psi.site(k);
    const auto& r = env[static_cast<std::size_t>(k) + 1];
    env[static_cast<std::size_t>(k)] = a.block[0] * r * a.block[0].transpose() + a.block[1] * r * a.block[1].transpose();
  }
  return env;
}

}  // namespace

Matrix SiteTensor::stacked_rows() const {
  Matrix m(2 * left_dim(), right_dim());
  m.topRows(left_dim()) = block[0];
  m.bottomRows(left_dim()) = block[1];
  return m;
}

Matrix SiteTensor::stacked_cols() const {
  Matrix m(left_dim(), 2 * right_dim());
  m.leftCols(right_dim()) = block[0];
  m.rightCols(right_dim()) = block[1];
  return m;
}

SiteTensor SiteTensor::from_stacked_rows(const Matrix& m, Eigen::Index left) {
  return {{m.topRows(left), m.middleRows(left, left)}};
}

SiteTensor SiteTensor::from_stacked_cols(const Matrix& m, Eigen::Index right) {
  return {{m.leftCols(right), m.middleCols(right, right)}};
}

Mps::Mps(std::vector<SiteTensor> sites) : sites_(std::move(sites)) {
  if (sites_.empty()) throw InvalidSizeError("MPS needs at least one site");
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    const auto& t = sites_[k];
    if (t.block[0].rows() != t.block[1].rows() || t.block[0].cols() != t.block[1].cols()) {
      throw DimensionError(fmt::format("site {} has mismatched physical blocks", k));
    }
    if (t.left_dim() < 1 || t.right_dim() < 1) throw DimensionError(fmt::format("site {} has an empty bond", k));
    if (k > 0 && sites_[k - 1].right_dim() != t.left_dim()) {
      throw DimensionError(fmt::format("bond {} mismatch: {} vs {}", k, sites_[k - 1].right_dim(), t.left_dim()));
    }
  }
  if (sites_.front().left_dim() != 1 || sites_.back().right_dim() != 1) {
    throw DimensionError("open-boundary MPS needs unit boundary bonds");
  }
}

int Mps::bond_dim(int bond) const {
  if (bond < 0 || bond > size()) throw IndexError(fmt::format("bond {} out of range", bond));
  if (bond == size()) return 1;
  return static_cast<int>(site(bond).left_dim());
}

std::vector<int> Mps::bond_dims() const {
  std::vector<int> dims;
  for (int b = 0; b <= size(); ++b) dims.push_back(bond_dim(b));
  return dims;
}

int Mps::max_bond_dim() const {
  const auto dims = bond_dims();
  return *std::max_element(dims.begin(), dims.end());
}

void Mps::left_orthonormalize(int k) {
  auto& t = sites_[static_cast<std::size_t>(k)];
  auto [q, r] = thin_qr(t.stacked_rows());
  t = SiteTensor::from_stacked_rows(q, t.left_dim());
  auto& next = sites_[static_cast<std::size_t>(k) + 1];
  next.block[0] = r * next.block[0];
  next.block[1] = r * next.block[1];
}

void Mps::right_orthonormalize(int k) {
  auto& t = sites_[static_cast<std::size_t>(k)];
  auto [q, r] = thin_qr(t.stacked_cols().transpose());
  t = SiteTensor::from_stacked_cols(q.transpose(), t.right_dim());
  auto& prev = sites_[static_cast<std::size_t>(k) - 1];
  prev.block[0] = prev.block[0] * r.transpose();
  prev.block[1] = prev.block[1] * r.transpose();
}

void Mps::canonicalize(int c) {
  if (c < 0 || c >= size()) throw IndexError(fmt::format("center {} out of range", c));
  for (int k = 0; k < c; ++k) left_orthonormalize(k);
  for (int k = size() - 1; k > c; --k) right_orthonormalize(k);
  auto& t = sites_[static_cast<std::size_t>(c)];
  const double nrm = std::sqrt(t.block[0].squaredNorm() + t.block[1].squaredNorm());
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalError("cannot normalize a zero or non-finite state");
  t.block[0] /= nrm;
  t.block[1] /= nrm;
  center_ = c;
}

void Mps::replace_pair(int k, SiteTensor left, SiteTensor right, std::optional<int> new_center) {
  if (k < 0 || k + 1 >= size()) throw IndexError(fmt::format("pair ({}, {}) out of range", k, k + 1));
  if (left.left_dim() != site(k).left_dim() || right.right_dim() != site(k + 1).right_dim() ||
      left.right_dim() != right.left_dim()) {
    throw DimensionError(fmt::format("replacement pair at {} does not chain", k));
  }
  sites_[static_cast<std::size_t>(k)] = std::move(left);
  sites_[static_cast<std::size_t>(k) + 1] = std::move(right);
  center_ = new_center;
}

double Mps::norm() const { return std::sqrt(std::max(inner_product(*this, *this), 0.0)); }

Mps product_plus_x(int n) {
  if (n < 1) throw InvalidSizeError(fmt::format("product state needs at least one site, got {}", n));
  const double amp = 1.0 / std::sqrt(2.0);
  std::vector<SiteTensor> sites(static_cast<std::size_t>(n), SiteTensor{{Matrix::Constant(1, 1, amp), Matrix::Constant(1, 1, amp)}});
  Mps psi(std::move(sites));
  psi.canonicalize(0);
  return psi;
}

Mps basis_state(std::span<const int> spins) {
  if (spins.empty()) throw InvalidSizeError("basis state needs at least one site");
  std::vector<SiteTensor> sites;
  for (int v : spins) {
    if (v != 1 && v != -1) throw InvalidInputError(fmt::format("spin value {} is not +1 or -1", v));
    sites.push_back({{Matrix::Constant(1, 1, v == 1 ? 1.0 : 0.0), Matrix::Constant(1, 1, v == 1 ? 0.0 : 1.0)}});
  }
  Mps psi(std::move(sites));
  psi.canonicalize(0);
  return psi;
}

Mps random_mps(int n, int max_bond, Xoshiro256& rng) {
  if (n < 1) throw InvalidSizeError("random MPS needs at least one site");
  if (max_bond < 1) throw RangeError("bond cap must be positive");
  std::vector<int> dims(static_cast<std::size_t>(n) + 1, 1);
  for (int b = 1; b < n; ++b) {
    const int exact = 1 << std::min({b, n - b, 20});
    dims[static_cast<std::size_t>(b)] = std::min(max_bond, exact);
  }
  std::vector<SiteTensor> sites;
  for (int k = 0; k < n; ++k) {
    SiteTensor t;
    for (auto& blk : t.block) {
      blk.resize(dims[static_cast<std::size_t>(k)], dims[static_cast<std::size_t>(k) + 1]);
      for (Eigen::Index i = 0; i < blk.size(); ++i) blk.data()[i] = rng.normal();
    }
    sites.push_back(std::move(t));
  }
  Mps psi(std::move(sites));
  psi.canonicalize(0);
  return psi;
}

double inner_product(const Mps& a, const Mps& b) {
  check_same_size(a, b);
  Matrix env = Matrix::Ones(1, 1);
  for (int k = 0; k < a.size(); ++k) {
    const auto& x = a.site(k);
    const auto& y = b.site(k);
    env = x.block[0].transpose() * env * y.block[0] + x.block[1].transpose() * env * y.block[1];
  }
  return env(0, 0);
}

double overlap(const Mps& a, const Mps& b) { return std::abs(inner_product(a, b)); }

EntanglementSpectrum entanglement_spectrum(const Mps& psi, int cut) {
  if (cut < 1 || cut >= psi.size()) {
    throw IndexError(fmt::format("cut {} out of range for {} sites", cut, psi.size()));
  }
  Mps work = psi;
  if (work.center() != cut - 1 && work.center() != cut) work.canonicalize(cut - 1);
  if (work.center() == cut - 1) {
    Eigen::BDCSVD<Matrix> svd(work.site(cut - 1).stacked_rows());
    return EntanglementSpectrum::from_singular_values(svd.singularValues(), cut);
  }
  Eigen::BDCSVD<Matrix> svd(work.site(cut).stacked_cols());
  return EntanglementSpectrum::from_singular_values(svd.singularValues(), cut);
}

std::vector<EntanglementSpectrum> all_spectra(const Mps& psi) {
  std::vector<EntanglementSpectrum> out;
  if (psi.size() < 2) return out;
  std::vector<SiteTensor> sites;
  Mps work = psi;
  work.canonicalize(0);
  Matrix carry = Matrix::Identity(1, 1);
  for (int k = 0; k + 1 < work.size(); ++k) {
    SiteTensor t = work.site(k);
    t.block[0] = carry * t.block[0];
    t.block[1] = carry * t.block[1];
    Eigen::BDCSVD<Matrix> svd(t.stacked_rows(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.push_back(EntanglementSpectrum::from_singular_values(svd.singularValues(), k + 1));
    carry = svd.singularValues().asDiagonal() * svd.matrixV().transpose();
  }
  return out;
}

std::pair<Mps, TruncationReport> truncate(Mps psi, double epsilon, int m_max) {
  if (!(epsilon > 0.0)) throw RangeError(fmt::format("tolerance must be positive, got {}", epsilon));
  if (m_max < 1) throw RangeError(fmt::format("bond cap must be at least 1, got {}", m_max));
  const int n = psi.size();
  TruncationReport report;
  report.discarded.assign(static_cast<std::size_t>(std::max(n - 1, 0)), 0.0);
  report.kept.assign(static_cast<std::size_t>(std::max(n - 1, 0)), 1);
  if (n < 2) {
    psi.canonicalize(0);
    return {std::move(psi), report};
  }
  psi.canonicalize(n - 1);
  for (int k = n - 1; k >= 1; --k) {
    const SiteTensor& right = psi.site(k);
    Eigen::BDCSVD<Matrix> svd(right.stacked_cols(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double total = sv.squaredNorm();
    std::vector<double> probs(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) probs[static_cast<std::size_t>(i)] = sv[i] * sv[i] / total;

    const int wanted = m_eff(probs, epsilon);
    const int keep = std::min(wanted, m_max);
    if (wanted > m_max) report.cap_bound = true;
    double discarded = 0.0;
    for (std::size_t i = static_cast<std::size_t>(keep); i < probs.size(); ++i) discarded += probs[i];
    report.discarded[static_cast<std::size_t>(k) - 1] = discarded;
    report.kept[static_cast<std::size_t>(k) - 1] = keep;

    const Matrix vt = svd.matrixV().leftCols(keep).transpose();
    const Vector s = sv.head(keep) / std::sqrt(sv.head(keep).squaredNorm());
    const Matrix us = svd.matrixU().leftCols(keep) * s.asDiagonal();
    SiteTensor new_right = SiteTensor::from_stacked_cols(vt, right.right_dim());
    SiteTensor new_left = psi.site(k - 1);
    new_left.block[0] = new_left.block[0] * us;
    new_left.block[1] = new_left.block[1] * us;
    psi.replace_pair(k - 1, std::move(new_left), std::move(new_right), k - 1);
  }
  psi.canonicalize(0);
  return {std::move(psi), report};
}

Mps flipped(const Mps& psi) {
  std::vector<SiteTensor> sites;
  sites.reserve(static_cast<std::size_t>(psi.size()));
  for (int k = 0; k < psi.size(); ++k) sites.push_back({{psi.site(k).block[1], psi.site(k).block[0]}});
  Mps out(std::move(sites));
  if (psi.center()) out.canonicalize(*psi.center());
  return out;
}

Mps flip_even_projection(const Mps& psi, double epsilon, int m_max) {
  const int n = psi.size();
  const Mps mirror = flipped(psi);
  const double norm2 = inner_product(psi, psi);
  const double even2 = 0.5 * (norm2 + inner_product(psi, mirror));
  if (!(even2 > 1e-8 * norm2)) throw NumericalError("state has no flip-even component");

  // Direct sum: row concatenation at the left edge, column stacking at the
  // right edge and block diagonals in between.
  std::vector<SiteTensor> sites;
  sites.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const SiteTensor& a = psi.site(k);
    const SiteTensor& b = mirror.site(k);
    SiteTensor sum;
    for (int s = 0; s < kPhysDim; ++s) {
      const Matrix& x = a.block[static_cast<std::size_t>(s)];
      const Matrix& y = b.block[static_cast<std::size_t>(s)];
      Matrix& out = sum.block[static_cast<std::size_t>(s)];
      if (n == 1) {
        out = x + y;
      } else if (k == 0) {
        out.resize(1, x.cols() + y.cols());
        out << x, y;
      } else if (k == n - 1) {
        out.resize(x.rows() + y.rows(), 1);
        out << x, y;
      } else {
        out = Matrix::Zero(x.rows() + y.rows(), x.cols() + y.cols());
        out.topLeftCorner(x.rows(), x.cols()) = x;
        out.bottomRightCorner(y.rows(), y.cols()) = y;
      }
    }
    sites.push_back(std::move(sum));
  }
  return truncate(Mps(std::move(sites)), epsilon, m_max).first;
}

std::vector<double> sz_expectations(const Mps& psi) {
  const auto left = left_norm_envs(psi);
  const auto right = right_norm_envs(psi);
  const double norm2 = left.back()(0, 0);
  if (!(norm2 > 0.0)) throw NumericalError("cannot measure a zero state");
  std::vector<double> sz(static_cast<std::size_t>(psi.size()));
  for (int k = 0; k < psi.size(); ++k) {
    const auto& a = psi.site(k);
    const auto& l = left[static_cast<std::size_t>(k)];
    const auto& r = right[static_cast<std::size_t>(k) + 1];
    const double up = (a.block[0].transpose() * l * a.block[0]).cwiseProduct(r).sum();
    const double down = (a.block[1].transpose() * l * a.block[1]).cwiseProduct(r).sum();
    sz[static_cast<std::size_t>(k)] = 0.5 * (up - down) / norm2;
  }
  return sz;
}

SpinConfiguration readout_z(const Mps& psi) {
  const auto sz = sz_expectations(psi);
  std::vector<int> spins;
  spins.reserve(sz.size());
  for (double m : sz) spins.push_back(std::abs(m) < 1e-12 ? 1 : (m > 0 ? 1 : -1));
  return SpinConfiguration(std::move(spins));
}

SpinConfiguration readout_conditional(const Mps& psi) {
  Mps work = psi;
  work.canonicalize(0);
  Matrix env = Matrix::Ones(1, 1);
  std::vector<int> spins;
  for (int k = 0; k < work.size(); ++k) {
    const auto& a = work.site(k);
    // Right of k is right-orthonormal, so the weight reduces to a trace.
    const Matrix up_env = a.block[0].transpose() * env * a.block[0];
    const Matrix down_env = a.block[1].transpose() * env * a.block[1];
    const double p_up = up_env.trace();
    const double p_down = down_env.trace();
    const bool pick_up = p_up >= p_down - 1e-12 * (p_up + p_down);
    spins.push_back(pick_up ? 1 : -1);
    const double p = pick_up ? p_up : p_down;
    if (!(p > 0.0)) throw NumericalError("conditional readout reached a zero-weight branch");
    env = (pick_up ? up_env : down_env) / p;
  }
  return SpinConfiguration(std::move(spins));
}

Vector to_statevector(const Mps& psi) {
  if (psi.size() > 24) throw CapacityError(fmt::format("statevector of {} sites is too large", psi.size()));
  // rows: basis prefix, cols: open bond
  Matrix acc = Matrix::Ones(1, 1);
  for (int k = 0; k < psi.size(); ++k) {
    const auto& a = psi.site(k);
    Matrix next(acc.rows() * 2, a.right_dim());
    for (Eigen::Index p = 0; p < acc.rows(); ++p) {
      next.row(2 * p) = acc.row(p) * a.block[0];
      next.row(2 * p + 1) = acc.row(p) * a.block[1];
    }
    acc = std::move(next);
  }
  return acc.col(0);
}

Mps from_statevector(const Vector& amplitudes, int n) {
  if (n < 1 || n > 24) throw CapacityError(fmt::format("cannot decompose a {}-site statevector", n));
  if (amplitudes.size() != (Eigen::Index{1} << n)) {
    throw DimensionError(fmt::format("statevector length {} does not match {} sites", amplitudes.size(), n));
  }
  std::vector<SiteTensor> sites;
  // rest holds (left bond) x (remaining basis), remaining slot k most significant.
  Matrix rest = amplitudes.transpose();
  for (int k = 0; k + 1 < n; ++k) {
    const Eigen::Index left = rest.rows();
    const Eigen::Index half = rest.cols() / 2;
    Matrix stacked(2 * left, half);
    stacked.topRows(left) = rest.leftCols(half);
    stacked.bottomRows(left) = rest.rightCols(half);
    Eigen::BDCSVD<Matrix> svd(stacked, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    Eigen::Index keep = 1;
    while (keep < sv.size() && sv[keep] > 1e-14 * sv[0]) ++keep;
    sites.push_back(SiteTensor::from_stacked_rows(svd.matrixU().leftCols(keep), left));
    rest = sv.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).transpose();
  }
  sites.push_back(SiteTensor::from_stacked_cols(rest, 1));
  Mps psi(std::move(sites));
  psi.canonicalize(n - 1);
  return psi;
}

nlohmann::json mps_to_json(const Mps& psi) {
  nlohmann::json sites = nlohmann::json::array();
  for (int k = 0; k < psi.size(); ++k) {
    nlohmann::json site = nlohmann::json::array();
    for (const auto& blk : psi.site(k).block) {
      nlohmann::json rows = nlohmann::json::array();
      for (Eigen::Index i = 0; i < blk.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < blk.cols(); ++j) row.push_back(blk(i, j));
        rows.push_back(std::move(row));
      }
      site.push_back(std::move(rows));
    }
    sites.push_back(std::move(site));
  }
  nlohmann::json center = psi.center() ? nlohmann::json(*psi.center()) : nlohmann::json(nullptr);
  return {{"n", psi.size()}, {"bond_dims", psi.bond_dims()}, {"center", center}, {"sites", sites}};
}

}  // namespace qwa
