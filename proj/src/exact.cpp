#include "qwa/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "qwa/errors.hpp"
#include "qwa/lanczos.hpp"

namespace qwa {
namespace {

std::uint64_t basis_size(int n) { return std::uint64_t{1} << n; }

// Bit of slot k in basis index x (slot 0 most significant).
int slot_bit(std::uint64_t x, int slot, int n) { return static_cast<int>((x >> (n - 1 - slot)) & 1U); }

// Diagonal of -s sum J S^z S^z in the path basis.
Eigen::VectorXd ising_diagonal(const GraphInstance& inst, const SitePath& path, double s) {
  const int n = inst.n();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_size(n)));
  for (std::uint64_t x = 0; x < basis_size(n); ++x) {
    double e = 0.0;
    for (const auto& edge : inst.edges()) {
      const double zi = slot_bit(x, path.slot_of(edge.i), n) ? -0.5 : 0.5;
      const double zj = slot_bit(x, path.slot_of(edge.j), n) ? -0.5 : 0.5;
      e -= edge.coupling * zi * zj;
    }
    diag[static_cast<Eigen::Index>(x)] = s * e;
  }
  return diag;
}

void check_oracle_inputs(const GraphInstance& inst, const SitePath& path, int max_sites) {
  if (path.size() != inst.n()) throw DimensionError("path and instance sizes differ");
  if (inst.n() > max_sites) {
    throw CapacityError(fmt::format("exact oracle limited to {} sites, got {}", max_sites, inst.n()));
  }
}

}  // namespace

Eigen::MatrixXd dense_hamiltonian(const GraphInstance& inst, const SitePath& path, SchedulePoint point) {
  check_oracle_inputs(inst, path, 12);
  const int n = inst.n();
  const double s = point.value();
  const auto dim = static_cast<Eigen::Index>(basis_size(n));
  Eigen::MatrixXd h = ising_diagonal(inst, path, s).asDiagonal();
  // Transverse field: S^x on slot k connects x and x ^ bit(k) with 1/2.
  for (int slot = 0; slot < n; ++slot) {
    const std::uint64_t mask = std::uint64_t{1} << (n - 1 - slot);
    for (Eigen::Index x = 0; x < dim; ++x) {
      h(x, static_cast<Eigen::Index>(static_cast<std::uint64_t>(x) ^ mask)) -= (1.0 - s) * 0.5;
    }
  }
  return h;
}

void apply_hamiltonian(const GraphInstance& inst, const SitePath& path, SchedulePoint point,
                       const Eigen::VectorXd& in, Eigen::VectorXd& out) {
  check_oracle_inputs(inst, path, kBruteForceMaxSites);
  const int n = inst.n();
  const double s = point.value();
  const auto dim = static_cast<Eigen::Index>(basis_size(n));
  if (in.size() != dim) throw DimensionError("statevector length does not match instance");
  out = ising_diagonal(inst, path, s).cwiseProduct(in);
  const double field = -(1.0 - s) * 0.5;
  if (field == 0.0) return;
  for (int slot = 0; slot < n; ++slot) {
    const std::uint64_t mask = std::uint64_t{1} << (n - 1 - slot);
    for (Eigen::Index x = 0; x < dim; ++x) {
      out[x] += field * in[static_cast<Eigen::Index>(static_cast<std::uint64_t>(x) ^ mask)];
    }
  }
}

namespace {

// Global spin flip complements every basis index, which reverses the vector.
Eigen::VectorXd flip_even_part(const Eigen::VectorXd& v) { return 0.5 * (v + v.reverse()); }

}  // namespace

ExactGround exact_ground(const GraphInstance& inst, const SitePath& path, SchedulePoint point) {
  check_oracle_inputs(inst, path, kKrylovOracleMaxSites);
  const int n = inst.n();
  ExactGround result;
  result.state.n = n;
  if (n <= kDenseOracleMaxSites) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense_hamiltonian(inst, path, point));
    result.energy = eig.eigenvalues()[0];
    result.state.amplitudes = eig.eigenvectors().col(0);
    // Below s = 1 the ground state is unique and flip-even, but its odd
    // partner can be degenerate to machine precision. Pick the cluster vector
    // with the largest even part.
    if (point.value() < 1.0) {
      const double window = 1e-9 * std::max(1.0, std::abs(result.energy));
      double best = -1.0;
      for (Eigen::Index k = 0; k < eig.eigenvalues().size() && eig.eigenvalues()[k] - result.energy <= window; ++k) {
        Eigen::VectorXd even = flip_even_part(eig.eigenvectors().col(k));
        if (even.norm() > best) {
          best = even.norm();
          result.state.amplitudes = std::move(even);
        }
      }
    }
  } else {
    const auto dim = static_cast<Eigen::Index>(basis_size(n));
    // The uniform state overlaps the non-negative ground state of this
    // stoquastic Hamiltonian.
    Eigen::VectorXd start = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    // A diagonal cache keeps each product O(n 2^n).
    const Eigen::VectorXd diag = ising_diagonal(inst, path, point.value());
    const double field = -(1.0 - point.value()) * 0.5;
    auto apply = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
      out = diag.cwiseProduct(in);
      if (field == 0.0) return;
      for (int slot = 0; slot < n; ++slot) {
        const std::uint64_t mask = std::uint64_t{1} << (n - 1 - slot);
        for (Eigen::Index x = 0; x < dim; ++x) {
          out[x] += field * in[static_cast<Eigen::Index>(static_cast<std::uint64_t>(x) ^ mask)];
        }
      }
    };
    auto pair = lowest_eigenpair(apply, start, {1e-13, 20000, 80});
    if (!pair.converged) throw NumericalError("exact Krylov oracle did not converge");
    result.energy = pair.value;
    result.state.amplitudes = std::move(pair.vector);
    if (point.value() < 1.0) result.state.amplitudes = flip_even_part(result.state.amplitudes);
  }
  result.state.amplitudes.normalize();
  if (result.state.amplitudes.sum() < 0.0) result.state.amplitudes = -result.state.amplitudes;
  return result;
}

std::pair<SpinConfiguration, double> brute_force_minimum(const GraphInstance& inst) {
  const int n = inst.n();
  if (n > kBruteForceMaxSites) {
    throw CapacityError(fmt::format("brute force limited to {} spins, got {}", kBruteForceMaxSites, n));
  }
  // Dense coupling lists for the incremental update.
  std::vector<std::vector<std::pair<int, double>>> couplings(static_cast<std::size_t>(n));
  for (const auto& e : inst.edges()) {
    couplings[static_cast<std::size_t>(e.i)].emplace_back(e.j, e.coupling);
    couplings[static_cast<std::size_t>(e.j)].emplace_back(e.i, e.coupling);
  }
  std::vector<int> spins(static_cast<std::size_t>(n), 1);
  double energy = classical_energy(inst, SpinConfiguration(spins));

  // Bit i of a key is set when spin i is down; spin 0 is the most
  // significant position so integer order matches the tie rule.
  auto key_of = [n](const std::vector<int>& cfg) {
    std::uint64_t key = 0;
    for (int i = 0; i < n; ++i) key = (key << 1) | (cfg[static_cast<std::size_t>(i)] < 0 ? 1U : 0U);
    return key;
  };

  double scale = 1.0;
  for (const auto& e : inst.edges()) scale += std::abs(e.coupling);
  const double tie_tol = 1e-12 * scale;

  std::vector<int> best = spins;
  double best_energy = energy;
  std::uint64_t best_key = key_of(spins);

  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  std::uint64_t current_key = best_key;
  for (std::uint64_t step = 1; step < count; ++step) {
    // Gray code: flip spin 1 + (index of lowest set bit of step).
    int bit = 0;
    while (((step >> bit) & 1U) == 0) ++bit;
    const int flip = 1 + bit;
    double field = 0.0;
    for (const auto& [j, coupling] : couplings[static_cast<std::size_t>(flip)]) {
      field += coupling * spins[static_cast<std::size_t>(j)];
    }
    energy += 2.0 * spins[static_cast<std::size_t>(flip)] * field;
    spins[static_cast<std::size_t>(flip)] = -spins[static_cast<std::size_t>(flip)];
    current_key ^= std::uint64_t{1} << (n - 1 - flip);

    if (energy < best_energy - tie_tol || (energy <= best_energy + tie_tol && current_key < best_key)) {
      best = spins;
      best_energy = std::min(energy, best_energy);
      best_key = current_key;
    }
  }
  SpinConfiguration config(std::move(best));
  const double exact = classical_energy(inst, config);
  return {std::move(config), exact};
}

EntanglementSpectrum exact_cut_spectrum(const StateVector& v, int cut) {
  if (cut < 1 || cut >= v.n) throw IndexError(fmt::format("cut {} out of range for {} sites", cut, v.n));
  if (v.amplitudes.size() != static_cast<Eigen::Index>(basis_size(v.n))) {
    throw DimensionError("statevector length does not match its site count");
  }
  const auto right = static_cast<Eigen::Index>(basis_size(v.n - cut));
  const auto left = static_cast<Eigen::Index>(basis_size(cut));
  // Column-major map: column index is the left (high) part of the basis index.
  Eigen::Map<const Eigen::MatrixXd> reshaped(v.amplitudes.data(), right, left);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(reshaped);
  return EntanglementSpectrum::from_singular_values(svd.singularValues(), cut);
}

double exact_energy(const GraphInstance& inst, const SitePath& path, SchedulePoint s, const StateVector& v) {
  Eigen::VectorXd hv;
  apply_hamiltonian(inst, path, s, v.amplitudes, hv);
  return v.amplitudes.dot(hv) / v.amplitudes.squaredNorm();
}

}  // namespace qwa
