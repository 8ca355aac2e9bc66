#include "qwa/lanczos.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "qwa/errors.hpp"
#include "qwa/rng.hpp"

namespace qwa {

Eigenpair lowest_eigenpair(const LinearMap& apply, Eigen::VectorXd start, const LanczosOptions& opts) {
  const Eigen::Index dim = start.size();
  if (dim == 0) throw DimensionError("eigensolver called on an empty space");
  double start_norm = start.norm();
  if (!std::isfinite(start_norm)) throw NumericalError("non-finite eigensolver start vector");
  if (start_norm == 0.0) {
    Xoshiro256 rng(0x5eed);
    for (Eigen::Index i = 0; i < dim; ++i) start[i] = rng.uniform() - 0.5;
    start_norm = start.norm();
  }
  start /= start_norm;

  const int krylov = static_cast<int>(std::min<Eigen::Index>(std::max(opts.krylov_dim, 2), dim));
  Eigenpair result;
  result.vector = std::move(start);

  Eigen::MatrixXd basis(dim, krylov);
  Eigen::VectorXd w(dim);
  std::vector<double> alpha;
  std::vector<double> beta;

  while (true) {
    basis.col(0) = result.vector;
    alpha.clear();
    beta.clear();
    Eigen::VectorXd ritz;
    double theta = 0.0;
    int used = 0;
    bool exhausted = false;
    for (int j = 0; j < krylov; ++j) {
      apply(basis.col(j), w);
      ++result.matvecs;
      const double a = basis.col(j).dot(w);
      alpha.push_back(a);
      // Full reorthogonalization, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
      }
      const double b = w.norm();
      if (!std::isfinite(a) || !std::isfinite(b)) {
        throw NumericalError(fmt::format("non-finite Lanczos coefficients (alpha={}, beta={})", a, b));
      }
      used = j + 1;

      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(used, used);
      for (int i = 0; i < used; ++i) tri(i, i) = alpha[static_cast<std::size_t>(i)];
      for (int i = 0; i + 1 < used; ++i) {
        tri(i, i + 1) = beta[static_cast<std::size_t>(i)];
        tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
      theta = small.eigenvalues()[0];
      ritz = small.eigenvectors().col(0);
      result.residual = b * std::abs(ritz[used - 1]);

      const double scale = std::max(1.0, std::abs(theta));
      exhausted = b <= 1e-14 * scale || used == dim;
      if (result.residual <= opts.tol * scale || exhausted || result.matvecs >= opts.max_matvec) break;
      beta.push_back(b);
      if (j + 1 < krylov) basis.col(j + 1) = w / b;
    }

    result.value = theta;
    result.vector = basis.leftCols(used) * ritz;
    result.vector.normalize();
    const double scale = std::max(1.0, std::abs(theta));
    result.converged = result.residual <= opts.tol * scale || exhausted;
    if (result.converged || result.matvecs >= opts.max_matvec) return result;
  }
}

}  // namespace qwa
