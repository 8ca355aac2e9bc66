#pragma once

#include <functional>

#include <Eigen/Core>

namespace qwa {

struct LanczosOptions {
  double tol = 1e-10;     // residual tolerance relative to max(1, |eigenvalue|)
  int max_matvec = 200;
  int krylov_dim = 40;    // vectors per restart cycle
};

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  int matvecs = 0;
  bool converged = false;
};

using LinearMap = std::function<void(const Eigen::VectorXd& in, Eigen::VectorXd& out)>;

/// Lowest eigenpair of a symmetric operator by restarted Lanczos with full
/// reorthogonalization. Each restart begins from the current Ritz vector.
/// A zero start vector is replaced by a fixed pseudo-random one.
/// Throws NumericalError on non-finite recurrence coefficients.
Eigenpair lowest_eigenpair(const LinearMap& apply, Eigen::VectorXd start, const LanczosOptions& opts = {});

}  // namespace qwa
