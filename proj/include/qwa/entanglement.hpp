#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace qwa {

/// Reduced-density-matrix eigenvalues at one bond: descending, normalized to
/// one, strictly positive (entries below kProbabilityFloor are dropped).
class EntanglementSpectrum {
 public:
  static constexpr double kProbabilityFloor = 1e-16;

  /// From raw non-negative weights (e.g. squared singular values).
  /// Throws InvalidInputError when every weight is zero.
  EntanglementSpectrum(std::span<const double> weights, int cut);

  static EntanglementSpectrum from_singular_values(const Eigen::VectorXd& singular_values, int cut);

  std::span<const double> probs() const { return probs_; }
  int size() const { return static_cast<int>(probs_.size()); }
  int cut() const { return cut_; }
  double operator[](int i) const { return probs_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<double> probs_;
  int cut_;
};

}  // namespace qwa
