#include "qwa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "qwa/errors.hpp"

namespace qwa {

EntanglementSpectrum::EntanglementSpectrum(std::span<const double> weights, int cut) : cut_(cut) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidInputError(fmt::format("negative or NaN spectral weight {}", w));
    total += w;
  }
  if (total <= 0.0) throw InvalidInputError("entanglement spectrum has zero total weight");
  for (double w : weights) {
    const double p = w / total;
    if (p >= kProbabilityFloor) probs_.push_back(p);
  }
  std::sort(probs_.begin(), probs_.end(), std::greater<>());
  // Renormalize after the floor so the kept values sum to one.
  double kept = 0.0;
  for (double p : probs_) kept += p;
  for (double& p : probs_) p /= kept;
}

EntanglementSpectrum EntanglementSpectrum::from_singular_values(const Eigen::VectorXd& singular_values,
                                                                int cut) {
  std::vector<double> weights(static_cast<std::size_t>(singular_values.size()));
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    weights[static_cast<std::size_t>(i)] = singular_values[i] * singular_values[i];
  }
  return EntanglementSpectrum(weights, cut);
}

double von_neumann(const EntanglementSpectrum& spec) {
  if (spec.size() == 0) throw InvalidInputError("empty spectrum");
  double s = 0.0;
  for (double p : spec.probs()) s -= p * std::log(p);
  return std::max(s, 0.0);
}

IndexMoments index_variance(const EntanglementSpectrum& spec) {
  if (spec.size() == 0) throw InvalidInputError("empty spectrum");
  double first = 0.0;
  double second = 0.0;
  for (int k = 0; k < spec.size(); ++k) {
    const double i = k + 1.0;
    first += i * spec[k];
    second += i * i * spec[k];
  }
  return {first, std::max(second - first * first, 0.0)};
}

int m_eff(std::span<const double> probs, double epsilon) {
  if (!(epsilon > 0.0)) throw RangeError(fmt::format("tolerance must be positive, got {}", epsilon));
  // Accumulate the tail from the small end so it is exact for short prefixes.
  const int n = static_cast<int>(probs.size());
  double tail = 0.0;
  int m = n;
  for (int k = n - 1; k >= 1; --k) {
    tail += probs[static_cast<std::size_t>(k)];
    if (tail < epsilon) {
      m = k;
    } else {
      break;
    }
  }
  return std::max(m, 1);
}

int m_eff(const EntanglementSpectrum& spec, double epsilon) { return m_eff(spec.probs(), epsilon); }

int chebyshev_m(const EntanglementSpectrum& spec, double epsilon) {
  if (!(epsilon > 0.0)) throw RangeError(fmt::format("tolerance must be positive, got {}", epsilon));
  const auto moments = index_variance(spec);
  return static_cast<int>(std::ceil(moments.mean + std::sqrt(moments.variance) / std::sqrt(epsilon)));
}

double tail_weight(const EntanglementSpectrum& spec, int m) {
  double tail = 0.0;
  for (int k = spec.size() - 1; k >= std::max(m, 0); --k) tail += spec[k];
  return tail;
}

SpectrumReport spectrum_report(const EntanglementSpectrum& spec, std::span<const double> epsilons) {
  SpectrumReport report;
  report.vn_entropy = von_neumann(spec);
  const auto moments = index_variance(spec);
  report.index_mean = moments.mean;
  report.index_variance = moments.variance;
  for (double eps : epsilons) {
    report.m_eff[eps] = m_eff(spec, eps);
    report.chebyshev_m[eps] = chebyshev_m(spec, eps);
  }
  return report;
}

}  // namespace qwa
