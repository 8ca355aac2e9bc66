#pragma once

#include <map>
#include <span>

#include "qwa/entanglement.hpp"

namespace qwa {

/// -sum p_i ln p_i in nats.
double von_neumann(const EntanglementSpectrum& spec);

struct IndexMoments {
  double mean = 1.0;      // <i>, indices counted from 1
  double variance = 0.0;  // <i^2> - <i>^2
};

IndexMoments index_variance(const EntanglementSpectrum& spec);

/// Smallest m with sum_{i > m} p_i < epsilon (strict). Returns the spectrum
/// size when no shorter prefix qualifies.
int m_eff(const EntanglementSpectrum& spec, double epsilon);

/// Same rule on a raw descending probability list; used by truncation.
int m_eff(std::span<const double> probs, double epsilon);

/// ceil(<i> + sigma / sqrt(epsilon)), the Chebyshev guarantee on m_eff.
int chebyshev_m(const EntanglementSpectrum& spec, double epsilon);

/// sum_{i > m} p_i.
double tail_weight(const EntanglementSpectrum& spec, int m);

struct SpectrumReport {
  double vn_entropy = 0.0;
  double index_mean = 1.0;
  double index_variance = 0.0;
  std::map<double, int> m_eff;
  std::map<double, int> chebyshev_m;
};

SpectrumReport spectrum_report(const EntanglementSpectrum& spec, std::span<const double> epsilons);

}  // namespace qwa
