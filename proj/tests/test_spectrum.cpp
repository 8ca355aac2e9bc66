#include <gtest/gtest.h>

#include <cmath>

#include "qwa/errors.hpp"
#include "qwa/spectrum.hpp"

using namespace qwa;

namespace {

EntanglementSpectrum make(std::vector<double> w) { return EntanglementSpectrum(w, 1); }

EntanglementSpectrum uniform(int m) { return make(std::vector<double>(static_cast<std::size_t>(m), 1.0)); }

std::vector<EntanglementSpectrum> synthetic_family() {
  std::vector<EntanglementSpectrum> out;
  for (double r : {0.3, 0.5, 0.9}) {
    std::vector<double> w;
    for (int i = 1; i <= 200; ++i) w.push_back(std::pow(r, i));
    out.push_back(make(w));
  }
  for (double a : {1.5, 2.0, 3.0}) {
    std::vector<double> w;
    for (int i = 1; i <= 500; ++i) w.push_back(std::pow(i, -a));
    out.push_back(make(w));
  }
  for (int m = 2; m <= 64; ++m) out.push_back(uniform(m));
  return out;
}

}  // namespace

TEST(Spectrum, NormalizesSortsAndFloors) {
  const auto spec = make({1.0, 3.0, 1e-20, 0.0});
  ASSERT_EQ(spec.size(), 2);
  EXPECT_DOUBLE_EQ(spec[0], 0.75);
  EXPECT_DOUBLE_EQ(spec[1], 0.25);
  EXPECT_THROW(make({0.0, 0.0}), InvalidInputError);
  EXPECT_THROW(make({}), InvalidInputError);
}

TEST(VonNeumann, Examples) {
  EXPECT_DOUBLE_EQ(von_neumann(make({1.0})), 0.0);
  EXPECT_NEAR(von_neumann(make({0.5, 0.5})), 0.693147180559945, 1e-14);
  EXPECT_NEAR(von_neumann(uniform(4)), std::log(4.0), 1e-14);
}

TEST(IndexVariance, Examples) {
  const auto point = index_variance(make({1.0}));
  EXPECT_DOUBLE_EQ(point.mean, 1.0);
  EXPECT_DOUBLE_EQ(point.variance, 0.0);
  const auto flat = index_variance(uniform(4));
  EXPECT_NEAR(flat.mean, 2.5, 1e-14);
  EXPECT_NEAR(flat.variance, (16.0 - 1.0) / 12.0, 1e-14);
  const auto three = index_variance(make({0.5, 0.25, 0.25}));
  EXPECT_NEAR(three.mean, 1.75, 1e-14);
  EXPECT_NEAR(three.variance, 0.6875, 1e-14);
}

TEST(MEff, Examples) {
  EXPECT_EQ(m_eff(make({1.0}), 0.3), 1);
  EXPECT_EQ(m_eff(make({0.5, 0.25, 0.125, 0.125}), 0.2), 3);
  // Tail after three is exactly 0.25: strict inequality keeps all four.
  EXPECT_EQ(m_eff(uniform(4), 0.25), 4);
  EXPECT_THROW(m_eff(uniform(4), 0.0), RangeError);
}

TEST(ChebyshevM, Examples) {
  EXPECT_EQ(chebyshev_m(make({1.0}), 0.01), 1);
  EXPECT_EQ(chebyshev_m(uniform(4), 0.25), 5);
  EXPECT_GE(chebyshev_m(uniform(4), 0.25), m_eff(uniform(4), 0.25));

  // Oracle for {0.5, 0.25, 0.125, 0.125}: <i> = 1.875, <i^2> = 4.625,
  // sigma^2 = 1.109375, bound = 1.875 + 1.05327/0.44721 = 4.2302 -> 5.
  const auto spec = make({0.5, 0.25, 0.125, 0.125});
  const auto moments = index_variance(spec);
  EXPECT_NEAR(moments.mean, 1.875, 1e-14);
  EXPECT_NEAR(moments.variance, 1.109375, 1e-14);
  EXPECT_EQ(chebyshev_m(spec, 0.2), 5);
  EXPECT_GE(chebyshev_m(spec, 0.2), m_eff(spec, 0.2));
}

TEST(SpectrumProperties, ChebyshevSoundOnSyntheticFamilies) {
  for (const auto& spec : synthetic_family()) {
    int prev_eff = 1 << 30;
    int prev_cheb = 1 << 30;
    for (double eps : {1e-3, 1e-2, 1e-1}) {
      const int cheb = chebyshev_m(spec, eps);
      EXPECT_LT(tail_weight(spec, cheb), eps);
      EXPECT_LE(m_eff(spec, eps), cheb);
      EXPECT_LT(tail_weight(spec, m_eff(spec, eps)), eps);
    }
    // Monotone: larger tolerance never needs more states.
    for (double eps : {1e-4, 1e-3, 1e-2, 1e-1, 0.5}) {
      const int eff = m_eff(spec, eps);
      const int cheb = chebyshev_m(spec, eps);
      if (eps > 1e-4) {
        EXPECT_LE(eff, prev_eff);
        EXPECT_LE(cheb, prev_cheb);
      }
      prev_eff = eff;
      prev_cheb = cheb;
    }
    EXPECT_LE(von_neumann(spec), std::log(spec.size()) + 1e-12);
    EXPECT_GE(index_variance(spec).mean, 1.0);
  }
}

TEST(SpectrumReport, CollectsAllMetrics) {
  const std::vector<double> eps{0.1, 0.01};
  const auto report = spectrum_report(uniform(4), eps);
  EXPECT_NEAR(report.vn_entropy, std::log(4.0), 1e-14);
  EXPECT_NEAR(report.index_mean, 2.5, 1e-14);
  EXPECT_EQ(report.m_eff.at(0.1), 4);
  EXPECT_GE(report.chebyshev_m.at(0.01), report.m_eff.at(0.01));
}
