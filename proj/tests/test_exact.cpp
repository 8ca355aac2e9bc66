#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qwa/errors.hpp"
#include "qwa/exact.hpp"

using namespace qwa;

namespace {

// Naive enumeration over all 2^n configurations.
double enumerate_minimum(const GraphInstance& inst) {
  double best = 1e300;
  for (int x = 0; x < (1 << inst.n()); ++x) {
    std::vector<int> spins;
    for (int i = 0; i < inst.n(); ++i) spins.push_back(((x >> i) & 1) ? -1 : 1);
    best = std::min(best, classical_energy(inst, SpinConfiguration(spins)));
  }
  return best;
}

}  // namespace

TEST(ExactGround, SingleSpinInField) {
  const GraphInstance one(1, {});
  for (double s : {0.0, 0.25, 0.9}) {
    EXPECT_NEAR(exact_ground(one, identity_path(1), SchedulePoint(s)).energy, -(1.0 - s) / 2.0, 1e-14);
  }
}

TEST(ExactGround, TwoSpinsFieldOnly) {
  const GraphInstance pair(2, {{0, 1, 1.0}});
  const auto gs = exact_ground(pair, identity_path(2), SchedulePoint(0.0));
  EXPECT_NEAR(gs.energy, -1.0, 1e-14);
  EXPECT_NEAR(std::abs(gs.state.amplitudes.dot(Eigen::Vector4d::Constant(0.5))), 1.0, 1e-12);
}

TEST(ExactGround, TwoSpinsMatchesExplicitMatrix) {
  // (1-s)(-Sx x I - I x Sx) + s(-Sz x Sz) written out entry by entry.
  const double s = 0.5;
  const double f = -(1.0 - s) * 0.5;
  Eigen::Matrix4d h;
  h << -s / 4, f, f, 0,
       f, s / 4, 0, f,
       f, 0, s / 4, f,
       0, f, f, -s / 4;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(h);
  const GraphInstance pair(2, {{0, 1, 1.0}});
  EXPECT_NEAR(exact_ground(pair, identity_path(2), SchedulePoint(s)).energy, eig.eigenvalues()[0], 1e-14);
}

TEST(ExactGround, KrylovAgreesWithDense) {
  const auto inst = generate_instance({GraphKind::chain(), 10, CouplingDist::gaussian, 6});
  const auto path = identity_path(10);
  const SchedulePoint s(0.6);
  const auto gs = exact_ground(inst, path, s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(dense_hamiltonian(inst, path, s));
  EXPECT_NEAR(gs.energy, dense.eigenvalues()[0], 1e-10);
  EXPECT_NEAR(exact_energy(inst, path, s, gs.state), gs.energy, 1e-10);
  EXPECT_NEAR(gs.state.amplitudes.norm(), 1.0, 1e-12);
}

TEST(ExactGround, SelfConsistentEnergy) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto inst = generate_instance({GraphKind::regular(3), 8, CouplingDist::gaussian, seed});
    const auto path = heuristic_path(inst);
    const SchedulePoint s(0.2 + 0.2 * static_cast<double>(seed));
    const auto gs = exact_ground(inst, path, s);
    EXPECT_NEAR(exact_energy(inst, path, s, gs.state), gs.energy, 1e-10);
  }
}

TEST(ExactGround, CapacityLimit) {
  const auto inst = generate_instance({GraphKind::chain(), 15, CouplingDist::pm1, 0});
  EXPECT_THROW(exact_ground(inst, identity_path(15), SchedulePoint(0.5)), CapacityError);
}

TEST(BruteForce, Examples) {
  const auto [pair_cfg, pair_e] = brute_force_minimum(GraphInstance(2, {{0, 1, 1.0}}));
  EXPECT_EQ(pair_cfg, SpinConfiguration({1, 1}));
  EXPECT_DOUBLE_EQ(pair_e, -1.0);

  const GraphInstance triangle(3, {{0, 1, -1.0}, {1, 2, -1.0}, {0, 2, -1.0}});
  EXPECT_DOUBLE_EQ(enumerate_minimum(triangle), -1.0);
  const auto [tri_cfg, tri_e] = brute_force_minimum(triangle);
  EXPECT_DOUBLE_EQ(tri_e, -1.0);
  EXPECT_EQ(tri_cfg[0], 1);
  // Lexicographically first frustrated minimum with +1 before -1.
  EXPECT_EQ(tri_cfg, SpinConfiguration({1, 1, -1}));

  const auto grid = generate_instance({GraphKind::grid(2, 2), 0, CouplingDist::ferro, 0});
  EXPECT_DOUBLE_EQ(brute_force_minimum(grid).second, -4.0);
}

TEST(BruteForce, MatchesNaiveEnumeration) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate_instance({GraphKind::regular(3), 10, seed % 2 ? CouplingDist::pm1 : CouplingDist::gaussian, seed});
    const auto [cfg, energy] = brute_force_minimum(inst);
    EXPECT_NEAR(energy, enumerate_minimum(inst), 1e-12);
    EXPECT_DOUBLE_EQ(classical_energy(inst, cfg), energy);
    EXPECT_DOUBLE_EQ(classical_energy(inst, cfg.flipped()), energy);
  }
}

TEST(BruteForce, CapacityLimit) {
  const auto inst = generate_instance({GraphKind::chain(), 25, CouplingDist::pm1, 0});
  EXPECT_THROW(brute_force_minimum(inst), CapacityError);
}

TEST(ExactCutSpectrum, Examples) {
  StateVector product{3, Eigen::VectorXd::Constant(8, 1.0 / std::sqrt(8.0))};
  for (int cut = 1; cut < 3; ++cut) {
    const auto spec = exact_cut_spectrum(product, cut);
    ASSERT_EQ(spec.size(), 1);
    EXPECT_NEAR(spec[0], 1.0, 1e-14);
  }
  StateVector bell{2, Eigen::Vector4d(1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0))};
  const auto spec = exact_cut_spectrum(bell, 1);
  ASSERT_EQ(spec.size(), 2);
  EXPECT_NEAR(spec[0], 0.5, 1e-14);
  EXPECT_NEAR(spec[1], 0.5, 1e-14);
  EXPECT_THROW(exact_cut_spectrum(bell, 2), IndexError);
}

TEST(ExactCutSpectrum, SumsToOneOnGroundStates) {
  const auto inst = generate_instance({GraphKind::chain(), 8, CouplingDist::ferro, 0});
  const auto gs = exact_ground(inst, identity_path(8), SchedulePoint(0.6));
  for (int cut = 1; cut < 8; ++cut) {
    const auto spec = exact_cut_spectrum(gs.state, cut);
    double total = 0.0;
    for (double p : spec.probs()) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(ExactGround, NearDegenerateStateIsFlipEven) {
  for (int n : {8, 10}) {
    const auto inst = generate_instance({GraphKind::chain(), n, CouplingDist::ferro, 0});
    const auto gs = exact_ground(inst, identity_path(n), SchedulePoint(0.999));
    const Eigen::VectorXd& v = gs.state.amplitudes;
    EXPECT_NEAR((v - v.reverse()).norm(), 0.0, 1e-10);
    EXPECT_GT(v.minCoeff(), -1e-12);
  }
}
