#include <gtest/gtest.h>

#include <cmath>

#include "qwa/dmrg.hpp"
#include "qwa/errors.hpp"
#include "qwa/exact.hpp"
#include "qwa/spectrum.hpp"

using namespace qwa;

namespace {

Mps product_state(int n, double up, double down) {
  std::vector<SiteTensor> sites(static_cast<std::size_t>(n),
                                SiteTensor{{Matrix::Constant(1, 1, up), Matrix::Constant(1, 1, down)}});
  Mps psi(std::move(sites));
  psi.canonicalize(0);
  return psi;
}

}  // namespace

TEST(SolveGround, FieldOnlyIsExactlySolvable) {
  Xoshiro256 rng(6);
  const auto inst = generate_instance({GraphKind::chain(), 6, CouplingDist::gaussian, 3});
  std::vector<SiteTensor> sites;
  for (int k = 0; k < 6; ++k) {
    sites.push_back({{Matrix::Constant(1, 1, rng.uniform() + 0.1), Matrix::Constant(1, 1, rng.uniform() - 0.5)}});
  }
  Mps seed(std::move(sites));
  seed.canonicalize(0);
  const auto result = solve_ground(seed, build_hamiltonian(inst, identity_path(6), SchedulePoint(0.0)), {});
  EXPECT_NEAR(result.energy, -3.0, 1e-10);
  EXPECT_GE(overlap(result.psi, product_plus_x(6)), 1.0 - 1e-10);
  EXPECT_TRUE(result.converged);
}

TEST(SolveGround, FerromagneticChainMatchesOracle) {
  const auto inst = generate_instance({GraphKind::chain(), 4, CouplingDist::ferro, 0});
  const auto h = build_hamiltonian(inst, identity_path(4), SchedulePoint(0.5));
  const auto result = solve_ground(product_plus_x(4), h, {});
  EXPECT_NEAR(result.energy, exact_ground(inst, identity_path(4), SchedulePoint(0.5)).energy, 1e-8);
  EXPECT_NEAR(expectation(h, result.psi), result.energy, 1e-8);
}

TEST(SolveGround, ClassicalLimitReadsAlignedSpins) {
  const auto inst = generate_instance({GraphKind::chain(), 4, CouplingDist::ferro, 0});
  const auto result =
      solve_ground(product_state(4, 0.8, 0.6), build_hamiltonian(inst, identity_path(4), SchedulePoint(1.0)), {});
  EXPECT_NEAR(result.energy, -0.75, 1e-10);
  EXPECT_EQ(readout_z(result.psi), SpinConfiguration::all_up(4));
}

TEST(SolveGround, VariationalAndMonotoneOnRandomInstances) {
  Xoshiro256 rng(101);
  DmrgSettings cfg;
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const auto inst = n >= 4 && n % 2 == 0 && trial % 3 == 0
                          ? generate_instance({GraphKind::regular(3), n, CouplingDist::gaussian, static_cast<std::uint64_t>(trial)})
                          : generate_instance({GraphKind::chain(), n, CouplingDist::gaussian, static_cast<std::uint64_t>(trial)});
    const auto path = heuristic_path(inst);
    const SchedulePoint s(0.05 + 0.9 * rng.uniform());
    const auto exact = exact_ground(inst, path, s).energy;
    const auto result = solve_ground(random_mps(n, 2, rng), build_hamiltonian(inst, path, s), cfg);
    EXPECT_GE(result.energy, exact - 1e-9);
    EXPECT_NEAR(result.energy, exact, 1e-7);
    for (std::size_t k = 1; k < result.sweep_energies.size(); ++k) {
      EXPECT_LE(result.sweep_energies[k], result.sweep_energies[k - 1] + 1e-9);
    }
    for (double d : result.bond_discarded) EXPECT_TRUE(d < cfg.epsilon || result.cap_saturated);
    EXPECT_LE(result.max_bond_dim, cfg.m_max);
  }
}

TEST(SolveGround, ExactSeedConvergesQuickly) {
  for (int n : {4, 6, 8, 10}) {
    const auto inst = generate_instance({GraphKind::chain(), n, CouplingDist::ferro, 0});
    for (double s : {0.3, 0.6, 0.9}) {
      const auto gs = exact_ground(inst, identity_path(n), SchedulePoint(s));
      const auto seed = from_statevector(gs.state.amplitudes, n);
      const auto result = solve_ground(seed, build_hamiltonian(inst, identity_path(n), SchedulePoint(s)), {});
      EXPECT_TRUE(result.converged);
      EXPECT_LE(result.sweeps_used, 2) << "n=" << n << " s=" << s;
    }
  }
}

TEST(SolveGround, CapIsReportedAndRespected) {
  const auto inst = generate_instance({GraphKind::regular(3), 10, CouplingDist::gaussian, 1});
  DmrgSettings cfg;
  cfg.m_max = 2;
  cfg.max_sweeps = 4;
  const auto result = solve_ground(product_plus_x(10), build_hamiltonian(inst, identity_path(10), SchedulePoint(0.6)), cfg);
  EXPECT_TRUE(result.cap_saturated);
  EXPECT_LE(result.max_bond_dim, 2);
}

TEST(SolveGround, SingleSite) {
  const GraphInstance one(1, {});
  const auto result = solve_ground(product_plus_x(1), build_hamiltonian(one, identity_path(1), SchedulePoint(0.3)), {});
  EXPECT_NEAR(result.energy, -0.35, 1e-14);
}

TEST(SolveGround, Errors) {
  const auto inst = generate_instance({GraphKind::chain(), 4, CouplingDist::ferro, 0});
  const auto h = build_hamiltonian(inst, identity_path(4), SchedulePoint(0.5));
  EXPECT_THROW(solve_ground(product_plus_x(3), h, {}), DimensionError);
  DmrgSettings bad;
  bad.m_max = 1;
  EXPECT_THROW(solve_ground(product_plus_x(4), h, bad), RangeError);
  bad = {};
  bad.epsilon = 0.0;
  EXPECT_THROW(solve_ground(product_plus_x(4), h, bad), RangeError);
}
