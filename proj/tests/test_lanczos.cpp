#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "qwa/errors.hpp"
#include "qwa/lanczos.hpp"
#include "qwa/rng.hpp"

using namespace qwa;

namespace {

Eigen::MatrixXd random_symmetric(int n, Xoshiro256& rng) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n * n; ++i) a.data()[i] = rng.normal();
  return 0.5 * (a + a.transpose());
}

}  // namespace

TEST(Lanczos, MatchesDenseEigensolver) {
  Xoshiro256 rng(2);
  for (int n : {1, 2, 5, 30, 120}) {
    const auto a = random_symmetric(n, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(a);
    Eigen::VectorXd start = Eigen::VectorXd::Ones(n);
    const auto pair = lowest_eigenpair([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = a * x; }, start,
                                       {1e-12, 5000, 30});
    EXPECT_TRUE(pair.converged);
    EXPECT_NEAR(pair.value, dense.eigenvalues()[0], 1e-9) << n;
    EXPECT_LT((a * pair.vector - pair.value * pair.vector).norm(), 1e-8);
  }
}

TEST(Lanczos, ZeroStartVectorIsReplaced) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a.diagonal() << 2.0, -1.0, 4.0;
  const auto pair = lowest_eigenpair([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = a * x; },
                                     Eigen::VectorXd::Zero(3));
  EXPECT_NEAR(pair.value, -1.0, 1e-12);
}

TEST(Lanczos, RejectsNonFiniteOperators) {
  auto bad = [](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = x * std::numeric_limits<double>::quiet_NaN(); };
  EXPECT_THROW(lowest_eigenpair(bad, Eigen::VectorXd::Ones(4)), NumericalError);
  EXPECT_THROW(lowest_eigenpair(bad, Eigen::VectorXd()), DimensionError);
}
