#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "qwa/errors.hpp"
#include "qwa/ordering.hpp"
#include "qwa/rng.hpp"

using namespace qwa;

namespace {

std::vector<int> random_permutation(int n, Xoshiro256& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  for (int k = n - 1; k > 0; --k) std::swap(p[static_cast<std::size_t>(k)], p[rng.below(static_cast<std::uint64_t>(k) + 1)]);
  return p;
}

bool is_permutation_of_range(std::span<const int> order) {
  std::vector<int> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] != static_cast<int>(k)) return false;
  }
  return true;
}

}  // namespace

TEST(IdentityPath, Examples) {
  EXPECT_EQ(identity_path(3).order().size(), 3U);
  EXPECT_EQ(identity_path(3), SitePath({0, 1, 2}));
  EXPECT_EQ(identity_path(1), SitePath({0}));
  const auto chain = generate_instance({GraphKind::chain(), 9, CouplingDist::pm1, 0});
  EXPECT_EQ(bandwidth(chain, identity_path(9)), 1);
  EXPECT_THROW(identity_path(0), InvalidSizeError);
}

TEST(Bandwidth, Examples) {
  const auto grid = generate_instance({GraphKind::grid(2, 2), 0, CouplingDist::pm1, 0});
  EXPECT_EQ(bandwidth(grid, identity_path(4)), 2);
  const GraphInstance pair(2, {{0, 1, 1.0}});
  EXPECT_EQ(bandwidth(pair, SitePath({1, 0})), 1);
  EXPECT_EQ(bandwidth(pair, identity_path(2)), 1);
}

TEST(SitePath, RejectsNonPermutations) {
  EXPECT_THROW(SitePath({0, 0, 1}), InvalidInputError);
  EXPECT_THROW(SitePath({0, 3, 1}), InvalidInputError);
  EXPECT_THROW(parse_path("0,,1"), InvalidInputError);
  EXPECT_EQ(parse_path("2, 0,1"), SitePath({2, 0, 1}));
}

TEST(HeuristicPath, ChainStaysIdentity) {
  const auto chain = generate_instance({GraphKind::chain(), 12, CouplingDist::gaussian, 3});
  EXPECT_EQ(heuristic_path(chain), identity_path(12));
}

TEST(HeuristicPath, SmallGridIsBandwidthOptimal) {
  // Oracle: the minimum bandwidth over all 720 orderings of a 2x3 grid.
  const auto grid = generate_instance({GraphKind::grid(2, 3), 0, CouplingDist::pm1, 0});
  std::vector<int> perm{0, 1, 2, 3, 4, 5};
  int optimum = 100;
  int count = 0;
  do {
    optimum = std::min(optimum, bandwidth(grid, SitePath(perm)));
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  ASSERT_EQ(count, 720);
  EXPECT_EQ(optimum, 2);
  EXPECT_EQ(bandwidth(grid, heuristic_path(grid)), optimum);
}

TEST(HeuristicPath, NeverWorseThanIdentityOnGrids) {
  for (int w = 1; w <= 5; ++w) {
    for (int h = 2; h <= 7; ++h) {
      const auto grid = generate_instance({GraphKind::grid(w, h), 0, CouplingDist::pm1, 0});
      EXPECT_LE(bandwidth(grid, heuristic_path(grid)), bandwidth(grid, identity_path(grid.n()))) << w << "x" << h;
    }
  }
}

TEST(HeuristicPath, DeterministicAndAlwaysAPermutation) {
  Xoshiro256 rng(1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate_instance({GraphKind::regular(3), 16, CouplingDist::gaussian, seed});
    const auto a = heuristic_path(inst);
    EXPECT_EQ(a, heuristic_path(inst));
    EXPECT_TRUE(is_permutation_of_range(a.order()));
    const auto scrambled = relabel(inst, random_permutation(16, rng));
    EXPECT_TRUE(is_permutation_of_range(heuristic_path(scrambled).order()));
  }
}

TEST(HeuristicPath, DisconnectedComponentsAreContiguous) {
  const auto a = generate_instance({GraphKind::chain(), 4, CouplingDist::pm1, 0});
  const auto b = generate_instance({GraphKind::chain(), 3, CouplingDist::pm1, 0});
  Xoshiro256 rng(2);
  const auto inst = relabel(disjoint_union(a, b), random_permutation(7, rng));
  const auto path = heuristic_path(inst);
  EXPECT_EQ(bandwidth(inst, path), 1);
}

TEST(HeuristicPath, RelabelingKeepsBandwidthOnPathLikeGraphs) {
  Xoshiro256 rng(7);
  // Chains, rings and ladders have label-independent layerings.
  std::vector<GraphInstance> cases{generate_instance({GraphKind::chain(), 10, CouplingDist::pm1, 0})};
  std::vector<Edge> ring;
  for (int i = 0; i < 9; ++i) ring.push_back({i, (i + 1) % 9, 1.0});
  cases.emplace_back(9, ring);
  cases.push_back(generate_instance({GraphKind::grid(2, 6), 0, CouplingDist::pm1, 0}));
  for (const auto& inst : cases) {
    const int reference = bandwidth(inst, heuristic_path(inst));
    for (int trial = 0; trial < 10; ++trial) {
      const auto relabeled = relabel(inst, random_permutation(inst.n(), rng));
      EXPECT_EQ(bandwidth(relabeled, heuristic_path(relabeled)), reference);
    }
  }
}

TEST(Bandwidth, PositiveWhenEdgesExist) {
  Xoshiro256 rng(3);
  const auto inst = generate_instance({GraphKind::regular(3), 12, CouplingDist::pm1, 5});
  for (int trial = 0; trial < 20; ++trial) EXPECT_GE(bandwidth(inst, SitePath(random_permutation(12, rng))), 1);
}
