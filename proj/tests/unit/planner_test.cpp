#include "gridslam/planner.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "gridslam/error.hpp"

namespace gridslam {
namespace {

using testing::grid_from_ascii;

TEST(AstarTest, StartEqualsGoal) {
  const OccupancyGrid g = grid_from_ascii({"...", "...", "..."});
  const Path p = astar(g, {1, 1}, {1, 1});
  EXPECT_EQ(p, (Path{{1, 1}}));
  EXPECT_EQ(path_cost(p), 0.0);
}

TEST(AstarTest, Corridor) {
  const OccupancyGrid g = grid_from_ascii({".........."});
  const Path p = astar(g, {0, 0}, {0, 9});
  ASSERT_EQ(p.size(), 10u);
  EXPECT_DOUBLE_EQ(path_cost(p), 9.0);
}

TEST(AstarTest, DiagonalThroughOneOpenSideAllowed) {
  const OccupancyGrid g = grid_from_ascii({
      "#.",
      "..",
  });
  // South row is row 0: (0,0) to (1,1) passes between (1,0)# and (0,1).
  EXPECT_DOUBLE_EQ(path_cost(astar(g, {0, 0}, {1, 1})), kDiagonalCost);
}

TEST(AstarTest, DiagonalBetweenTwoBlockedRefused) {
  const OccupancyGrid g = grid_from_ascii({
      "#.",
      ".#",
  });
  EXPECT_TRUE(astar(g, {0, 0}, {1, 1}).empty());
}

TEST(AstarTest, NonFreeEndpointsThrow) {
  const OccupancyGrid g = grid_from_ascii({".#?"});
  EXPECT_THROW(astar(g, {0, 1}, {0, 0}), InvalidArgument);
  EXPECT_THROW(astar(g, {0, 0}, {0, 2}), InvalidArgument);
  EXPECT_THROW(astar(g, {0, 0}, {0, 5}), InvalidArgument);
}

TEST(AstarTest, MatchesReferenceOnRandomGrids) {
  Rng rng(99);
  int reachable = 0;
  for (int trial = 0; trial < 50; ++trial) {
    constexpr int kW = 20;
    constexpr int kH = 20;
    std::vector<bool> pass(kW * kH);
    for (std::size_t i = 0; i < pass.size(); ++i) pass[i] = rng.uniform() >= 0.3;
    const Cell s{0, 0};
    const Cell t{kH - 1, kW - 1};
    pass[0] = pass[pass.size() - 1] = true;
    const Path p = astar(pass, kW, kH, s, t);
    const double ref = oracle::ucs_cost(pass, kW, kH, s, t);
    if (ref == oracle::kUnreachable) {
      EXPECT_TRUE(p.empty()) << "trial " << trial;
      continue;
    }
    ++reachable;
    ASSERT_FALSE(p.empty()) << "trial " << trial;
    EXPECT_NEAR(path_cost(p), ref, 1e-9) << "trial " << trial;
    EXPECT_EQ(p.front(), s);
    EXPECT_EQ(p.back(), t);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_TRUE(pass[static_cast<std::size_t>(p[i].row) * kW + p[i].col]);
      if (i == 0) continue;
      const int dr = p[i].row - p[i - 1].row;
      const int dc = p[i].col - p[i - 1].col;
      EXPECT_LE(std::max(std::abs(dr), std::abs(dc)), 1);
      if (dr != 0 && dc != 0) {
        const bool a = pass[static_cast<std::size_t>(p[i - 1].row + dr) * kW + p[i - 1].col];
        const bool b = pass[static_cast<std::size_t>(p[i - 1].row) * kW + p[i - 1].col + dc];
        EXPECT_TRUE(a || b);
      }
    }
  }
  EXPECT_GT(reachable, 10);
}

TEST(AstarTest, ReachabilityAgreesWithBfsOnOpenPairs) {
  // Any 4-connected path is also an 8-connected path under the corner rule.
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<bool> pass(15 * 15);
    for (std::size_t i = 0; i < pass.size(); ++i) pass[i] = rng.uniform() >= 0.4;
    pass[0] = pass[pass.size() - 1] = true;
    const bool bfs = oracle::bfs_reachable(pass, 15, 15, {0, 0}, {14, 14});
    if (bfs) EXPECT_FALSE(astar(pass, 15, 15, {0, 0}, {14, 14}).empty());
  }
}

TEST(RandomPolicyTest, UniformFrequencies) {
  Rng rng(1);
  constexpr int kN = 300000;
  std::array<int, 3> hist{};
  for (int i = 0; i < kN; ++i) ++hist[static_cast<int>(random_policy(rng))];
  for (const int h : hist) EXPECT_NEAR(h / double(kN), 1.0 / 3.0, 0.005);
}

TEST(RandomPolicyTest, SeedsReproducibleAndDistinct) {
  auto draw = [](std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Action> out;
    for (int i = 0; i < 64; ++i) out.push_back(random_policy(rng));
    return out;
  };
  EXPECT_EQ(draw(7), draw(7));
  EXPECT_NE(draw(7), draw(8));
}

TEST(FrontierTest, FindFrontiers) {
  const OccupancyGrid g = grid_from_ascii({
      "????",
      "..#?",
      "....",
  });
  const auto f = find_frontiers(g);
  EXPECT_EQ(f, (std::vector<Cell>{{0, 3}, {1, 0}, {1, 1}}));
}

// 6 x 6 m map, Unknown except for the Free cells selected by `known`.
template <typename Known>
OccupancyGrid partial_map(Known known) {
  OccupancyGrid g(60, 60, 0.1);
  for (int r = 0; r < 60; ++r) {
    for (int c = 0; c < 60; ++c) {
      if (known(r, c)) g.set({r, c}, CellState::kFree);
    }
  }
  return g;
}

TEST(FrontierTest, FrontierAheadDrivesForward) {
  const OccupancyGrid g = partial_map([](int, int c) { return c < 30; });
  Rng rng(1);
  EXPECT_EQ(frontier_policy(g, Pose(1.05, 3.05, 0.0), {}, rng), Action::kForward);
}

TEST(FrontierTest, FrontierToTheLeftTurnsLeft) {
  const OccupancyGrid g = partial_map([](int r, int) { return r < 30; });
  Rng rng(1);
  EXPECT_EQ(frontier_policy(g, Pose(3.05, 1.05, 0.0), {}, rng), Action::kRotateLeft);
}

TEST(FrontierTest, FrontierToTheRightTurnsRight) {
  const OccupancyGrid g = partial_map([](int, int c) { return c < 30; });
  Rng rng(1);
  EXPECT_EQ(frontier_policy(g, Pose(1.05, 3.05, std::numbers::pi / 2), {}, rng),
            Action::kRotateRight);
}

TEST(FrontierTest, FullyKnownMapFallsBackToRandom) {
  OccupancyGrid g(20, 20, 0.1, {}, CellState::kFree);
  Rng a(3);
  Rng b(3);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(frontier_policy(g, Pose(1.0, 1.0, 0.0), {}, a), random_policy(b));
  }
}

TEST(FrontierTest, DeterministicWithoutRandomness) {
  const OccupancyGrid g = partial_map([](int r, int c) { return r < 40 && c < 35; });
  Rng a(1);
  Rng b(2);
  const Pose p(1.0, 1.0, 0.7);
  EXPECT_EQ(frontier_policy(g, p, {}, a), frontier_policy(g, p, {}, b));
}

}  // namespace
}  // namespace gridslam
