#include "gridslam/gridmap.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "gridslam/error.hpp"
#include "gridslam/synthetic.hpp"

namespace gridslam {
namespace {

using testing::grid_from_ascii;

bool free_cells_equal(const OccupancyGrid& a, const OccupancyGrid& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a.cells()[i] == CellState::kFree) != (b.cells()[i] == CellState::kFree)) return false;
  }
  return true;
}

FloorPlan unit_square() { return testing::polygon_plan({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, "unit"); }

TEST(RasterizeTest, UnitSquareAtTenCentimeters) {
  const OccupancyGrid g = rasterize(unit_square(), 0.1, 0.1);
  EXPECT_EQ(g.width(), 12);
  EXPECT_EQ(g.height(), 12);
  EXPECT_NEAR(g.origin().x, -0.1, 1e-12);
  EXPECT_NEAR(g.origin().y, -0.1, 1e-12);
  // Cell centers at 0.05 from a wall sit exactly on the half-thickness and
  // count as wall, so the free block is the inner 8x8.
  EXPECT_EQ(g.count(CellState::kFree), 64u);
  for (int r = 0; r < 12; ++r) {
    for (int c = 0; c < 12; ++c) {
      const bool inner = r >= 2 && r <= 9 && c >= 2 && c <= 9;
      EXPECT_EQ((g[Cell{r, c}]), inner ? CellState::kFree : CellState::kObstacle) << r << "," << c;
    }
  }
}

TEST(RasterizeTest, HalfResolutionQuadruplesFreeCellsWithinPerimeter) {
  const FloorPlan plan = unit_square();
  const OccupancyGrid coarse = rasterize(plan, 0.1, 0.1);
  const OccupancyGrid fine = rasterize(plan, 0.05, 0.1);
  const auto oracle_coarse = oracle::rasterize_pip(plan, coarse, 0.1);
  const auto oracle_fine = oracle::rasterize_pip(plan, fine, 0.1);
  EXPECT_EQ(coarse.count(CellState::kFree), oracle_coarse.count(CellState::kFree));
  EXPECT_EQ(fine.count(CellState::kFree), oracle_fine.count(CellState::kFree));
  const double ratio_gap = std::abs(static_cast<double>(fine.count(CellState::kFree)) -
                                    4.0 * static_cast<double>(coarse.count(CellState::kFree)));
  const double perimeter_cells = 4.0 * 1.0 / 0.05;
  EXPECT_LE(ratio_gap, perimeter_cells);
}

TEST(RasterizeTest, TranslationChangesOnlyOrigin) {
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const FloorPlan plan = testing::random_star_plan(rng, 7, 1.5, 4.0);
    FloorPlan moved = plan;
    for (auto& s : moved.segments) {
      s.a.x += 3.0;
      s.a.y += 3.0;
      s.b.x += 3.0;
      s.b.y += 3.0;
    }
    const OccupancyGrid a = rasterize(plan, 0.1, 0.1);
    const OccupancyGrid b = rasterize(moved, 0.1, 0.1);
    ASSERT_EQ(a.width(), b.width());
    ASSERT_EQ(a.height(), b.height());
    EXPECT_NEAR(b.origin().x - a.origin().x, 3.0, 1e-9);
    EXPECT_NEAR(b.origin().y - a.origin().y, 3.0, 1e-9);
    EXPECT_TRUE(std::equal(a.cells().begin(), a.cells().end(), b.cells().begin()));
  }
}

// Against the point-in-polygon oracle on random closed outlines.
TEST(RasterizeTest, MatchesPointInPolygonOracle) {
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    const FloorPlan plan = testing::random_star_plan(rng, 5 + static_cast<int>(rng.below(6)), 1.0, 5.0);
    const double res = i % 2 == 0 ? 0.1 : 0.05;
    const OccupancyGrid g = rasterize(plan, res, 0.1);
    const OccupancyGrid o = oracle::rasterize_pip(plan, g, 0.1);
    EXPECT_TRUE(std::equal(g.cells().begin(), g.cells().end(), o.cells().begin())) << "plan " << i;
  }
}

TEST(RasterizeTest, GridBoundsPlanPlusOneCell) {
  const FloorPlan plan = testing::polygon_plan({{-2.03, 1.0}, {3.31, 1.0}, {3.31, 4.47}, {-2.03, 4.47}});
  const OccupancyGrid g = rasterize(plan, 0.1, 0.1);
  EXPECT_NEAR(g.origin().x, -2.13, 1e-9);
  EXPECT_NEAR(g.origin().y, 0.9, 1e-9);
  EXPECT_EQ(g.width(), static_cast<int>(std::ceil(5.34 / 0.1 - 1e-9)) + 2);
  EXPECT_EQ(g.height(), static_cast<int>(std::ceil(3.47 / 0.1 - 1e-9)) + 2);
}

TEST(RasterizeTest, RejectsDegenerateInput) {
  FloorPlan dots;
  dots.id = "dots";
  dots.segments = {{{1, 1}, {1, 1}}, {{2, 2}, {2, 2}}};
  EXPECT_THROW(rasterize(dots), InvalidArgument);
  EXPECT_THROW(rasterize(FloorPlan{}), InvalidArgument);
  EXPECT_THROW(rasterize(unit_square(), 0.0, 0.1), InvalidArgument);
}

TEST(CropLocalTest, AllFreeAtIdentityHeading) {
  const OccupancyGrid map(100, 100, 0.1, {}, CellState::kFree);
  const OccupancyGrid crop = crop_local(map, Pose(5.0, 5.0, 0.0), 4.0);
  EXPECT_EQ(crop.width(), 40);
  EXPECT_EQ(crop.height(), 40);
  EXPECT_EQ(crop.count(CellState::kFree), 1600u);
}

TEST(CropLocalTest, NorthWallAppearsAheadWhenFacingNorth) {
  OccupancyGrid map(100, 100, 0.1, {}, CellState::kFree);
  for (int c = 0; c < 100; ++c) map.set({60, c}, CellState::kObstacle);  // y in [6.0, 6.1)
  const OccupancyGrid crop = crop_local(map, Pose(5.0, 5.0, std::numbers::pi / 2), 4.0);
  // Wall 1.0 m ahead: crop columns covering local x in [1.0, 1.1).
  for (int r = 0; r < 40; ++r) {
    for (int c = 0; c < 40; ++c) {
      const bool wall = c == 30;
      EXPECT_EQ((crop[Cell{r, c}]), wall ? CellState::kObstacle : CellState::kFree) << r << "," << c;
    }
  }
}

TEST(CropLocalTest, OutOfBoundsBandIsUnknown) {
  const OccupancyGrid map(100, 100, 0.1, {}, CellState::kFree);
  // 1 m from the west edge, 4 m crop: the western 1 m of the crop is outside.
  const OccupancyGrid crop = crop_local(map, Pose(1.0, 5.0, 0.0), 4.0);
  const std::size_t expected = 40 * (20 - 10);
  EXPECT_EQ(crop.count(CellState::kUnknown), expected);
  for (int r = 0; r < 40; ++r) {
    for (int c = 0; c < 40; ++c) {
      EXPECT_EQ((crop[Cell{r, c}]) == CellState::kUnknown, c < 10);
    }
  }
}

TEST(CropLocalTest, IdentityHeadingInsideEqualsSubRectangle) {
  Rng rng(8);
  OccupancyGrid map(80, 80, 0.1);
  for (auto& cell : map.cells()) cell = static_cast<CellState>(rng.below(3));
  for (int k = 0; k < 20; ++k) {
    const int r0 = static_cast<int>(rng.below(50));
    const int c0 = static_cast<int>(rng.below(50));
    const Pose pose((c0 + 15) * 0.1, (r0 + 15) * 0.1, 0.0);
    const OccupancyGrid crop = crop_local(map, pose, 3.0);
    const OccupancyGrid sub = map.sub_grid({r0, c0}, 30, 30);
    EXPECT_TRUE(std::equal(crop.cells().begin(), crop.cells().end(), sub.cells().begin()));
  }
}

TEST(CropLocalTest, IdempotentAtIdentityPose) {
  Rng rng(21);
  OccupancyGrid map(60, 50, 0.1, {-1.0, 2.0});
  for (auto& cell : map.cells()) cell = static_cast<CellState>(rng.below(3));
  for (int k = 0; k < 20; ++k) {
    const Pose pose(rng.uniform(-1.0, 5.0), rng.uniform(2.0, 7.0), rng.uniform(-3.14, 3.14));
    const OccupancyGrid once = crop_local(map, pose, 4.0);
    const OccupancyGrid twice = crop_local(once, Pose(0.0, 0.0, 0.0), 4.0);
    EXPECT_EQ(once, twice);
  }
}

TEST(IouTest, Examples) {
  const auto a = grid_from_ascii({"....", "....", "....", "...."});
  EXPECT_DOUBLE_EQ(iou_free(a, a), 1.0);

  const auto left = grid_from_ascii({"..##", "..##"});
  const auto right = grid_from_ascii({"##..", "##.."});
  EXPECT_DOUBLE_EQ(iou_free(left, right), 0.0);

  const auto block = grid_from_ascii({"##..#", "##..#", "#####"});
  const auto shifted = grid_from_ascii({"###..", "###..", "#####"});
  // Intersection 2 cells, union 6 cells.
  EXPECT_NEAR(iou_free(block, shifted), 2.0 / 6.0, 1e-12);

  const auto none = grid_from_ascii({"##", "##"});
  EXPECT_DOUBLE_EQ(iou_free(none, none), 1.0);
  EXPECT_THROW(iou_free(a, left), InvalidArgument);
}

TEST(IouTest, SymmetricAndMonotone) {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    OccupancyGrid a(15, 15, 0.1);
    OccupancyGrid b(15, 15, 0.1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a.cells()[i] = static_cast<CellState>(rng.below(3));
      b.cells()[i] = rng.uniform() < 0.8 ? a.cells()[i] : static_cast<CellState>(rng.below(3));
    }
    EXPECT_DOUBLE_EQ(iou_free(a, b), iou_free(b, a));
    EXPECT_DOUBLE_EQ(iou_obstacle(a, b), iou_obstacle(b, a));
    EXPECT_EQ(iou_free(a, b) == 1.0, free_cells_equal(a, b));
    // Flip cells out of the intersection one by one.
    double last = iou_free(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.cells()[i] == CellState::kFree && b.cells()[i] == CellState::kFree) {
        b.cells()[i] = CellState::kObstacle;
        const double now = iou_free(a, b);
        EXPECT_LE(now, last);
        last = now;
      }
    }
  }
}

}  // namespace
}  // namespace gridslam
