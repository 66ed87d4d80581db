#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gridslam/floorplan.hpp"
#include "gridslam/grid.hpp"
#include "gridslam/rng.hpp"

namespace gridslam::testing {

// Builds a grid from text rows, first row = north. '#' Obstacle, '.' Free,
// '?' Unknown.
inline OccupancyGrid grid_from_ascii(const std::vector<std::string>& rows, double res = 0.1,
                                     Point2 origin = {}) {
  const int h = static_cast<int>(rows.size());
  const int w = h == 0 ? 0 : static_cast<int>(rows.front().size());
  OccupancyGrid g(w, h, res, origin);
  for (int i = 0; i < h; ++i) {
    for (int c = 0; c < w; ++c) {
      const char ch = rows[i][c];
      g.set({h - 1 - i, c}, ch == '#'   ? CellState::kObstacle
                            : ch == '.' ? CellState::kFree
                                        : CellState::kUnknown);
    }
  }
  return g;
}

inline std::vector<bool> free_mask(const OccupancyGrid& g) {
  std::vector<bool> m(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) m[i] = g.cells()[i] == CellState::kFree;
  return m;
}

// Closed polygon from a vertex ring.
inline FloorPlan polygon_plan(const std::vector<Point2>& ring, std::string id = "poly") {
  FloorPlan p;
  p.id = std::move(id);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    p.segments.push_back({ring[i], ring[(i + 1) % ring.size()]});
  }
  return p;
}

// Star-shaped polygon with `n` vertices at random radii around the origin.
inline FloorPlan random_star_plan(Rng& rng, int n, double r_min, double r_max) {
  std::vector<Point2> ring;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * 3.141592653589793 * (i + rng.uniform(0.1, 0.9)) / n;
    const double r = rng.uniform(r_min, r_max);
    ring.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return polygon_plan(ring, "star");
}

}  // namespace gridslam::testing
