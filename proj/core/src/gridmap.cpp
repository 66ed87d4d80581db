#include "gridslam/gridmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gridslam/error.hpp"

namespace gridslam {
namespace {

double point_segment_distance(Point2 p, const Segment& s) {
  const double vx = s.b.x - s.a.x;
  const double vy = s.b.y - s.a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - s.a.x) * vx + (p.y - s.a.y) * vy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (s.a.x + t * vx), p.y - (s.a.y + t * vy));
}

// Number of cells needed to span `extent` meters; tolerates the rounding
// in extent/resolution so that 1.0 / 0.1 gives 10, not 11.
int cells_for(double extent, double resolution) {
  return std::max(1, static_cast<int>(std::ceil(extent / resolution - 1e-9)));
}

double free_iou(const OccupancyGrid& a, const OccupancyGrid& b, CellState target) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument("iou: grids must share dimensions");
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  const auto ca = a.cells();
  const auto cb = b.cells();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const bool in_a = ca[i] == target;
    const bool in_b = cb[i] == target;
    inter += (in_a && in_b) ? 1 : 0;
    uni += (in_a || in_b) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

OccupancyGrid rasterize(const FloorPlan& plan, double resolution, double wall_thickness) {
  return rasterize(std::span<const Segment>(plan.segments), resolution, wall_thickness);
}

OccupancyGrid rasterize(std::span<const Segment> segments, double resolution,
                        double wall_thickness) {
  if (segments.empty()) throw InvalidArgument("rasterize: plan has no segments");
  if (!(resolution > 0.0)) throw InvalidArgument("rasterize: resolution must be > 0");
  if (!(wall_thickness > 0.0)) throw InvalidArgument("rasterize: wall thickness must be > 0");
  if (std::all_of(segments.begin(), segments.end(),
                  [](const Segment& s) { return s.length() == 0.0; })) {
    throw InvalidArgument("rasterize: degenerate plan, every segment has zero length");
  }

  double xmin = std::numeric_limits<double>::infinity();
  double ymin = xmin;
  double xmax = -xmin;
  double ymax = -xmin;
  for (const auto& s : segments) {
    xmin = std::min({xmin, s.a.x, s.b.x});
    xmax = std::max({xmax, s.a.x, s.b.x});
    ymin = std::min({ymin, s.a.y, s.b.y});
    ymax = std::max({ymax, s.a.y, s.b.y});
  }
  const int width = cells_for(xmax - xmin, resolution) + 2;
  const int height = cells_for(ymax - ymin, resolution) + 2;
  OccupancyGrid grid(width, height, resolution, {xmin - resolution, ymin - resolution},
                     CellState::kUnknown);

  // Relative slack so that centers exactly half a thickness away are walls
  // regardless of where the plan sits in world coordinates.
  const double half = 0.5 * wall_thickness + 1e-6 * resolution;
  for (const auto& s : segments) {
    const Cell lo = grid.world_to_cell({std::min(s.a.x, s.b.x) - half, std::min(s.a.y, s.b.y) - half});
    const Cell hi = grid.world_to_cell({std::max(s.a.x, s.b.x) + half, std::max(s.a.y, s.b.y) + half});
    for (int r = std::max(0, lo.row); r <= std::min(height - 1, hi.row); ++r) {
      for (int c = std::max(0, lo.col); c <= std::min(width - 1, hi.col); ++c) {
        if (point_segment_distance(grid.cell_center({r, c}), s) <= half) {
          grid.set({r, c}, CellState::kObstacle);
        }
      }
    }
  }

  // Flood the exterior from the border; whatever stays Unknown is interior.
  std::vector<Cell> stack;
  auto seed = [&](Cell c) {
    if (grid[c] == CellState::kUnknown) {
      grid[c] = CellState::kObstacle;
      stack.push_back(c);
    }
  };
  for (int c = 0; c < width; ++c) {
    seed({0, c});
    seed({height - 1, c});
  }
  for (int r = 0; r < height; ++r) {
    seed({r, 0});
    seed({r, width - 1});
  }
  constexpr int kDr[4] = {1, -1, 0, 0};
  constexpr int kDc[4] = {0, 0, 1, -1};
  while (!stack.empty()) {
    const Cell cur = stack.back();
    stack.pop_back();
    for (int k = 0; k < 4; ++k) {
      const Cell n{cur.row + kDr[k], cur.col + kDc[k]};
      if (grid.contains(n)) seed(n);
    }
  }
  for (auto& cell : grid.cells()) {
    if (cell == CellState::kUnknown) cell = CellState::kFree;
  }
  return grid;
}

OccupancyGrid crop_local(const OccupancyGrid& map, const Pose& pose, double side) {
  if (!(side > 0.0)) throw InvalidArgument("crop_local: side must be > 0");
  const double res = map.resolution();
  const int n = std::max(1, static_cast<int>(std::lround(side / res)));
  const double half = 0.5 * n;
  OccupancyGrid out(n, n, res, {-half * res, -half * res}, CellState::kUnknown);
  const double cs = std::cos(pose.theta);
  const double sn = std::sin(pose.theta);
  const Point2 origin = map.origin();
  auto out_cells = out.cells();
  const auto in_cells = map.cells();
  for (int i = 0; i < n; ++i) {
    const double ly = (i + 0.5 - half) * res;
    for (int j = 0; j < n; ++j) {
      const double lx = (j + 0.5 - half) * res;
      const double wx = pose.x + cs * lx - sn * ly;
      const double wy = pose.y + sn * lx + cs * ly;
      const int c = static_cast<int>(std::floor((wx - origin.x) / res));
      const int r = static_cast<int>(std::floor((wy - origin.y) / res));
      if (r < 0 || r >= map.height() || c < 0 || c >= map.width()) continue;
      out_cells[static_cast<std::size_t>(i) * n + j] = in_cells[map.index({r, c})];
    }
  }
  return out;
}

double iou_free(const OccupancyGrid& a, const OccupancyGrid& b) {
  return free_iou(a, b, CellState::kFree);
}

double iou_obstacle(const OccupancyGrid& a, const OccupancyGrid& b) {
  return free_iou(a, b, CellState::kObstacle);
}

}  // namespace gridslam
