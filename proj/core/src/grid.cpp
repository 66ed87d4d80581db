#include "gridslam/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridslam/error.hpp"

namespace gridslam {

double normalize_angle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (theta >= -std::numbers::pi && theta < std::numbers::pi) return theta;
  double wrapped = std::fmod(theta + std::numbers::pi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  wrapped -= std::numbers::pi;
  // fmod can land exactly on +pi after rounding.
  if (wrapped >= std::numbers::pi) wrapped -= kTwoPi;
  return wrapped;
}

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Point2 origin,
                             CellState fill)
    : width_(width), height_(height), resolution_(resolution), origin_(origin) {
  if (width < 0 || height < 0) throw InvalidArgument("grid dimensions must be non-negative");
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw InvalidArgument("grid resolution must be a positive finite number");
  }
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

void OccupancyGrid::fill(CellState s) { std::fill(cells_.begin(), cells_.end(), s); }

std::size_t OccupancyGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

Point2 OccupancyGrid::world_to_grid(Point2 p) const {
  return {(p.x - origin_.x) / resolution_, (p.y - origin_.y) / resolution_};
}

Cell OccupancyGrid::world_to_cell(Point2 p) const {
  const Point2 g = world_to_grid(p);
  return {static_cast<int>(std::floor(g.y)), static_cast<int>(std::floor(g.x))};
}

Point2 OccupancyGrid::cell_center(Cell c) const {
  return {origin_.x + (c.col + 0.5) * resolution_, origin_.y + (c.row + 0.5) * resolution_};
}

OccupancyGrid OccupancyGrid::sub_grid(Cell first, int rows, int cols, CellState outside) const {
  OccupancyGrid out(cols, rows, resolution_,
                    {origin_.x + first.col * resolution_, origin_.y + first.row * resolution_},
                    outside);
  for (int r = 0; r < rows; ++r) {
    const int src_r = first.row + r;
    if (src_r < 0 || src_r >= height_) continue;
    for (int c = 0; c < cols; ++c) {
      const int src_c = first.col + c;
      if (src_c < 0 || src_c >= width_) continue;
      out.cells_[out.index({r, c})] = cells_[index({src_r, src_c})];
    }
  }
  return out;
}

Cell OccupancyGrid::grow_to_include(int row_min, int row_max, int col_min, int col_max,
                                    CellState fill) {
  const int new_r0 = std::min(0, row_min);
  const int new_c0 = std::min(0, col_min);
  const int new_r1 = std::max(height_ - 1, row_max);
  const int new_c1 = std::max(width_ - 1, col_max);
  if (new_r0 == 0 && new_c0 == 0 && new_r1 == height_ - 1 && new_c1 == width_ - 1) {
    return {0, 0};
  }
  *this = sub_grid({new_r0, new_c0}, new_r1 - new_r0 + 1, new_c1 - new_c0 + 1, fill);
  return {-new_r0, -new_c0};
}

}  // namespace gridslam
