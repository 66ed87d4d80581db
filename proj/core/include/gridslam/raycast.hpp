#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "gridslam/grid.hpp"

namespace gridslam {

// Supercover traversal of the segment `from` -> `to`, given in continuous
// grid coordinates (x = column, y = row, one unit per cell).
//
// Every cell the segment touches is visited in order of entry. When the
// segment passes exactly through a cell corner, both side cells are visited
// before the diagonal one, so a ray can never slip between two cells that
// only share a corner. `visit(Cell, t)` receives the entry parameter
// t in [0, 1] and returns false to stop the walk.
template <typename Visit>
void traverse_supercover(Point2 from, Point2 to, Visit&& visit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kCornerEps = 1e-12;

  int col = static_cast<int>(std::floor(from.x));
  int row = static_cast<int>(std::floor(from.y));
  const int end_col = static_cast<int>(std::floor(to.x));
  const int end_row = static_cast<int>(std::floor(to.y));
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const int step_c = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_r = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const double delta_c = step_c != 0 ? 1.0 / std::abs(dx) : kInf;
  const double delta_r = step_r != 0 ? 1.0 / std::abs(dy) : kInf;
  double next_c = step_c > 0   ? (col + 1 - from.x) / dx
                  : step_c < 0 ? (from.x - col) / -dx
                               : kInf;
  double next_r = step_r > 0   ? (row + 1 - from.y) / dy
                  : step_r < 0 ? (from.y - row) / -dy
                               : kInf;

  if (!visit(Cell{row, col}, 0.0)) return;
  while (row != end_row || col != end_col) {
    const double t = std::min(next_c, next_r);
    if (t > 1.0) break;
    if (std::abs(next_c - next_r) <= kCornerEps) {
      if (!visit(Cell{row, col + step_c}, t)) return;
      if (!visit(Cell{row + step_r, col}, t)) return;
      col += step_c;
      row += step_r;
      next_c += delta_c;
      next_r += delta_r;
    } else if (next_c < next_r) {
      col += step_c;
      next_c += delta_c;
    } else {
      row += step_r;
      next_r += delta_r;
    }
    if (!visit(Cell{row, col}, t)) return;
  }
}

// All cells touched by the segment between two cell centers.
inline std::vector<Cell> supercover_line(Cell a, Cell b) {
  std::vector<Cell> out;
  traverse_supercover(Point2{a.col + 0.5, a.row + 0.5},
                      Point2{b.col + 0.5, b.row + 0.5}, [&](Cell c, double) {
                        out.push_back(c);
                        return true;
                      });
  return out;
}

}  // namespace gridslam
