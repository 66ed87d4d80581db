#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gridslam {

enum class CellState : std::uint8_t { kUnknown = 0, kFree = 1, kObstacle = 2 };

// Integer cell index. Row 0 is the southernmost row; rows grow with world y.
struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

// Wraps an angle into [-pi, pi).
double normalize_angle(double theta);

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, kept in [-pi, pi)

  Pose() = default;
  Pose(double x_, double y_, double theta_)
      : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Point2 position() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

// Three-state raster. Cell (r, c) covers the world square
// [origin.x + c*res, origin.x + (c+1)*res) x [origin.y + r*res, ...).
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, Point2 origin = {},
                CellState fill = CellState::kUnknown);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Point2 origin() const { return origin_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  bool contains(Cell c) const {
    return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
  }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_at_index(std::size_t i) const {
    return {static_cast<int>(i / static_cast<std::size_t>(width_)),
            static_cast<int>(i % static_cast<std::size_t>(width_))};
  }

  CellState operator[](Cell c) const { return cells_[index(c)]; }
  CellState& operator[](Cell c) { return cells_[index(c)]; }

  // Bounds-checked read; cells outside the raster read as `outside`.
  CellState get(Cell c, CellState outside = CellState::kUnknown) const {
    return contains(c) ? cells_[index(c)] : outside;
  }
  void set(Cell c, CellState s) { cells_[index(c)] = s; }

  std::span<const CellState> cells() const { return cells_; }
  std::span<CellState> cells() { return cells_; }

  void fill(CellState s);
  std::size_t count(CellState s) const;

  // Cell containing a world point (may be outside the raster).
  Cell world_to_cell(Point2 p) const;
  Point2 cell_center(Cell c) const;
  // Continuous grid coordinates: u along columns, v along rows, in cells.
  Point2 world_to_grid(Point2 p) const;

  // Copy of the rectangle starting at `first` with the given size; cells
  // outside this grid become `outside`.
  OccupancyGrid sub_grid(Cell first, int rows, int cols,
                         CellState outside = CellState::kUnknown) const;

  // Returns a grid extended so that rows [row_min, row_max] and columns
  // [col_min, col_max] (in this grid's indexing) exist. New cells take
  // `fill`. Returns the offset of the old cell (0,0) in the new grid.
  Cell grow_to_include(int row_min, int row_max, int col_min, int col_max,
                       CellState fill = CellState::kUnknown);

  bool operator==(const OccupancyGrid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  Point2 origin_{};
  std::vector<CellState> cells_;
};

}  // namespace gridslam
