#include "gridslam/obstacles.hpp"

#include <algorithm>
#include <cmath>

namespace gridslam {
namespace {

bool shape_is_valid(const ObstacleShape& shape) {
  if (const auto* rect = std::get_if<RectangleShape>(&shape)) {
    return rect->width > 0.0 && rect->height > 0.0 && std::isfinite(rect->width) &&
           std::isfinite(rect->height);
  }
  const auto& circle = std::get<CircleShape>(shape);
  return circle.radius > 0.0 && std::isfinite(circle.radius);
}

double shape_extent(const ObstacleShape& shape) {
  if (const auto* rect = std::get_if<RectangleShape>(&shape)) {
    return 0.5 * std::hypot(rect->width, rect->height);
  }
  return std::get<CircleShape>(shape).radius;
}

class Stamper {
 public:
  Stamper(const OccupancyGrid& ground_truth, const Pose& robot, double robot_radius)
      : base_(ground_truth), grid_(ground_truth), robot_(ground_truth.size(), false) {
    const double clearance = robot_radius + ground_truth.resolution();
    for (const Cell c : footprint_cells(ground_truth, robot.position(), clearance)) {
      if (ground_truth.contains(c)) robot_[ground_truth.index(c)] = true;
    }
  }

  // Inside the map, on floor free space, not on an earlier obstacle.
  bool clear_of_walls(const std::vector<Cell>& cells) const {
    return std::all_of(cells.begin(), cells.end(), [&](Cell c) {
      return base_.get(c, CellState::kObstacle) == CellState::kFree;
    });
  }
  bool fits(const std::vector<Cell>& cells) const {
    return clear_of_walls(cells) && std::all_of(cells.begin(), cells.end(), [&](Cell c) {
             return grid_[c] == CellState::kFree && !robot_[grid_.index(c)];
           });
  }
  void stamp(const std::vector<Cell>& cells) {
    for (const Cell c : cells) grid_.set(c, CellState::kObstacle);
  }
  OccupancyGrid take() { return std::move(grid_); }

 private:
  const OccupancyGrid& base_;
  OccupancyGrid grid_;
  std::vector<bool> robot_;
};

}  // namespace

std::vector<ObstacleShape> ObstacleSpec::default_shapes() {
  return {RectangleShape{0.5, 0.5}, RectangleShape{0.8, 0.4}, CircleShape{0.25}};
}

void ObstacleSpec::validate() const {
  if (count_min < 0 || count_max < count_min) {
    throw InvalidArgument("obstacle count range must satisfy 0 <= min <= max");
  }
  for (const auto& s : shapes) {
    if (!shape_is_valid(s)) throw InvalidArgument("obstacle shape dimensions must be > 0");
  }
  for (const auto& t : trajectories) {
    if (t.empty()) throw InvalidArgument("obstacle trajectories need at least one pose");
  }
  if (max_attempts < 1) throw InvalidArgument("obstacle max_attempts must be >= 1");
}

std::vector<Cell> shape_cells(const OccupancyGrid& grid, const ObstacleShape& shape,
                              Point2 center) {
  const double extent = shape_extent(shape);
  const Cell lo = grid.world_to_cell({center.x - extent, center.y - extent});
  const Cell hi = grid.world_to_cell({center.x + extent, center.y + extent});
  constexpr double kEps = 1e-9;
  std::vector<Cell> out;
  for (int r = lo.row; r <= hi.row; ++r) {
    for (int c = lo.col; c <= hi.col; ++c) {
      const Point2 p = grid.cell_center({r, c});
      bool inside = false;
      if (const auto* rect = std::get_if<RectangleShape>(&shape)) {
        inside = std::abs(p.x - center.x) <= 0.5 * rect->width + kEps &&
                 std::abs(p.y - center.y) <= 0.5 * rect->height + kEps;
      } else {
        inside = std::hypot(p.x - center.x, p.y - center.y) <=
                 std::get<CircleShape>(shape).radius + kEps;
      }
      if (inside) out.push_back({r, c});
    }
  }
  if (out.empty()) out.push_back(grid.world_to_cell(center));
  return out;
}

std::vector<Cell> footprint_cells(const OccupancyGrid& grid, Point2 center, double radius) {
  const double res = grid.resolution();
  const Cell lo = grid.world_to_cell({center.x - radius, center.y - radius});
  const Cell hi = grid.world_to_cell({center.x + radius, center.y + radius});
  std::vector<Cell> out;
  for (int r = lo.row; r <= hi.row; ++r) {
    for (int c = lo.col; c <= hi.col; ++c) {
      const double x0 = grid.origin().x + c * res;
      const double y0 = grid.origin().y + r * res;
      const double nx = std::clamp(center.x, x0, x0 + res);
      const double ny = std::clamp(center.y, y0, y0 + res);
      if (std::hypot(center.x - nx, center.y - ny) < radius) out.push_back({r, c});
    }
  }
  return out;
}

ObstacleLayout generate_obstacles(const OccupancyGrid& ground_truth, const ObstacleSpec& spec,
                                  const Pose& robot, double robot_radius, Rng& rng) {
  spec.validate();
  const std::vector<ObstacleShape> shapes =
      spec.shapes.empty() ? ObstacleSpec::default_shapes() : spec.shapes;
  Stamper stamper(ground_truth, robot, robot_radius);
  std::vector<PlacedObstacle> placed;
  std::size_t index = 0;

  for (std::size_t i = 0; i < spec.placements.size(); ++i, ++index) {
    const ObstacleShape& shape = shapes[i % shapes.size()];
    const auto cells = shape_cells(ground_truth, shape, spec.placements[i]);
    if (!stamper.fits(cells)) {
      throw PlacementError("obstacle " + std::to_string(index) +
                               ": user placement overlaps a wall, another obstacle or the robot",
                           index);
    }
    stamper.stamp(cells);
    placed.push_back({shape, spec.placements[i], {}});
  }

  for (std::size_t i = 0; i < spec.trajectories.size(); ++i, ++index) {
    const ObstacleShape& shape = shapes[i % shapes.size()];
    const auto& trajectory = spec.trajectories[i];
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
      if (!stamper.clear_of_walls(shape_cells(ground_truth, shape, trajectory[k]))) {
        throw PlacementError("obstacle " + std::to_string(index) + ": trajectory pose " +
                                 std::to_string(k) + " overlaps a wall",
                             index);
      }
    }
    const auto cells = shape_cells(ground_truth, shape, trajectory.front());
    if (!stamper.fits(cells)) {
      throw PlacementError("obstacle " + std::to_string(index) +
                               ": initial trajectory pose overlaps another obstacle or the robot",
                           index);
    }
    stamper.stamp(cells);
    placed.push_back({shape, trajectory.front(), trajectory});
  }

  const int count = spec.count_max > 0 ? rng.uniform_int(spec.count_min, spec.count_max) : 0;
  if (count > 0) {
    std::vector<Cell> free_cells;
    for (std::size_t i = 0; i < ground_truth.size(); ++i) {
      if (ground_truth.cells()[i] == CellState::kFree) free_cells.push_back(ground_truth.cell_at_index(i));
    }
    for (int k = 0; k < count; ++k, ++index) {
      bool done = false;
      for (int attempt = 0; attempt < spec.max_attempts && !done && !free_cells.empty(); ++attempt) {
        const ObstacleShape& shape = shapes[rng.below(shapes.size())];
        const Point2 center = ground_truth.cell_center(free_cells[rng.below(free_cells.size())]);
        const auto cells = shape_cells(ground_truth, shape, center);
        if (!stamper.fits(cells)) continue;
        stamper.stamp(cells);
        placed.push_back({shape, center, {}});
        done = true;
      }
      if (!done) {
        throw PlacementError("obstacle " + std::to_string(index) + ": no free placement after " +
                                 std::to_string(spec.max_attempts) + " attempts",
                             index);
      }
    }
  }
  return {stamper.take(), std::move(placed)};
}

OccupancyGrid advance_obstacles(const OccupancyGrid& base, std::span<const PlacedObstacle> placed,
                                std::size_t step) {
  OccupancyGrid out = base;
  for (const auto& p : placed) {
    for (const Cell c : shape_cells(base, p.shape, p.center_at(step))) {
      if (out.contains(c)) out.set(c, CellState::kObstacle);
    }
  }
  return out;
}

}  // namespace gridslam
