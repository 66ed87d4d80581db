#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gridslam/error.hpp"
#include "gridslam/grid.hpp"
#include "gridslam/rng.hpp"

namespace gridslam {

struct RectangleShape {
  double width = 0.5;   // meters, along x
  double height = 0.5;  // meters, along y
  bool operator==(const RectangleShape&) const = default;
};

struct CircleShape {
  double radius = 0.25;  // meters
  bool operator==(const CircleShape&) const = default;
};

using ObstacleShape = std::variant<RectangleShape, CircleShape>;

// Obstacles to add to a ground-truth map. Three kinds, stamped in order:
//  - `placements`: static obstacles at given centers;
//  - `trajectories`: dynamic obstacles, one per trajectory, following the
//    listed centers one per step (looping);
//  - a random number in [count_min, count_max] of static obstacles at
//    rejection-sampled positions.
// The i-th obstacle of each kind uses shapes[i % shapes.size()] for the
// first two kinds; random obstacles pick a shape uniformly.
struct ObstacleSpec {
  int count_min = 0;
  int count_max = 0;
  std::vector<ObstacleShape> shapes;
  std::vector<Point2> placements;
  std::vector<std::vector<Point2>> trajectories;
  int max_attempts = 1000;

  // Default shape list used when `shapes` is empty.
  static std::vector<ObstacleShape> default_shapes();
  void validate() const;
};

struct PlacedObstacle {
  ObstacleShape shape;
  Point2 center;
  // Empty for static obstacles.
  std::vector<Point2> trajectory;

  bool is_dynamic() const { return !trajectory.empty(); }
  Point2 center_at(std::size_t step) const {
    return is_dynamic() ? trajectory[step % trajectory.size()] : center;
  }
};

// Cells whose centers fall inside the shape placed at `center`.
std::vector<Cell> shape_cells(const OccupancyGrid& grid, const ObstacleShape& shape,
                              Point2 center);

// Cells whose square intersects the open disc of `radius` around `center`.
std::vector<Cell> footprint_cells(const OccupancyGrid& grid, Point2 center, double radius);

class PlacementError : public Error {
 public:
  PlacementError(const std::string& what, std::size_t obstacle_index)
      : Error(what), obstacle_index_(obstacle_index) {}
  std::size_t obstacle_index() const noexcept { return obstacle_index_; }

 private:
  std::size_t obstacle_index_;
};

struct ObstacleLayout {
  OccupancyGrid grid;  // ground truth with obstacles at step 0
  std::vector<PlacedObstacle> placed;
};

// Places obstacles so that none overlaps a wall, another obstacle, or the
// robot body (radius plus one cell) at `robot`. Throws PlacementError.
ObstacleLayout generate_obstacles(const OccupancyGrid& ground_truth, const ObstacleSpec& spec,
                                  const Pose& robot, double robot_radius, Rng& rng);

// Ground truth with every obstacle stamped at its position for `step`.
OccupancyGrid advance_obstacles(const OccupancyGrid& base,
                                std::span<const PlacedObstacle> placed, std::size_t step);

}  // namespace gridslam
