#pragma once

#include <vector>

#include "gridslam/action.hpp"
#include "gridslam/grid.hpp"
#include "gridslam/rng.hpp"

namespace gridslam {

// Cells from start to goal inclusive; empty when no path exists.
using Path = std::vector<Cell>;

inline constexpr double kDiagonalCost = 1.4142135623730951;

// 8-connected A* over Free cells with unit straight and sqrt(2) diagonal
// costs and the octile heuristic. A diagonal move is refused when both
// orthogonal neighbors it passes between are blocked.
// Throws InvalidArgument when start or goal is not a Free cell.
Path astar(const OccupancyGrid& grid, Cell start, Cell goal);

// Same search over an explicit passability mask (row-major, width*height).
Path astar(const std::vector<bool>& passable, int width, int height, Cell start,
           Cell goal);

double path_cost(const Path& path);

// Uniform over the three actions.
Action random_policy(Rng& rng);

struct FrontierParams {
  double robot_radius = 0.15;     // meters
  double linear_step = 0.3;       // meters
  double angular_step_deg = 10.0;
};

// Free cells with at least one 4-neighbor Unknown. Cells beyond the map
// edge do not count.
std::vector<Cell> find_frontiers(const OccupancyGrid& built_map);

// Scripted exploration baseline. Plans over cells with clearance for the
// robot body toward the cell that minimizes path length plus Free-cell hops
// to the nearest frontier, then turns or drives toward a waypoint one
// linear step down the path. Uses `rng` only when there is nothing to
// explore or the way forward is blocked.
Action frontier_policy(const OccupancyGrid& built_map, const Pose& pose,
                       const FrontierParams& params, Rng& rng);

}  // namespace gridslam
