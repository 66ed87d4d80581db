#pragma once

#include <string>

#include "gridslam/floorplan.hpp"
#include "gridslam/rng.hpp"

namespace gridslam {

// Closed axis-aligned room of the given size (meters), centered at 0.
FloorPlan rectangular_room(double width, double height, std::string id = "room");

struct HouseOptions {
  int rows = 2;
  int cols = 2;
  double min_room = 2.5;  // meters
  double max_room = 5.0;  // meters
  // Door gaps along a random spanning tree of adjacent rooms. When false
  // every room is sealed.
  bool doors = true;
  double door_width = 0.9;
  // Probability of dropping one corner room to produce an L-shaped plan.
  double corner_cut_probability = 0.3;
};

// Grid-of-rooms house with random row heights and column widths.
FloorPlan synthetic_house(const HouseOptions& options, Rng& rng, std::string id = "house");

}  // namespace gridslam
