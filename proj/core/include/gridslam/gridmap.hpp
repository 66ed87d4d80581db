#pragma once

#include <span>

#include "gridslam/floorplan.hpp"
#include "gridslam/grid.hpp"

namespace gridslam {

inline constexpr double kDefaultResolution = 0.1;
inline constexpr double kDefaultWallThickness = 0.1;

// Rasterizes wall segments into a ground-truth grid.
//
// Cells whose center lies within wall_thickness/2 of a segment become
// Obstacle. Non-wall cells reachable from the grid border are exterior and
// also become Obstacle; the remaining cells are Free. The grid covers the
// segments' bounding box plus one cell on every side.
OccupancyGrid rasterize(const FloorPlan& plan, double resolution = kDefaultResolution,
                        double wall_thickness = kDefaultWallThickness);
OccupancyGrid rasterize(std::span<const Segment> segments, double resolution,
                        double wall_thickness);

// Egocentric square crop of `side` meters centered on the pose. The crop is
// rotated so the robot heading points along the crop's +x axis (columns)
// and its origin is placed at (-side/2, -side/2), so the robot sits at the
// crop's world origin. Samples falling outside the map read Unknown.
OccupancyGrid crop_local(const OccupancyGrid& map, const Pose& pose, double side);

// Intersection over union of the Free cells (obstacle-mask variant below).
// Both maps must have identical dimensions. Two empty sets give 1.0.
double iou_free(const OccupancyGrid& a, const OccupancyGrid& b);
double iou_obstacle(const OccupancyGrid& a, const OccupancyGrid& b);

}  // namespace gridslam
