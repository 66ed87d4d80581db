#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gridslam/grid.hpp"
#include "gridslam/rng.hpp"

namespace gridslam {

struct SensorSpec {
  double range = 5.0;             // meters
  double fov_deg = 360.0;         // (0, 360]
  double angular_step_deg = 0.0;  // 0 selects atan2(resolution, range)

  double effective_step_deg(double resolution) const;
  // Throws InvalidArgument when the spec is out of range or the angular step
  // would leave gaps wider than one cell at maximum range.
  void validate(double resolution) const;
};

struct NoiseSpec {
  double range_sigma = 0.0;      // cells
  double reg_theta_sigma = 0.0;  // radians
  double reg_xy_sigma = 0.0;     // meters

  bool is_zero() const {
    return range_sigma == 0.0 && reg_theta_sigma == 0.0 && reg_xy_sigma == 0.0;
  }
  void validate() const;
};

// The local raster produced by one scan. `grid` is aligned with the ground
// truth it came from (same resolution, origin offset by whole cells) and is
// Unknown outside the observed wedge.
struct SectorScan {
  OccupancyGrid grid;
  Pose center;
  double range = 0.0;  // meters, maximum sensing distance

  // The sector cell containing the robot.
  Cell robot_cell() const { return grid.world_to_cell(center.position()); }
};

// Casts rays across the field of view. Along each ray cells are Free up to
// the first Obstacle, which is reported, and everything behind it stays
// Unknown. Throws InvalidArgument if the pose is not on a Free cell.
SectorScan scan(const OccupancyGrid& ground_truth, const Pose& pose,
                const SensorSpec& sensor);

// Gaussian range offsets in whole cells, one per obstacle cell.
std::vector<int> draw_range_offsets(std::size_t count, double sigma, Rng& rng);

// Moves the i-th Obstacle cell (row-major order) along its robot-obstacle
// ray by offsets[i] cells, clamped to [1 cell, sensor range]. Cells uncovered
// by an outward shift become Free; cells left behind an inward shift become
// Unknown. `offsets` must hold one entry per Obstacle cell.
SectorScan apply_range_offsets(const SectorScan& sector, std::span<const int> offsets);
SectorScan perturb_ranges(const SectorScan& sector, const NoiseSpec& noise, Rng& rng);

struct RegistrationOffset {
  double theta = 0.0;  // radians
  double dx = 0.0;     // meters
  double dy = 0.0;     // meters
};

RegistrationOffset draw_registration(const NoiseSpec& noise, Rng& rng);
// Rotates the sector about the robot cell center by `theta`, then shifts it
// by (dx, dy), resampling nearest-neighbor. The center pose is unchanged.
SectorScan apply_registration(const SectorScan& sector, const RegistrationOffset& offset);
SectorScan perturb_registration(const SectorScan& sector, const NoiseSpec& noise, Rng& rng);

// Writes every non-Unknown sector cell into the map (last write wins),
// growing the map when known sector cells fall outside it. Returns the
// number of map cells that went from Unknown to known.
std::size_t merge_into(OccupancyGrid& map, const OccupancyGrid& sector);
OccupancyGrid merge(const OccupancyGrid& map_prev, const SectorScan& sector);

}  // namespace gridslam
