#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gridslam/error.hpp"
#include "gridslam/grid.hpp"
#include "gridslam/rng.hpp"

namespace gridslam {

// Labels 4-connected Free components. Non-free cells get -1. Labels are
// assigned in row-major order of each component's first cell.
std::vector<int> label_free_components(const OccupancyGrid& grid, int* component_count = nullptr);

// Turns every 4-connected Free component smaller than `area_threshold` m²
// into Obstacle.
OccupancyGrid fill_small_cells(const OccupancyGrid& grid, double area_threshold);

// `count` distinct Free cells drawn uniformly without replacement.
std::vector<Cell> sample_free_points(const OccupancyGrid& grid, std::size_t count, Rng& rng);

struct CarvedOpening {
  Point2 from;  // world meters, first blocked cell center on the pair line
  Point2 to;    // world meters, last blocked cell center of that wall run
  std::size_t cells = 0;
};

struct RepairReport {
  std::size_t sampled_points = 0;
  std::size_t pairs_checked = 0;
  std::size_t pairs_replanned = 0;
  std::vector<CarvedOpening> carved;
  bool connected = false;
  // Recorded for provenance only; not used by any step.
  std::size_t cell_samples = 500;
};

struct RepairOptions {
  std::size_t samples = 100;
  double opening_width = 0.8;  // meters
  int max_carves_per_pair = 32;
  std::size_t cell_samples = 500;
};

struct RepairResult {
  OccupancyGrid grid;
  RepairReport report;
};

// Raised when a pair stays disconnected after the carve budget.
class RepairError : public Error {
 public:
  RepairError(const std::string& what, RepairReport report)
      : Error(what), report_(std::move(report)) {}
  const RepairReport& report() const noexcept { return report_; }

 private:
  RepairReport report_;
};

// Samples free points, walks point pairs by ascending distance (ties by
// index), and for every pair without a path carves an opening where their
// straight line crosses a wall until a path exists.
RepairResult repair_connectivity(const OccupancyGrid& grid, const RepairOptions& options,
                                 Rng& rng);
std::string repair_report_to_json(const RepairReport& report);

// Morphological closing (3x3) of the obstacle mask, then a crop to the
// bounding box of the house (free cells and the walls touching them) plus
// a one-cell margin. Throws InvalidArgument when the grid has no Free cell.
OccupancyGrid refine_and_crop(const OccupancyGrid& grid);

// Fraction of differing cells after aligning the free-space centroids of
// the two grids and padding both to a common frame with Obstacle.
double aligned_difference(const OccupancyGrid& a, const OccupancyGrid& b);

// Indices of the grids kept after removing duplicates (aligned difference
// strictly below `diff_threshold`). Each duplicate group keeps its lowest
// index. Pair comparisons run on `threads` workers (0 = hardware).
std::vector<std::size_t> dedup(std::span<const OccupancyGrid> grids,
                               double diff_threshold = 0.005, unsigned threads = 0);

// For every grid, the index of its group representative (itself when kept).
std::vector<std::size_t> dedup_representatives(std::span<const OccupancyGrid> grids,
                                               double diff_threshold = 0.005,
                                               unsigned threads = 0);

}  // namespace gridslam
