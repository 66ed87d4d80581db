#include "gridslam/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridslam/error.hpp"
#include "gridslam/raycast.hpp"

namespace gridslam {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::vector<Cell> obstacle_cells(const OccupancyGrid& g) {
  std::vector<Cell> out;
  const auto cells = g.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] == CellState::kObstacle) out.push_back(g.cell_at_index(i));
  }
  return out;
}

}  // namespace

double SensorSpec::effective_step_deg(double resolution) const {
  if (angular_step_deg > 0.0) return angular_step_deg;
  return std::atan2(resolution, range) / kDegToRad;
}

void SensorSpec::validate(double resolution) const {
  if (!(range > 0.0) || !std::isfinite(range)) throw InvalidArgument("sensor range must be > 0");
  if (!(fov_deg > 0.0 && fov_deg <= 360.0)) {
    throw InvalidArgument("sensor field of view must be in (0, 360] degrees");
  }
  if (angular_step_deg < 0.0) throw InvalidArgument("sensor angular step must be > 0");
  const double limit = std::atan2(resolution, range) / kDegToRad;
  if (effective_step_deg(resolution) > limit * (1.0 + 1e-9)) {
    throw InvalidArgument("sensor angular step leaves gaps wider than one cell at max range");
  }
}

void NoiseSpec::validate() const {
  if (!(range_sigma >= 0.0) || !(reg_theta_sigma >= 0.0) || !(reg_xy_sigma >= 0.0)) {
    throw InvalidArgument("noise standard deviations must be >= 0");
  }
}

SectorScan scan(const OccupancyGrid& ground_truth, const Pose& pose, const SensorSpec& sensor) {
  const double res = ground_truth.resolution();
  sensor.validate(res);
  const Cell robot = ground_truth.world_to_cell(pose.position());
  if (ground_truth.get(robot, CellState::kObstacle) != CellState::kFree) {
    throw InvalidArgument("scan: pose is not on a Free cell (robot inside a wall?)");
  }

  const double range_cells = sensor.range / res;
  const int half = static_cast<int>(std::ceil(range_cells)) + 1;
  const Cell first{robot.row - half, robot.col - half};
  const int side = 2 * half + 1;
  SectorScan out{
      OccupancyGrid(side, side, res,
                    {ground_truth.origin().x + first.col * res,
                     ground_truth.origin().y + first.row * res},
                    CellState::kUnknown),
      pose, sensor.range};
  OccupancyGrid& local = out.grid;
  local.set({half, half}, CellState::kFree);

  const Point2 start = ground_truth.world_to_grid(pose.position());
  const double step = sensor.effective_step_deg(res) * kDegToRad;
  const double fov = sensor.fov_deg * kDegToRad;
  const bool full_circle = sensor.fov_deg >= 360.0;
  std::size_t rays = 0;
  double first_angle = 0.0;
  double spacing = 0.0;
  if (full_circle) {
    rays = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / step - 1e-9));
    spacing = 2.0 * std::numbers::pi / static_cast<double>(rays);
    first_angle = pose.theta - std::numbers::pi;
  } else {
    rays = static_cast<std::size_t>(std::ceil(fov / step - 1e-9)) + 1;
    spacing = fov / static_cast<double>(rays - 1);
    first_angle = pose.theta - 0.5 * fov;
  }

  const auto gt = ground_truth.cells();
  auto lc = local.cells();
  for (std::size_t k = 0; k < rays; ++k) {
    const double angle = first_angle + spacing * static_cast<double>(k);
    const Point2 end{start.x + range_cells * std::cos(angle),
                     start.y + range_cells * std::sin(angle)};
    traverse_supercover(start, end, [&](Cell c, double) {
      if (!ground_truth.contains(c)) return false;
      const CellState s = gt[ground_truth.index(c)];
      const std::size_t li = static_cast<std::size_t>(c.row - first.row) * side +
                             static_cast<std::size_t>(c.col - first.col);
      if (s == CellState::kObstacle) {
        lc[li] = CellState::kObstacle;
        return false;
      }
      if (s != CellState::kFree) return false;
      lc[li] = CellState::kFree;
      return true;
    });
  }
  return out;
}

std::vector<int> draw_range_offsets(std::size_t count, double sigma, Rng& rng) {
  std::vector<int> out(count, 0);
  if (sigma == 0.0) return out;
  for (auto& x : out) x = static_cast<int>(std::lround(rng.normal(sigma)));
  return out;
}

SectorScan apply_range_offsets(const SectorScan& sector, std::span<const int> offsets) {
  const std::vector<Cell> obstacles = obstacle_cells(sector.grid);
  if (offsets.size() != obstacles.size()) {
    throw InvalidArgument("apply_range_offsets: need one offset per obstacle cell");
  }
  SectorScan out = sector;
  OccupancyGrid& g = out.grid;
  const Cell robot = sector.robot_cell();
  const double max_cells =
      std::max(1.0, std::floor(sector.range / sector.grid.resolution() + 1e-9));

  std::vector<Cell> endpoints;
  endpoints.reserve(obstacles.size());
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const Cell o = obstacles[i];
    const double dx = o.col - robot.col;
    const double dy = o.row - robot.row;
    const double dist = std::hypot(dx, dy);
    if (offsets[i] == 0 || dist == 0.0) {
      endpoints.push_back(o);
      continue;
    }
    const double moved = std::clamp(dist + offsets[i], 1.0, max_cells);
    const Cell n{robot.row + static_cast<int>(std::lround(dy / dist * moved)),
                 robot.col + static_cast<int>(std::lround(dx / dist * moved))};
    endpoints.push_back(n);
    if (n == o) continue;
    if (moved > dist) {
      for (const Cell c : supercover_line(o, n)) {
        if (c != n && g.contains(c)) g.set(c, CellState::kFree);
      }
    } else {
      for (const Cell c : supercover_line(n, o)) {
        if (c != n && g.contains(c)) g.set(c, CellState::kUnknown);
      }
    }
  }
  for (const Cell c : endpoints) {
    if (g.contains(c)) g.set(c, CellState::kObstacle);
  }
  return out;
}

SectorScan perturb_ranges(const SectorScan& sector, const NoiseSpec& noise, Rng& rng) {
  if (noise.range_sigma == 0.0) return sector;
  const std::size_t n = sector.grid.count(CellState::kObstacle);
  const std::vector<int> offsets = draw_range_offsets(n, noise.range_sigma, rng);
  return apply_range_offsets(sector, offsets);
}

RegistrationOffset draw_registration(const NoiseSpec& noise, Rng& rng) {
  RegistrationOffset r;
  r.theta = rng.normal(noise.reg_theta_sigma);
  r.dx = rng.normal(noise.reg_xy_sigma);
  r.dy = rng.normal(noise.reg_xy_sigma);
  return r;
}

SectorScan apply_registration(const SectorScan& sector, const RegistrationOffset& offset) {
  if (offset.theta == 0.0 && offset.dx == 0.0 && offset.dy == 0.0) return sector;
  const OccupancyGrid& src = sector.grid;
  const double res = src.resolution();
  const Point2 pivot = src.cell_center(sector.robot_cell());
  const int pad = static_cast<int>(std::ceil(std::hypot(offset.dx, offset.dy) / res)) + 1;

  SectorScan out{OccupancyGrid(src.width() + 2 * pad, src.height() + 2 * pad, res,
                               {src.origin().x - pad * res, src.origin().y - pad * res},
                               CellState::kUnknown),
                 sector.center, sector.range};
  const double cs = std::cos(offset.theta);
  const double sn = std::sin(offset.theta);
  for (int r = 0; r < out.grid.height(); ++r) {
    for (int c = 0; c < out.grid.width(); ++c) {
      const Point2 p = out.grid.cell_center({r, c});
      const double qx = p.x - offset.dx - pivot.x;
      const double qy = p.y - offset.dy - pivot.y;
      // Inverse rotation maps the output cell back onto the source raster.
      const Point2 q{pivot.x + cs * qx + sn * qy, pivot.y - sn * qx + cs * qy};
      const CellState s = src.get(src.world_to_cell(q));
      if (s != CellState::kUnknown) out.grid.set({r, c}, s);
    }
  }
  return out;
}

SectorScan perturb_registration(const SectorScan& sector, const NoiseSpec& noise, Rng& rng) {
  if (noise.reg_theta_sigma == 0.0 && noise.reg_xy_sigma == 0.0) return sector;
  return apply_registration(sector, draw_registration(noise, rng));
}

std::size_t merge_into(OccupancyGrid& map, const OccupancyGrid& sector) {
  const double res = map.resolution();
  if (std::abs(sector.resolution() - res) > 1e-12 * res) {
    throw InvalidArgument("merge: sector and map resolutions differ");
  }
  int row_min = sector.height();
  int row_max = -1;
  int col_min = sector.width();
  int col_max = -1;
  const auto sc = sector.cells();
  for (int r = 0; r < sector.height(); ++r) {
    for (int c = 0; c < sector.width(); ++c) {
      if (sc[static_cast<std::size_t>(r) * sector.width() + c] == CellState::kUnknown) continue;
      row_min = std::min(row_min, r);
      row_max = std::max(row_max, r);
      col_min = std::min(col_min, c);
      col_max = std::max(col_max, c);
    }
  }
  if (row_max < 0) return 0;

  int dr = static_cast<int>(std::lround((sector.origin().y - map.origin().y) / res));
  int dc = static_cast<int>(std::lround((sector.origin().x - map.origin().x) / res));
  const Cell shift =
      map.grow_to_include(row_min + dr, row_max + dr, col_min + dc, col_max + dc);
  dr += shift.row;
  dc += shift.col;

  std::size_t newly_known = 0;
  auto mc = map.cells();
  for (int r = row_min; r <= row_max; ++r) {
    for (int c = col_min; c <= col_max; ++c) {
      const CellState s = sc[static_cast<std::size_t>(r) * sector.width() + c];
      if (s == CellState::kUnknown) continue;
      CellState& m = mc[map.index({r + dr, c + dc})];
      if (m == CellState::kUnknown) ++newly_known;
      m = s;
    }
  }
  return newly_known;
}

OccupancyGrid merge(const OccupancyGrid& map_prev, const SectorScan& sector) {
  OccupancyGrid out = map_prev;
  merge_into(out, sector.grid);
  return out;
}

}  // namespace gridslam
