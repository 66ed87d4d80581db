#include "gridslam/worldgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "gridslam/planner.hpp"
#include "gridslam/raycast.hpp"
#include "json.hpp"

namespace gridslam {
namespace {

constexpr int kDr4[4] = {1, -1, 0, 0};
constexpr int kDc4[4] = {0, 0, 1, -1};

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

bool on_border(const OccupancyGrid& g, Cell c) {
  return c.row == 0 || c.col == 0 || c.row == g.height() - 1 || c.col == g.width() - 1;
}

// Opens the first wall run crossed by the line a -> b. Returns false when
// the line is already obstacle-free.
bool carve_first_crossing(OccupancyGrid& grid, Cell a, Cell b, double opening_width,
                          RepairReport& report) {
  std::vector<Cell> run;
  bool done = false;
  traverse_supercover(Point2{a.col + 0.5, a.row + 0.5}, Point2{b.col + 0.5, b.row + 0.5},
                      [&](Cell c, double) {
                        const bool blocked = grid.get(c, CellState::kObstacle) != CellState::kFree;
                        if (blocked) {
                          run.push_back(c);
                        } else if (!run.empty()) {
                          done = true;
                        }
                        return !done;
                      });
  if (run.empty()) return false;

  const double res = grid.resolution();
  const Point2 from = grid.cell_center(run.front());
  const Point2 to = grid.cell_center(run.back());
  const double radius = 0.5 * opening_width;
  const int reach = static_cast<int>(std::ceil(radius / res)) + 1;
  const int r0 = std::min(run.front().row, run.back().row) - reach;
  const int r1 = std::max(run.front().row, run.back().row) + reach;
  const int c0 = std::min(run.front().col, run.back().col) - reach;
  const int c1 = std::max(run.front().col, run.back().col) + reach;
  std::size_t cells = 0;
  for (int r = std::max(0, r0); r <= std::min(grid.height() - 1, r1); ++r) {
    for (int c = std::max(0, c0); c <= std::min(grid.width() - 1, c1); ++c) {
      const Cell cell{r, c};
      if (grid[cell] == CellState::kFree || on_border(grid, cell)) continue;
      if (point_segment_distance(grid.cell_center(cell), from, to) <= radius + 1e-9) {
        grid.set(cell, CellState::kFree);
        ++cells;
      }
    }
  }
  // Make sure the run itself is open even for very narrow openings.
  for (const Cell c : run) {
    if (!on_border(grid, c) && grid[c] != CellState::kFree) {
      grid.set(c, CellState::kFree);
      ++cells;
    }
  }
  report.carved.push_back({from, to, cells});
  return cells > 0;
}

Point2 free_centroid(const OccupancyGrid& g) {
  double sr = 0.0;
  double sc = 0.0;
  std::size_t n = 0;
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      if (g[{r, c}] != CellState::kFree) continue;
      sr += r;
      sc += c;
      ++n;
    }
  }
  if (n == 0) return {0.5 * (g.width() - 1), 0.5 * (g.height() - 1)};
  return {sc / static_cast<double>(n), sr / static_cast<double>(n)};
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;  // lowest index stays the root
  }
};

}  // namespace

std::vector<int> label_free_components(const OccupancyGrid& grid, int* component_count) {
  std::vector<int> labels(grid.size(), -1);
  int next = 0;
  std::vector<Cell> stack;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (labels[i] != -1 || grid.cells()[i] != CellState::kFree) continue;
    labels[i] = next;
    stack.push_back(grid.cell_at_index(i));
    while (!stack.empty()) {
      const Cell cur = stack.back();
      stack.pop_back();
      for (int k = 0; k < 4; ++k) {
        const Cell n{cur.row + kDr4[k], cur.col + kDc4[k]};
        if (!grid.contains(n)) continue;
        const std::size_t ni = grid.index(n);
        if (labels[ni] != -1 || grid.cells()[ni] != CellState::kFree) continue;
        labels[ni] = next;
        stack.push_back(n);
      }
    }
    ++next;
  }
  if (component_count != nullptr) *component_count = next;
  return labels;
}

OccupancyGrid fill_small_cells(const OccupancyGrid& grid, double area_threshold) {
  if (!(area_threshold > 0.0)) throw InvalidArgument("fill_small_cells: threshold must be > 0");
  int count = 0;
  const std::vector<int> labels = label_free_components(grid, &count);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(count), 0);
  for (const int l : labels) {
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  }
  const double cell_area = grid.resolution() * grid.resolution();
  OccupancyGrid out = grid;
  auto cells = out.cells();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    if (static_cast<double>(sizes[static_cast<std::size_t>(labels[i])]) * cell_area < area_threshold) {
      cells[i] = CellState::kObstacle;
    }
  }
  return out;
}

std::vector<Cell> sample_free_points(const OccupancyGrid& grid, std::size_t count, Rng& rng) {
  std::vector<Cell> pool;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.cells()[i] == CellState::kFree) pool.push_back(grid.cell_at_index(i));
  }
  if (pool.size() < count) {
    throw InvalidArgument("sample_free_points: requested " + std::to_string(count) +
                          " points but only " + std::to_string(pool.size()) + " Free cells exist");
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

RepairResult repair_connectivity(const OccupancyGrid& grid, const RepairOptions& options,
                                 Rng& rng) {
  if (!(options.opening_width > 0.0)) throw InvalidArgument("repair: opening width must be > 0");
  RepairResult result{grid, {}};
  RepairReport& report = result.report;
  report.cell_samples = options.cell_samples;
  OccupancyGrid& g = result.grid;

  const std::vector<Cell> points = sample_free_points(g, options.samples, rng);
  report.sampled_points = points.size();

  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(points.size() * (points.size() - std::min<std::size_t>(1, points.size())) / 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = std::hypot(points[i].row - points[j].row, points[i].col - points[j].col);
      pairs.emplace_back(d, i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  // Free components are exactly the A* reachability classes (a diagonal
  // move always has an open orthogonal detour), so a pair sharing a label
  // is known to have a path without searching.
  std::vector<int> labels = label_free_components(g);
  for (const auto& [d, i, j] : pairs) {
    ++report.pairs_checked;
    const Cell a = points[i];
    const Cell b = points[j];
    if (labels[g.index(a)] == labels[g.index(b)]) continue;
    ++report.pairs_replanned;
    bool connected = false;
    for (int attempt = 0; attempt < options.max_carves_per_pair; ++attempt) {
      if (!carve_first_crossing(g, a, b, options.opening_width, report)) break;
      if (!astar(g, a, b).empty()) {
        connected = true;
        break;
      }
    }
    if (!connected) {
      report.connected = false;
      throw RepairError("repair_connectivity: could not connect sample pair (" +
                            std::to_string(i) + ", " + std::to_string(j) + ")",
                        report);
    }
    labels = label_free_components(g);
  }
  report.connected = true;
  for (const Cell p : points) report.connected = report.connected && labels[g.index(p)] == labels[g.index(points.front())];
  return result;
}

std::string repair_report_to_json(const RepairReport& report) {
  nlohmann::json doc;
  doc["sampled_points"] = report.sampled_points;
  doc["pairs_checked"] = report.pairs_checked;
  doc["pairs_replanned"] = report.pairs_replanned;
  doc["cell_samples"] = report.cell_samples;
  doc["connected"] = report.connected;
  nlohmann::json carved = nlohmann::json::array();
  for (const auto& c : report.carved) {
    carved.push_back({{"from", {c.from.x, c.from.y}}, {"to", {c.to.x, c.to.y}}, {"cells", c.cells}});
  }
  doc["carved"] = std::move(carved);
  return doc.dump(2);
}

OccupancyGrid refine_and_crop(const OccupancyGrid& grid) {
  if (grid.count(CellState::kFree) == 0) {
    throw InvalidArgument("refine_and_crop: grid has no free space");
  }
  const int h = grid.height();
  const int w = grid.width();
  auto blocked = [&](const std::vector<bool>& mask, int r, int c) {
    return r < 0 || r >= h || c < 0 || c >= w || mask[static_cast<std::size_t>(r) * w + c];
  };
  std::vector<bool> obstacle(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) obstacle[i] = grid.cells()[i] != CellState::kFree;

  std::vector<bool> dilated(grid.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      bool any = false;
      for (int dr = -1; dr <= 1 && !any; ++dr) {
        for (int dc = -1; dc <= 1 && !any; ++dc) any = blocked(obstacle, r + dr, c + dc);
      }
      dilated[static_cast<std::size_t>(r) * w + c] = any;
    }
  }
  OccupancyGrid closed(w, h, grid.resolution(), grid.origin(), CellState::kFree);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      bool all = true;
      for (int dr = -1; dr <= 1 && all; ++dr) {
        for (int dc = -1; dc <= 1 && all; ++dc) all = blocked(dilated, r + dr, c + dc);
      }
      if (all || obstacle[static_cast<std::size_t>(r) * w + c]) closed.set({r, c}, CellState::kObstacle);
    }
  }

  int r0 = h;
  int r1 = -1;
  int c0 = w;
  int c1 = -1;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (closed[{r, c}] != CellState::kFree) continue;
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  }
  if (r1 < 0) throw InvalidArgument("refine_and_crop: closing removed all free space");
  // One ring for the walls touching free space, one ring of margin.
  constexpr int kPad = 2;
  return closed.sub_grid({r0 - kPad, c0 - kPad}, r1 - r0 + 1 + 2 * kPad, c1 - c0 + 1 + 2 * kPad,
                         CellState::kObstacle);
}

double aligned_difference(const OccupancyGrid& a, const OccupancyGrid& b) {
  const Point2 ca = free_centroid(a);
  const Point2 cb = free_centroid(b);
  // b's cell (r, c) lands on a's cell (r + dr, c + dc).
  const int dr = static_cast<int>(std::lround(ca.y - cb.y));
  const int dc = static_cast<int>(std::lround(ca.x - cb.x));
  const int r0 = std::min(0, dr);
  const int c0 = std::min(0, dc);
  const int r1 = std::max(a.height(), b.height() + dr);
  const int c1 = std::max(a.width(), b.width() + dc);
  std::size_t differ = 0;
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) {
      const CellState sa = a.get({r, c}, CellState::kObstacle);
      const CellState sb = b.get({r - dr, c - dc}, CellState::kObstacle);
      differ += sa != sb ? 1 : 0;
    }
  }
  const auto area = static_cast<double>(r1 - r0) * static_cast<double>(c1 - c0);
  return area > 0.0 ? static_cast<double>(differ) / area : 0.0;
}

std::vector<std::size_t> dedup_representatives(std::span<const OccupancyGrid> grids,
                                               double diff_threshold, unsigned threads) {
  if (!(diff_threshold >= 0.0 && diff_threshold <= 1.0)) {
    throw InvalidArgument("dedup: threshold must be in [0, 1]");
  }
  const std::size_t n = grids.size();
  std::vector<std::size_t> free_count(n);
  for (std::size_t i = 0; i < n; ++i) free_count[i] = grids[i].count(CellState::kFree);

  // duplicates[i] lists j > i that duplicate i.
  std::vector<std::vector<std::size_t>> duplicates(n);
  auto work = [&](std::size_t worker, std::size_t workers) {
    for (std::size_t i = worker; i < n; i += workers) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // Every unmatched free cell differs. Both centroids lie inside
        // their grids, so the common frame spans at most the summed sides.
        const double gap = std::abs(static_cast<double>(free_count[i]) -
                                    static_cast<double>(free_count[j]));
        const double frame = static_cast<double>(grids[i].height() + grids[j].height()) *
                             static_cast<double>(grids[i].width() + grids[j].width());
        if (gap > 0.0 && gap / frame >= diff_threshold) continue;
        if (aligned_difference(grids[i], grids[j]) < diff_threshold) duplicates[i].push_back(j);
      }
    }
  };
  std::size_t workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const std::size_t j : duplicates[i]) sets.unite(i, j);
  }
  std::vector<std::size_t> rep(n);
  for (std::size_t i = 0; i < n; ++i) rep[i] = sets.find(i);
  return rep;
}

std::vector<std::size_t> dedup(std::span<const OccupancyGrid> grids, double diff_threshold,
                               unsigned threads) {
  const auto rep = dedup_representatives(grids, diff_threshold, threads);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < rep.size(); ++i) {
    if (rep[i] == i) kept.push_back(i);
  }
  return kept;
}

}  // namespace gridslam
