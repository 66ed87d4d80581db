#include "gridslam/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

#include "gridslam/error.hpp"

namespace gridslam {
namespace {

constexpr int kDr[8] = {0, 0, 1, -1, 1, 1, -1, -1};
constexpr int kDc[8] = {1, -1, 0, 0, 1, -1, 1, -1};

struct Frontier {
  double key;
  std::size_t index;
  bool operator>(const Frontier& o) const {
    return std::tie(key, index) > std::tie(o.key, o.index);
  }
};
using MinQueue = std::priority_queue<Frontier, std::vector<Frontier>, std::greater<>>;

double octile(Cell a, Cell b) {
  const double dx = std::abs(a.col - b.col);
  const double dy = std::abs(a.row - b.row);
  return (dx + dy) + (kDiagonalCost - 2.0) * std::min(dx, dy);
}

// Visits the legal 8-connected moves out of `cur`.
template <typename Fn>
void for_each_move(const std::vector<bool>& passable, int width, int height, Cell cur, Fn&& fn) {
  auto open = [&](int r, int c) {
    return r >= 0 && r < height && c >= 0 && c < width &&
           passable[static_cast<std::size_t>(r) * width + c];
  };
  for (int k = 0; k < 8; ++k) {
    const int r = cur.row + kDr[k];
    const int c = cur.col + kDc[k];
    if (!open(r, c)) continue;
    const bool diagonal = k >= 4;
    if (diagonal && !open(cur.row + kDr[k], cur.col) && !open(cur.row, cur.col + kDc[k])) continue;
    fn(Cell{r, c}, diagonal ? kDiagonalCost : 1.0);
  }
}

Path reconstruct(const std::vector<std::int64_t>& parent, int width, std::size_t goal) {
  Path path;
  for (auto i = static_cast<std::int64_t>(goal); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    path.push_back({static_cast<int>(i / width), static_cast<int>(i % width)});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<bool> free_mask(const OccupancyGrid& grid) {
  std::vector<bool> mask(grid.size());
  const auto cells = grid.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) mask[i] = cells[i] == CellState::kFree;
  return mask;
}

}  // namespace

Path astar(const std::vector<bool>& passable, int width, int height, Cell start, Cell goal) {
  auto ok = [&](Cell c) {
    return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width &&
           passable[static_cast<std::size_t>(c.row) * width + c.col];
  };
  if (!ok(start) || !ok(goal)) throw InvalidArgument("astar: start and goal must be Free cells");
  if (start == goal) return {start};

  const std::size_t n = static_cast<std::size_t>(width) * height;
  auto idx = [&](Cell c) { return static_cast<std::size_t>(c.row) * width + c.col; };
  std::vector<double> g(n, std::numeric_limits<double>::infinity());
  std::vector<std::int64_t> parent(n, -1);
  std::vector<bool> closed(n, false);
  MinQueue open;
  g[idx(start)] = 0.0;
  open.push({octile(start, goal), idx(start)});
  const std::size_t goal_i = idx(goal);

  while (!open.empty()) {
    const std::size_t cur_i = open.top().index;
    open.pop();
    if (closed[cur_i]) continue;
    closed[cur_i] = true;
    if (cur_i == goal_i) return reconstruct(parent, width, goal_i);
    const Cell cur{static_cast<int>(cur_i / width), static_cast<int>(cur_i % width)};
    for_each_move(passable, width, height, cur, [&](Cell next, double step) {
      const std::size_t ni = idx(next);
      if (closed[ni]) return;
      const double cand = g[cur_i] + step;
      if (cand < g[ni]) {
        g[ni] = cand;
        parent[ni] = static_cast<std::int64_t>(cur_i);
        open.push({cand + octile(next, goal), ni});
      }
    });
  }
  return {};
}

Path astar(const OccupancyGrid& grid, Cell start, Cell goal) {
  return astar(free_mask(grid), grid.width(), grid.height(), start, goal);
}

double path_cost(const Path& path) {
  double cost = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const bool diagonal = path[i].row != path[i - 1].row && path[i].col != path[i - 1].col;
    cost += diagonal ? kDiagonalCost : 1.0;
  }
  return cost;
}

Action random_policy(Rng& rng) { return static_cast<Action>(rng.below(kActionCount)); }

std::vector<Cell> find_frontiers(const OccupancyGrid& built_map) {
  std::vector<Cell> out;
  constexpr int kDr4[4] = {1, -1, 0, 0};
  constexpr int kDc4[4] = {0, 0, 1, -1};
  for (int r = 0; r < built_map.height(); ++r) {
    for (int c = 0; c < built_map.width(); ++c) {
      if (built_map[{r, c}] != CellState::kFree) continue;
      for (int k = 0; k < 4; ++k) {
        if (built_map.get({r + kDr4[k], c + kDc4[k]}, CellState::kObstacle) == CellState::kUnknown) {
          out.push_back({r, c});
          break;
        }
      }
    }
  }
  return out;
}

Action frontier_policy(const OccupancyGrid& built_map, const Pose& pose,
                       const FrontierParams& params, Rng& rng) {
  const int width = built_map.width();
  const int height = built_map.height();
  const double res = built_map.resolution();
  const Cell robot = built_map.world_to_cell(pose.position());
  if (!built_map.contains(robot)) return random_policy(rng);

  // Cells with room for the robot body plus a one-cell margin.
  const double inflate = params.robot_radius / res + 1.0;
  const int reach = static_cast<int>(std::ceil(inflate));
  const std::vector<bool> free = free_mask(built_map);
  std::vector<bool> passable = free;
  const auto cells = built_map.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] != CellState::kObstacle) continue;
    const Cell o = built_map.cell_at_index(i);
    for (int dr = -reach; dr <= reach; ++dr) {
      for (int dc = -reach; dc <= reach; ++dc) {
        if (dr * dr + dc * dc > inflate * inflate) continue;
        const Cell n{o.row + dr, o.col + dc};
        if (built_map.contains(n)) passable[built_map.index(n)] = false;
      }
    }
  }

  // Goals: cells within a few Free steps of a frontier, so frontiers
  // hugging a wall are still approachable. Growing through Free cells only
  // keeps a frontier from claiming cells on the far side of a wall.
  const std::vector<Cell> frontiers = find_frontiers(built_map);
  if (frontiers.empty()) return random_policy(rng);
  const int goal_reach = reach + 1;
  std::vector<int> hops(built_map.size(), -1);
  std::vector<std::size_t> queue;
  for (const Cell f : frontiers) {
    hops[built_map.index(f)] = 0;
    queue.push_back(built_map.index(f));
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t i = queue[head];
    if (hops[i] == goal_reach) continue;
    for_each_move(free, width, height, built_map.cell_at_index(i),
                  [&](Cell next, double) {
                    const std::size_t ni = built_map.index(next);
                    if (hops[ni] >= 0) return;
                    hops[ni] = hops[i] + 1;
                    queue.push_back(ni);
                  });
  }
  // Dijkstra from the robot. The target minimizes path length plus the
  // remaining hops to a frontier, so the robot keeps closing in even when
  // it sits next to a frontier it cannot see past.
  const double lookahead = params.linear_step / res;
  const std::size_t n = built_map.size();
  const std::size_t start = built_map.index(robot);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::int64_t> parent(n, -1);
  std::vector<bool> closed(n, false);
  passable[start] = true;
  dist[start] = 0.0;
  MinQueue open;
  open.push({0.0, start});
  std::int64_t target = -1;
  double best = std::numeric_limits<double>::infinity();
  while (!open.empty()) {
    const std::size_t cur_i = open.top().index;
    open.pop();
    if (closed[cur_i]) continue;
    closed[cur_i] = true;
    if (dist[cur_i] >= best) break;
    // Goals closer than one linear step cannot be driven to.
    const Cell cur = built_map.cell_at_index(cur_i);
    if (hops[cur_i] >= 0 && std::hypot(cur.row - robot.row, cur.col - robot.col) >= lookahead &&
        dist[cur_i] + hops[cur_i] < best) {
      best = dist[cur_i] + hops[cur_i];
      target = static_cast<std::int64_t>(cur_i);
    }
    for_each_move(passable, width, height, cur, [&](Cell next, double step) {
      const std::size_t ni = built_map.index(next);
      if (closed[ni]) return;
      const double cand = dist[cur_i] + step;
      if (cand < dist[ni]) {
        dist[ni] = cand;
        parent[ni] = static_cast<std::int64_t>(cur_i);
        open.push({cand, ni});
      }
    });
  }
  if (target < 0) return random_policy(rng);

  const Path path = reconstruct(parent, width, static_cast<std::size_t>(target));
  Cell waypoint = path.back();
  for (const Cell c : path) {
    if (std::hypot(c.row - robot.row, c.col - robot.col) >= lookahead) {
      waypoint = c;
      break;
    }
  }
  const Point2 wp = built_map.cell_center(waypoint);
  const double error = normalize_angle(std::atan2(wp.y - pose.y, wp.x - pose.x) - pose.theta);
  const double half_turn = 0.5 * params.angular_step_deg * std::numbers::pi / 180.0;
  if (std::abs(error) < half_turn) {
    const Cell ahead = built_map.world_to_cell({pose.x + params.linear_step * std::cos(pose.theta),
                                                pose.y + params.linear_step * std::sin(pose.theta)});
    if (built_map.contains(ahead) && passable[built_map.index(ahead)]) return Action::kForward;
    return random_policy(rng);
  }
  return error > 0.0 ? Action::kRotateLeft : Action::kRotateRight;
}

}  // namespace gridslam
