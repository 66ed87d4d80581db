#include "gridslam/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "gridslam/error.hpp"

namespace gridslam {
namespace {

constexpr std::array<const char*, 6> kCategories = {"Bedroom", "Kitchen", "Living_room",
                                                    "Bathroom", "Office", "Dining_room"};

struct Edge {
  int a;
  int b;
};

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

FloorPlan rectangular_room(double width, double height, std::string id) {
  if (!(width > 0.0) || !(height > 0.0)) throw InvalidArgument("room size must be > 0");
  const double hx = width / 2.0;
  const double hy = height / 2.0;
  FloorPlan plan;
  plan.id = std::move(id);
  plan.segments = {{{-hx, -hy}, {hx, -hy}},
                   {{hx, -hy}, {hx, hy}},
                   {{hx, hy}, {-hx, hy}},
                   {{-hx, hy}, {-hx, -hy}}};
  plan.rooms = {{"Room", {-hx, -hy, hx, hy}}};
  return plan;
}

FloorPlan synthetic_house(const HouseOptions& o, Rng& rng, std::string id) {
  if (o.rows < 1 || o.cols < 1) throw InvalidArgument("house needs at least one room");
  if (!(o.min_room > 0.0) || o.max_room < o.min_room) {
    throw InvalidArgument("house room sizes must satisfy 0 < min_room <= max_room");
  }
  if (o.doors && !(o.door_width > 0.0 && o.door_width + 0.4 < o.min_room)) {
    throw InvalidArgument("door_width must be > 0 and leave 0.2 m on each side");
  }

  std::vector<double> xs{0.0};
  std::vector<double> ys{0.0};
  for (int c = 0; c < o.cols; ++c) xs.push_back(xs.back() + rng.uniform(o.min_room, o.max_room));
  for (int r = 0; r < o.rows; ++r) ys.push_back(ys.back() + rng.uniform(o.min_room, o.max_room));
  const double cx = xs.back() / 2.0;
  const double cy = ys.back() / 2.0;
  for (double& x : xs) x -= cx;
  for (double& y : ys) y -= cy;

  const int n = o.rows * o.cols;
  std::vector<bool> present(n, true);
  if (o.rows >= 2 && o.cols >= 2 && rng.uniform() < o.corner_cut_probability) {
    const int corner = static_cast<int>(rng.below(4));
    const int r = corner / 2 == 0 ? 0 : o.rows - 1;
    const int c = corner % 2 == 0 ? 0 : o.cols - 1;
    present[r * o.cols + c] = false;
  }
  auto has = [&](int r, int c) {
    return r >= 0 && r < o.rows && c >= 0 && c < o.cols && present[r * o.cols + c];
  };

  // Random spanning tree of the adjacent present rooms carries the doors.
  std::vector<Edge> edges;
  for (int r = 0; r < o.rows; ++r) {
    for (int c = 0; c < o.cols; ++c) {
      if (!has(r, c)) continue;
      if (has(r, c + 1)) edges.push_back({r * o.cols + c, r * o.cols + c + 1});
      if (has(r + 1, c)) edges.push_back({r * o.cols + c, (r + 1) * o.cols + c});
    }
  }
  for (std::size_t i = edges.size(); i > 1; --i) std::swap(edges[i - 1], edges[rng.below(i)]);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<Edge> doors;
  for (const Edge& e : edges) {
    const int ra = find_root(parent, e.a);
    const int rb = find_root(parent, e.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    doors.push_back(e);
  }
  auto is_door = [&](int a, int b) {
    return o.doors && std::any_of(doors.begin(), doors.end(), [&](const Edge& e) {
             return (e.a == a && e.b == b) || (e.a == b && e.b == a);
           });
  };

  FloorPlan plan;
  plan.id = std::move(id);
  auto wall = [&](Point2 a, Point2 b, bool door) {
    if (!door) {
      plan.segments.push_back({a, b});
      return;
    }
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const double margin = 0.2 + o.door_width / 2.0;
    const double mid = rng.uniform(margin, len - margin);
    const double t0 = (mid - o.door_width / 2.0) / len;
    const double t1 = (mid + o.door_width / 2.0) / len;
    const Point2 p0{a.x + (b.x - a.x) * t0, a.y + (b.y - a.y) * t0};
    const Point2 p1{a.x + (b.x - a.x) * t1, a.y + (b.y - a.y) * t1};
    plan.segments.push_back({a, p0});
    plan.segments.push_back({p1, b});
  };

  for (int r = 0; r < o.rows; ++r) {
    for (int c = 0; c < o.cols; ++c) {
      if (!has(r, c)) continue;
      const int id_here = r * o.cols + c;
      const double x0 = xs[c], x1 = xs[c + 1], y0 = ys[r], y1 = ys[r + 1];
      plan.rooms.push_back({kCategories[rng.below(kCategories.size())], {x0, y0, x1, y1}});
      // Bottom and left edges are emitted here; top and right only when
      // they face the outside, so shared walls appear once.
      if (!has(r - 1, c)) wall({x0, y0}, {x1, y0}, false);
      else wall({x0, y0}, {x1, y0}, is_door(id_here, id_here - o.cols));
      if (!has(r, c - 1)) wall({x0, y0}, {x0, y1}, false);
      else wall({x0, y0}, {x0, y1}, is_door(id_here, id_here - 1));
      if (!has(r + 1, c)) wall({x0, y1}, {x1, y1}, false);
      if (!has(r, c + 1)) wall({x1, y0}, {x1, y1}, false);
    }
  }
  return plan;
}

}  // namespace gridslam
