#include "gridslam/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>
#include <set>

#include "gridslam/error.hpp"
#include "gridslam/gridmap.hpp"
#include "json.hpp"

namespace gridslam {
namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Reads keys out of one JSON object, rejecting anything it was not asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw SchemaError("'" + name() + "' must be an object", name());
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) out = as_number(*v, key);
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw SchemaError("'" + qualified(key) + "' must be a boolean", qualified(key));
      out = v->get<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw SchemaError("'" + qualified(key) + "' must be a string", qualified(key));
      out = v->get<std::string>();
    }
  }
  double as_number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw SchemaError("'" + qualified(key) + "' must be a number", qualified(key));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InvalidArgument("'" + qualified(key) + "' must be finite");
    return d;
  }
  Point2 as_point(const json& v, const std::string& key) const {
    if (!v.is_array() || v.size() != 2) {
      throw SchemaError("'" + qualified(key) + "' points must be [x, y]", qualified(key));
    }
    return {as_number(v[0], key), as_number(v[1], key)};
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) throw SchemaError("unknown key '" + qualified(key) + "'", qualified(key));
    }
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string name() const { return path_.empty() ? "config" : path_; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

ObstacleShape parse_shape(const json& v, const std::string& path) {
  ObjectReader r(v, path);
  std::string type;
  r.string("type", type);
  ObstacleShape shape;
  if (type == "rectangle") {
    RectangleShape rect;
    r.number("width", rect.width);
    r.number("height", rect.height);
    shape = rect;
  } else if (type == "circle") {
    CircleShape circle;
    r.number("radius", circle.radius);
    shape = circle;
  } else {
    throw SchemaError("'" + r.qualified("type") + "' must be \"rectangle\" or \"circle\"",
                      r.qualified("type"));
  }
  r.finish();
  return shape;
}

void parse_count(const json& v, ObstacleSpec& spec) {
  const std::string key = "obstacles.count";
  if (v.is_number_integer()) {
    spec.count_min = spec.count_max = v.get<int>();
    return;
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
    spec.count_min = v[0].get<int>();
    spec.count_max = v[1].get<int>();
    return;
  }
  if (v.is_string()) {
    static const std::regex kRandom(R"(random\((\d+)\.\.(\d+)\))");
    std::smatch m;
    const std::string s = v.get<std::string>();
    if (std::regex_match(s, m, kRandom)) {
      spec.count_min = std::stoi(m[1]);
      spec.count_max = std::stoi(m[2]);
      return;
    }
  }
  throw SchemaError("'" + key + "' must be an integer, [min, max] or \"random(a..b)\"", key);
}

ObstacleSpec parse_obstacles(const json& v) {
  ObjectReader r(v, "obstacles");
  ObstacleSpec spec;
  if (const json* c = r.find("count")) parse_count(*c, spec);
  if (const json* s = r.find("shapes")) {
    if (!s->is_array()) throw SchemaError("'obstacles.shapes' must be an array", "obstacles.shapes");
    for (std::size_t i = 0; i < s->size(); ++i) {
      spec.shapes.push_back(parse_shape((*s)[i], "obstacles.shapes[" + std::to_string(i) + "]"));
    }
  }
  if (const json* p = r.find("placements")) {
    if (!p->is_array()) throw SchemaError("'obstacles.placements' must be an array", "obstacles.placements");
    for (const auto& e : *p) spec.placements.push_back(r.as_point(e, "placements"));
  }
  if (const json* t = r.find("trajectories")) {
    if (!t->is_array()) throw SchemaError("'obstacles.trajectories' must be an array", "obstacles.trajectories");
    for (const auto& traj : *t) {
      if (!traj.is_array()) {
        throw SchemaError("'obstacles.trajectories' entries must be arrays", "obstacles.trajectories");
      }
      std::vector<Point2> poses;
      for (const auto& e : traj) poses.push_back(r.as_point(e, "trajectories"));
      spec.trajectories.push_back(std::move(poses));
    }
  }
  if (const json* a = r.find("max_attempts")) {
    if (!a->is_number_integer()) {
      throw SchemaError("'obstacles.max_attempts' must be an integer", "obstacles.max_attempts");
    }
    spec.max_attempts = a->get<int>();
  }
  r.finish();
  return spec;
}

json shape_to_json(const ObstacleShape& shape) {
  if (const auto* rect = std::get_if<RectangleShape>(&shape)) {
    return {{"type", "rectangle"}, {"width", rect->width}, {"height", rect->height}};
  }
  return {{"type", "circle"}, {"radius", std::get<CircleShape>(shape).radius}};
}

}  // namespace

double reward_obstacle_avoidance(bool collision, double new_area, Action action,
                                 const RewardSpec& spec) {
  if (collision) return spec.collision_penalty;
  const double forward = action == Action::kForward ? 1.0 : 0.0;
  return spec.alpha_s * (new_area / spec.area_unit) + spec.alpha_a * forward;
}

double reward_exploration(double new_area, const RewardSpec& spec) {
  return spec.exploration_alpha * (new_area / spec.area_unit);
}

double explored_area(const OccupancyGrid& map) {
  const double known = static_cast<double>(map.size() - map.count(CellState::kUnknown));
  return known * map.resolution() * map.resolution();
}

int EpisodeConfig::observation_cells() const {
  return std::max(1, static_cast<int>(std::lround(observation_side / resolution)));
}

void EpisodeConfig::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw InvalidArgument("resolution must be > 0");
  }
  if (!(wall_thickness > 0.0)) throw InvalidArgument("wall_thickness must be > 0");
  sensor.validate(resolution);
  noise.validate();
  if (!(robot.radius > 0.0) || !(robot.linear_step > 0.0) || !(robot.angular_step_deg > 0.0)) {
    throw InvalidArgument("robot radius and step lengths must be > 0");
  }
  obstacles.validate();
  if (!(observation_side > 0.0)) throw InvalidArgument("observation_side must be > 0");
  if (max_steps < 1) throw InvalidArgument("max_steps must be >= 1");
  if (!(reward.alpha_s >= 0.0) || !(reward.alpha_a >= 0.0) || !(reward.exploration_alpha >= 0.0)) {
    throw InvalidArgument("reward weights must be >= 0");
  }
  if (!(reward.area_unit > 0.0)) throw InvalidArgument("reward area_unit must be > 0");
}

EpisodeConfig config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed config: ") + e.what(), e.byte);
  } catch (const json::out_of_range& e) {
    throw InvalidArgument(std::string("non-finite number: ") + e.what());
  }
  EpisodeConfig cfg;
  ObjectReader root(doc, "");

  std::string mode = "exploration-unknown";
  root.string("mode", mode);
  if (mode == "exploration-unknown") {
    cfg.mode = Mode::kExplorationUnknown;
  } else if (mode == "navigation-known") {
    cfg.mode = Mode::kNavigationKnown;
  } else {
    throw SchemaError("'mode' must be \"exploration-unknown\" or \"navigation-known\"", "mode");
  }
  root.number("resolution", cfg.resolution);
  root.number("wall_thickness", cfg.wall_thickness);

  if (const json* s = root.find("sensor")) {
    ObjectReader r(*s, "sensor");
    r.number("range", cfg.sensor.range);
    r.number("fov", cfg.sensor.fov_deg);
    r.number("angular_step", cfg.sensor.angular_step_deg);
    r.finish();
  }
  if (const json* n = root.find("noise")) {
    ObjectReader r(*n, "noise");
    r.number("range_sigma", cfg.noise.range_sigma);
    r.number("reg_theta_sigma", cfg.noise.reg_theta_sigma);
    r.number("reg_xy_sigma", cfg.noise.reg_xy_sigma);
    r.finish();
  }
  if (const json* b = root.find("robot")) {
    ObjectReader r(*b, "robot");
    r.number("radius", cfg.robot.radius);
    r.number("linear_step", cfg.robot.linear_step);
    r.number("angular_step", cfg.robot.angular_step_deg);
    r.finish();
  }
  if (const json* o = root.find("obstacles")) cfg.obstacles = parse_obstacles(*o);
  if (const json* w = root.find("reward")) {
    ObjectReader r(*w, "reward");
    std::string task = "exploration";
    r.string("task", task);
    if (task == "exploration") {
      cfg.reward.task = RewardTask::kExploration;
    } else if (task == "obstacle-avoidance") {
      cfg.reward.task = RewardTask::kObstacleAvoidance;
    } else {
      throw SchemaError("'reward.task' must be \"exploration\" or \"obstacle-avoidance\"", "reward.task");
    }
    r.number("alpha_s", cfg.reward.alpha_s);
    r.number("alpha_a", cfg.reward.alpha_a);
    r.number("collision_penalty", cfg.reward.collision_penalty);
    r.number("exploration_alpha", cfg.reward.exploration_alpha);
    r.number("area_unit", cfg.reward.area_unit);
    r.finish();
  }
  // Local observation side defaults: 3 m for obstacle avoidance, 4 m for
  // exploration.
  cfg.observation_side = cfg.reward.task == RewardTask::kObstacleAvoidance ? 3.0 : 4.0;
  root.number("observation_side", cfg.observation_side);
  if (const json* t = root.find("max_steps")) {
    if (!t->is_number_integer() || t->get<std::int64_t>() < 0) {
      throw SchemaError("'max_steps' must be a non-negative integer", "max_steps");
    }
    cfg.max_steps = t->get<std::size_t>();
  }
  root.boolean("terminate_on_collision", cfg.terminate_on_collision);
  if (const json* s = root.find("seed")) {
    if (!s->is_number_unsigned()) throw SchemaError("'seed' must be a non-negative integer", "seed");
    cfg.seed = s->get<std::uint64_t>();
  }
  root.finish();
  cfg.validate();
  return cfg;
}

std::string config_to_json(const EpisodeConfig& c) {
  json doc;
  doc["mode"] = c.mode == Mode::kExplorationUnknown ? "exploration-unknown" : "navigation-known";
  doc["resolution"] = c.resolution;
  doc["wall_thickness"] = c.wall_thickness;
  doc["sensor"] = {{"range", c.sensor.range}, {"fov", c.sensor.fov_deg},
                   {"angular_step", c.sensor.angular_step_deg}};
  doc["noise"] = {{"range_sigma", c.noise.range_sigma},
                  {"reg_theta_sigma", c.noise.reg_theta_sigma},
                  {"reg_xy_sigma", c.noise.reg_xy_sigma}};
  doc["robot"] = {{"radius", c.robot.radius}, {"linear_step", c.robot.linear_step},
                  {"angular_step", c.robot.angular_step_deg}};
  json obstacles;
  obstacles["count"] = {c.obstacles.count_min, c.obstacles.count_max};
  obstacles["shapes"] = json::array();
  for (const auto& s : c.obstacles.shapes) obstacles["shapes"].push_back(shape_to_json(s));
  obstacles["placements"] = json::array();
  for (const auto& p : c.obstacles.placements) obstacles["placements"].push_back({p.x, p.y});
  obstacles["trajectories"] = json::array();
  for (const auto& t : c.obstacles.trajectories) {
    json traj = json::array();
    for (const auto& p : t) traj.push_back({p.x, p.y});
    obstacles["trajectories"].push_back(std::move(traj));
  }
  obstacles["max_attempts"] = c.obstacles.max_attempts;
  doc["obstacles"] = std::move(obstacles);
  doc["observation_side"] = c.observation_side;
  doc["max_steps"] = c.max_steps;
  doc["reward"] = {
      {"task", c.reward.task == RewardTask::kExploration ? "exploration" : "obstacle-avoidance"},
      {"alpha_s", c.reward.alpha_s},
      {"alpha_a", c.reward.alpha_a},
      {"collision_penalty", c.reward.collision_penalty},
      {"exploration_alpha", c.reward.exploration_alpha},
      {"area_unit", c.reward.area_unit}};
  doc["terminate_on_collision"] = c.terminate_on_collision;
  doc["seed"] = c.seed;
  return doc.dump(2);
}

Pose sample_start_pose(const OccupancyGrid& ground_truth, double clearance, Rng& rng) {
  std::vector<Cell> candidates;
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    if (ground_truth.cells()[i] != CellState::kFree) continue;
    const Cell c = ground_truth.cell_at_index(i);
    bool clear = true;
    for (const Cell f : footprint_cells(ground_truth, ground_truth.cell_center(c), clearance)) {
      if (ground_truth.get(f, CellState::kObstacle) != CellState::kFree) {
        clear = false;
        break;
      }
    }
    if (clear) candidates.push_back(c);
  }
  if (candidates.empty()) {
    throw InvalidArgument("no start pose: free space is too small for the robot");
  }
  const Cell c = candidates[rng.below(candidates.size())];
  const Point2 p = ground_truth.cell_center(c);
  return Pose(p.x, p.y, rng.uniform(-std::numbers::pi, std::numbers::pi));
}

Environment::Environment(EpisodeConfig config) : config_(std::move(config)), rng_(config_.seed) {
  config_.validate();
}

void Environment::seed(std::uint64_t seed) {
  config_.seed = seed;
  rng_ = Rng(seed);
}

StepResult Environment::reset(const FloorPlan& plan) {
  return reset(rasterize(plan, config_.resolution, config_.wall_thickness));
}

StepResult Environment::reset(const OccupancyGrid& ground_truth) {
  if (std::abs(ground_truth.resolution() - config_.resolution) > 1e-12) {
    throw InvalidArgument("reset: ground truth resolution differs from the config");
  }
  OccupancyGrid floor = ground_truth;
  const Pose start = sample_start_pose(floor, config_.robot.radius + config_.resolution, rng_);
  ObstacleLayout layout =
      generate_obstacles(floor, config_.obstacles, start, config_.robot.radius, rng_);

  floor_ = std::move(floor);
  world_ = std::move(layout.grid);
  placed_ = std::move(layout.placed);
  pose_ = start;
  built_ = config_.mode == Mode::kNavigationKnown
               ? world_
               : OccupancyGrid(floor_.width(), floor_.height(), floor_.resolution(),
                               floor_.origin(), CellState::kUnknown);
  known_cells_ = built_.size() - built_.count(CellState::kUnknown);
  steps_ = 0;
  done_ = false;
  started_ = true;
  const std::size_t new_cells = sense_and_merge();
  return make_result(0.0, false, new_cells);
}

StepResult Environment::reset() {
  if (!started_) throw InvalidArgument("reset: no floor plan loaded yet");
  return reset(OccupancyGrid(floor_));
}

bool Environment::collides(const Pose& pose) const {
  for (const Cell c : footprint_cells(world_, pose.position(), config_.robot.radius)) {
    if (world_.get(c, CellState::kObstacle) != CellState::kFree) return true;
  }
  return false;
}

std::size_t Environment::sense_and_merge() {
  if (world_.get(world_.world_to_cell(pose_.position()), CellState::kObstacle) != CellState::kFree) {
    return 0;  // a dynamic obstacle sits on the robot cell
  }
  SectorScan sector = scan(world_, pose_, config_.sensor);
  if (!config_.noise.is_zero()) {
    sector = perturb_ranges(sector, config_.noise, rng_);
    sector = perturb_registration(sector, config_.noise, rng_);
  }
  const std::size_t n = merge_into(built_, sector.grid);
  known_cells_ += n;
  return n;
}

StepResult Environment::make_result(double reward, bool collision, std::size_t new_cells) const {
  StepResult out;
  out.observation = crop_local(built_, pose_, config_.observation_side);
  out.reward = reward;
  out.done = done_;
  out.info.collision = collision;
  out.info.new_cells = new_cells;
  out.info.explored_area =
      static_cast<double>(known_cells_) * config_.resolution * config_.resolution;
  out.info.pose = pose_;
  return out;
}

StepResult Environment::step(Action action) {
  if (!started_) throw InvalidArgument("step: reset() must be called first");
  if (done_) throw InvalidArgument("step: episode is done, call reset()");

  Pose candidate = pose_;
  const double turn = config_.robot.angular_step_deg * kDegToRad;
  switch (action) {
    case Action::kForward:
      candidate = Pose(pose_.x + config_.robot.linear_step * std::cos(pose_.theta),
                       pose_.y + config_.robot.linear_step * std::sin(pose_.theta), pose_.theta);
      break;
    case Action::kRotateLeft:
      candidate = Pose(pose_.x, pose_.y, pose_.theta + turn);
      break;
    case Action::kRotateRight:
      candidate = Pose(pose_.x, pose_.y, pose_.theta - turn);
      break;
  }

  ++steps_;
  // Obstacles move first, so the move is checked against where they are now.
  const bool any_dynamic = std::any_of(placed_.begin(), placed_.end(),
                                       [](const PlacedObstacle& p) { return p.is_dynamic(); });
  if (any_dynamic) world_ = advance_obstacles(floor_, placed_, steps_);
  const bool collision = collides(candidate);
  std::size_t new_cells = 0;
  double reward = config_.reward.collision_penalty;
  if (!collision) {
    pose_ = candidate;
    new_cells = sense_and_merge();
    const double new_area =
        static_cast<double>(new_cells) * config_.resolution * config_.resolution;
    reward = config_.reward.task == RewardTask::kObstacleAvoidance
                 ? reward_obstacle_avoidance(false, new_area, action, config_.reward)
                 : reward_exploration(new_area, config_.reward);
  }
  done_ = steps_ >= config_.max_steps || (collision && config_.terminate_on_collision);
  return make_result(reward, collision, new_cells);
}

}  // namespace gridslam
