#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridslam/action.hpp"
#include "gridslam/floorplan.hpp"
#include "gridslam/grid.hpp"
#include "gridslam/obstacles.hpp"
#include "gridslam/rng.hpp"
#include "gridslam/sensing.hpp"

namespace gridslam {

enum class Mode { kExplorationUnknown, kNavigationKnown };
enum class RewardTask { kObstacleAvoidance, kExploration };

struct RobotSpec {
  double radius = 0.15;            // meters
  double linear_step = 0.3;        // meters per Forward
  double angular_step_deg = 10.0;  // degrees per rotation
};

struct RewardSpec {
  RewardTask task = RewardTask::kExploration;
  double alpha_s = 0.9;
  double alpha_a = 0.1;
  double collision_penalty = -1.0;
  double exploration_alpha = 1.0;
  double area_unit = 1.0;  // m² per unit of area reward
};

// Collision -> penalty; otherwise alpha_s * new_area/area_unit plus alpha_a
// when the action was Forward.
double reward_obstacle_avoidance(bool collision, double new_area, Action action,
                                 const RewardSpec& spec);
double reward_exploration(double new_area, const RewardSpec& spec);

// Known (non-Unknown) cell count times the cell area.
double explored_area(const OccupancyGrid& map);

struct EpisodeConfig {
  Mode mode = Mode::kExplorationUnknown;
  double resolution = 0.1;
  double wall_thickness = 0.1;
  SensorSpec sensor;
  NoiseSpec noise;
  RobotSpec robot;
  ObstacleSpec obstacles;
  double observation_side = 4.0;  // meters
  std::size_t max_steps = 200;
  RewardSpec reward;
  bool terminate_on_collision = false;
  std::uint64_t seed = 0;

  int observation_cells() const;
  void validate() const;
};

// Reads a JSON config. Missing keys keep their defaults; unknown keys and
// wrongly typed values raise SchemaError naming the key.
EpisodeConfig config_from_json(std::string_view text);
std::string config_to_json(const EpisodeConfig& config);

struct StepInfo {
  bool collision = false;
  std::size_t new_cells = 0;
  double explored_area = 0.0;
  Pose pose;
};

struct StepResult {
  OccupancyGrid observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// Single-owner episodic simulator: reset() loads a plan and places the
// robot, step() moves it and updates the built map through
// scan -> range noise -> registration noise -> merge.
class Environment {
 public:
  explicit Environment(EpisodeConfig config);

  // Reseeds the environment's random stream.
  void seed(std::uint64_t seed);

  StepResult reset(const FloorPlan& plan);
  // Resets on an already rasterized ground truth.
  StepResult reset(const OccupancyGrid& ground_truth);
  // Starts a new episode on the last plan.
  StepResult reset();

  // Throws InvalidArgument when called before reset or after done.
  StepResult step(Action action);

  const EpisodeConfig& config() const { return config_; }
  // Static ground truth without obstacles.
  const OccupancyGrid& floor_map() const { return floor_; }
  // Ground truth including obstacles at the current step.
  const OccupancyGrid& world() const { return world_; }
  const OccupancyGrid& built_map() const { return built_; }
  const std::vector<PlacedObstacle>& obstacles() const { return placed_; }
  const Pose& pose() const { return pose_; }
  std::size_t step_count() const { return steps_; }
  bool done() const { return done_; }
  bool active() const { return started_ && !done_; }

  // True when the robot body at `pose` overlaps an Obstacle cell of the
  // current world or leaves the map.
  bool collides(const Pose& pose) const;

 private:
  std::size_t sense_and_merge();
  StepResult make_result(double reward, bool collision, std::size_t new_cells) const;

  EpisodeConfig config_;
  Rng rng_;
  bool started_ = false;
  bool done_ = false;
  std::size_t steps_ = 0;
  OccupancyGrid floor_;
  OccupancyGrid world_;
  OccupancyGrid built_;
  std::size_t known_cells_ = 0;
  std::vector<PlacedObstacle> placed_;
  Pose pose_;
};

// Uniformly samples a Free cell center whose disc of `clearance` meters
// touches no Obstacle, with a uniform heading. Throws InvalidArgument when
// no such cell exists.
Pose sample_start_pose(const OccupancyGrid& ground_truth, double clearance, Rng& rng);

}  // namespace gridslam
