#include "gridslam/env.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gridslam/error.hpp"
#include "gridslam/gridmap.hpp"
#include "gridslam/planner.hpp"
#include "gridslam/synthetic.hpp"

namespace gridslam {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

EpisodeConfig quiet_config(std::uint64_t seed = 1) {
  EpisodeConfig cfg;
  cfg.seed = seed;
  return cfg;
}

// ---- rewards ---------------------------------------------------------------

TEST(RewardTest, ObstacleAvoidanceExamples) {
  RewardSpec spec;
  spec.task = RewardTask::kObstacleAvoidance;
  EXPECT_DOUBLE_EQ(reward_obstacle_avoidance(false, 0.5, Action::kForward, spec), 0.9 * 0.5 + 0.1);
  EXPECT_DOUBLE_EQ(reward_obstacle_avoidance(false, 0.5, Action::kRotateLeft, spec), 0.45);
  EXPECT_DOUBLE_EQ(reward_obstacle_avoidance(false, 0.0, Action::kRotateRight, spec), 0.0);
  EXPECT_DOUBLE_EQ(reward_obstacle_avoidance(true, 3.0, Action::kForward, spec), -1.0);
  spec.area_unit = 0.5;
  EXPECT_DOUBLE_EQ(reward_obstacle_avoidance(false, 0.5, Action::kRotateLeft, spec), 0.9);
}

TEST(RewardTest, ExplorationIsScaledArea) {
  RewardSpec spec;
  EXPECT_DOUBLE_EQ(reward_exploration(2.0, spec), 2.0);
  spec.exploration_alpha = 0.25;
  EXPECT_DOUBLE_EQ(reward_exploration(2.0, spec), 0.5);
}

TEST(RewardTest, ExploredAreaCountsKnownCells) {
  OccupancyGrid g(10, 10, 0.1);
  g.set({0, 0}, CellState::kFree);
  g.set({0, 1}, CellState::kObstacle);
  EXPECT_NEAR(explored_area(g), 0.02, 1e-15);
}

// ---- config ----------------------------------------------------------------

TEST(ConfigTest, EmptyDocumentGivesDefaults) {
  const EpisodeConfig c = config_from_json("{}");
  EXPECT_EQ(c.mode, Mode::kExplorationUnknown);
  EXPECT_DOUBLE_EQ(c.resolution, 0.1);
  EXPECT_DOUBLE_EQ(c.observation_side, 4.0);
  EXPECT_EQ(c.max_steps, 200u);
  EXPECT_EQ(c.observation_cells(), 40);
}

TEST(ConfigTest, ObstacleAvoidanceDefaultsToSmallerWindow) {
  const EpisodeConfig c = config_from_json(R"({"reward": {"task": "obstacle-avoidance"}})");
  EXPECT_DOUBLE_EQ(c.observation_side, 3.0);
  EXPECT_EQ(c.reward.task, RewardTask::kObstacleAvoidance);
}

std::string schema_key(const std::string& text) {
  try {
    config_from_json(text);
  } catch (const SchemaError& e) {
    return e.key();
  }
  return "<no error>";
}

TEST(ConfigTest, SchemaErrorsNameTheKey) {
  EXPECT_EQ(schema_key(R"({"resolutoin": 0.1})"), "resolutoin");
  EXPECT_EQ(schema_key(R"({"sensor": {"rnage": 3}})"), "sensor.rnage");
  EXPECT_EQ(schema_key(R"({"resolution": "fine"})"), "resolution");
  EXPECT_EQ(schema_key(R"({"mode": "slam"})"), "mode");
  EXPECT_EQ(schema_key(R"({"max_steps": -3})"), "max_steps");
  EXPECT_EQ(schema_key(R"({"obstacles": {"count": "many"}})"), "obstacles.count");
  EXPECT_EQ(schema_key(R"({"obstacles": {"shapes": [{"type": "star"}]}})"),
            "obstacles.shapes[0].type");
}

TEST(ConfigTest, MalformedJsonIsParseError) {
  EXPECT_THROW(config_from_json("{\"resolution\": "), ParseError);
}

TEST(ConfigTest, InvalidValuesRejected) {
  EXPECT_THROW(config_from_json(R"({"resolution": 0})"), InvalidArgument);
  EXPECT_THROW(config_from_json(R"({"sensor": {"fov": 400}})"), InvalidArgument);
  EXPECT_THROW(config_from_json(R"({"noise": {"range_sigma": -1}})"), InvalidArgument);
  EXPECT_THROW(config_from_json(R"({"resolution": 1e999})"), InvalidArgument);
}

TEST(ConfigTest, CountForms) {
  auto range = [](const std::string& v) {
    const EpisodeConfig c = config_from_json(R"({"obstacles": {"count": )" + v + "}}");
    return std::pair{c.obstacles.count_min, c.obstacles.count_max};
  };
  EXPECT_EQ(range("3"), (std::pair{3, 3}));
  EXPECT_EQ(range("[1, 5]"), (std::pair{1, 5}));
  EXPECT_EQ(range("\"random(2..4)\""), (std::pair{2, 4}));
  EXPECT_THROW(range("[5, 1]"), InvalidArgument);
}

TEST(ConfigTest, RoundTrip) {
  const std::string text = R"({
    "mode": "navigation-known", "resolution": 0.05, "wall_thickness": 0.15,
    "sensor": {"range": 2.5, "fov": 120, "angular_step": 0.5},
    "noise": {"range_sigma": 1.0, "reg_theta_sigma": 0.01, "reg_xy_sigma": 0.02},
    "robot": {"radius": 0.2, "linear_step": 0.25, "angular_step": 15},
    "obstacles": {"count": [0, 3], "shapes": [{"type": "circle", "radius": 0.3},
                  {"type": "rectangle", "width": 0.4, "height": 0.6}],
                  "placements": [[1.0, 2.0]], "trajectories": [[[0, 0], [0.5, 0]]],
                  "max_attempts": 20},
    "reward": {"task": "obstacle-avoidance", "alpha_s": 0.8, "alpha_a": 0.2,
               "collision_penalty": -2, "area_unit": 0.5},
    "observation_side": 3.2, "max_steps": 50, "terminate_on_collision": true, "seed": 42})";
  const EpisodeConfig a = config_from_json(text);
  const std::string dumped = config_to_json(a);
  const EpisodeConfig b = config_from_json(dumped);
  EXPECT_EQ(config_to_json(b), dumped);
  EXPECT_EQ(b.mode, Mode::kNavigationKnown);
  EXPECT_DOUBLE_EQ(b.sensor.fov_deg, 120.0);
  EXPECT_EQ(b.obstacles.shapes.size(), 2u);
  EXPECT_EQ(b.obstacles.trajectories.at(0).size(), 2u);
  EXPECT_EQ(b.seed, 42u);
  EXPECT_TRUE(b.terminate_on_collision);
}

// ---- reset -----------------------------------------------------------------

TEST(EnvResetTest, NavigationModeSeesGroundTruth) {
  EpisodeConfig cfg = quiet_config();
  cfg.mode = Mode::kNavigationKnown;
  Environment env(cfg);
  const StepResult r = env.reset(rectangular_room(6, 5));
  EXPECT_EQ(env.built_map(), env.world());
  EXPECT_EQ(r.observation, crop_local(env.world(), env.pose(), cfg.observation_side));
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_FALSE(r.done);
}

TEST(EnvResetTest, ExplorationModeKnowsOnlyFirstSector) {
  Environment env(quiet_config());
  env.reset(rectangular_room(10, 10));
  const OccupancyGrid& built = env.built_map();
  ASSERT_EQ(built.width(), env.world().width());
  const double range = env.config().sensor.range;
  std::size_t known = 0;
  for (std::size_t i = 0; i < built.size(); ++i) {
    if (built.cells()[i] == CellState::kUnknown) continue;
    ++known;
    const Point2 p = built.cell_center(built.cell_at_index(i));
    EXPECT_LE(std::hypot(p.x - env.pose().x, p.y - env.pose().y), range + 0.1);
    EXPECT_EQ(built.cells()[i], env.world().cells()[i]);
  }
  EXPECT_GT(known, 0u);
  EXPECT_LT(known, env.world().count(CellState::kFree));
}

TEST(EnvResetTest, SameSeedSameEpisode) {
  EpisodeConfig cfg = quiet_config(5);
  cfg.noise = {1.0, 0.02, 0.03};
  cfg.obstacles.count_min = 1;
  cfg.obstacles.count_max = 3;
  Rng plan_rng(1);
  const FloorPlan plan = synthetic_house({}, plan_rng);
  Environment a(cfg);
  Environment b(cfg);
  EXPECT_EQ(a.reset(plan).observation, b.reset(plan).observation);
  Rng actions(3);
  for (int i = 0; i < 60; ++i) {
    const Action act = random_policy(actions);
    const StepResult ra = a.step(act);
    const StepResult rb = b.step(act);
    ASSERT_EQ(ra.observation, rb.observation);
    ASSERT_EQ(ra.reward, rb.reward);
    ASSERT_EQ(ra.info.pose, rb.info.pose);
  }
}

TEST(EnvResetTest, NoStartPoseThrows) {
  Environment env(quiet_config());
  EXPECT_THROW(env.reset(rectangular_room(0.3, 0.3)), InvalidArgument);
}

TEST(EnvResetTest, ResolutionMismatchThrows) {
  Environment env(quiet_config());
  EXPECT_THROW(env.reset(rasterize(rectangular_room(4, 4), 0.05, 0.1)), InvalidArgument);
}

// ---- step ------------------------------------------------------------------

TEST(EnvStepTest, RotationsChangeHeadingOnly) {
  Environment env(quiet_config());
  env.reset(rectangular_room(6, 6));
  const Pose p0 = env.pose();
  const StepResult r = env.step(Action::kRotateLeft);
  EXPECT_FALSE(r.info.collision);
  EXPECT_DOUBLE_EQ(r.info.pose.x, p0.x);
  EXPECT_DOUBLE_EQ(r.info.pose.y, p0.y);
  EXPECT_NEAR(normalize_angle(r.info.pose.theta - p0.theta), 10.0 * kDeg, 1e-12);
  const StepResult back = env.step(Action::kRotateRight);
  EXPECT_NEAR(normalize_angle(back.info.pose.theta - p0.theta), 0.0, 1e-12);
}

TEST(EnvStepTest, ForwardMovesOneStep) {
  Environment env(quiet_config(9));
  env.reset(rectangular_room(30, 30));
  const Pose p0 = env.pose();
  const StepResult r = env.step(Action::kForward);
  if (r.info.collision) GTEST_SKIP() << "start pose faces a wall";
  EXPECT_NEAR(r.info.pose.x, p0.x + 0.3 * std::cos(p0.theta), 1e-12);
  EXPECT_NEAR(r.info.pose.y, p0.y + 0.3 * std::sin(p0.theta), 1e-12);
}

TEST(EnvStepTest, DrivingIntoWallCollides) {
  EpisodeConfig cfg = quiet_config(2);
  cfg.max_steps = 100;
  Environment env(cfg);
  env.reset(rectangular_room(3, 3));
  Pose last = env.pose();
  for (int i = 0; i < 20; ++i) {
    const StepResult r = env.step(Action::kForward);
    if (r.info.collision) {
      EXPECT_EQ(r.info.pose, last);
      EXPECT_DOUBLE_EQ(r.reward, -1.0);
      EXPECT_EQ(r.info.new_cells, 0u);
      EXPECT_FALSE(r.done);
      return;
    }
    last = r.info.pose;
  }
  FAIL() << "never reached a wall";
}

TEST(EnvStepTest, TerminateOnCollision) {
  EpisodeConfig cfg = quiet_config(2);
  cfg.terminate_on_collision = true;
  Environment env(cfg);
  env.reset(rectangular_room(3, 3));
  StepResult r;
  do r = env.step(Action::kForward);
  while (!r.info.collision);
  EXPECT_TRUE(r.done);
  EXPECT_THROW(env.step(Action::kForward), InvalidArgument);
}

TEST(EnvStepTest, DoneAtMaxSteps) {
  Environment env(quiet_config());
  env.reset(rectangular_room(5, 5));
  for (int i = 1; i <= 200; ++i) {
    const StepResult r = env.step(Action::kRotateLeft);
    EXPECT_EQ(r.done, i == 200);
  }
  EXPECT_EQ(env.step_count(), 200u);
  EXPECT_THROW(env.step(Action::kRotateLeft), InvalidArgument);
  env.reset();
  EXPECT_NO_THROW(env.step(Action::kRotateLeft));
}

TEST(EnvStepTest, StepBeforeResetThrows) {
  Environment env(quiet_config());
  EXPECT_THROW(env.step(Action::kForward), InvalidArgument);
  EXPECT_THROW(env.reset(), InvalidArgument);
}

// ---- properties over random episodes ---------------------------------------

struct EpisodeCase {
  std::uint64_t seed;
  bool noisy;
  RewardTask task;
};

class EnvPropertyTest : public ::testing::TestWithParam<EpisodeCase> {};

TEST_P(EnvPropertyTest, Invariants) {
  const EpisodeCase tc = GetParam();
  EpisodeConfig cfg = quiet_config(tc.seed);
  cfg.reward.task = tc.task;
  cfg.observation_side = 3.0;
  cfg.obstacles.count_min = 0;
  cfg.obstacles.count_max = 4;
  if (tc.noisy) cfg.noise = {1.0, 0.03, 0.03};
  Rng plan_rng(tc.seed);
  Environment env(cfg);
  StepResult r = env.reset(synthetic_house({}, plan_rng));
  Rng policy(tc.seed + 100);
  const double cell_area = cfg.resolution * cfg.resolution;
  const double area0 = r.info.explored_area;
  double prev_area = area0;
  double total = 0.0;
  while (!r.done) {
    const Action a = random_policy(policy);
    r = env.step(a);
    ASSERT_EQ(r.observation.width(), cfg.observation_cells());
    ASSERT_EQ(r.observation.height(), cfg.observation_cells());
    ASSERT_GE(r.info.explored_area, prev_area);
    EXPECT_NEAR(r.info.explored_area - prev_area, r.info.new_cells * cell_area, 1e-9);
    EXPECT_NEAR(r.info.explored_area, explored_area(env.built_map()), 1e-9);
    EXPECT_FALSE(env.collides(env.pose()));
    const double new_area = r.info.new_cells * cell_area;
    const double expected = tc.task == RewardTask::kExploration
                                ? reward_exploration(new_area, cfg.reward)
                                : reward_obstacle_avoidance(r.info.collision, new_area, a, cfg.reward);
    if (tc.task == RewardTask::kExploration && r.info.collision) {
      EXPECT_DOUBLE_EQ(r.reward, cfg.reward.collision_penalty);
    } else {
      EXPECT_DOUBLE_EQ(r.reward, expected);
    }
    if (!r.info.collision) total += r.reward;
    prev_area = r.info.explored_area;
  }
  if (tc.task == RewardTask::kExploration) {
    EXPECT_NEAR(total, cfg.reward.exploration_alpha * (r.info.explored_area - area0), 1e-6);
  }
  if (!tc.noisy) {
    // Without noise the built map never contradicts the world.
    const OccupancyGrid& b = env.built_map();
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b.cells()[i] != CellState::kUnknown) ASSERT_EQ(b.cells()[i], env.world().cells()[i]);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Episodes, EnvPropertyTest,
                         ::testing::Values(EpisodeCase{1, false, RewardTask::kExploration},
                                           EpisodeCase{2, false, RewardTask::kObstacleAvoidance},
                                           EpisodeCase{3, true, RewardTask::kExploration},
                                           EpisodeCase{4, true, RewardTask::kObstacleAvoidance},
                                           EpisodeCase{5, false, RewardTask::kExploration},
                                           EpisodeCase{6, true, RewardTask::kExploration}));

TEST(EnvExplorationTest, FrontierPolicyMapsWholeRoom) {
  EpisodeConfig cfg = quiet_config(4);
  cfg.max_steps = 2000;
  Environment env(cfg);
  env.reset(rectangular_room(8, 8));
  Rng rng(1);
  const FrontierParams params;
  while (env.active()) {
    env.step(frontier_policy(env.built_map(), env.pose(), params, rng));
    if (env.built_map().count(CellState::kFree) == env.world().count(CellState::kFree)) break;
  }
  EXPECT_EQ(env.built_map().count(CellState::kFree), env.world().count(CellState::kFree));
  EXPECT_EQ(env.world().count(CellState::kFree),
            rasterize(rectangular_room(8, 8), 0.1, 0.1).count(CellState::kFree));
}

TEST(EnvExplorationTest, FrontierPolicyPassesDoors) {
  // Regression: the policy used to stall beside a door whose far side lay
  // in the sensor shadow of the jamb.
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Rng plan_rng(500 + seed);
    HouseOptions opt;
    opt.cols = 3;
    EpisodeConfig cfg = quiet_config(seed);
    cfg.max_steps = 1500;
    Environment env(cfg);
    env.reset(synthetic_house(opt, plan_rng));
    Rng rng(seed);
    while (env.active() && !find_frontiers(env.built_map()).empty()) {
      env.step(frontier_policy(env.built_map(), env.pose(), {}, rng));
    }
    EXPECT_EQ(env.built_map().count(CellState::kFree), env.world().count(CellState::kFree))
        << "seed " << seed;
  }
}

TEST(EnvDynamicTest, MovingObstacleFollowsTrajectory) {
  EpisodeConfig cfg = quiet_config(3);
  cfg.obstacles.shapes = {CircleShape{0.2}};
  cfg.obstacles.trajectories = {{{-3.0, 3.0}, {-2.5, 3.0}, {-2.0, 3.0}}};
  Environment env(cfg);
  env.reset(rectangular_room(8, 8));
  for (std::size_t t = 1; t <= 6; ++t) {
    env.step(Action::kRotateLeft);
    const Point2 c = cfg.obstacles.trajectories[0][t % 3];
    EXPECT_EQ(env.world()[env.world().world_to_cell(c)], CellState::kObstacle) << t;
    EXPECT_EQ(env.floor_map(), rasterize(rectangular_room(8, 8), 0.1, 0.1));
  }
}

TEST(StartPoseTest, ClearanceRespected) {
  const OccupancyGrid g = rasterize(rectangular_room(2, 2), 0.1, 0.1);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const Pose p = sample_start_pose(g, 0.25, rng);
    for (const Cell c : footprint_cells(g, p.position(), 0.25)) EXPECT_EQ(g[c], CellState::kFree);
    EXPECT_LE(std::abs(p.theta), std::numbers::pi);
  }
}

}  // namespace
}  // namespace gridslam
