#include "gridslam/c_api.h"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "gridslam/env.hpp"
#include "gridslam/floorplan.hpp"
#include "gridslam/image.hpp"
#include "gridslam/synthetic.hpp"

namespace gridslam {
namespace {

const char* kConfig = R"({"noise": {"range_sigma": 1.0, "reg_xy_sigma": 0.02}, "max_steps": 40})";

std::string plan_json() {
  Rng rng(8);
  return save_json(synthetic_house({}, rng));
}

struct Handle {
  gridslam_env* env = nullptr;
  ~Handle() { gridslam_env_destroy(env); }
};

TEST(CApiTest, MatchesEnvironmentByteForByte) {
  const std::string plan = plan_json();
  Handle h;
  ASSERT_EQ(gridslam_env_create(kConfig, plan.c_str(), 77, &h.env), GRIDSLAM_OK)
      << gridslam_last_error();
  int side = 0;
  ASSERT_EQ(gridslam_env_observation_side(h.env, &side), GRIDSLAM_OK);
  EXPECT_EQ(side, 40);

  EpisodeConfig cfg = config_from_json(kConfig);
  cfg.seed = 77;
  Environment env(cfg);
  const StepResult first = env.reset(load_json(plan));

  std::vector<std::uint8_t> buf(static_cast<std::size_t>(side * side));
  gridslam_step_info info{};
  ASSERT_EQ(gridslam_env_reset(h.env, buf.data(), buf.size(), &info), GRIDSLAM_OK);
  EXPECT_EQ(buf, to_raster(first.observation, Palette::kObservation));

  Rng actions(4);
  for (int i = 0; i < 40; ++i) {
    const int a = static_cast<int>(actions.below(3));
    const StepResult r = env.step(static_cast<Action>(a));
    ASSERT_EQ(gridslam_env_step(h.env, a, buf.data(), buf.size(), &info), GRIDSLAM_OK);
    ASSERT_EQ(buf, to_raster(r.observation, Palette::kObservation)) << i;
    EXPECT_EQ(info.reward, r.reward);
    EXPECT_EQ(info.done, r.done ? 1 : 0);
    EXPECT_EQ(info.collision, r.info.collision ? 1 : 0);
    EXPECT_EQ(info.new_cells, r.info.new_cells);
    EXPECT_EQ(info.x, r.info.pose.x);
    EXPECT_EQ(info.theta, r.info.pose.theta);
  }
  EXPECT_EQ(info.done, 1);
  EXPECT_EQ(gridslam_env_step(h.env, 0, buf.data(), buf.size(), &info), GRIDSLAM_E_STATE);
}

TEST(CApiTest, ErrorCodes) {
  const std::string plan = plan_json();
  gridslam_env* bad = nullptr;
  EXPECT_EQ(gridslam_env_create("{\"resolution\":", plan.c_str(), 1, &bad), GRIDSLAM_E_PARSE);
  EXPECT_EQ(bad, nullptr);
  EXPECT_EQ(gridslam_env_create(R"({"bogus": 1})", plan.c_str(), 1, &bad), GRIDSLAM_E_SCHEMA);
  EXPECT_NE(std::string(gridslam_last_error()).find("bogus"), std::string::npos);
  EXPECT_EQ(gridslam_env_create(R"({"resolution": -1})", plan.c_str(), 1, &bad),
            GRIDSLAM_E_INVALID);

  Handle h;
  ASSERT_EQ(gridslam_env_create(nullptr, plan.c_str(), 1, &h.env), GRIDSLAM_OK);
  std::vector<std::uint8_t> small(10);
  gridslam_step_info info{};
  EXPECT_EQ(gridslam_env_step(h.env, 0, nullptr, 0, &info), GRIDSLAM_E_STATE);
  EXPECT_EQ(gridslam_env_reset(h.env, small.data(), small.size(), &info), GRIDSLAM_E_BUFFER);
  ASSERT_EQ(gridslam_env_reset(h.env, nullptr, 0, &info), GRIDSLAM_OK);
  EXPECT_EQ(gridslam_env_step(h.env, 3, nullptr, 0, &info), GRIDSLAM_E_INVALID);
  EXPECT_EQ(gridslam_env_step(h.env, -1, nullptr, 0, &info), GRIDSLAM_E_INVALID);
  EXPECT_EQ(gridslam_env_step(h.env, 1, nullptr, 0, &info), GRIDSLAM_OK);
  EXPECT_STREQ(gridslam_last_error(), "");
}

TEST(CApiTest, ReseedRestartsStream) {
  const std::string plan = plan_json();
  Handle h;
  ASSERT_EQ(gridslam_env_create(kConfig, plan.c_str(), 5, &h.env), GRIDSLAM_OK);
  std::vector<std::uint8_t> a(1600);
  std::vector<std::uint8_t> b(1600);
  gridslam_step_info ia{};
  gridslam_step_info ib{};
  ASSERT_EQ(gridslam_env_reset(h.env, a.data(), a.size(), &ia), GRIDSLAM_OK);
  ASSERT_EQ(gridslam_env_seed(h.env, 5), GRIDSLAM_OK);
  ASSERT_EQ(gridslam_env_reset(h.env, b.data(), b.size(), &ib), GRIDSLAM_OK);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ia.x, ib.x);
}

}  // namespace
}  // namespace gridslam
