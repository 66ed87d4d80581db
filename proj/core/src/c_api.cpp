#include "gridslam/c_api.h"

#include <exception>
#include <memory>
#include <new>
#include <string>

#include "gridslam/env.hpp"
#include "gridslam/error.hpp"
#include "gridslam/image.hpp"

struct gridslam_env {
  gridslam::Environment env;
  gridslam::FloorPlan plan;
  bool has_episode = false;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs `body`, mapping exceptions to error codes.
template <typename F>
int guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const gridslam::ParseError& e) {
    return fail(GRIDSLAM_E_PARSE, e.what());
  } catch (const gridslam::SchemaError& e) {
    return fail(GRIDSLAM_E_SCHEMA, e.what());
  } catch (const gridslam::InvalidArgument& e) {
    return fail(GRIDSLAM_E_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GRIDSLAM_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GRIDSLAM_E_INTERNAL, e.what());
  }
}

int emit(const gridslam_env& h, const gridslam::StepResult& r, uint8_t* observation,
         size_t capacity, gridslam_step_info* info) {
  if (observation != nullptr) {
    gridslam::to_raster(r.observation, gridslam::Palette::kObservation,
                        std::span<std::uint8_t>(observation, capacity));
  }
  if (info != nullptr) {
    info->reward = r.reward;
    info->done = r.done ? 1 : 0;
    info->collision = r.info.collision ? 1 : 0;
    info->new_cells = r.info.new_cells;
    info->explored_area = r.info.explored_area;
    info->x = r.info.pose.x;
    info->y = r.info.pose.y;
    info->theta = r.info.pose.theta;
  }
  (void)h;
  return GRIDSLAM_OK;
}

int check_buffer(const gridslam_env* h, const uint8_t* observation, size_t capacity) {
  if (observation == nullptr) return GRIDSLAM_OK;
  const auto side = static_cast<size_t>(h->env.config().observation_cells());
  if (capacity < side * side) {
    return fail(GRIDSLAM_E_BUFFER, "observation buffer needs " + std::to_string(side * side) +
                                       " bytes, got " + std::to_string(capacity));
  }
  return GRIDSLAM_OK;
}

}  // namespace

extern "C" {

int gridslam_env_create(const char* config_json, const char* plan_json, uint64_t seed,
                        gridslam_env** out) {
  if (out == nullptr) return fail(GRIDSLAM_E_INVALID, "out must not be null");
  *out = nullptr;
  if (plan_json == nullptr) return fail(GRIDSLAM_E_INVALID, "plan_json must not be null");
  return guarded([&] {
    gridslam::EpisodeConfig cfg =
        config_json != nullptr ? gridslam::config_from_json(config_json) : gridslam::EpisodeConfig{};
    cfg.seed = seed;
    gridslam::FloorPlan plan = gridslam::load_json(plan_json);
    auto handle = std::make_unique<gridslam_env>(
        gridslam_env{gridslam::Environment(std::move(cfg)), std::move(plan), false});
    *out = handle.release();
    return GRIDSLAM_OK;
  });
}

void gridslam_env_destroy(gridslam_env* env) { delete env; }

int gridslam_env_observation_side(const gridslam_env* env, int* side) {
  if (env == nullptr || side == nullptr) return fail(GRIDSLAM_E_INVALID, "null argument");
  *side = env->env.config().observation_cells();
  return GRIDSLAM_OK;
}

int gridslam_env_seed(gridslam_env* env, uint64_t seed) {
  if (env == nullptr) return fail(GRIDSLAM_E_INVALID, "env must not be null");
  env->env.seed(seed);
  return GRIDSLAM_OK;
}

int gridslam_env_reset(gridslam_env* env, uint8_t* observation, size_t capacity,
                       gridslam_step_info* info) {
  if (env == nullptr) return fail(GRIDSLAM_E_INVALID, "env must not be null");
  if (const int rc = check_buffer(env, observation, capacity); rc != GRIDSLAM_OK) return rc;
  return guarded([&] {
    const gridslam::StepResult r = env->env.reset(env->plan);
    env->has_episode = true;
    return emit(*env, r, observation, capacity, info);
  });
}

int gridslam_env_step(gridslam_env* env, int action, uint8_t* observation, size_t capacity,
                      gridslam_step_info* info) {
  if (env == nullptr) return fail(GRIDSLAM_E_INVALID, "env must not be null");
  if (action < 0 || action >= static_cast<int>(gridslam::kActionCount)) {
    return fail(GRIDSLAM_E_INVALID, "action must be 0, 1 or 2");
  }
  if (!env->has_episode || env->env.done()) {
    return fail(GRIDSLAM_E_STATE, "step requires an active episode; call reset first");
  }
  if (const int rc = check_buffer(env, observation, capacity); rc != GRIDSLAM_OK) return rc;
  return guarded([&] {
    const gridslam::StepResult r = env->env.step(static_cast<gridslam::Action>(action));
    return emit(*env, r, observation, capacity, info);
  });
}

const char* gridslam_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
