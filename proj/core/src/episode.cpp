#include "gridslam/episode.hpp"

#include "gridslam/error.hpp"
#include "gridslam/image.hpp"
#include "gridslam/planner.hpp"
#include "json.hpp"

namespace gridslam {
namespace {

void write_observation(std::ostream* sink, const OccupancyGrid& obs) {
  if (sink == nullptr) return;
  const auto raster = to_raster(obs, Palette::kObservation);
  sink->write(reinterpret_cast<const char*>(raster.data()),
              static_cast<std::streamsize>(raster.size()));
}

}  // namespace

PolicyKind parse_policy(std::string_view name) {
  if (name == "random") return PolicyKind::kRandom;
  if (name == "frontier") return PolicyKind::kFrontier;
  throw InvalidArgument("unknown policy '" + std::string(name) + "' (random, frontier)");
}

std::string_view policy_name(PolicyKind kind) {
  return kind == PolicyKind::kRandom ? "random" : "frontier";
}

std::string rollout_line(const RolloutRecord& r) {
  nlohmann::json j;
  j["step"] = r.step;
  j["pose"] = {{"x", r.pose.x}, {"y", r.pose.y}, {"theta", r.pose.theta}};
  j["action"] = std::string(action_name(r.action));
  j["reward"] = r.reward;
  j["collision"] = r.collision;
  j["new_cells"] = r.new_cells;
  return j.dump();
}

EpisodeSummary run_episode(Environment& env, const FloorPlan& plan, PolicyKind policy,
                           std::size_t steps, std::uint64_t policy_seed,
                           const RolloutSinks& sinks) {
  const StepResult first = env.reset(plan);
  write_observation(sinks.observations, first.observation);
  return continue_episode(env, policy, steps, policy_seed, sinks);
}

EpisodeSummary continue_episode(Environment& env, PolicyKind policy, std::size_t steps,
                                std::uint64_t policy_seed, const RolloutSinks& sinks) {
  Rng rng(policy_seed);
  const auto& cfg = env.config();
  const FrontierParams params{cfg.robot.radius, cfg.robot.linear_step, cfg.robot.angular_step_deg};

  EpisodeSummary summary;
  summary.final_pose = env.pose();
  summary.explored_area = explored_area(env.built_map());
  for (std::size_t i = 0; i < steps && env.active(); ++i) {
    const Action action = policy == PolicyKind::kRandom
                              ? random_policy(rng)
                              : frontier_policy(env.built_map(), env.pose(), params, rng);
    const StepResult r = env.step(action);
    ++summary.steps;
    summary.total_reward += r.reward;
    summary.collisions += r.info.collision ? 1 : 0;
    summary.explored_area = r.info.explored_area;
    summary.final_pose = r.info.pose;
    if (sinks.records != nullptr) {
      *sinks.records << rollout_line({env.step_count(), r.info.pose, action, r.reward,
                                      r.info.collision, r.info.new_cells})
                     << '\n';
    }
    write_observation(sinks.observations, r.observation);
  }
  return summary;
}

}  // namespace gridslam
