#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "gridslam/env.hpp"

namespace gridslam {

enum class PolicyKind { kRandom, kFrontier };

PolicyKind parse_policy(std::string_view name);
std::string_view policy_name(PolicyKind kind);

struct RolloutRecord {
  std::size_t step = 0;
  Pose pose;
  Action action = Action::kForward;
  double reward = 0.0;
  bool collision = false;
  std::size_t new_cells = 0;
};

// One JSON object per line:
// {"action":"forward","collision":false,"new_cells":12,"pose":{...},"reward":0.12,"step":1}
std::string rollout_line(const RolloutRecord& record);

struct EpisodeSummary {
  std::size_t steps = 0;
  double total_reward = 0.0;
  double explored_area = 0.0;
  std::size_t collisions = 0;
  Pose final_pose;
};

struct RolloutSinks {
  std::ostream* records = nullptr;       // JSON lines
  std::ostream* observations = nullptr;  // raw observation-palette rasters
};

// Resets `env` on `plan` and drives it with the scripted policy for up to
// `steps` steps (fewer if the episode ends). The policy stream is derived
// from `policy_seed`. The initial observation is written to the
// observation sink before the first step.
EpisodeSummary run_episode(Environment& env, const FloorPlan& plan, PolicyKind policy,
                           std::size_t steps, std::uint64_t policy_seed,
                           const RolloutSinks& sinks = {});

// Same, continuing an environment that has already been reset.
EpisodeSummary continue_episode(Environment& env, PolicyKind policy, std::size_t steps,
                                std::uint64_t policy_seed, const RolloutSinks& sinks = {});

}  // namespace gridslam
