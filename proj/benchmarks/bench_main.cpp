#include <benchmark/benchmark.h>

#include "gridslam/env.hpp"
#include "gridslam/gridmap.hpp"
#include "gridslam/planner.hpp"
#include "gridslam/sensing.hpp"
#include "gridslam/synthetic.hpp"

namespace gs = gridslam;

namespace {

// Environment step on a square room; the argument is the side in meters.
void BM_EnvStep(benchmark::State& state) {
  gs::EpisodeConfig cfg;
  cfg.max_steps = 1u << 30;
  cfg.seed = 1;
  gs::Environment env(cfg);
  const double side = static_cast<double>(state.range(0));
  env.reset(gs::rectangular_room(side, side));
  gs::Rng policy(2);
  for (auto _ : state) benchmark::DoNotOptimize(env.step(gs::random_policy(policy)));
  state.counters["area_m2"] = side * side;
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EnvStep)->Arg(10)->Arg(25)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_EnvStepNoisy(benchmark::State& state) {
  gs::EpisodeConfig cfg;
  cfg.max_steps = 1u << 30;
  cfg.seed = 1;
  cfg.noise = {1.0, 0.02, 0.03};
  gs::Environment env(cfg);
  env.reset(gs::rectangular_room(20, 20));
  gs::Rng policy(2);
  for (auto _ : state) benchmark::DoNotOptimize(env.step(gs::random_policy(policy)));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EnvStepNoisy)->Unit(benchmark::kMicrosecond);

// One full sector scan; the argument is the sensor range in decimeters.
void BM_Scan(benchmark::State& state) {
  const gs::OccupancyGrid g = gs::rasterize(gs::rectangular_room(30, 30), 0.1, 0.1);
  gs::SensorSpec sensor;
  sensor.range = static_cast<double>(state.range(0)) / 10.0;
  const gs::Pose pose(0.05, 0.05, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(gs::scan(g, pose, sensor));
}
BENCHMARK(BM_Scan)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_Astar(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  gs::Rng rng(3);
  std::vector<bool> pass(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < pass.size(); ++i) pass[i] = rng.uniform() >= 0.25;
  pass.front() = pass.back() = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gs::astar(pass, n, n, {0, 0}, {n - 1, n - 1}));
  }
}
BENCHMARK(BM_Astar)->Arg(20)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_FrontierPolicy(benchmark::State& state) {
  gs::EpisodeConfig cfg;
  cfg.seed = 4;
  gs::Environment env(cfg);
  gs::Rng plan_rng(5);
  env.reset(gs::synthetic_house({}, plan_rng));
  gs::Rng rng(6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gs::frontier_policy(env.built_map(), env.pose(), {}, rng));
  }
}
BENCHMARK(BM_FrontierPolicy)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
