#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "gridslam/env.hpp"
#include "gridslam/episode.hpp"
#include "gridslam/gridmap.hpp"
#include "gridslam/image.hpp"
#include "gridslam/planner.hpp"
#include "gridslam/synthetic.hpp"
#include "gridslam/worldgen.hpp"
#include "json.hpp"

namespace gridslam::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Paths that do not exist as given are looked up under $GRIDSLAM_DATA.
fs::path resolve_input(const fs::path& path) {
  if (fs::exists(path)) return path;
  if (const char* data = std::getenv("GRIDSLAM_DATA"); data != nullptr && path.is_relative()) {
    const fs::path alt = fs::path(data) / path;
    if (fs::exists(alt)) return alt;
  }
  throw InvalidArgument("input not found: '" + path.string() + "'");
}

// Files under the given paths with one of `extensions`, sorted. With no
// inputs the dataset directory from $GRIDSLAM_DATA is used.
std::vector<fs::path> collect_inputs(std::vector<fs::path> inputs,
                                     const std::vector<std::string>& extensions) {
  if (inputs.empty()) {
    const char* data = std::getenv("GRIDSLAM_DATA");
    if (data == nullptr) throw InvalidArgument("no inputs given and GRIDSLAM_DATA is not set");
    inputs.emplace_back(data);
  }
  auto wanted = [&](const fs::path& p) {
    return std::find(extensions.begin(), extensions.end(), p.extension().string()) !=
           extensions.end();
  };
  std::vector<fs::path> files;
  for (const auto& raw : inputs) {
    const fs::path p = resolve_input(raw);
    if (fs::is_directory(p)) {
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && wanted(e.path())) files.push_back(e.path());
      }
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  if (files.empty()) throw InvalidArgument("no input files found");
  return files;
}

// Runs fn(i) for i in [0, n) on a small pool. The first failure by index
// is rethrown so errors do not depend on scheduling.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F fn) {
  std::size_t workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::vector<std::exception_ptr> errors(n);
  auto body = [&](std::size_t w) {
    for (std::size_t i = w; i < n; i += workers) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SchemaAdapter adapter_for(const GlobalOptions& g) {
  if (g.schema == "canonical") return SchemaAdapter::canonical();
  if (g.schema == "houseexpo") return SchemaAdapter::houseexpo();
  throw InvalidArgument("unknown schema '" + g.schema + "' (canonical, houseexpo)");
}

EpisodeConfig load_config(const GlobalOptions& g) {
  if (!g.config) return EpisodeConfig{};
  return config_from_json(read_text(resolve_input(*g.config)));
}

// --seed wins, then a "seed" key in the config file, then OS entropy. The
// seed actually used is always reported so a run can be replayed.
std::uint64_t resolve_seed(const GlobalOptions& g) {
  std::uint64_t seed = 0;
  if (g.seed) {
    seed = *g.seed;
  } else if (g.config) {
    const json doc = json::parse(read_text(resolve_input(*g.config)), nullptr, false);
    if (doc.is_object() && doc.contains("seed") && doc["seed"].is_number_unsigned()) {
      seed = doc["seed"].get<std::uint64_t>();
    } else {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    }
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  }
  std::cerr << "gridslam: seed " << seed << '\n';
  return seed;
}

bool is_png(const fs::path& p) { return p.extension() == ".png"; }

OccupancyGrid load_grid(const fs::path& path, const GlobalOptions& g, const EpisodeConfig& cfg) {
  const fs::path p = resolve_input(path);
  if (is_png(p)) return read_png_file(p, Palette::kDataset, cfg.resolution);
  return rasterize(load_json_file(p, adapter_for(g)), cfg.resolution, cfg.wall_thickness);
}

const fs::path& require_out(const GlobalOptions& g, const char* what) {
  if (!g.out) throw InvalidArgument(std::string("--out is required: ") + what);
  return *g.out;
}

// Writes a report to --out when the command has no other file output,
// otherwise to stdout.
void emit_report(const std::string& text, const std::optional<fs::path>& path) {
  if (path) {
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + path->string() + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    return;
  }
  std::cout << text;
  if (!text.empty() && text.back() != '\n') std::cout << '\n';
}

std::string number(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

// Two-column key/value table.
std::string kv_table(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  std::ostringstream s;
  for (const auto& [k, v] : rows) s << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
  return s.str();
}

std::string grid_summary(const OccupancyGrid& grid, const ordered_json& extra, Format format) {
  ordered_json j;
  j["width"] = grid.width();
  j["height"] = grid.height();
  j["resolution"] = grid.resolution();
  j["origin"] = {grid.origin().x, grid.origin().y};
  j["free_cells"] = grid.count(CellState::kFree);
  j["obstacle_cells"] = grid.count(CellState::kObstacle);
  j["unknown_cells"] = grid.count(CellState::kUnknown);
  for (const auto& [k, v] : extra.items()) j[k] = v;
  if (format == Format::kJson) return j.dump(2);
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [k, v] : j.items()) rows.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
  return kv_table(rows);
}

}  // namespace

int cmd_rasterize(const GlobalOptions& g, const RasterizeArgs& a) {
  const EpisodeConfig cfg = load_config(g);
  const fs::path& out = require_out(g, "PNG path for the rasterized grid");
  const FloorPlan plan = load_json_file(resolve_input(a.plan), adapter_for(g));
  const OccupancyGrid grid = rasterize(plan, cfg.resolution, cfg.wall_thickness);
  write_png_file(out, grid, Palette::kDataset);
  std::cout << grid_summary(grid, {{"id", plan.id}, {"output", out.string()}}, g.format);
  if (g.format == Format::kJson) std::cout << '\n';
  return 0;
}

int cmd_render(const GlobalOptions& g, const RenderArgs& a) {
  const EpisodeConfig cfg = load_config(g);
  const fs::path& out = require_out(g, "PNG path for the rendered image");
  const Palette palette = parse_palette(a.palette);
  const OccupancyGrid grid = load_grid(a.input, g, cfg);
  write_png_file(out, grid, palette);
  std::cout << grid_summary(grid, {{"palette", std::string(palette_name(palette))}, {"output", out.string()}},
                            g.format);
  if (g.format == Format::kJson) std::cout << '\n';
  return 0;
}

int cmd_stats(const GlobalOptions& g, const StatsArgs& a) {
  const auto files = collect_inputs(a.inputs, {".json"});
  const SchemaAdapter adapter = adapter_for(g);
  std::vector<FloorPlan> plans(files.size());
  parallel_for(files.size(), g.threads, [&](std::size_t i) {
    plans[i] = load_json_file(files[i], adapter);
  });
  const StatsReport report = corpus_stats(plans, a.implicit_room);
  emit_report(g.format == Format::kJson ? stats_to_json(report) : stats_to_table(report), g.out);
  return 0;
}

int cmd_repair(const GlobalOptions& g, const RepairArgs& a) {
  const EpisodeConfig cfg = load_config(g);
  const fs::path& out = require_out(g, "PNG path for the repaired grid");
  const std::uint64_t seed = resolve_seed(g);
  Rng rng(seed);
  OccupancyGrid grid = fill_small_cells(load_grid(a.input, g, cfg), a.fill_area);

  RepairOptions options;
  options.samples = a.samples;
  options.opening_width = a.opening_width;
  RepairResult result;
  try {
    result = repair_connectivity(grid, options, rng);
  } catch (const RepairError& e) {
    std::cout << repair_report_to_json(e.report()) << '\n';
    throw PostconditionFailed(e.what());
  }
  OccupancyGrid final_grid = a.refine ? refine_and_crop(result.grid) : result.grid;
  write_png_file(out, final_grid, Palette::kDataset);

  if (g.format == Format::kJson) {
    json report = json::parse(repair_report_to_json(result.report));
    report["seed"] = seed;
    report["output"] = out.string();
    report["width"] = final_grid.width();
    report["height"] = final_grid.height();
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << kv_table({{"seed", std::to_string(seed)},
                           {"sampled points", std::to_string(result.report.sampled_points)},
                           {"pairs checked", std::to_string(result.report.pairs_checked)},
                           {"pairs replanned", std::to_string(result.report.pairs_replanned)},
                           {"openings carved", std::to_string(result.report.carved.size())},
                           {"connected", result.report.connected ? "yes" : "no"},
                           {"size", std::to_string(final_grid.width()) + "x" +
                                        std::to_string(final_grid.height())},
                           {"output", out.string()}});
  }
  return 0;
}

int cmd_dedup(const GlobalOptions& g, const DedupArgs& a) {
  const EpisodeConfig cfg = load_config(g);
  const auto files = collect_inputs(a.inputs, {".json", ".png"});
  std::vector<OccupancyGrid> grids(files.size());
  parallel_for(files.size(), g.threads, [&](std::size_t i) { grids[i] = load_grid(files[i], g, cfg); });
  const auto rep = dedup_representatives(grids, a.threshold, g.threads);

  ordered_json j;
  j["threshold"] = a.threshold;
  j["inputs"] = files.size();
  j["kept"] = json::array();
  j["duplicates"] = json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (rep[i] == i) {
      j["kept"].push_back(files[i].string());
    } else {
      j["duplicates"].push_back({{"path", files[i].string()}, {"duplicate_of", files[rep[i]].string()}});
    }
  }
  if (g.format == Format::kJson) {
    emit_report(j.dump(2), g.out);
  } else {
    std::ostringstream s;
    s << "inputs " << files.size() << ", kept " << j["kept"].size() << ", duplicates "
      << j["duplicates"].size() << '\n';
    for (const auto& d : j["duplicates"]) {
      s << "  " << d["path"].get<std::string>() << " -> " << d["duplicate_of"].get<std::string>() << '\n';
    }
    emit_report(s.str(), g.out);
  }
  return 0;
}

int cmd_run(const GlobalOptions& g, const RunArgs& a) {
  EpisodeConfig cfg = load_config(g);
  const PolicyKind policy = parse_policy(a.policy);
  const std::size_t steps = a.steps.value_or(cfg.max_steps);
  if (steps > cfg.max_steps) cfg.max_steps = steps;
  const std::uint64_t seed = resolve_seed(g);
  cfg.seed = seed;
  const FloorPlan plan = load_json_file(resolve_input(a.plan), adapter_for(g));

  std::ofstream records;
  std::ofstream observations;
  RolloutSinks sinks;
  if (g.out) {
    fs::create_directories(*g.out);
    records.open(*g.out / "rollout.jsonl", std::ios::binary);
    observations.open(*g.out / "observations.u8", std::ios::binary);
    if (!records || !observations) throw InvalidArgument("cannot write dumps to '" + g.out->string() + "'");
    sinks.records = &records;
    sinks.observations = &observations;
  }
  Environment env(cfg);
  const EpisodeSummary s = run_episode(env, plan, policy, steps, Rng::derive_seed(seed, 1), sinks);

  ordered_json j;
  j["plan"] = plan.id;
  j["policy"] = std::string(policy_name(policy));
  j["seed"] = seed;
  j["steps"] = s.steps;
  j["total_reward"] = s.total_reward;
  j["explored_area"] = s.explored_area;
  j["collisions"] = s.collisions;
  j["final_pose"] = {{"x", s.final_pose.x}, {"y", s.final_pose.y}, {"theta", s.final_pose.theta}};
  j["observation_side"] = cfg.observation_cells();
  if (g.out) {
    std::ofstream summary(*g.out / "summary.json", std::ios::binary);
    summary << j.dump(2) << '\n';
  }
  if (g.format == Format::kJson) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << kv_table({{"plan", plan.id},
                           {"policy", std::string(policy_name(policy))},
                           {"seed", std::to_string(seed)},
                           {"steps", std::to_string(s.steps)},
                           {"total reward", number(s.total_reward, 10)},
                           {"explored area m2", number(s.explored_area, 10)},
                           {"collisions", std::to_string(s.collisions)}});
  }
  return 0;
}

int cmd_bench(const GlobalOptions& g, const BenchArgs& a) {
  EpisodeConfig cfg = load_config(g);
  cfg.max_steps = std::max<std::size_t>(a.steps, 1);
  const std::uint64_t seed = resolve_seed(g);

  std::vector<FloorPlan> plans;
  for (const auto& p : a.plans) plans.push_back(load_json_file(resolve_input(p), adapter_for(g)));
  for (const double side : a.square_rooms) {
    plans.push_back(rectangular_room(side, side, "square-" + number(side) + "m"));
  }
  if (plans.size() < 2) throw InvalidArgument("bench needs at least two maps");

  struct Row {
    std::string id;
    double area = 0.0;
    double mean_us = 0.0;
    double p95_us = 0.0;
    double steps_per_s = 0.0;
    std::size_t steps = 0;
  };
  std::vector<Row> rows;
  // Maps run one after another: timing on a shared pool would measure
  // contention rather than the step.
  for (std::size_t m = 0; m < plans.size(); ++m) {
    EpisodeConfig c = cfg;
    c.seed = Rng::derive_seed(seed, 2 * m);
    Environment env(c);
    env.reset(plans[m]);
    Rng policy(Rng::derive_seed(seed, 2 * m + 1));
    std::vector<double> times;
    times.reserve(a.steps);
    for (std::size_t i = 0; i < a.steps && env.active(); ++i) {
      const Action action = random_policy(policy);
      const auto t0 = std::chrono::steady_clock::now();
      env.step(action);
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
    }
    Row row;
    row.id = plans[m].id;
    const OccupancyGrid& floor = env.floor_map();
    row.area = static_cast<double>(floor.count(CellState::kFree)) * floor.resolution() * floor.resolution();
    row.steps = times.size();
    if (!times.empty()) {
      double sum = 0.0;
      for (const double t : times) sum += t;
      row.mean_us = sum / static_cast<double>(times.size());
      std::sort(times.begin(), times.end());
      const auto k = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(times.size()))) - 1;
      row.p95_us = times[std::min(k, times.size() - 1)];
      row.steps_per_s = row.mean_us > 0.0 ? 1e6 / row.mean_us : 0.0;
    }
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.area < y.area; });

  std::ostringstream host;
  host << std::thread::hardware_concurrency() << " hardware threads";
#if defined(__clang__)
  host << ", clang " << __clang_major__ << "." << __clang_minor__;
#elif defined(__GNUC__)
  host << ", gcc " << __GNUC__ << "." << __GNUC_MINOR__;
#endif

  if (g.format == Format::kJson) {
    ordered_json j;
    j["fingerprint"] = {{"resolution", cfg.resolution},
                        {"sensor",
                         {{"range", cfg.sensor.range},
                          {"fov", cfg.sensor.fov_deg},
                          {"angular_step", cfg.sensor.effective_step_deg(cfg.resolution)}}},
                        {"steps_per_map", a.steps},
                        {"seed", seed},
                        {"host", host.str()}};
    j["rows"] = json::array();
    for (const Row& r : rows) {
      j["rows"].push_back({{"map", r.id},
                           {"area_m2", r.area},
                           {"mean_step_us", r.mean_us},
                           {"p95_step_us", r.p95_us},
                           {"steps_per_s", r.steps_per_s},
                           {"steps", r.steps}});
    }
    emit_report(j.dump(2), g.out);
  } else {
    std::ostringstream s;
    s << "resolution " << cfg.resolution << " m, range " << cfg.sensor.range << " m, fov "
      << cfg.sensor.fov_deg << " deg, " << host.str() << '\n';
    s << std::left << std::setw(24) << "map" << std::right << std::setw(12) << "area m2"
      << std::setw(14) << "mean us" << std::setw(14) << "p95 us" << std::setw(12) << "steps/s" << '\n';
    s << std::fixed;
    for (const Row& r : rows) {
      s << std::left << std::setw(24) << r.id << std::right << std::setprecision(1) << std::setw(12)
        << r.area << std::setw(14) << r.mean_us << std::setw(14) << r.p95_us << std::setprecision(0)
        << std::setw(12) << r.steps_per_s << '\n';
    }
    emit_report(s.str(), g.out);
  }
  return 0;
}

}  // namespace gridslam::cli
