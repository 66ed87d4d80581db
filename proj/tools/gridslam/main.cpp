// gridslam: command-line front end for the occupancy-grid exploration
// simulator.
//
// Exit codes: 0 success, 1 internal error, 2 usage error, 3 invalid input
// (unreadable file, malformed JSON/PNG, schema violation), 4 the command
// ran but its postcondition failed (repair did not connect, obstacles did
// not fit).

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "gridslam/error.hpp"
#include "gridslam/obstacles.hpp"
#include "gridslam/worldgen.hpp"
#include "json.hpp"

namespace {

using gridslam::cli::Format;

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kInput = 3, kPostcondition = 4 };

int report_error(Format format, int code, const std::string& kind, const std::string& message,
                 const std::string& key = {}) {
  if (format == Format::kJson) {
    nlohmann::ordered_json j;
    j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    if (!key.empty()) j["error"]["key"] = key;
    std::cerr << j.dump() << '\n';
  } else {
    std::cerr << "gridslam: " << kind << " error: " << message << '\n';
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = gridslam::cli;
  CLI::App app{"Occupancy-grid exploration simulator: floor plans, rollouts, benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::GlobalOptions g;
  std::string format = "table";
  app.add_option("--config", g.config, "episode config (JSON)");
  app.add_option("--seed", g.seed, "random seed; drawn from OS entropy and printed when omitted");
  app.add_option("--out", g.out, "output file, or dump directory for `run`");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--schema", g.schema, "floor-plan key layout")
      ->check(CLI::IsMember({"canonical", "houseexpo"}));
  app.add_option("--threads", g.threads, "worker threads for corpus commands (0 = all cores)");

  cli::RasterizeArgs rasterize;
  auto* c_rasterize = app.add_subcommand("rasterize", "rasterize a floor plan into a grid PNG");
  c_rasterize->add_option("plan", rasterize.plan, "floor-plan JSON")->required();

  cli::RenderArgs render;
  auto* c_render = app.add_subcommand("render", "render a plan or grid PNG in a palette");
  c_render->add_option("input", render.input, "floor-plan JSON or grid PNG")->required();
  c_render->add_option("--palette", render.palette, "dataset or observation")
      ->check(CLI::IsMember({"dataset", "observation"}));

  cli::StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "room statistics over a floor-plan corpus");
  c_stats->add_option("inputs", stats.inputs, "plan files or directories (default $GRIDSLAM_DATA)");
  c_stats->add_flag("--implicit-room", stats.implicit_room, "count plans without rooms as one room");

  cli::RepairArgs repair;
  auto* c_repair = app.add_subcommand("repair", "fill small cells, reconnect rooms, refine and crop");
  c_repair->add_option("input", repair.input, "floor-plan JSON or grid PNG")->required();
  c_repair->add_option("--fill-area", repair.fill_area, "fill free pockets below this area (m2)");
  c_repair->add_option("--samples", repair.samples, "sampled free points");
  c_repair->add_option("--opening-width", repair.opening_width, "carved opening width (m)");
  bool no_refine = false;
  c_repair->add_flag("--no-refine", no_refine, "skip closing and cropping");

  cli::DedupArgs dedup;
  auto* c_dedup = app.add_subcommand("dedup", "report duplicate maps in a corpus");
  c_dedup->add_option("inputs", dedup.inputs, "plans, grid PNGs or directories (default $GRIDSLAM_DATA)");
  c_dedup->add_option("--threshold", dedup.threshold, "differing-cell fraction below which maps match")
      ->check(CLI::Range(0.0, 1.0));

  cli::RunArgs run;
  auto* c_run = app.add_subcommand("run", "run one episode with a scripted policy");
  c_run->add_option("plan", run.plan, "floor-plan JSON")->required();
  c_run->add_option("--policy", run.policy, "random or frontier")
      ->check(CLI::IsMember({"random", "frontier"}));
  c_run->add_option("--steps", run.steps, "steps to run (default: config max_steps)");

  cli::BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "time environment steps on maps of different size");
  c_bench->add_option("plans", bench.plans, "floor-plan JSON files");
  c_bench->add_option("--square", bench.square_rooms, "add an empty square room of this side (m)");
  c_bench->add_option("--steps", bench.steps, "timed steps per map");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  g.format = format == "json" ? Format::kJson : Format::kTable;
  repair.refine = !no_refine;

  try {
    if (*c_rasterize) return cli::cmd_rasterize(g, rasterize);
    if (*c_render) return cli::cmd_render(g, render);
    if (*c_stats) return cli::cmd_stats(g, stats);
    if (*c_repair) return cli::cmd_repair(g, repair);
    if (*c_dedup) return cli::cmd_dedup(g, dedup);
    if (*c_run) return cli::cmd_run(g, run);
    if (*c_bench) return cli::cmd_bench(g, bench);
  } catch (const gridslam::ParseError& e) {
    return report_error(g.format, kInput, "parse",
                        std::string(e.what()) + " (byte " + std::to_string(e.byte_offset()) + ")");
  } catch (const gridslam::SchemaError& e) {
    return report_error(g.format, kInput, "schema", e.what(), e.key());
  } catch (const gridslam::InvalidArgument& e) {
    return report_error(g.format, kInput, "input", e.what());
  } catch (const gridslam::PlacementError& e) {
    return report_error(g.format, kPostcondition, "placement", e.what());
  } catch (const cli::PostconditionFailed& e) {
    return report_error(g.format, kPostcondition, "postcondition", e.what());
  } catch (const std::exception& e) {
    return report_error(g.format, kInternal, "internal", e.what());
  }
  return kUsage;
}
