#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridslam/error.hpp"
#include "gridslam/floorplan.hpp"

namespace gridslam::cli {

enum class Format { kJson, kTable };

struct GlobalOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  Format format = Format::kTable;
  std::string schema = "canonical";  // floor-plan key layout: canonical | houseexpo
  unsigned threads = 0;              // 0 = hardware concurrency
};

// Raised when a command ran but its postcondition does not hold.
class PostconditionFailed : public Error {
 public:
  using Error::Error;
};

struct RasterizeArgs {
  std::filesystem::path plan;
};
int cmd_rasterize(const GlobalOptions& g, const RasterizeArgs& a);

struct RenderArgs {
  std::filesystem::path input;
  std::string palette = "dataset";
};
int cmd_render(const GlobalOptions& g, const RenderArgs& a);

struct StatsArgs {
  std::vector<std::filesystem::path> inputs;
  bool implicit_room = false;
};
int cmd_stats(const GlobalOptions& g, const StatsArgs& a);

struct RepairArgs {
  std::filesystem::path input;
  double fill_area = 2.0;  // m²
  std::size_t samples = 100;
  double opening_width = 0.8;
  bool refine = true;
};
int cmd_repair(const GlobalOptions& g, const RepairArgs& a);

struct DedupArgs {
  std::vector<std::filesystem::path> inputs;
  double threshold = 0.005;
};
int cmd_dedup(const GlobalOptions& g, const DedupArgs& a);

struct RunArgs {
  std::filesystem::path plan;
  std::string policy = "random";
  std::optional<std::size_t> steps;
};
int cmd_run(const GlobalOptions& g, const RunArgs& a);

struct BenchArgs {
  std::vector<std::filesystem::path> plans;
  std::vector<double> square_rooms;  // side lengths in meters
  std::size_t steps = 500;
};
int cmd_bench(const GlobalOptions& g, const BenchArgs& a);

}  // namespace gridslam::cli
