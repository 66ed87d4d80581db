#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridslam/grid.hpp"

namespace gridslam {

struct Segment {
  Point2 a;
  Point2 b;
  double length() const;
  bool operator==(const Segment&) const = default;
};

struct BoundingBox {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;
  bool operator==(const BoundingBox&) const = default;
};

struct RoomRecord {
  std::string category;
  BoundingBox bbox;
  bool operator==(const RoomRecord&) const = default;
};

// A house as a set of wall segments in meters, centered on the centroid of
// the segment endpoints.
struct FloorPlan {
  std::string id;
  std::vector<Segment> segments;
  std::vector<RoomRecord> rooms;
  // World position of the centroid removed on load (accumulates across
  // load/save cycles).
  Point2 offset;
  // Unrecognized top-level keys, kept as a serialized JSON object so that
  // they survive a load/save cycle. Empty when there are none.
  std::string extras;

  bool operator==(const FloorPlan&) const = default;
};

// Key names used to read a floor-plan document. The default maps the
// canonical schema:
//
//   { "id": "...",
//     "segments": [[x1, y1, x2, y2], ...],
//     "rooms": [{"category": "...", "bbox": [xmin, ymin, xmax, ymax]}, ...],
//     "offset": [x, y] }
//
// `houseexpo()` instead reads a released-dataset style record where the
// outline is a vertex ring under "verts" and rooms are grouped by category
// under "room_category": {"kitchen": [[xmin, ymin, xmax, ymax], ...]}.
struct SchemaAdapter {
  std::string id_key = "id";
  std::string segments_key = "segments";
  std::string rooms_key = "rooms";
  // When non-empty, segments are built from a closed ring of [x, y]
  // vertices stored under this key instead of `segments_key`.
  std::string vertex_ring_key;
  // When non-empty, rooms are read from an object mapping category ->
  // list of bboxes stored under this key instead of `rooms_key`.
  std::string category_map_key;

  static SchemaAdapter canonical() { return {}; }
  static SchemaAdapter houseexpo();
};

Point2 segment_centroid(std::span<const Segment> segments);

// Parses and validates a floor plan, then re-centers it on its centroid.
// Throws ParseError (with byte offset), SchemaError (naming the key) or
// InvalidArgument (non-finite values, inverted bboxes).
FloorPlan load_json(std::string_view text,
                    const SchemaAdapter& adapter = SchemaAdapter::canonical());
FloorPlan load_json_file(const std::filesystem::path& path,
                         const SchemaAdapter& adapter = SchemaAdapter::canonical());

// Canonical serialization with sorted keys.
std::string save_json(const FloorPlan& plan);

struct StatsReport {
  std::size_t house_count = 0;
  std::size_t total_rooms = 0;
  double mean_rooms = 0.0;
  double median_rooms = 0.0;
  // Plans with no room metadata that were left out of the counts.
  std::size_t excluded_empty = 0;
  std::map<std::string, std::size_t> category_histogram;
  std::map<std::size_t, std::size_t> rooms_per_house_histogram;
};

// Rooms attributed to a plan. A plan without room records counts as one
// room when `implicit_room` is set, otherwise as zero.
std::size_t room_count(const FloorPlan& plan, bool implicit_room);

// Throws InvalidArgument on an empty sequence or when every plan is excluded.
StatsReport corpus_stats(std::span<const FloorPlan> plans, bool implicit_room = false);
std::string stats_to_json(const StatsReport& report);
std::string stats_to_table(const StatsReport& report);

}  // namespace gridslam
