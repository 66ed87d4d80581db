#include "gridslam/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gridslam/error.hpp"
#include "json.hpp"

namespace gridslam {
namespace {

using nlohmann::json;

constexpr double kCentroidTolerance = 1e-9;

double number_at(const json& value, const std::string& key) {
  if (!value.is_number()) throw SchemaError("'" + key + "' must hold numbers", key);
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw InvalidArgument("non-finite number under '" + key + "'");
  return v;
}

std::vector<double> numbers_at(const json& value, std::size_t count, const std::string& key) {
  if (!value.is_array() || value.size() != count) {
    throw SchemaError("'" + key + "' entries must be arrays of " + std::to_string(count) +
                          " numbers",
                      key);
  }
  std::vector<double> out;
  out.reserve(count);
  for (const auto& v : value) out.push_back(number_at(v, key));
  return out;
}

BoundingBox parse_bbox(const json& value, const std::string& key) {
  const auto v = numbers_at(value, 4, key);
  BoundingBox box{v[0], v[1], v[2], v[3]};
  if (!(box.xmin < box.xmax) || !(box.ymin < box.ymax)) {
    throw InvalidArgument("room bbox under '" + key + "' must satisfy min < max");
  }
  return box;
}

std::vector<Segment> parse_segments(const json& value, const std::string& key) {
  if (!value.is_array()) throw SchemaError("'" + key + "' must be an array", key);
  std::vector<Segment> out;
  out.reserve(value.size());
  for (const auto& s : value) {
    const auto v = numbers_at(s, 4, key);
    out.push_back({{v[0], v[1]}, {v[2], v[3]}});
  }
  return out;
}

std::vector<Segment> parse_vertex_ring(const json& value, const std::string& key) {
  if (!value.is_array()) throw SchemaError("'" + key + "' must be an array", key);
  std::vector<Point2> verts;
  for (const auto& p : value) {
    const auto v = numbers_at(p, 2, key);
    verts.push_back({v[0], v[1]});
  }
  std::vector<Segment> out;
  if (verts.size() < 2) return out;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    out.push_back({verts[i], verts[(i + 1) % verts.size()]});
  }
  return out;
}

std::vector<RoomRecord> parse_rooms(const json& value, const std::string& key) {
  if (!value.is_array()) throw SchemaError("'" + key + "' must be an array", key);
  std::vector<RoomRecord> out;
  for (const auto& r : value) {
    if (!r.is_object()) throw SchemaError("'" + key + "' entries must be objects", key);
    const auto cat = r.find("category");
    if (cat == r.end()) throw SchemaError("room is missing 'category'", "category");
    if (!cat->is_string() || cat->get<std::string>().empty()) {
      throw SchemaError("room 'category' must be a non-empty string", "category");
    }
    const auto box = r.find("bbox");
    if (box == r.end()) throw SchemaError("room is missing 'bbox'", "bbox");
    out.push_back({cat->get<std::string>(), parse_bbox(*box, "bbox")});
  }
  return out;
}

std::vector<RoomRecord> parse_category_map(const json& value, const std::string& key) {
  if (!value.is_object()) throw SchemaError("'" + key + "' must be an object", key);
  std::vector<RoomRecord> out;
  for (const auto& [category, boxes] : value.items()) {
    if (category.empty()) throw SchemaError("empty room category under '" + key + "'", key);
    if (!boxes.is_array()) throw SchemaError("'" + key + "' values must be arrays", key);
    for (const auto& b : boxes) out.push_back({category, parse_bbox(b, key)});
  }
  return out;
}

void recenter(FloorPlan& plan) {
  const Point2 c = segment_centroid(plan.segments);
  if (std::abs(c.x) <= kCentroidTolerance && std::abs(c.y) <= kCentroidTolerance) return;
  for (auto& s : plan.segments) {
    s.a = {s.a.x - c.x, s.a.y - c.y};
    s.b = {s.b.x - c.x, s.b.y - c.y};
  }
  for (auto& r : plan.rooms) {
    r.bbox = {r.bbox.xmin - c.x, r.bbox.ymin - c.y, r.bbox.xmax - c.x, r.bbox.ymax - c.y};
  }
  plan.offset = {plan.offset.x + c.x, plan.offset.y + c.y};
}

}  // namespace

double Segment::length() const { return std::hypot(b.x - a.x, b.y - a.y); }

SchemaAdapter SchemaAdapter::houseexpo() {
  SchemaAdapter a;
  a.vertex_ring_key = "verts";
  a.category_map_key = "room_category";
  return a;
}

Point2 segment_centroid(std::span<const Segment> segments) {
  if (segments.empty()) return {};
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& s : segments) {
    sx += s.a.x + s.b.x;
    sy += s.a.y + s.b.y;
  }
  const double n = 2.0 * static_cast<double>(segments.size());
  return {sx / n, sy / n};
}

FloorPlan load_json(std::string_view text, const SchemaAdapter& adapter) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed floor plan: ") + e.what(), e.byte);
  } catch (const json::out_of_range& e) {
    throw InvalidArgument(std::string("non-finite number: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("floor plan must be a JSON object", "");

  FloorPlan plan;
  json extras = json::object();
  const std::string& seg_key =
      adapter.vertex_ring_key.empty() ? adapter.segments_key : adapter.vertex_ring_key;
  const std::string& room_key =
      adapter.category_map_key.empty() ? adapter.rooms_key : adapter.category_map_key;

  bool have_id = false;
  bool have_segments = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == adapter.id_key) {
      if (!value.is_string()) throw SchemaError("'" + key + "' must be a string", key);
      plan.id = value.get<std::string>();
      have_id = true;
    } else if (key == seg_key) {
      plan.segments = adapter.vertex_ring_key.empty() ? parse_segments(value, key)
                                                      : parse_vertex_ring(value, key);
      have_segments = true;
    } else if (key == room_key) {
      plan.rooms = adapter.category_map_key.empty() ? parse_rooms(value, key)
                                                    : parse_category_map(value, key);
    } else if (key == "offset") {
      const auto v = numbers_at(value, 2, key);
      plan.offset = {v[0], v[1]};
    } else {
      extras[key] = value;
    }
  }
  if (!have_id) throw SchemaError("missing required key '" + adapter.id_key + "'", adapter.id_key);
  if (!have_segments) throw SchemaError("missing required key '" + seg_key + "'", seg_key);
  const bool marked_empty = extras.contains("empty") && extras["empty"] == true;
  if (plan.segments.empty() && !marked_empty) {
    throw SchemaError("'" + seg_key + "' must contain at least one segment", seg_key);
  }
  if (!extras.empty()) plan.extras = extras.dump();
  recenter(plan);
  return plan;
}

FloorPlan load_json_file(const std::filesystem::path& path, const SchemaAdapter& adapter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open floor plan '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_json(buf.str(), adapter);
}

std::string save_json(const FloorPlan& plan) {
  json doc = plan.extras.empty() ? json::object() : json::parse(plan.extras);
  doc["id"] = plan.id;
  json segments = json::array();
  for (const auto& s : plan.segments) segments.push_back({s.a.x, s.a.y, s.b.x, s.b.y});
  doc["segments"] = std::move(segments);
  json rooms = json::array();
  for (const auto& r : plan.rooms) {
    rooms.push_back({{"category", r.category},
                     {"bbox", {r.bbox.xmin, r.bbox.ymin, r.bbox.xmax, r.bbox.ymax}}});
  }
  doc["rooms"] = std::move(rooms);
  doc["offset"] = {plan.offset.x, plan.offset.y};
  return doc.dump();
}

std::size_t room_count(const FloorPlan& plan, bool implicit_room) {
  if (!plan.rooms.empty()) return plan.rooms.size();
  return implicit_room ? 1 : 0;
}

StatsReport corpus_stats(std::span<const FloorPlan> plans, bool implicit_room) {
  if (plans.empty()) throw InvalidArgument("corpus_stats needs at least one plan");
  StatsReport report;
  std::vector<std::size_t> counts;
  counts.reserve(plans.size());
  for (const auto& p : plans) {
    const std::size_t n = room_count(p, implicit_room);
    if (n == 0) {
      ++report.excluded_empty;
      continue;
    }
    counts.push_back(n);
    report.total_rooms += n;
    ++report.rooms_per_house_histogram[n];
    for (const auto& r : p.rooms) ++report.category_histogram[r.category];
  }
  if (counts.empty()) throw InvalidArgument("every plan lacks room metadata");
  report.house_count = counts.size();
  report.mean_rooms =
      static_cast<double>(report.total_rooms) / static_cast<double>(report.house_count);
  std::sort(counts.begin(), counts.end());
  const std::size_t mid = counts.size() / 2;
  report.median_rooms = counts.size() % 2 == 1
                            ? static_cast<double>(counts[mid])
                            : 0.5 * static_cast<double>(counts[mid - 1] + counts[mid]);
  return report;
}

std::string stats_to_json(const StatsReport& report) {
  json doc;
  doc["house_count"] = report.house_count;
  doc["total_rooms"] = report.total_rooms;
  doc["mean_rooms"] = report.mean_rooms;
  doc["median_rooms"] = report.median_rooms;
  doc["excluded_empty"] = report.excluded_empty;
  doc["category_histogram"] = report.category_histogram;
  json per_house = json::object();
  for (const auto& [rooms, houses] : report.rooms_per_house_histogram) {
    per_house[std::to_string(rooms)] = houses;
  }
  doc["rooms_per_house_histogram"] = per_house;
  return doc.dump(2);
}

std::string stats_to_table(const StatsReport& report) {
  std::ostringstream out;
  auto row = [&](const std::string& label, const std::string& value) {
    out << std::left << std::setw(24) << label << std::right << std::setw(14) << value << '\n';
  };
  auto fixed = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
  };
  row("houses", std::to_string(report.house_count));
  row("rooms", std::to_string(report.total_rooms));
  row("mean rooms/house", fixed(report.mean_rooms));
  row("median rooms/house", fixed(report.median_rooms));
  if (report.excluded_empty > 0) row("excluded (no rooms)", std::to_string(report.excluded_empty));
  if (!report.category_histogram.empty()) {
    out << '\n';
    row("category", "rooms");
    for (const auto& [category, n] : report.category_histogram) row(category, std::to_string(n));
  }
  return out.str();
}

}  // namespace gridslam
