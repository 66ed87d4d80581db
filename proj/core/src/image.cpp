#include "gridslam/image.hpp"

#include <png.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "gridslam/error.hpp"

namespace gridslam {
namespace {

constexpr char kResolutionKey[] = "gridslam:resolution";
constexpr char kOriginKey[] = "gridslam:origin";

void write_callback(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_callback(png_structp) {}

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void read_callback(png_structp png, png_bytep data, png_size_t length) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + length > cursor->bytes.size()) png_error(png, "truncated PNG stream");
  std::memcpy(data, cursor->bytes.data() + cursor->offset, length);
  cursor->offset += length;
}

void error_callback(png_structp png, png_const_charp message) {
  auto* slot = static_cast<std::string*>(png_get_error_ptr(png));
  if (slot != nullptr) *slot = message;
  png_longjmp(png, 1);
}

void warning_callback(png_structp, png_const_charp) {}

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

CellState state_from_pixel(std::uint8_t value, Palette palette, std::size_t offset) {
  for (CellState s : {CellState::kUnknown, CellState::kFree, CellState::kObstacle}) {
    if (pixel_value(s, palette) == value) return s;
  }
  throw ParseError("pixel value " + std::to_string(value) + " is not in the " +
                       std::string(palette_name(palette)) + " palette",
                   offset);
}

}  // namespace

Palette parse_palette(std::string_view name) {
  if (name == "dataset") return Palette::kDataset;
  if (name == "observation") return Palette::kObservation;
  throw InvalidArgument("unknown palette '" + std::string(name) +
                        "' (expected dataset or observation)");
}

std::string_view palette_name(Palette palette) {
  return palette == Palette::kDataset ? "dataset" : "observation";
}

std::uint8_t pixel_value(CellState state, Palette palette) {
  if (palette == Palette::kDataset) {
    switch (state) {
      case CellState::kObstacle:
        return 0;
      case CellState::kFree:
        return 255;
      case CellState::kUnknown:
        return 200;
    }
  }
  switch (state) {
    case CellState::kUnknown:
      return 0;
    case CellState::kFree:
      return 128;
    case CellState::kObstacle:
      return 255;
  }
  return 0;
}

void to_raster(const OccupancyGrid& map, Palette palette, std::span<std::uint8_t> out) {
  if (out.size() < map.size()) throw InvalidArgument("to_raster: output buffer too small");
  const std::uint8_t lut[3] = {pixel_value(CellState::kUnknown, palette),
                               pixel_value(CellState::kFree, palette),
                               pixel_value(CellState::kObstacle, palette)};
  const auto cells = map.cells();
  const auto w = static_cast<std::size_t>(map.width());
  for (int r = 0; r < map.height(); ++r) {
    const std::size_t src = static_cast<std::size_t>(r) * w;
    const std::size_t dst = static_cast<std::size_t>(map.height() - 1 - r) * w;
    for (std::size_t c = 0; c < w; ++c) {
      out[dst + c] = lut[static_cast<std::size_t>(cells[src + c])];
    }
  }
}

std::vector<std::uint8_t> to_raster(const OccupancyGrid& map, Palette palette) {
  std::vector<std::uint8_t> out(map.size());
  to_raster(map, palette, out);
  return out;
}

std::vector<std::uint8_t> render_png(const OccupancyGrid& map, Palette palette) {
  if (map.width() == 0 || map.height() == 0) throw InvalidArgument("render_png: empty grid");
  std::vector<std::uint8_t> raster = to_raster(map, palette);
  std::vector<std::uint8_t> out;
  std::string error;

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, error_callback, warning_callback);
  if (png == nullptr) throw Error("render_png: cannot allocate PNG writer");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("render_png: " + error);
  }
  png_set_write_fn(png, &out, write_callback, flush_callback);
  png_set_IHDR(png, info, static_cast<png_uint_32>(map.width()),
               static_cast<png_uint_32>(map.height()), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);

  const std::string res = format_double(map.resolution());
  const std::string origin = format_double(map.origin().x) + " " + format_double(map.origin().y);
  png_text text[2]{};
  text[0].compression = PNG_TEXT_COMPRESSION_NONE;
  text[0].key = const_cast<char*>(kResolutionKey);
  text[0].text = const_cast<char*>(res.c_str());
  text[1].compression = PNG_TEXT_COMPRESSION_NONE;
  text[1].key = const_cast<char*>(kOriginKey);
  text[1].text = const_cast<char*>(origin.c_str());
  png_set_text(png, info, text, 2);

  png_write_info(png, info);
  for (int r = 0; r < map.height(); ++r) {
    png_write_row(png, raster.data() + static_cast<std::size_t>(r) * map.width());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

namespace {

struct Decoded {
  std::vector<std::uint8_t> raster;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  double resolution = 0.0;
  Point2 origin{};
  bool gray8 = true;
};

// Everything that may longjmp lives here so the caller's locals stay intact.
void decode_png(png_structp png, png_infop info, Decoded* out) {
  png_read_info(png, info);
  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY || png_get_bit_depth(png, info) != 8) {
    out->gray8 = false;
    return;
  }
  out->raster.resize(static_cast<std::size_t>(out->width) * out->height);
  std::vector<png_bytep> rows(out->height);
  for (png_uint_32 r = 0; r < out->height; ++r) {
    rows[r] = out->raster.data() + static_cast<std::size_t>(r) * out->width;
  }
  png_read_image(png, rows.data());
  png_read_end(png, info);

  png_textp text = nullptr;
  int num_text = 0;
  png_get_text(png, info, &text, &num_text);
  for (int i = 0; i < num_text; ++i) {
    if (std::strcmp(text[i].key, kResolutionKey) == 0) {
      out->resolution = std::strtod(text[i].text, nullptr);
    } else if (std::strcmp(text[i].key, kOriginKey) == 0) {
      std::istringstream s(text[i].text);
      s >> out->origin.x >> out->origin.y;
    }
  }
}

}  // namespace

OccupancyGrid parse_png(std::span<const std::uint8_t> bytes, Palette palette,
                        double fallback_resolution) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw ParseError("not a PNG stream", 0);
  }
  std::string error;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, error_callback, warning_callback);
  if (png == nullptr) throw Error("parse_png: cannot allocate PNG reader");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{bytes, 0};
  Decoded d;
  d.resolution = fallback_resolution;

  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("parse_png: " + error, cursor.offset);
  }
  png_set_read_fn(png, &cursor, read_callback);
  decode_png(png, info, &d);
  png_destroy_read_struct(&png, &info, nullptr);
  if (!d.gray8) throw ParseError("parse_png: expected 8-bit grayscale", 0);

  if (!(d.resolution > 0.0) || !std::isfinite(d.resolution)) {
    throw ParseError("parse_png: invalid resolution chunk", 0);
  }
  OccupancyGrid grid(static_cast<int>(d.width), static_cast<int>(d.height), d.resolution, d.origin);
  for (png_uint_32 r = 0; r < d.height; ++r) {
    const int grid_row = static_cast<int>(d.height - 1 - r);
    for (png_uint_32 c = 0; c < d.width; ++c) {
      const std::size_t at = static_cast<std::size_t>(r) * d.width + c;
      grid.set({grid_row, static_cast<int>(c)}, state_from_pixel(d.raster[at], palette, at));
    }
  }
  return grid;
}

void write_png_file(const std::filesystem::path& path, const OccupancyGrid& map,
                    Palette palette) {
  const auto bytes = render_png(map, palette);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

OccupancyGrid read_png_file(const std::filesystem::path& path, Palette palette,
                            double fallback_resolution) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_png(bytes, palette, fallback_resolution);
}

}  // namespace gridslam
