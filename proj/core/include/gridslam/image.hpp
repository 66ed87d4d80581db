#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "gridslam/grid.hpp"

namespace gridslam {

// dataset:     Obstacle 0, Free 255, Unknown 200
// observation: Unknown 0, Free 128, Obstacle 255
enum class Palette { kDataset, kObservation };

Palette parse_palette(std::string_view name);
std::string_view palette_name(Palette palette);

std::uint8_t pixel_value(CellState state, Palette palette);

// One byte per cell, row 0 of the output is the northernmost grid row.
std::vector<std::uint8_t> to_raster(const OccupancyGrid& map, Palette palette);
void to_raster(const OccupancyGrid& map, Palette palette, std::span<std::uint8_t> out);

// 8-bit grayscale PNG. Resolution and origin travel in tEXt chunks so a
// PNG written here loads back into the same grid.
std::vector<std::uint8_t> render_png(const OccupancyGrid& map, Palette palette);

// Inverse of render_png. Pixel values outside the palette raise ParseError.
// When the PNG carries no geometry chunks, `fallback_resolution` and a zero
// origin are used.
OccupancyGrid parse_png(std::span<const std::uint8_t> bytes, Palette palette,
                        double fallback_resolution = 0.1);

void write_png_file(const std::filesystem::path& path, const OccupancyGrid& map,
                    Palette palette);
OccupancyGrid read_png_file(const std::filesystem::path& path, Palette palette,
                            double fallback_resolution = 0.1);

}  // namespace gridslam
