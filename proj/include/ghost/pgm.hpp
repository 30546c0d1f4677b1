#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ghost {

struct GrayImage8 {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};

/// Reads a binary 8-bit PGM (P5, maxval <= 255). Comments are allowed in the
/// header. Throws InputError naming the file on any format problem.
GrayImage8 read_pgm8(const std::filesystem::path& path);

void write_pgm8(const std::filesystem::path& path, const GrayImage8& image);

/// Linear mapping used when writing a real image as 16-bit PGM:
/// pixel = round((value - offset) * scale), clamped to [0, 65535].
struct Pgm16Scaling {
  double offset = 0.0;
  double scale = 1.0;
};

/// Writes a 16-bit binary PGM (P5, maxval 65535, big-endian samples),
/// mapping [min, max] of `values` linearly onto [0, 65535]. Returns the
/// mapping so it can be recorded next to the file.
Pgm16Scaling write_pgm16(const std::filesystem::path& path, std::size_t width,
                         std::size_t height, const std::vector<double>& values);

}  // namespace ghost
