#include "ghost/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ghost/core.hpp"

namespace ghost {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw InputError(path.string() + ": " + what);
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in, const std::filesystem::path& path) {
  std::string token;
  int c = 0;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      if (!token.empty()) return token;
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  if (token.empty()) fail(path, "truncated PGM header");
  return token;
}

std::size_t header_number(std::istream& in, const std::filesystem::path& path, const char* what) {
  const std::string token = header_token(in, path);
  std::size_t value = 0;
  try {
    std::size_t used = 0;
    value = std::stoul(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
  } catch (const std::exception&) {
    fail(path, std::string("bad PGM ") + what + " '" + token + "'");
  }
  return value;
}

}  // namespace

GrayImage8 read_pgm8(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  if (header_token(in, path) != "P5") fail(path, "not a binary PGM (expected magic P5)");
  GrayImage8 img;
  img.width = header_number(in, path, "width");
  img.height = header_number(in, path, "height");
  const std::size_t maxval = header_number(in, path, "maxval");
  if (img.width == 0 || img.height == 0) fail(path, "empty image");
  if (maxval == 0 || maxval > 255) {
    fail(path, "maxval " + std::to_string(maxval) + " is not an 8-bit PGM");
  }
  img.pixels.resize(img.width * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.pixels.size()) {
    fail(path, "pixel data truncated (" + std::to_string(in.gcount()) + " of " +
                   std::to_string(img.pixels.size()) + " bytes)");
  }
  if (maxval != 255) {
    for (auto& p : img.pixels) {
      p = static_cast<std::uint8_t>(std::lround(255.0 * std::min<double>(p, maxval) / maxval));
    }
  }
  return img;
}

void write_pgm8(const std::filesystem::path& path, const GrayImage8& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) fail(path, "write failed");
}

Pgm16Scaling write_pgm16(const std::filesystem::path& path, std::size_t width,
                         std::size_t height, const std::vector<double>& values) {
  if (values.size() != width * height) {
    throw DomainError("write_pgm16: value count does not match image size");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  Pgm16Scaling scaling;
  scaling.offset = values.empty() ? 0.0 : *lo_it;
  const double range = values.empty() ? 0.0 : *hi_it - *lo_it;
  scaling.scale = range > 0.0 ? 65535.0 / range : 0.0;

  std::string body(values.size() * 2, '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::clamp(std::round((values[i] - scaling.offset) * scaling.scale), 0.0,
                                65535.0);
    const auto p = static_cast<std::uint16_t>(v);
    body[2 * i] = static_cast<char>(p >> 8);
    body[2 * i + 1] = static_cast<char>(p & 0xFF);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << width << ' ' << height << "\n65535\n";
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) fail(path, "write failed");
  return scaling;
}

}  // namespace ghost
