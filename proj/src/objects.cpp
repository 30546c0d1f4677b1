#include "ghost/objects.hpp"

#include <cmath>
#include <sstream>

#include "ghost/pgm.hpp"

namespace ghost {

TransmissionFunction::TransmissionFunction(Grid grid, std::vector<Complex> values, int dims,
                                           AnalyticObject analytic)
    : grid_(grid), dims_(dims), values_(std::move(values)), analytic_(std::move(analytic)) {
  if (dims_ != 1 && dims_ != 2) throw DomainError("TransmissionFunction: dims must be 1 or 2");
  const std::size_t expected = dims_ == 1 ? grid_.size() : grid_.size() * grid_.size();
  if (values_.size() != expected) {
    throw DomainError("TransmissionFunction: value count does not match grid");
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("TransmissionFunction: non-finite transmittance");
    }
    if (std::abs(v) > 1.0 + 1e-12) throw DomainError("TransmissionFunction: |t| exceeds 1");
  }
}

double TransmissionFunction::open_fraction() const {
  std::size_t open = 0;
  for (const auto& v : values_) open += std::abs(v) > 0.5 ? 1 : 0;
  return static_cast<double>(open) / static_cast<double>(values_.size());
}

double slit_transmittance(const SlitGeometry& slits, double x) {
  for (const auto& s : slits.openings) {
    const double tol = 1e-9 * (s.hi - s.lo);
    if (std::abs(x - s.lo) <= tol || std::abs(x - s.hi) <= tol) return 0.5;
    if (x > s.lo && x < s.hi) return 1.0;
  }
  return 0.0;
}

TransmissionFunction double_slit(double slit_width, double separation, const Grid& grid) {
  if (!(slit_width > 0.0) || !(separation > 0.0)) {
    throw DomainError("double_slit: slit width and separation must be positive");
  }
  if (separation < slit_width) {
    throw DomainError("double_slit: slits overlap (separation < slit width)");
  }
  const double per_slit = slit_width / grid.dx();
  if (per_slit < 8.0) {
    std::ostringstream msg;
    msg << "double_slit: slit spans " << per_slit << " samples, need at least 8 (dx <= "
        << slit_width / 8.0 << " m)";
    throw DomainError(msg.str());
  }
  SlitGeometry slits;
  for (const double c : {-0.5 * separation, 0.5 * separation}) {
    slits.openings.push_back({c - 0.5 * slit_width, c + 0.5 * slit_width});
  }
  std::vector<Complex> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = slit_transmittance(slits, grid.coordinate(i));
  }
  return TransmissionFunction(grid, std::move(values), 1, slits);
}

TransmissionFunction pinhole(double position, const Grid& grid) {
  std::size_t index = 0;
  if (!grid.nearest_index(position, index)) {
    std::ostringstream msg;
    msg << "pinhole: position " << position << " m lies outside the grid";
    throw DomainError(msg.str());
  }
  std::vector<Complex> values(grid.size());
  values[index] = 1.0;
  return TransmissionFunction(grid, std::move(values), 1, PointGeometry{grid.coordinate(index)});
}

TransmissionFunction uniform_object(const Grid& grid, double value, int dims) {
  if (!(value >= 0.0 && value <= 1.0)) throw DomainError("uniform_object: value must be in [0, 1]");
  const std::size_t n = dims == 1 ? grid.size() : grid.size() * grid.size();
  return TransmissionFunction(grid, std::vector<Complex>(n, value), dims);
}

TransmissionFunction mask_from_image(const std::filesystem::path& path, double pixel_pitch,
                                     double threshold, const Grid& grid) {
  if (!(pixel_pitch > 0.0)) throw DomainError("mask_from_image: pixel_pitch must be positive");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw DomainError("mask_from_image: threshold must lie in [0, 1]");
  }
  const GrayImage8 img = read_pgm8(path);
  const std::size_t n = grid.size();
  const double half_w = 0.5 * static_cast<double>(img.width);
  const double half_h = 0.5 * static_cast<double>(img.height);
  std::vector<Complex> values(n * n);
  // Image row r covers y in [(r - H/2) p, (r + 1 - H/2) p), so rows run with
  // increasing y exactly like the field storage.
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double row = std::floor((grid.coordinate(iy) - grid.x_center()) / pixel_pitch + half_h);
    if (row < 0.0 || row >= static_cast<double>(img.height)) continue;
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double col =
          std::floor((grid.coordinate(ix) - grid.x_center()) / pixel_pitch + half_w);
      if (col < 0.0 || col >= static_cast<double>(img.width)) continue;
      const auto p = img.pixels[static_cast<std::size_t>(row) * img.width +
                                static_cast<std::size_t>(col)];
      double t = static_cast<double>(p) / 255.0;
      if (threshold > 0.0) t = t >= threshold ? 1.0 : 0.0;
      values[iy * n + ix] = t;
    }
  }
  return TransmissionFunction(grid, std::move(values), 2);
}

}  // namespace ghost
