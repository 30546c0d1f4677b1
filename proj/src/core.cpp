#include "ghost/core.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace ghost {

double sinc(double u) {
  if (u == 0.0) return 1.0;
  const double a = kPi * u;
  return std::sin(a) / a;
}

double rayleigh_limit(double wavelength, double d_object, double aperture) {
  if (!(wavelength > 0.0) || !(d_object > 0.0) || !(aperture > 0.0)) {
    throw DomainError("rayleigh_limit: wavelength, distance and aperture must be positive");
  }
  return 1.22 * wavelength * d_object / aperture;
}

Grid::Grid(std::size_t n_samples, double dx, double x_center)
    : n_(n_samples), dx_(dx), x0_(x_center) {
  if (n_samples < 2) throw DomainError("Grid: need at least 2 samples");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw DomainError("Grid: dx must be positive and finite");
  if (!std::isfinite(x_center)) throw DomainError("Grid: x_center must be finite");
}

std::vector<double> Grid::coordinates() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = coordinate(i);
  return xs;
}

bool Grid::nearest_index(double x, std::size_t& index) const {
  const double pos = (x - x0_) / dx_ + static_cast<double>(n_ / 2);
  const double r = std::round(pos);
  if (!std::isfinite(r) || r < 0.0 || r > static_cast<double>(n_ - 1)) return false;
  index = static_cast<std::size_t>(r);
  return true;
}

Grid make_grid(double span, std::size_t n_samples) {
  if (!(span > 0.0)) throw DomainError("make_grid: span must be positive");
  if (n_samples < 2) throw DomainError("make_grid: need at least 2 samples");
  return Grid(n_samples, span / static_cast<double>(n_samples));
}

ComplexField::ComplexField(Grid g, double wl, int d) : ComplexField(g, wl, {}, d) {
  values.assign(dims == 1 ? grid.size() : grid.size() * grid.size(), Complex{});
}

ComplexField::ComplexField(Grid g, double wl, std::vector<Complex> v, int d)
    : grid(g), wavelength(wl), dims(d), values(std::move(v)) {
  if (!(wavelength > 0.0)) throw DomainError("ComplexField: wavelength must be positive");
  if (dims != 1 && dims != 2) throw DomainError("ComplexField: dims must be 1 or 2");
  const std::size_t expected = dims == 1 ? grid.size() : grid.size() * grid.size();
  if (!values.empty() && values.size() != expected) {
    throw DomainError("ComplexField: value count does not match grid");
  }
}

void ComplexField::check_finite() const {
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("ComplexField: non-finite value");
    }
  }
}

std::vector<double> intensity(const ComplexField& field) {
  std::vector<double> out(field.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(field.values[i]);
  return out;
}

double ArmGeometry::lens_residual(double d_object, double d_image, double focal_length) {
  return (1.0 / d_object + 1.0 / d_image - 1.0 / focal_length) * focal_length;
}

ArmGeometry::ArmGeometry(double d_object, double d_image, double focal_length, double aperture)
    : d_object_(d_object), d_image_(d_image), focal_length_(focal_length), aperture_(aperture) {
  if (!(d_object > 0.0) || !(d_image > 0.0) || !(focal_length > 0.0) || !(aperture > 0.0)) {
    throw DomainError("ArmGeometry: distances, focal length and aperture must be positive");
  }
  const double residual = lens_residual(d_object, d_image, focal_length);
  if (std::abs(residual) > kThinLensTolerance) {
    std::ostringstream msg;
    msg << "ArmGeometry: thin-lens equation violated (1/d_o + 1/d_i - 1/f) * f = " << residual;
    throw DomainError(msg.str());
  }
}

ArmGeometry ArmGeometry::from_magnification(double focal_length, double aperture,
                                            double magnification) {
  if (!(magnification > 0.0)) throw DomainError("ArmGeometry: magnification must be positive");
  return ArmGeometry(focal_length * (1.0 + 1.0 / magnification),
                     focal_length * (1.0 + magnification), focal_length, aperture);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_length(std::string_view text) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr == s.data()) {
    throw DomainError("invalid length '" + std::string(text) + "'");
  }
  const std::string_view unit = trim(std::string_view(ptr, s.data() + s.size() - ptr));
  // Dividing keeps "5 um" equal to the literal 5e-6.
  double per_meter = 0.0;
  if (unit.empty() || unit == "m") {
    per_meter = 1.0;
  } else if (unit == "mm") {
    per_meter = 1e3;
  } else if (unit == "um" || unit == "\xC2\xB5m" || unit == "\xCE\xBCm") {
    per_meter = 1e6;
  } else if (unit == "nm") {
    per_meter = 1e9;
  } else {
    throw DomainError("unknown length unit '" + std::string(unit) + "' in '" + std::string(text) +
                      "' (use m, mm, um or nm)");
  }
  if (!std::isfinite(value)) throw DomainError("invalid length '" + std::string(text) + "'");
  return value / per_meter;
}

}  // namespace ghost
