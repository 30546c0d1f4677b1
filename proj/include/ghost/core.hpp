#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ghost {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for unreadable or malformed input files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Normalized sinc, sin(pi u)/(pi u), with sinc(0) = 1.
///
/// This is the convention that falls out of Fourier transforming a hard
/// rect aperture: the first zero sits at u = 1. The unnormalized sin(u)/u
/// variant is never used in this code base.
double sinc(double u);

/// Small-angle Rayleigh limit 1.22 * wavelength * d_object / aperture.
/// All arguments in meters. Throws DomainError unless all are positive.
double rayleigh_limit(double wavelength, double d_object, double aperture);

/// Uniform sampling of one transverse axis.
///
/// Sample i sits at x_center + (i - floor(n/2)) * dx, so an even-sized grid
/// has one more sample on the negative side and always keeps a sample
/// exactly on the optical axis.
class Grid {
 public:
  Grid(std::size_t n_samples, double dx, double x_center = 0.0);

  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  double x_center() const { return x0_; }
  double span() const { return static_cast<double>(n_) * dx_; }

  /// Index of the sample sitting at x_center.
  std::size_t center_index() const { return n_ / 2; }

  double coordinate(std::size_t i) const {
    return x0_ + (static_cast<double>(i) - static_cast<double>(n_ / 2)) * dx_;
  }

  std::vector<double> coordinates() const;

  /// Nearest sample to x. Returns false if x lies more than half a sample
  /// beyond either end of the grid.
  bool nearest_index(double x, std::size_t& index) const;

  bool operator==(const Grid& other) const = default;

 private:
  std::size_t n_;
  double dx_;
  double x0_;
};

/// Grid of n_samples covering `span` meters, centered on the axis.
Grid make_grid(double span, std::size_t n_samples);

/// Sampled complex scalar amplitude.
///
/// A 2-D field uses the same grid on both axes and is stored row-major
/// (y outer, x inner).
struct ComplexField {
  Grid grid;
  double wavelength;
  int dims = 1;
  std::vector<Complex> values;

  ComplexField(Grid g, double wavelength, int dims = 1);
  ComplexField(Grid g, double wavelength, std::vector<Complex> values, int dims = 1);

  std::size_t line_length() const { return grid.size(); }
  std::size_t line_count() const { return dims == 1 ? 1 : grid.size(); }

  /// Throws DomainError if any value is non-finite.
  void check_finite() const;
};

std::vector<double> intensity(const ComplexField& field);

/// One imaging arm: object plane -> d_object -> thin lens -> d_image.
class ArmGeometry {
 public:
  /// Throws DomainError if any length is non-positive or if
  /// |1/d_object + 1/d_image - 1/focal_length| exceeds 1e-9 / focal_length.
  ArmGeometry(double d_object, double d_image, double focal_length, double aperture);

  /// Arm imaging at magnification m (d_image / d_object) with the given lens.
  static ArmGeometry from_magnification(double focal_length, double aperture,
                                        double magnification);

  double d_object() const { return d_object_; }
  double d_image() const { return d_image_; }
  double focal_length() const { return focal_length_; }
  double aperture() const { return aperture_; }
  double magnification() const { return d_image_ / d_object_; }

  /// Relative thin-lens residual (1/d_o + 1/d_i - 1/f) * f.
  static double lens_residual(double d_object, double d_image, double focal_length);

  bool operator==(const ArmGeometry& other) const = default;

 private:
  double d_object_;
  double d_image_;
  double focal_length_;
  double aperture_;
};

inline constexpr double kThinLensTolerance = 1e-9;

/// A sampled real curve with explicit coordinates (meters).
struct Profile {
  std::vector<double> x;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

/// Parses a length such as "3 mm", "0.532um", "532 nm", "0.8 m" or a bare
/// number (meters). Accepts "µm" as an alias of "um".
double parse_length(std::string_view text);

}  // namespace ghost
