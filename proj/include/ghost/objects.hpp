#pragma once

#include <filesystem>
#include <optional>
#include <variant>
#include <vector>

#include "ghost/core.hpp"

namespace ghost {

/// Open interval [lo, hi] of unit transmittance.
struct Aperture1D {
  double lo;
  double hi;
};

/// Exact geometry behind a sampled transmission function, kept so that the
/// quadrature oracles can integrate against true edges instead of samples.
struct SlitGeometry {
  std::vector<Aperture1D> openings;
};
struct PointGeometry {
  double position;
};
using AnalyticObject = std::variant<std::monostate, SlitGeometry, PointGeometry>;

/// Complex amplitude transmittance t(x0) sampled on the simulation grid.
///
/// Amplitude, not intensity: t multiplies the field. A transparency whose
/// measured intensity transmission is T needs t = sqrt(T).
class TransmissionFunction {
 public:
  TransmissionFunction(Grid grid, std::vector<Complex> values, int dims = 1,
                       AnalyticObject analytic = {});

  const Grid& grid() const { return grid_; }
  int dims() const { return dims_; }
  const std::vector<Complex>& values() const { return values_; }
  const AnalyticObject& analytic() const { return analytic_; }
  bool has_analytic() const { return !std::holds_alternative<std::monostate>(analytic_); }

  /// Fraction of samples with |t| > 0.5.
  double open_fraction() const;

 private:
  Grid grid_;
  int dims_;
  std::vector<Complex> values_;
  AnalyticObject analytic_;
};

/// Value of the exact slit geometry at x: 1 inside, 0 outside, 1/2 exactly
/// on an edge. The sampled double slit uses the same rule, so an edge that
/// falls on a sample center still integrates to the exact slit width.
double slit_transmittance(const SlitGeometry& slits, double x);

/// Two slits of width slit_width centered at +-separation/2.
/// Requires separation >= slit_width and at least 8 samples per slit.
TransmissionFunction double_slit(double slit_width, double separation, const Grid& grid);

/// Unit transmittance at the grid sample nearest to `position`.
TransmissionFunction pinhole(double position, const Grid& grid);

/// Constant transmittance (1 = open, 0 = opaque) on a 1-D or 2-D grid.
TransmissionFunction uniform_object(const Grid& grid, double value, int dims = 1);

/// 2-D mask from an 8-bit binary PGM (P5).
///
/// Amplitude transmittance is pixel/255, binarized at `threshold` when
/// threshold > 0. The image is centered on the optical axis with the given
/// pixel pitch and resampled onto the square simulation grid by nearest
/// neighbour; grid samples outside the image are opaque.
TransmissionFunction mask_from_image(const std::filesystem::path& path, double pixel_pitch,
                                     double threshold, const Grid& grid);

}  // namespace ghost
