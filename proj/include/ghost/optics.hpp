#pragma once

#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ghost/core.hpp"
#include "ghost/objects.hpp"

namespace ghost {

/// Raised when a grid cannot represent a propagation without aliasing.
class SamplingError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// How the Fresnel convolution is evaluated.
///
/// Both methods zero-pad each line to 2N samples so the convolution is linear
/// (no wraparound). With span S = N dx the two are valid on complementary
/// ranges separated by the critical distance d_c = 2 N dx^2 / lambda:
///
///  - impulse_response samples the chirp kernel directly. Separations up to
///    S must stay below Nyquist, S / (lambda d) <= 1 / (2 dx), i.e. d >= d_c.
///  - transfer_function samples exp(-i pi lambda d f^2) on the padded
///    frequency grid. Its implied impulse response, of half-width
///    lambda d / (2 dx), must fit in the padding, i.e. d <= d_c.
///
/// `automatic` picks whichever is valid.
enum class PropagationMethod { automatic, impulse_response, transfer_function };

/// d_c = 2 N dx^2 / lambda for the given grid.
double critical_distance(const Grid& grid, double wavelength);

/// Precomputed free-space propagator for one (grid, wavelength, distance).
///
/// Implements the paraxial Fresnel convolution with the 1-D kernel
/// e^{jkd} / sqrt(j lambda d) * exp(i pi x^2 / (lambda d)). A 2-D field is
/// propagated separably along x and y, which gives the full 2-D kernel
/// e^{jkd} / (j lambda d) * exp(i pi (x^2 + y^2) / (lambda d)).
class FresnelPropagator {
 public:
  /// Throws SamplingError if the requested method is invalid at `distance`.
  FresnelPropagator(const Grid& grid, double wavelength, double distance,
                    PropagationMethod method = PropagationMethod::automatic);

  PropagationMethod method() const { return method_; }
  double distance() const { return distance_; }

  /// In-place propagation of a field on this propagator's grid.
  void apply(ComplexField& field) const;

 private:
  void apply_line(Complex* line, std::size_t stride, std::vector<Complex>& scratch) const;

  Grid grid_;
  double wavelength_;
  double distance_;
  PropagationMethod method_;
  Complex global_phase_;
  std::vector<Complex> spectrum_;  // length 2N, includes the 1/(2N) of the inverse FFT
};

/// Propagates `field` by `distance` (> 0) with the automatically chosen method.
ComplexField fresnel_propagate(const ComplexField& field, double distance,
                               PropagationMethod method = PropagationMethod::automatic);

/// Multiplies by exp(-i pi r^2 / (lambda f)) inside the hard aperture
/// |x| <= aperture/2 (a square |x|, |y| <= aperture/2 in 2-D) and zeroes the
/// field outside. Throws DomainError if the aperture exceeds the grid span.
ComplexField apply_thin_lens(const ComplexField& field, double focal_length, double aperture);

namespace stage {
struct FreeSpace {
  double distance;
};
struct ThinLens {
  double focal_length;
  double aperture;
};
struct Mask {
  std::shared_ptr<const TransmissionFunction> transmission;
};
}  // namespace stage

using Stage = std::variant<stage::FreeSpace, stage::ThinLens, stage::Mask>;

/// Ordered list of optical elements applied left to right.
struct PropagationPlan {
  std::vector<Stage> stages;
};

/// Object plane -> detector: [mask(t)?, free_space(d_o), lens(f, L), free_space(d_i)].
PropagationPlan arm_plan(const ArmGeometry& arm,
                         std::shared_ptr<const TransmissionFunction> object = nullptr);

/// Source -> detector of the test arm: [free_space(d0), mask(t), d1, lens, d2].
PropagationPlan test_arm_plan(double d_source_to_object, const ArmGeometry& arm,
                              std::shared_ptr<const TransmissionFunction> object);

/// Source -> detector of the reference arm: [free_space(d0), d3, lens, d4].
PropagationPlan reference_arm_plan(double d_source_to_object, const ArmGeometry& arm);

/// A plan bound to a grid with every kernel and lens phase precomputed, so
/// it can be applied to many fields. Immutable and shareable across threads.
class CompiledPlan {
 public:
  CompiledPlan(const PropagationPlan& plan, const Grid& grid, double wavelength, int dims,
               PropagationMethod method = PropagationMethod::automatic);

  void apply(ComplexField& field) const;
  std::size_t stage_count() const { return steps_.size(); }

 private:
  struct LensStep {
    std::vector<Complex> factor;  // per-axis multiplier, zero outside the aperture
  };
  struct MaskStep {
    std::shared_ptr<const TransmissionFunction> transmission;
  };
  using Step = std::variant<std::shared_ptr<const FresnelPropagator>, LensStep, MaskStep>;

  Grid grid_;
  double wavelength_;
  int dims_;
  std::vector<Step> steps_;
};

ComplexField run_plan(const ComplexField& field, const PropagationPlan& plan,
                      PropagationMethod method = PropagationMethod::automatic);

/// Closed-form amplitude PSF sinc{(x_object/d_o + x_image/d_i) L / lambda}.
/// Equals 1 at the conjugate point x_image = -M x_object.
double apsf_closed_form(const ArmGeometry& arm, double x_object, double x_image,
                        double wavelength);

/// Smallest accepted quadrature_points for apsf_numeric.
///
/// The integrand over the aperture carries three quadratic phases, each
/// sweeping up to the aperture Fresnel number N_F = (L/2)^2 / (lambda d)
/// cycles, and a net linear phase of |x_o/d_o + x_i/d_i| L / lambda cycles.
/// Composite Simpson gets 16 points per cycle of the larger of the two, and
/// never fewer than 65 points.
std::size_t apsf_min_quadrature_points(const ArmGeometry& arm, double x_object,
                                       const Grid& image_grid, double wavelength);

/// |h(x_object, x_image)| by direct composite-Simpson quadrature of the
/// lens-plane integral (free space, lens phase, free space) over the aperture,
/// evaluated at every sample of image_grid. Throws DomainError when
/// quadrature_points is below apsf_min_quadrature_points.
std::vector<double> apsf_numeric(const ArmGeometry& arm, double x_object, const Grid& image_grid,
                                 double wavelength, std::size_t quadrature_points);

}  // namespace ghost
