#include "ghost/optics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"

namespace ghost {

namespace {

// e^{i 2 pi cycles}, reducing the cycle count first so k*d ~ 1e7 rad keeps
// full precision.
Complex unit_phase_cycles(double cycles) {
  const double frac = cycles - std::floor(cycles);
  const double phi = 2.0 * kPi * frac;
  return {std::cos(phi), std::sin(phi)};
}

Complex unit_phase(double radians) { return {std::cos(radians), std::sin(radians)}; }

}  // namespace

double critical_distance(const Grid& grid, double wavelength) {
  return 2.0 * static_cast<double>(grid.size()) * grid.dx() * grid.dx() / wavelength;
}

FresnelPropagator::FresnelPropagator(const Grid& grid, double wavelength, double distance,
                                     PropagationMethod method)
    : grid_(grid), wavelength_(wavelength), distance_(distance), method_(method) {
  if (!(wavelength > 0.0)) throw DomainError("fresnel_propagate: wavelength must be positive");
  if (!(distance > 0.0) || !std::isfinite(distance)) {
    throw DomainError("fresnel_propagate: distance must be positive");
  }
  const double dc = critical_distance(grid, wavelength);
  const double dx = grid.dx();
  const std::size_t n = grid.size();
  if (method_ == PropagationMethod::automatic) {
    method_ = distance >= dc ? PropagationMethod::impulse_response
                             : PropagationMethod::transfer_function;
  }
  if (method_ == PropagationMethod::impulse_response && distance < dc * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "impulse-response propagation over " << distance << " m aliases the kernel on a "
        << n << " x " << dx << " m grid: minimum safe distance is " << dc
        << " m, or use at most "
        << static_cast<std::size_t>(std::floor(wavelength * distance / (2.0 * dx * dx)))
        << " samples at this spacing";
    throw SamplingError(msg.str());
  }
  if (method_ == PropagationMethod::transfer_function && distance > dc * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "transfer-function propagation over " << distance << " m wraps around a " << n
        << " x " << dx << " m grid: maximum safe distance is " << dc
        << " m, or use at least "
        << static_cast<std::size_t>(std::ceil(wavelength * distance / (2.0 * dx * dx)))
        << " samples at this spacing";
    throw SamplingError(msg.str());
  }

  global_phase_ = unit_phase_cycles(distance / wavelength);
  const std::size_t m = 2 * n;
  const double inv_m = 1.0 / static_cast<double>(m);
  spectrum_.assign(m, Complex{});
  const double ld = wavelength * distance;
  if (method_ == PropagationMethod::impulse_response) {
    // 1/sqrt(j lambda d) = e^{-i pi/4} / sqrt(lambda d); the extra dx turns
    // the convolution integral into a sum.
    const Complex coeff = unit_phase(-0.25 * kPi) * (dx / std::sqrt(ld));
    for (std::size_t k = 0; k < n; ++k) {
      const double x = static_cast<double>(k) * dx;
      const Complex h = coeff * unit_phase(kPi * x * x / ld);
      spectrum_[k] = h;
      if (k > 0) spectrum_[m - k] = h;
    }
    detail::FftPlan::plan_for(m).forward(spectrum_.data());
    for (auto& s : spectrum_) s *= inv_m;
  } else {
    const double df = 1.0 / (static_cast<double>(m) * dx);
    for (std::size_t k = 0; k < m; ++k) {
      const double kk = k <= n ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(m);
      const double f = kk * df;
      spectrum_[k] = unit_phase(-kPi * ld * f * f) * inv_m;
    }
  }
}

void FresnelPropagator::apply_line(Complex* line, std::size_t stride,
                                   std::vector<Complex>& scratch) const {
  const std::size_t n = grid_.size();
  std::fill(scratch.begin() + static_cast<std::ptrdiff_t>(n), scratch.end(), Complex{});
  for (std::size_t i = 0; i < n; ++i) scratch[i] = line[i * stride];
  const auto& plan = detail::FftPlan::plan_for(2 * n);
  plan.forward(scratch.data());
  for (std::size_t k = 0; k < scratch.size(); ++k) scratch[k] *= spectrum_[k];
  plan.backward(scratch.data());
  for (std::size_t i = 0; i < n; ++i) line[i * stride] = scratch[i];
}

void FresnelPropagator::apply(ComplexField& field) const {
  if (!(field.grid == grid_)) throw DomainError("fresnel_propagate: field grid mismatch");
  if (field.wavelength != wavelength_) {
    throw DomainError("fresnel_propagate: field wavelength mismatch");
  }
  const std::size_t n = grid_.size();
  std::vector<Complex> scratch(2 * n);
  if (field.dims == 1) {
    apply_line(field.values.data(), 1, scratch);
  } else {
    for (std::size_t row = 0; row < n; ++row) apply_line(field.values.data() + row * n, 1, scratch);
    for (std::size_t col = 0; col < n; ++col) apply_line(field.values.data() + col, n, scratch);
  }
  for (auto& v : field.values) v *= global_phase_;
}

ComplexField fresnel_propagate(const ComplexField& field, double distance,
                               PropagationMethod method) {
  const FresnelPropagator prop(field.grid, field.wavelength, distance, method);
  ComplexField out = field;
  prop.apply(out);
  return out;
}

namespace {

std::vector<Complex> lens_factor(const Grid& grid, double wavelength, double focal_length,
                                 double aperture) {
  if (!(focal_length > 0.0)) throw DomainError("thin lens: focal length must be positive");
  if (!(aperture > 0.0)) throw DomainError("thin lens: aperture must be positive");
  if (aperture > grid.span() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "thin lens: aperture " << aperture << " m exceeds the grid span " << grid.span()
        << " m";
    throw DomainError(msg.str());
  }
  const double half = 0.5 * aperture * (1.0 + 1e-12);
  std::vector<Complex> factor(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.coordinate(i);
    if (std::abs(x) <= half) factor[i] = unit_phase(-kPi * x * x / (wavelength * focal_length));
  }
  return factor;
}

void multiply_separable(ComplexField& field, const std::vector<Complex>& factor) {
  const std::size_t n = field.grid.size();
  if (field.dims == 1) {
    for (std::size_t i = 0; i < n; ++i) field.values[i] *= factor[i];
    return;
  }
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) field.values[iy * n + ix] *= factor[iy] * factor[ix];
  }
}

void multiply_mask(ComplexField& field, const TransmissionFunction& t) {
  if (!(t.grid() == field.grid) || t.dims() != field.dims) {
    throw DomainError("mask: transmission function grid does not match the field");
  }
  for (std::size_t i = 0; i < field.values.size(); ++i) field.values[i] *= t.values()[i];
}

}  // namespace

ComplexField apply_thin_lens(const ComplexField& field, double focal_length, double aperture) {
  ComplexField out = field;
  multiply_separable(out, lens_factor(field.grid, field.wavelength, focal_length, aperture));
  return out;
}

PropagationPlan arm_plan(const ArmGeometry& arm, std::shared_ptr<const TransmissionFunction> object) {
  PropagationPlan plan;
  if (object) plan.stages.emplace_back(stage::Mask{std::move(object)});
  plan.stages.emplace_back(stage::FreeSpace{arm.d_object()});
  plan.stages.emplace_back(stage::ThinLens{arm.focal_length(), arm.aperture()});
  plan.stages.emplace_back(stage::FreeSpace{arm.d_image()});
  return plan;
}

PropagationPlan test_arm_plan(double d_source_to_object, const ArmGeometry& arm,
                              std::shared_ptr<const TransmissionFunction> object) {
  if (!object) throw DomainError("test_arm_plan: the test arm needs an object");
  PropagationPlan plan;
  plan.stages.emplace_back(stage::FreeSpace{d_source_to_object});
  for (auto& s : arm_plan(arm, std::move(object)).stages) plan.stages.push_back(std::move(s));
  return plan;
}

PropagationPlan reference_arm_plan(double d_source_to_object, const ArmGeometry& arm) {
  PropagationPlan plan;
  plan.stages.emplace_back(stage::FreeSpace{d_source_to_object});
  for (auto& s : arm_plan(arm).stages) plan.stages.push_back(std::move(s));
  return plan;
}

CompiledPlan::CompiledPlan(const PropagationPlan& plan, const Grid& grid, double wavelength,
                           int dims, PropagationMethod method)
    : grid_(grid), wavelength_(wavelength), dims_(dims) {
  for (const auto& s : plan.stages) {
    if (const auto* fs = std::get_if<stage::FreeSpace>(&s)) {
      steps_.emplace_back(
          std::make_shared<const FresnelPropagator>(grid, wavelength, fs->distance, method));
    } else if (const auto* lens = std::get_if<stage::ThinLens>(&s)) {
      steps_.emplace_back(LensStep{lens_factor(grid, wavelength, lens->focal_length, lens->aperture)});
    } else {
      const auto& mask = std::get<stage::Mask>(s);
      if (!mask.transmission) throw DomainError("mask stage without a transmission function");
      if (!(mask.transmission->grid() == grid) || mask.transmission->dims() != dims) {
        throw DomainError("mask: transmission function grid does not match the plan grid");
      }
      steps_.emplace_back(MaskStep{mask.transmission});
    }
  }
}

void CompiledPlan::apply(ComplexField& field) const {
  if (!(field.grid == grid_) || field.dims != dims_ || field.wavelength != wavelength_) {
    throw DomainError("run_plan: field does not match the compiled plan");
  }
  for (const auto& step : steps_) {
    if (const auto* prop = std::get_if<std::shared_ptr<const FresnelPropagator>>(&step)) {
      (*prop)->apply(field);
    } else if (const auto* lens = std::get_if<LensStep>(&step)) {
      multiply_separable(field, lens->factor);
    } else {
      multiply_mask(field, *std::get<MaskStep>(step).transmission);
    }
  }
}

ComplexField run_plan(const ComplexField& field, const PropagationPlan& plan,
                      PropagationMethod method) {
  const CompiledPlan compiled(plan, field.grid, field.wavelength, field.dims, method);
  ComplexField out = field;
  compiled.apply(out);
  return out;
}

double apsf_closed_form(const ArmGeometry& arm, double x_object, double x_image,
                        double wavelength) {
  return sinc((x_object / arm.d_object() + x_image / arm.d_image()) * arm.aperture() / wavelength);
}

std::size_t apsf_min_quadrature_points(const ArmGeometry& arm, double x_object,
                                       const Grid& image_grid, double wavelength) {
  const double half = 0.5 * arm.aperture();
  const double shortest = std::min({arm.d_object(), arm.d_image(), arm.focal_length()});
  const double fresnel_number = half * half / (wavelength * shortest);
  double linear = 0.0;
  for (const double xi : {image_grid.coordinate(0), image_grid.coordinate(image_grid.size() - 1)}) {
    linear = std::max(linear, std::abs(x_object / arm.d_object() + xi / arm.d_image()) *
                                  arm.aperture() / wavelength);
  }
  const double cycles = std::ceil(std::max(fresnel_number, linear));
  return std::max<std::size_t>(65, 16 * static_cast<std::size_t>(cycles) + 1);
}

std::vector<double> apsf_numeric(const ArmGeometry& arm, double x_object, const Grid& image_grid,
                                 double wavelength, std::size_t quadrature_points) {
  const std::size_t needed = apsf_min_quadrature_points(arm, x_object, image_grid, wavelength);
  if (quadrature_points < needed) {
    std::ostringstream msg;
    msg << "apsf_numeric: " << quadrature_points << " quadrature points under-resolve the "
        << "aperture phase; need at least " << needed;
    throw DomainError(msg.str());
  }
  const std::size_t points = quadrature_points | 1;  // Simpson needs an odd count
  const double half = 0.5 * arm.aperture();
  const double h = arm.aperture() / static_cast<double>(points - 1);
  const double d1 = arm.d_object();
  const double d2 = arm.d_image();
  const double f = arm.focal_length();
  const double lam = wavelength;
  const Complex prefactor = unit_phase_cycles((d1 + d2) / lam) / (Complex(0.0, lam * d1) *
                                                                   Complex(0.0, lam * d2));

  std::vector<double> out(image_grid.size());
  for (std::size_t i = 0; i < image_grid.size(); ++i) {
    const double xi = image_grid.coordinate(i);
    Complex sum{};
    for (std::size_t q = 0; q < points; ++q) {
      const double xf = -half + static_cast<double>(q) * h;
      const double phase = kPi * (x_object - xf) * (x_object - xf) / (lam * d1) -
                           kPi * xf * xf / (lam * f) + kPi * (xi - xf) * (xi - xf) / (lam * d2);
      const double w = (q == 0 || q == points - 1) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
      sum += w * unit_phase(phase);
    }
    out[i] = std::abs(prefactor * sum * (h / 3.0));
  }
  return out;
}

}  // namespace ghost
