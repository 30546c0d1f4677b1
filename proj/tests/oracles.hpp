#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library, so agreement with it is a real cross-check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

inline double sinc(double v) { return v == 0.0 ? 1.0 : std::sin(pi * v) / (pi * v); }

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-10) {
  double flo = f(lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// v with sinc(v) = 1/2, about 0.6034.
inline double sinc_half() {
  return bisect([](double v) { return sinc(v) - 0.5; }, 0.01, 0.99);
}
/// v with sinc(v)^2 = 1/2, about 0.4430.
inline double sinc2_half() {
  return bisect([](double v) { return sinc(v) * sinc(v) - 0.5; }, 0.01, 0.99);
}
/// v with sinc(v) sinc(r v) = 1/2 (for r >= 1, root below 1/r).
inline double product_half(double r) {
  return bisect([r](double v) { return sinc(v) * sinc(r * v) - 0.5; }, 1e-6, 1.0 / std::max(1.0, r) - 1e-9);
}

/// Composite Simpson's rule with n (even) intervals.
template <class F>
auto simpson(F f, double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  auto sum = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + static_cast<double>(i) * h);
  return sum * (h / 3.0);
}

/// Asymptotic Kolmogorov distribution survival function Q(lambda).
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// One-sample KS test against the CDF `cdf`; returns the p-value (with the
/// Stephens small-sample correction).
inline double ks_pvalue(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - c, c - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

/// Continuous Fresnel kernel of the library's 1-D convention.
inline std::complex<double> fresnel_kernel(double x, double wavelength, double d) {
  const double cycles = std::fmod(d / wavelength, 1.0) + x * x / (2.0 * wavelength * d);
  const std::complex<double> phase = std::polar(1.0, 2.0 * pi * (cycles - std::floor(cycles)));
  return phase / std::sqrt(std::complex<double>(0.0, wavelength * d));
}

/// Fresnel integrals C(z) + i S(z) = integral_0^z exp(i pi t^2 / 2) dt, by
/// Simpson's rule with enough points per oscillation.
inline std::complex<double> fresnel_integral(double z) {
  const std::size_t n = 2000 + static_cast<std::size_t>(64.0 * z * z);
  return simpson([](double t) { return std::polar(1.0, pi * t * t / 2.0); }, 0.0, z, n);
}

/// Exact Fresnel diffraction of a unit plane wave through the opening
/// [lo, hi], at transverse position x and distance d, without the e^{jkd}
/// factor.
inline std::complex<double> rect_diffraction(double lo, double hi, double x, double wavelength,
                                             double d) {
  const double s = std::sqrt(2.0 / (wavelength * d));
  const auto f = fresnel_integral(s * (hi - x)) - fresnel_integral(s * (lo - x));
  return f / std::complex<double>(1.0, 1.0);
}

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("ghostsim_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace oracle
