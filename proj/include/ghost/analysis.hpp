#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghost/core.hpp"

namespace ghost {

enum class KernelLabel { single_arm_apsf, two_arm_kernel };

std::string to_string(KernelLabel label);

/// Amplitude kernel sampled over object-plane offsets u = x0 + x_t / M_t.
struct KernelCurve {
  Grid grid;
  std::vector<double> values;
  KernelLabel label;

  Profile profile() const;
};

struct ResolutionReport {
  std::optional<double> fwhm;  // absent when the main peak has no half-max crossing
  double rayleigh_limit = 0.0;
  std::optional<double> dip_depth;  // present only for two-peak profiles
  bool resolvable = false;
};

/// Dip depth that two equal 1-D sinc^2 spots show at the Rayleigh spacing,
/// 1 - 8/pi^2. Profiles at or above it count as resolved.
double rayleigh_dip_depth();

/// Single-arm APSF sinc(u L / (lambda d_object)) on offset_grid.
KernelCurve single_arm_apsf(const ArmGeometry& arm, double wavelength, const Grid& offset_grid);

/// h_g(u) = sinc(u L_t / (lambda d1)) * sinc(u L_r / (lambda d3)).
KernelCurve kernel_hg(const ArmGeometry& test_arm, const ArmGeometry& ref_arm, double wavelength,
                      const Grid& offset_grid);

/// Full width at half maximum of the global peak.
///
/// Walks outward from the first global maximum to the first sample below
/// half of it on each side and interpolates linearly between the bracketing
/// samples. Pass |amplitude| for APSF curves and intensity for images;
/// the two give different widths. Throws DomainError when either side never
/// drops below half maximum.
double fwhm(const Profile& profile);

/// fwhm(kernel_hg) / fwhm(|single-arm APSF| of the test arm), both measured
/// on amplitude curves sampled finely enough that linear interpolation is
/// exact to better than 1e-6.
double fwhm_ratio_fig3(const ArmGeometry& test_arm, const ArmGeometry& ref_arm, double wavelength);

/// A local maximum found by find_peaks.
struct Peak {
  std::size_t index;  // first sample of the (possibly flat) top
  double height;
  double prominence;
};

/// Local maxima (flat tops allowed) whose height above the profile minimum is
/// at least `min_height` and whose topographic prominence is at least
/// `min_prominence`, both as fractions of the profile's peak-to-minimum range.
std::vector<Peak> find_peaks(std::span<const double> values, double min_height = 0.1,
                             double min_prominence = 0.05);

/// 1 - valley / min(peak1, peak2) after subtracting the profile minimum:
/// 0 for merged peaks, 1 for a valley reaching the baseline.
///
/// Peaks are those of find_peaks with the defaults above (prominence at least
/// 5% of the range keeps estimator noise from counting as structure). Throws
/// DomainError naming the detected count unless exactly two are found.
double dip_depth(std::span<const double> values);

/// Dip depth between every pair of adjacent peaks; empty when fewer than two.
std::vector<double> dip_depths(std::span<const double> values);

/// Scales to peak value 1. The baseline is not subtracted.
/// Throws DomainError when the maximum is not positive.
std::vector<double> normalize_profile(std::span<const double> values);
Profile normalize_profile(const Profile& profile);

/// Normalized RMS difference between a simulated profile and a reference:
/// the simulation is first scaled by the least-squares factor onto the
/// reference, then rms(scaled - reference) / (max - min of reference).
double nrms_error(std::span<const double> simulated, std::span<const double> reference);

/// Median over the listed rows of a row-major image of each row's mean
/// adjacent-pair dip depth. Rows with fewer than two peaks score 0.
double median_row_dip(std::span<const double> image, std::size_t width,
                      std::span<const std::size_t> rows);

/// FWHM, Rayleigh limit of the test arm and two-peak resolvability.
ResolutionReport resolution_report(const Profile& profile, const ArmGeometry& test_arm,
                                   double wavelength);

}  // namespace ghost
