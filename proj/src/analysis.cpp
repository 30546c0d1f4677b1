#include "ghost/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ghost {

std::string to_string(KernelLabel label) {
  return label == KernelLabel::single_arm_apsf ? "single_arm_apsf" : "two_arm_kernel";
}

Profile KernelCurve::profile() const { return {grid.coordinates(), values}; }

double rayleigh_dip_depth() { return 1.0 - 8.0 / (kPi * kPi); }

KernelCurve single_arm_apsf(const ArmGeometry& arm, double wavelength, const Grid& offset_grid) {
  KernelCurve curve{offset_grid, std::vector<double>(offset_grid.size()), KernelLabel::single_arm_apsf};
  const double scale = arm.aperture() / (wavelength * arm.d_object());
  for (std::size_t i = 0; i < offset_grid.size(); ++i) {
    curve.values[i] = sinc(offset_grid.coordinate(i) * scale);
  }
  return curve;
}

KernelCurve kernel_hg(const ArmGeometry& test_arm, const ArmGeometry& ref_arm, double wavelength,
                      const Grid& offset_grid) {
  KernelCurve curve{offset_grid, std::vector<double>(offset_grid.size()), KernelLabel::two_arm_kernel};
  const double st = test_arm.aperture() / (wavelength * test_arm.d_object());
  const double sr = ref_arm.aperture() / (wavelength * ref_arm.d_object());
  for (std::size_t i = 0; i < offset_grid.size(); ++i) {
    const double u = offset_grid.coordinate(i);
    curve.values[i] = sinc(u * st) * sinc(u * sr);
  }
  return curve;
}

double fwhm(const Profile& profile) {
  const auto& v = profile.values;
  const auto& x = profile.x;
  if (v.size() < 3 || x.size() != v.size()) throw DomainError("fwhm: need at least 3 samples");
  const auto peak_it = std::max_element(v.begin(), v.end());
  const auto peak = static_cast<std::size_t>(peak_it - v.begin());
  const double half = 0.5 * *peak_it;
  if (!(*peak_it > 0.0)) throw DomainError("fwhm: profile has no positive maximum");

  std::size_t l = peak;
  while (l > 0 && v[l] >= half) --l;
  std::size_t r = peak;
  while (r + 1 < v.size() && v[r] >= half) ++r;
  if (v[l] >= half || v[r] >= half) {
    throw DomainError("fwhm: profile does not fall below half maximum on both sides");
  }
  auto cross = [&](std::size_t below, std::size_t above) {
    return x[below] + (half - v[below]) / (v[above] - v[below]) * (x[above] - x[below]);
  };
  return cross(r, r - 1) - cross(l, l + 1);
}

double fwhm_ratio_fig3(const ArmGeometry& test_arm, const ArmGeometry& ref_arm, double wavelength) {
  constexpr std::size_t kSamples = 8001;
  auto measure = [&](const KernelCurve& curve) {
    Profile p = curve.profile();
    for (auto& value : p.values) value = std::abs(value);
    return fwhm(p);
  };
  const double zero_t = wavelength * test_arm.d_object() / test_arm.aperture();
  const double zero_r = wavelength * ref_arm.d_object() / ref_arm.aperture();
  const double zero_g = std::min(zero_t, zero_r);
  const Grid grid_a(kSamples, 4.0 * zero_t / static_cast<double>(kSamples - 1));
  const Grid grid_g(kSamples, 4.0 * zero_g / static_cast<double>(kSamples - 1));
  return measure(kernel_hg(test_arm, ref_arm, wavelength, grid_g)) /
         measure(single_arm_apsf(test_arm, wavelength, grid_a));
}

std::vector<Peak> find_peaks(std::span<const double> v, double min_height, double min_prominence) {
  std::vector<Peak> peaks;
  if (v.size() < 3) return peaks;
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double base = *lo_it;
  const double range = *hi_it - base;
  if (!(range > 0.0)) return peaks;

  const std::size_t n = v.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(v[i] > v[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;  // extend over a flat top
    while (j + 1 < n && v[j + 1] == v[i]) ++j;
    if (j + 1 >= n || !(v[j + 1] < v[i])) {
      i = j + 1;
      continue;
    }
    const double h = v[i];
    double left_min = h;
    for (std::size_t k = i; k-- > 0;) {
      if (v[k] > h) break;
      left_min = std::min(left_min, v[k]);
    }
    double right_min = h;
    for (std::size_t k = j + 1; k < n; ++k) {
      if (v[k] > h) break;
      right_min = std::min(right_min, v[k]);
    }
    const double prominence = h - std::max(left_min, right_min);
    if (h - base >= min_height * range && prominence >= min_prominence * range) {
      peaks.push_back({i, h, prominence});
    }
    i = j + 1;
  }
  return peaks;
}

std::vector<double> dip_depths(std::span<const double> v) {
  const auto peaks = find_peaks(v);
  std::vector<double> out;
  if (peaks.size() < 2) return out;
  const double base = *std::min_element(v.begin(), v.end());
  for (std::size_t p = 0; p + 1 < peaks.size(); ++p) {
    const auto a = peaks[p].index;
    const auto b = peaks[p + 1].index;
    const double valley = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(a),
                                            v.begin() + static_cast<std::ptrdiff_t>(b) + 1);
    const double lower = std::min(peaks[p].height, peaks[p + 1].height);
    out.push_back(1.0 - (valley - base) / (lower - base));
  }
  return out;
}

double dip_depth(std::span<const double> v) {
  const auto peaks = find_peaks(v);
  if (peaks.size() != 2) {
    std::ostringstream msg;
    msg << "dip_depth: expected 2 peaks, found " << peaks.size();
    throw DomainError(msg.str());
  }
  return dip_depths(v).front();
}

std::vector<double> normalize_profile(std::span<const double> v) {
  if (v.empty()) throw DomainError("normalize_profile: empty profile");
  const double peak = *std::max_element(v.begin(), v.end());
  if (!(peak > 0.0)) throw DomainError("normalize_profile: maximum is not positive");
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out) x /= peak;
  return out;
}

Profile normalize_profile(const Profile& profile) {
  return {profile.x, normalize_profile(std::span<const double>(profile.values))};
}

double nrms_error(std::span<const double> sim, std::span<const double> ref) {
  if (sim.size() != ref.size() || ref.empty()) throw DomainError("nrms_error: size mismatch");
  double sr = 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < sim.size(); ++i) {
    sr += sim[i] * ref[i];
    ss += sim[i] * sim[i];
  }
  const double alpha = ss > 0.0 ? sr / ss : 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i < sim.size(); ++i) err += std::pow(alpha * sim[i] - ref[i], 2);
  const auto [lo, hi] = std::minmax_element(ref.begin(), ref.end());
  if (!(*hi > *lo)) throw DomainError("nrms_error: reference profile is flat");
  return std::sqrt(err / static_cast<double>(sim.size())) / (*hi - *lo);
}

double median_row_dip(std::span<const double> image, std::size_t width,
                      std::span<const std::size_t> rows) {
  if (width == 0 || image.size() % width != 0) throw DomainError("median_row_dip: bad image shape");
  if (rows.empty()) throw DomainError("median_row_dip: no rows selected");
  std::vector<double> scores;
  for (const auto r : rows) {
    if (r >= image.size() / width) throw DomainError("median_row_dip: row out of range");
    const auto d = dip_depths(image.subspan(r * width, width));
    double mean = 0.0;
    for (const double v : d) mean += v;
    scores.push_back(d.empty() ? 0.0 : mean / static_cast<double>(d.size()));
  }
  std::sort(scores.begin(), scores.end());
  const std::size_t m = scores.size();
  return m % 2 ? scores[m / 2] : 0.5 * (scores[m / 2 - 1] + scores[m / 2]);
}

ResolutionReport resolution_report(const Profile& profile, const ArmGeometry& test_arm,
                                   double wavelength) {
  ResolutionReport report;
  report.rayleigh_limit = rayleigh_limit(wavelength, test_arm.d_object(), test_arm.aperture());
  try {
    report.fwhm = fwhm(profile);
  } catch (const DomainError&) {
  }
  if (find_peaks(profile.values).size() == 2) report.dip_depth = dip_depth(profile.values);
  report.resolvable = report.dip_depth && *report.dip_depth >= rayleigh_dip_depth();
  return report;
}

}  // namespace ghost
