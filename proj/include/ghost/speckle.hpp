#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ghost/core.hpp"

namespace ghost {

enum class IntensityProfile { uniform, gaussian };

/// Statistical description of the pseudo-thermal source plane.
struct SourceSpec {
  /// Full width of the emitting region, centered on the axis (a square in
  /// 2-D). Unset means the source covers the whole grid.
  std::optional<double> extent;
  /// Transverse field correlation length. Unset means one grid sample, the
  /// fully incoherent limit.
  std::optional<double> coherence_length;
  IntensityProfile profile = IntensityProfile::uniform;
  /// Standard deviation of the Gaussian intensity envelope exp(-r^2 / 2w^2).
  double gaussian_width = 0.0;
  double mean_intensity = 1.0;  // I0

  double coherence_length_on(const Grid& grid) const {
    return coherence_length.value_or(grid.dx());
  }

  /// Mean intensity I(x) of the source at x (or at (x, y) in 2-D).
  double intensity_at(double x, double y = 0.0) const;

  /// Throws DomainError if the spec cannot be realized on `grid`.
  void validate(const Grid& grid) const;
};

/// One member of the thermal ensemble.
struct SpeckleRealization {
  ComplexField field;
  std::uint64_t realization_index;
  std::uint64_t seed_used;
};

/// Seed of the generator for realization `index` of run `seed`.
///
/// Counter-based: a SplitMix64 mix of seed XOR mixed(index), so any
/// realization can be regenerated alone, on any worker, in any order.
std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index);

/// Discrete correlation filter used for coherence_length > dx.
///
/// Taps w_k proportional to exp(-(k dx)^2 / l_c^2), |k dx| <= 4 l_c,
/// normalized so sum w_k^2 = 1. Filtering white circular noise with it gives
/// a field whose |g1| at lag u is sum_k w_k w_{k+u/dx}, close to
/// exp(-u^2 / (2 l_c^2)).
std::vector<double> coherence_filter_taps(double coherence_length, double dx);

/// Draws realization `index` of the source field.
///
/// Values are circular complex Gaussian with zero mean and E|E(x)|^2 = I(x).
/// At coherence_length <= dx samples are independent (real and imaginary
/// parts each of variance I(x)/2); otherwise white noise is filtered with
/// coherence_filter_taps before the intensity envelope is applied.
SpeckleRealization generate_realization(const SourceSpec& spec, const Grid& grid,
                                        double wavelength, std::uint64_t seed,
                                        std::uint64_t index, int dims = 1);

/// Ensemble estimate of G1(x, x') = <E(x) E*(x')> at the nearest samples.
/// Needs at least two 1-D realizations on a common grid.
Complex empirical_g1(std::span<const SpeckleRealization> realizations, double x, double x_prime);

}  // namespace ghost
