#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ghost/core.hpp"
#include "ghost/exact_sum.hpp"
#include "ghost/objects.hpp"
#include "ghost/optics.hpp"
#include "ghost/speckle.hpp"

namespace ghost {

/// Complete description of one two-arm experiment.
struct SystemConfig {
  double wavelength;
  double d_source_to_object;  // d0, also the source -> sigma-plane distance
  ArmGeometry test_arm;
  ArmGeometry reference_arm;
  SourceSpec source;
  std::shared_ptr<const TransmissionFunction> object;
  Grid grid;  // shared by source, object, lens and detector planes
  int dims = 1;
  std::size_t ensemble_size = 1;
  std::uint64_t seed = 0;
  PropagationMethod method = PropagationMethod::automatic;

  /// Throws DomainError on the first violated invariant.
  void validate() const;
};

/// Detector intensities of both arms for one source realization.
struct FramePair {
  std::vector<double> intensity_test;
  std::vector<double> intensity_ref;
  std::uint64_t realization_index = 0;
};

/// Fluctuation-correlation estimate on the matched diagonal
/// x_r = (M_r / M_t) x_t, in detector coordinates of D_t.
struct GhostImage {
  Grid grid;
  int dims = 1;
  /// <I_t I_r> - <I_t><I_r>. Raw estimator values: small negatives at
  /// finite N are kept, never clamped.
  std::vector<double> values;
  /// <I_t>, the conventional image recorded by the test arm alone.
  std::vector<double> direct;
  /// 0 where the matched reference sample falls outside D_r's grid.
  std::vector<std::uint8_t> valid;
  std::size_t frames_used = 0;
};

/// Mergeable running sums for the fluctuation correlation.
///
/// Sums are ExactSum, so accumulate() and merge() commute and associate
/// exactly: any split of a frame stream into parts, accumulated separately
/// and merged in any order, reproduces sequential accumulation bit for bit.
class CorrelationAccumulator {
 public:
  /// `ratio` is M_r / M_t. The reference sample matched to detector sample x
  /// is the one at ratio * x; it must land exactly on a grid sample (checked
  /// to 1e-6 dx), which integer ratios guarantee.
  CorrelationAccumulator(const Grid& detector_grid, int dims, double ratio,
                         bool with_matrix = false);

  void accumulate(const FramePair& frame);
  void accumulate(std::span<const double> intensity_test, std::span<const double> intensity_ref);
  void merge(const CorrelationAccumulator& other);

  std::size_t count() const { return count_; }
  bool has_matrix() const { return !sum_matrix_.empty(); }
  const Grid& grid() const { return grid_; }
  int dims() const { return dims_; }

  /// Throws DomainError unless count >= 2.
  GhostImage ghost_image() const;
  /// sum_t / count. Throws DomainError if count == 0.
  std::vector<double> direct_image() const;
  /// Full G(x_t, x_r), row i = x_t sample, column j = x_r sample (1-D only).
  std::vector<double> correlation_matrix() const;

 private:
  std::size_t samples() const { return dims_ == 1 ? grid_.size() : grid_.size() * grid_.size(); }

  Grid grid_;
  int dims_;
  double ratio_;
  std::vector<std::int64_t> matched_;  // reference index per detector sample, -1 if none
  std::size_t count_ = 0;
  std::vector<ExactSum> sum_t_;
  std::vector<ExactSum> sum_r_;  // at the matched reference sample
  std::vector<ExactSum> sum_cross_;
  std::vector<ExactSum> sum_r_full_;  // matrix mode only
  std::vector<ExactSum> sum_matrix_;
};

/// Frame generator for one test arm and one or more reference arms that all
/// see the same source realization (ideal beam-splitter copies).
///
/// Plans are compiled once; simulate() is const and thread-safe.
class GhostSimulator {
 public:
  struct Frame {
    std::uint64_t index = 0;
    std::vector<double> test;
    std::vector<std::vector<double>> refs;  // one per reference arm
  };

  explicit GhostSimulator(const SystemConfig& config);
  GhostSimulator(const SystemConfig& config, std::vector<ArmGeometry> reference_arms);

  const SystemConfig& config() const { return config_; }
  const std::vector<ArmGeometry>& reference_arms() const { return reference_arms_; }

  /// Deterministic in (config.seed, index).
  Frame simulate(std::uint64_t index) const;

  /// One empty accumulator per reference arm.
  std::vector<CorrelationAccumulator> make_accumulators(bool with_matrix = false) const;

  using Progress = std::function<void(std::uint64_t frames_done)>;

  /// Simulates frames [begin, end) on `threads` workers and accumulates them
  /// into `accs` (one per reference arm). The result does not depend on the
  /// worker count.
  void run(std::uint64_t begin, std::uint64_t end, std::vector<CorrelationAccumulator>& accs,
           unsigned threads = 1, const Progress& progress = {}) const;

 private:
  SystemConfig config_;
  std::vector<ArmGeometry> reference_arms_;
  std::unique_ptr<const CompiledPlan> to_object_;
  std::unique_ptr<const CompiledPlan> test_;
  std::vector<std::unique_ptr<const CompiledPlan>> refs_;
};

/// Source realization `index` through both arms of `config`.
FramePair simulate_frame(const SystemConfig& config, std::uint64_t index);

/// Detector-plane profile re-parameterized to object coordinates
/// x_object = -x_detector / M (arm images are inverted), sorted ascending.
Profile to_object_coordinates(const Grid& detector_grid, std::span<const double> values,
                              double magnification);

/// 2-D analogue for unit magnification: maps each axis through x -> -x on the
/// same grid, so index i lands on n - i. Row and column 0 have no source
/// sample and are 0.
std::vector<double> to_object_orientation(std::size_t n, std::span<const double> values);

/// Two-arm kernel h_g(u) = sinc(u L_t / (lambda d1)) * sinc(u L_r / (lambda d3)).
double two_arm_kernel(const ArmGeometry& test_arm, const ArmGeometry& reference_arm,
                      double wavelength, double u);

/// Quadrature of |integral t(x0) h_g(x0 - xi) dx0|^2 at object coordinates
/// xi, peak-normalized: the matched-diagonal ghost image for a uniform,
/// infinitely large incoherent source.
///
/// Uses the object's exact slit edges (adaptive Gauss-Kronrod), its point
/// position (sifting), or else its samples (midpoint rule, which needs at
/// least 8 samples per kernel zero spacing). Throws DomainError when the
/// quadrature cannot be trusted.
Profile analytic_ghost_image(const TransmissionFunction& object, const SystemConfig& config,
                             std::span<const double> object_x);

/// Incoherent image through the test arm alone,
/// integral |t(x0)|^2 sinc^2((x0 - xi) L_t / (lambda d1)) dx0, peak-normalized.
Profile analytic_direct_image(const TransmissionFunction& object, const SystemConfig& config,
                              std::span<const double> object_x);

}  // namespace ghost
