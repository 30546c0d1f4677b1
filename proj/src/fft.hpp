#pragma once

#include <cstddef>

#include "ghost/core.hpp"

namespace ghost::detail {

/// Cached FFTW plans for one transform length.
///
/// Plans are created with FFTW_ESTIMATE | FFTW_UNALIGNED so that execution
/// takes the same code path for any buffer, which keeps results bit-identical
/// no matter which thread or allocation runs a given transform. Execution is
/// thread-safe; creation is serialized inside plan_for().
class FftPlan {
 public:
  static const FftPlan& plan_for(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(Complex* data) const;
  /// Unnormalized inverse transform.
  void backward(Complex* data) const;

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan();

 private:
  explicit FftPlan(std::size_t n);
  std::size_t n_;
  void* forward_;
  void* backward_;
};

}  // namespace ghost::detail
