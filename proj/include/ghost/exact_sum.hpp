#pragma once

#include <array>
#include <cstdint>

namespace ghost {

/// Order-independent running sum of doubles.
///
/// Each addend is converted to a 256-bit two's-complement fixed-point number
/// with 128 fractional bits (bits below 2^-128 are truncated toward zero, per
/// addend) and added as an integer. Integer addition is associative, so any
/// grouping or ordering of the same addends gives bit-identical totals. This
/// is what makes accumulator merges exact and thread count irrelevant.
///
/// Representable magnitudes: up to 2^127 (about 1.7e38). Overflow throws.
class ExactSum {
 public:
  ExactSum() = default;

  void add(double value);
  ExactSum& operator+=(const ExactSum& other);

  double value() const;
  bool operator==(const ExactSum& other) const = default;

 private:
  std::array<std::uint64_t, 4> limbs_{};  // little-endian
};

}  // namespace ghost
