#include "ghost/exact_sum.hpp"

#include <cmath>
#include <stdexcept>

#include "ghost/core.hpp"

namespace ghost {

namespace {

using Limbs = std::array<std::uint64_t, 4>;
constexpr int kFracBits = 128;

bool negative(const Limbs& a) { return (a[3] >> 63) != 0; }

void negate(Limbs& a) {
  unsigned carry = 1;
  for (auto& limb : a) {
    limb = ~limb;
    const std::uint64_t s = limb + carry;
    carry = (carry && s == 0) ? 1 : 0;
    limb = s;
  }
}

// a += b, throwing on signed overflow.
void add_checked(Limbs& a, const Limbs& b) {
  const bool sa = negative(a);
  const bool sb = negative(b);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::uint64_t s1 = a[i] + b[i];
    const std::uint64_t c1 = s1 < a[i] ? 1 : 0;
    const std::uint64_t s2 = s1 + carry;
    const std::uint64_t c2 = s2 < s1 ? 1 : 0;
    a[i] = s2;
    carry = c1 | c2;
  }
  if (sa == sb && negative(a) != sa) throw DomainError("ExactSum: overflow");
}

}  // namespace

void ExactSum::add(double value) {
  if (value == 0.0) return;
  if (!std::isfinite(value)) throw DomainError("ExactSum: non-finite addend");
  int exponent = 0;
  const double frac = std::frexp(std::abs(value), &exponent);  // |value| = frac * 2^exponent
  const auto mantissa = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  const int shift = exponent - 53 + kFracBits;  // bit position of the mantissa LSB

  Limbs term{};
  if (shift < 0) {
    if (shift <= -64) return;
    term[0] = mantissa >> (-shift);
  } else {
    if (shift + 53 > 255) throw DomainError("ExactSum: addend too large");
    const auto limb = static_cast<std::size_t>(shift / 64);
    const int bit = shift % 64;
    term[limb] = mantissa << bit;
    if (bit > 0 && limb + 1 < 4) term[limb + 1] = mantissa >> (64 - bit);
  }
  if (value < 0.0) negate(term);
  add_checked(limbs_, term);
}

ExactSum& ExactSum::operator+=(const ExactSum& other) {
  add_checked(limbs_, other.limbs_);
  return *this;
}

double ExactSum::value() const {
  Limbs mag = limbs_;
  const bool neg = negative(mag);
  if (neg) negate(mag);
  double out = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    out += std::ldexp(static_cast<double>(mag[i]), 64 * static_cast<int>(i) - kFracBits);
  }
  return neg ? -out : out;
}

}  // namespace ghost
