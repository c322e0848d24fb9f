#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "triplex/error.hpp"

namespace triplex {

// All counting arithmetic is exact: 64-bit with overflow checks that throw.
using Int = std::int64_t;

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r))
    fail(ErrorCategory::Overflow, "integer overflow in addition");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r))
    fail(ErrorCategory::Overflow, "integer overflow in multiplication");
  return r;
}

// C(n, r) computed exactly; 0 when r < 0 or r > n.
inline Int binomial(Int n, Int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  if (r > n - r) r = n - r;
  Int acc = 1;
  for (Int i = 1; i <= r; ++i) {
    // acc * (n - r + i) is divisible by i at every step
    acc = checked_mul(acc, n - r + i) / i;
  }
  return acc;
}

// Exact rational with reduction; only what the A/B computation needs.
struct Rational {
  Int num = 0;
  Int den = 1;

  static Rational of(Int n, Int d) {
    if (d == 0) fail(ErrorCategory::Range, "rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    Int g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    return {n, d};
  }
  Rational times(Int k) const { return of(checked_mul(num, k), den); }
  Rational over(Int k) const { return of(num, checked_mul(den, k)); }
  bool integral() const { return den == 1; }
  std::string str() const {
    return den == 1 ? std::to_string(num)
                    : std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace triplex
