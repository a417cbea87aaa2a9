#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace lebnn {

// Non-negative probability scalar: mantissa in [1,2) (or exactly 0) times
// 2^exponent with a 64-bit exponent. Masses such as 2^(-2^60) stay
// representable where a double underflows.
class WideFloat {
 public:
  constexpr WideFloat() = default;
  explicit WideFloat(double value);

  static WideFloat zero() { return WideFloat(); }
  static WideFloat one() { return WideFloat(1.0); }
  // 2^exponent, exact.
  static WideFloat pow2(std::int64_t exponent);
  // 2^log2_value.
  static WideFloat exp2(long double log2_value);
  // e^(-x) for x >= 0.
  static WideFloat exp_neg(long double x);

  double mantissa() const { return mantissa_; }
  std::int64_t exponent() const { return exponent_; }
  bool is_zero() const { return mantissa_ == 0.0; }

  // Nearest double; 0 below the subnormal range, +inf above DBL_MAX.
  double to_double() const;
  long double to_long_double() const;
  // log2 of the value; -inf for zero.
  long double log2() const;

  WideFloat& operator+=(const WideFloat& rhs);
  // Requires rhs <= *this up to rounding (relative 2^-40 of rhs); a rounding
  // overshoot clamps to zero, anything larger throws std::domain_error.
  WideFloat& operator-=(const WideFloat& rhs);
  WideFloat& operator*=(const WideFloat& rhs);
  WideFloat& operator/=(const WideFloat& rhs);
  WideFloat& operator*=(double rhs);

  friend WideFloat operator+(WideFloat a, const WideFloat& b) { return a += b; }
  friend WideFloat operator-(WideFloat a, const WideFloat& b) { return a -= b; }
  friend WideFloat operator*(WideFloat a, const WideFloat& b) { return a *= b; }
  friend WideFloat operator/(WideFloat a, const WideFloat& b) { return a /= b; }
  friend WideFloat operator*(WideFloat a, double b) { return a *= b; }
  friend WideFloat operator*(double a, WideFloat b) { return b *= a; }

  friend bool operator==(const WideFloat& a, const WideFloat& b) {
    return a.mantissa_ == b.mantissa_ && (a.is_zero() || a.exponent_ == b.exponent_);
  }
  friend std::strong_ordering operator<=>(const WideFloat& a, const WideFloat& b);

  // "1.234567e-77" style, exponent in base 10, valid far outside double range.
  std::string to_string(int digits = 10) const;

 private:
  void normalize();

  double mantissa_ = 0.0;
  std::int64_t exponent_ = 0;
};

std::ostream& operator<<(std::ostream& os, const WideFloat& w);

// a^power for real power >= 0 (fractional powers allowed).
WideFloat pow(const WideFloat& base, double power);
WideFloat sqrt(const WideFloat& value);

// a <= b allowing a relative slack of 2^-40 on b for accumulated rounding.
bool leq_up_to_rounding(const WideFloat& a, const WideFloat& b);

// A probability split into complementary parts, inside + outside = 1. Both
// parts are carried so that powers of the outside part never go through
// the cancellation 1 - inside when inside is close to 1.
struct MassSplit {
  WideFloat inside;
  WideFloat outside;
};

// outside^m.
WideFloat complement_power(const MassSplit& split, double m);

// hi.outside^m - lo.outside^m where lo.outside = hi.outside - gap, computed
// without subtracting two nearly-equal powers.
WideFloat complement_power_gap(const MassSplit& hi, const MassSplit& lo, const WideFloat& gap,
                               double m);

}  // namespace lebnn
