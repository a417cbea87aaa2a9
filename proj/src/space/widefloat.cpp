#include "lebnn/widefloat.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace lebnn {

namespace {

// Beyond this exponent gap the smaller addend is below half an ulp.
constexpr std::int64_t kAlignLimit = 60;
constexpr long double kLn2 = 0.693147180559945309417232121458176568L;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw std::overflow_error("WideFloat exponent overflow");
  }
  return out;
}

}  // namespace

WideFloat::WideFloat(double value) : mantissa_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::domain_error("WideFloat requires a finite non-negative value");
  }
  normalize();
}

void WideFloat::normalize() {
  if (mantissa_ == 0.0) {
    exponent_ = 0;
    return;
  }
  int e = 0;
  const double m = std::frexp(mantissa_, &e);
  mantissa_ = 2.0 * m;
  exponent_ = checked_add(exponent_, static_cast<std::int64_t>(e) - 1);
}

WideFloat WideFloat::pow2(std::int64_t exponent) {
  WideFloat out;
  out.mantissa_ = 1.0;
  out.exponent_ = exponent;
  return out;
}

WideFloat WideFloat::exp2(long double log2_value) {
  if (std::isnan(log2_value)) {
    throw std::domain_error("WideFloat::exp2 of NaN");
  }
  if (log2_value == -std::numeric_limits<long double>::infinity()) {
    return WideFloat();
  }
  if (log2_value > 9.0e18L || log2_value < -9.0e18L) {
    if (log2_value < 0) {
      return WideFloat();
    }
    throw std::overflow_error("WideFloat::exp2 overflow");
  }
  const long double whole = std::floor(log2_value);
  const long double frac = log2_value - whole;
  WideFloat out;
  out.mantissa_ = static_cast<double>(std::exp2(frac));
  out.exponent_ = static_cast<std::int64_t>(whole);
  out.normalize();
  return out;
}

WideFloat WideFloat::exp_neg(long double x) {
  if (x < 0) {
    throw std::domain_error("WideFloat::exp_neg requires x >= 0");
  }
  return exp2(-x / kLn2);
}

double WideFloat::to_double() const {
  if (is_zero() || exponent_ < -1100) {
    return 0.0;
  }
  if (exponent_ > 1023) {
    return std::numeric_limits<double>::infinity();
  }
  return std::ldexp(mantissa_, static_cast<int>(exponent_));
}

long double WideFloat::to_long_double() const {
  if (is_zero() || exponent_ < -16500) {
    return 0.0L;
  }
  if (exponent_ > 16383) {
    return std::numeric_limits<long double>::infinity();
  }
  return std::ldexp(static_cast<long double>(mantissa_), static_cast<int>(exponent_));
}

long double WideFloat::log2() const {
  if (is_zero()) {
    return -std::numeric_limits<long double>::infinity();
  }
  return static_cast<long double>(exponent_) + std::log2(static_cast<long double>(mantissa_));
}

WideFloat& WideFloat::operator+=(const WideFloat& rhs) {
  if (rhs.is_zero()) {
    return *this;
  }
  if (is_zero()) {
    *this = rhs;
    return *this;
  }
  const std::int64_t diff = exponent_ - rhs.exponent_;
  if (diff >= 0) {
    if (diff <= kAlignLimit) {
      mantissa_ += std::ldexp(rhs.mantissa_, static_cast<int>(-diff));
    }
  } else if (-diff > kAlignLimit) {
    *this = rhs;
    return *this;
  } else {
    mantissa_ = rhs.mantissa_ + std::ldexp(mantissa_, static_cast<int>(diff));
    exponent_ = rhs.exponent_;
  }
  normalize();
  return *this;
}

WideFloat& WideFloat::operator-=(const WideFloat& rhs) {
  if (rhs.is_zero()) {
    return *this;
  }
  if (rhs > *this) {
    // Only a rounding-sized overshoot is tolerated.
    const WideFloat slack = rhs * std::ldexp(1.0, -40);
    if (is_zero() || rhs.exponent_ - exponent_ > 1) {
      if (rhs > slack + *this) {
        throw std::domain_error("WideFloat subtraction would be negative");
      }
    } else {
      const double gap = rhs.mantissa_ - std::ldexp(mantissa_, static_cast<int>(exponent_ - rhs.exponent_));
      if (gap > std::ldexp(rhs.mantissa_, -40)) {
        throw std::domain_error("WideFloat subtraction would be negative");
      }
    }
    *this = WideFloat();
    return *this;
  }
  const std::int64_t diff = exponent_ - rhs.exponent_;
  if (diff <= kAlignLimit) {
    mantissa_ -= std::ldexp(rhs.mantissa_, static_cast<int>(-diff));
    normalize();
  }
  return *this;
}

WideFloat& WideFloat::operator*=(const WideFloat& rhs) {
  if (is_zero() || rhs.is_zero()) {
    *this = WideFloat();
    return *this;
  }
  mantissa_ *= rhs.mantissa_;
  exponent_ = checked_add(exponent_, rhs.exponent_);
  normalize();
  return *this;
}

WideFloat& WideFloat::operator/=(const WideFloat& rhs) {
  if (rhs.is_zero()) {
    throw std::domain_error("WideFloat division by zero");
  }
  if (is_zero()) {
    return *this;
  }
  mantissa_ /= rhs.mantissa_;
  exponent_ = checked_add(exponent_, -rhs.exponent_);
  normalize();
  return *this;
}

WideFloat& WideFloat::operator*=(double rhs) { return *this *= WideFloat(rhs); }

std::strong_ordering operator<=>(const WideFloat& a, const WideFloat& b) {
  if (a.is_zero() || b.is_zero()) {
    return (a.is_zero() ? 0 : 1) <=> (b.is_zero() ? 0 : 1);
  }
  if (a.exponent_ != b.exponent_) {
    return a.exponent_ <=> b.exponent_;
  }
  if (a.mantissa_ < b.mantissa_) {
    return std::strong_ordering::less;
  }
  if (a.mantissa_ > b.mantissa_) {
    return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::string WideFloat::to_string(int digits) const {
  if (is_zero()) {
    return "0";
  }
  if (exponent_ > -1000 && exponent_ < 1000) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, to_double());
    return buf;
  }
  const long double l10 = log2() * 0.301029995663981195213738894724493027L;
  const long double whole = std::floor(l10);
  const double m10 = static_cast<double>(std::pow(10.0L, l10 - whole));
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*fe%lld", digits > 1 ? digits - 1 : 0, m10,
                static_cast<long long>(whole));
  return buf;
}

std::ostream& operator<<(std::ostream& os, const WideFloat& w) { return os << w.to_string(); }

WideFloat pow(const WideFloat& base, double power) {
  if (power < 0 || std::isnan(power)) {
    throw std::domain_error("pow(WideFloat) requires a non-negative power");
  }
  if (power == 0.0) {
    return WideFloat::one();
  }
  if (base.is_zero()) {
    return WideFloat();
  }
  return WideFloat::exp2(static_cast<long double>(power) * base.log2());
}

WideFloat sqrt(const WideFloat& value) {
  if (value.is_zero()) {
    return value;
  }
  double m = value.mantissa();
  std::int64_t e = value.exponent();
  if (e % 2 != 0) {
    m *= 2.0;
    e -= 1;
  }
  return WideFloat(std::sqrt(m)) * WideFloat::pow2(e / 2);
}

bool leq_up_to_rounding(const WideFloat& a, const WideFloat& b) {
  return a <= b + b * std::ldexp(1.0, -40);
}

WideFloat complement_power(const MassSplit& split, double m) {
  if (m == 0.0) {
    return WideFloat::one();
  }
  if (split.outside.is_zero()) {
    return WideFloat();
  }
  long double log2_value = 0.0L;
  if (split.inside < WideFloat(0.5)) {
    log2_value = static_cast<long double>(m) * std::log1p(-split.inside.to_long_double()) / kLn2;
  } else {
    log2_value = static_cast<long double>(m) * split.outside.log2();
  }
  return WideFloat::exp2(log2_value);
}

WideFloat complement_power_gap(const MassSplit& hi, const MassSplit& lo, const WideFloat& gap,
                               double m) {
  if (gap.is_zero() || m == 0.0) {
    return WideFloat();
  }
  const WideFloat base = complement_power(hi, m);
  if (base.is_zero()) {
    return base;
  }
  const WideFloat u = gap / hi.outside;
  if (u >= WideFloat(0.5)) {
    // lo^m <= base / 2^m, so the subtraction loses at most one bit.
    return base - complement_power(lo, m);
  }
  const long double ul = u.to_long_double();
  const long double ml = m;
  const WideFloat y = u * m;
  if (y < WideFloat::pow2(-20)) {
    // 1 - (1-u)^m = y (1 - (m-1)u/2 + (m-1)(m-2)u^2/6 - ...), truncation O(y^4).
    const long double c1 = (ml - 1) * ul / 2;
    const long double c2 = (ml - 1) * (ml - 2) * ul * ul / 6;
    const long double c3 = (ml - 1) * (ml - 2) * (ml - 3) * ul * ul * ul / 24;
    const long double series = 1 - c1 + c2 - c3;
    return base * y * static_cast<double>(series);
  }
  const long double factor = -std::expm1(ml * std::log1p(-ul));
  return base * WideFloat(static_cast<double>(factor));
}

}  // namespace lebnn
