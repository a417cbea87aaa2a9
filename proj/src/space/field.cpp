#include "lebnn/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lebnn {

double dyadic_theta(int n) { return std::ldexp(1.0, -(1 << n)); }

double dyadic_primitive(int depth, double t) {
  if (t <= 0.0) return 0.0;
  double sum = 0.0;
  for (int n = depth; n >= 1; --n) {
    const double lo = dyadic_theta(2 * n);
    const double hi = dyadic_theta(2 * n - 1);
    if (t > lo) sum += std::min(t, hi) - lo;
  }
  return sum;
}

ScalarField::ScalarField(std::string name, Eval eval, double bound, double anchor_value)
    : name_(std::move(name)), eval_(std::move(eval)), bound_(bound), anchor_(anchor_value) {
  if (!(bound_ >= 0.0) || !std::isfinite(bound_)) {
    throw std::invalid_argument("field bound must be finite and non-negative");
  }
}

double ScalarField::evaluate(const Point& p) const {
  const double v = eval_(p);
  if (!(std::fabs(v) <= bound_)) {
    throw std::domain_error("field '" + name_ + "' exceeds its bound at " + to_string(p));
  }
  return v;
}

ScalarField ScalarField::with_anchor(double anchor) const {
  ScalarField out = *this;
  out.anchor_ = anchor;
  return out;
}

ScalarField ScalarField::anchored_at(const Point& x) const { return with_anchor(evaluate(x)); }

ScalarField ScalarField::with_override(const Point& p, double value) const {
  ScalarField out = *this;
  out.name_ = name_ + "+override";
  out.bound_ = std::max(bound_, std::fabs(value));
  out.eval_ = [inner = eval_, p, value](const Point& q) { return q == p ? value : inner(q); };
  return out;
}

ScalarField ScalarField::with_abs_integral(AbsIntegral integral) const {
  ScalarField out = *this;
  out.integral_ = std::move(integral);
  return out;
}

double ScalarField::abs_integral(double a, double b, double c) const {
  if (!integral_) {
    throw std::logic_error("field '" + name_ + "' has no closed-form interval integral");
  }
  if (b <= a) return 0.0;
  return integral_(a, b, c);
}

ScalarField ScalarField::constant(double value) {
  ScalarField f("constant", [value](const Point&) { return value; }, std::fabs(value), value);
  return f.with_abs_integral(
      [value](double a, double b, double c) { return std::fabs(value - c) * (b - a); });
}

ScalarField ScalarField::positive_indicator() {
  ScalarField f("positive", [](const Point& p) { return p.coord > 0.0 ? 1.0 : 0.0; }, 1.0, 0.0);
  return f.with_abs_integral([](double a, double b, double c) {
    const double pos = std::max(0.0, b - std::max(a, 0.0));
    const double neg = std::max(0.0, std::min(b, 0.0) - a);
    return std::fabs(1.0 - c) * pos + std::fabs(c) * neg;
  });
}

ScalarField ScalarField::identity() {
  ScalarField f("identity", [](const Point& p) { return p.coord; }, 1.0, 0.0);
  return f.with_abs_integral([](double a, double b, double c) {
    if (c <= a) return ((b - c) * (b - c) - (a - c) * (a - c)) / 2.0;
    if (c >= b) return ((c - a) * (c - a) - (c - b) * (c - b)) / 2.0;
    return ((c - a) * (c - a) + (b - c) * (b - c)) / 2.0;
  });
}

ScalarField ScalarField::dyadic(int depth) {
  if (depth < 1 || depth > 4) throw std::invalid_argument("dyadic depth must be in 1..4");
  auto eval = [depth](const Point& p) {
    for (int n = 1; n <= depth; ++n) {
      if (p.coord > dyadic_theta(2 * n) && p.coord <= dyadic_theta(2 * n - 1)) return 1.0;
    }
    return 0.0;
  };
  ScalarField f("dyadic", eval, 1.0, 0.0);
  return f.with_abs_integral([depth](double a, double b, double c) {
    const double ones = dyadic_primitive(depth, b) - dyadic_primitive(depth, a);
    return std::fabs(1.0 - c) * ones + std::fabs(c) * ((b - a) - ones);
  });
}

ScalarField ScalarField::table(std::vector<double> values) {
  double bound = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("field table entries must be finite");
    bound = std::max(bound, std::fabs(v));
  }
  auto eval = [values = std::move(values)](const Point& p) {
    if (p.label < 0 || static_cast<std::size_t>(p.label) >= values.size()) {
      throw std::out_of_range("field table has no entry for label " + std::to_string(p.label));
    }
    return values[static_cast<std::size_t>(p.label)];
  };
  return ScalarField("table", eval, bound, 0.0);
}

}  // namespace lebnn
