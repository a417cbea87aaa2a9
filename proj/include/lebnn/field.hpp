#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lebnn/distance.hpp"

namespace lebnn {

// Bounded measurable function eta together with the reference value it is
// compared against (eta(x) at a Lebesgue point, or a candidate value l).
class ScalarField {
 public:
  using Eval = std::function<double(const Point&)>;
  // Integral of |eta(t) - c| dt over [a, b] (coordinates, interval spaces).
  using AbsIntegral = std::function<double(double a, double b, double c)>;

  ScalarField(std::string name, Eval eval, double bound, double anchor_value = 0.0);

  // Checks |eta(p)| <= bound and throws std::domain_error otherwise.
  double evaluate(const Point& p) const;
  double bound() const { return bound_; }
  double anchor_value() const { return anchor_; }
  const std::string& name() const { return name_; }

  ScalarField with_anchor(double anchor) const;
  // Anchor set to eta(x).
  ScalarField anchored_at(const Point& x) const;
  // eta(p) replaced by value at the single point p. Integrals over intervals
  // are unchanged.
  ScalarField with_override(const Point& p, double value) const;
  ScalarField with_abs_integral(AbsIntegral integral) const;

  bool has_abs_integral() const { return static_cast<bool>(integral_); }
  double abs_integral(double a, double b, double c) const;

  static ScalarField constant(double value);
  // 1 on points with coordinate > 0, else 0.
  static ScalarField positive_indicator();
  // eta(t) = t.
  static ScalarField identity();
  // Sum of indicators of (theta_{2n}, theta_{2n-1}], n = 1..depth, with
  // theta_n = 2^(-2^n).
  static ScalarField dyadic(int depth);
  // eta(atom with label k) = values[k]; labels outside the table throw.
  static ScalarField table(std::vector<double> values);

 private:
  std::string name_;
  Eval eval_;
  AbsIntegral integral_;
  double bound_;
  double anchor_;
};

// theta_n = 2^(-2^n); representable as a double for n <= 10.
double dyadic_theta(int n);

// Integral of the dyadic field over [0, t].
double dyadic_primitive(int depth, double t);

}  // namespace lebnn
