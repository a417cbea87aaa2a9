#include <algorithm>
#include <cmath>

#include "lebnn/errors.hpp"
#include "lebnn/lebesgue.hpp"
#include "lebnn/rational.hpp"
#include "lebnn/spaces.hpp"

namespace lebnn {

namespace {

// [a, b] = ball of radius r around x intersected with the domain.
std::pair<double, double> clipped_ball(const std::pair<double, double>& domain, const Point& x,
                                       const Distance& r) {
  if (r.is_infinite()) return domain;
  const double rr = r.to_double();
  return {std::max(domain.first, x.coord - rr), std::min(domain.second, x.coord + rr)};
}

}  // namespace

WideFloat ball_mass(const MetricMeasureSpace& space, const Point& x, const Distance& r, Ball ball) {
  return ball == Ball::closed ? space.measure_closed_ball(x, r) : space.measure_open_ball(x, r);
}

WideFloat ball_deviation(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                         const Distance& r, Ball ball) {
  const double anchor = field.anchor_value();
  if (space.is_atomic()) {
    return sphere_table(space, x).ball_deviation(r, ball == Ball::closed, field, anchor);
  }
  const auto domain = space.interval();
  if (!domain) throw UnsupportedOperation("ball deviation needs an atomic or interval space");
  if (!field.has_abs_integral()) {
    throw UnsupportedOperation("field '" + field.name() + "' has no closed-form integral");
  }
  // Open and closed balls differ by two points, a null set.
  const auto [a, b] = clipped_ball(*domain, x, r);
  if (!(b > a)) return WideFloat::zero();
  return WideFloat(field.abs_integral(a, b, anchor) / (domain->second - domain->first));
}

double lebesgue_ratio(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                      const Distance& r, Ball ball) {
  const WideFloat mass = ball_mass(space, x, r, ball);
  if (mass.is_zero()) {
    throw UndefinedRatio("Lebesgue ratio on a null ball of radius " + r.to_string());
  }
  return (ball_deviation(space, field, x, r, ball) / mass).to_double();
}

std::optional<mpq_class> exact_lebesgue_ratio(const MetricMeasureSpace& space,
                                              const ScalarField& field, const Point& x,
                                              const Distance& r, Ball ball) {
  const auto* atomic = dynamic_cast<const AtomicSpace*>(&space);
  if (atomic == nullptr || !atomic->has_exact_probabilities()) return std::nullopt;
  const mpq_class anchor = mpq_from_double(field.anchor_value());
  mpq_class dev = 0, mass = 0;
  for (const auto& a : atomic->atoms()) {
    const Distance d = space.distance(x, a.point);
    if (d < r || (ball == Ball::closed && d == r)) {
      mass += *a.exact;
      dev += *a.exact * abs(mpq_from_double(field.evaluate(a.point)) - anchor);
    }
  }
  if (mass == 0) throw UndefinedRatio("Lebesgue ratio on a null ball of radius " + r.to_string());
  return mpq_class(dev / mass);
}

WideFloat m_alpha(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                  double alpha, const Distance& r, Ball ball) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  const WideFloat dev = ball_deviation(space, field, x, r, ball);
  const WideFloat mass = ball_mass(space, x, r, ball);
  return pow(dev, alpha) * pow(mass, 1.0 - alpha);
}

std::vector<Distance> default_interval_probes(const MetricMeasureSpace& space) {
  std::vector<Distance> out;
  if (const auto* dyadic = dynamic_cast<const DyadicIntervalSpace*>(&space)) {
    // Below theta_{2D} the truncated field vanishes identically.
    const auto th = dyadic->thresholds();
    for (int n = 0; n < 2 * dyadic->depth(); ++n) out.push_back(Distance::real(th[n]));
    return out;
  }
  for (int k = 1; k <= 40; ++k) out.push_back(Distance::real(std::ldexp(1.0, -k)));
  return out;
}

AlongReport along_sequence_check(const MetricMeasureSpace& space, const ScalarField& field,
                                 const Point& x, const std::vector<Distance>& radii,
                                 std::size_t tail, double tolerance) {
  if (radii.empty()) throw std::invalid_argument("along_sequence_check: no radii");
  if (tail == 0) throw std::invalid_argument("along_sequence_check: tail must be >= 1");
  AlongReport report;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const Distance& r = radii[i];
    if (!(r > Distance::exact(0))) throw std::invalid_argument("radii must be positive");
    if (i > 0 && !(r < radii[i - 1])) throw std::invalid_argument("radii must be decreasing");
    AlongRow row;
    row.radius = r;
    row.closed = lebesgue_ratio(space, field, x, r, Ball::closed);
    if (ball_mass(space, x, r, Ball::open).is_zero()) {
      row.open_defined = false;
    } else {
      row.open = lebesgue_ratio(space, field, x, r, Ball::open);
    }
    report.rows.push_back(row);
  }
  const std::size_t start = report.rows.size() > tail ? report.rows.size() - tail : 0;
  report.tail_nonincreasing = true;
  for (std::size_t i = start; i < report.rows.size(); ++i) {
    report.tail_max = std::max(report.tail_max, report.rows[i].closed);
    if (i > start && report.rows[i].closed > report.rows[i - 1].closed) {
      report.tail_nonincreasing = false;
    }
  }
  report.lebesgue = report.tail_nonincreasing && report.tail_max <= tolerance;
  return report;
}

}  // namespace lebnn
