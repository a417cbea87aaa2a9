#include <cmath>
#include <stdexcept>

#include "lebnn/nn.hpp"

namespace lebnn {

double fm_value(std::uint64_t m, double t) {
  if (m == 0) throw std::invalid_argument("f_m needs m >= 1");
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return m == 1 ? 1.0 : 0.0;
  const long double mm = static_cast<long double>(m);
  return static_cast<double>(
      std::exp(std::log(mm) + std::log(static_cast<long double>(t)) +
               (mm - 1) * std::log1p(-static_cast<long double>(t))));
}

FmEnvelope fm_envelope(std::uint64_t m, double tolerance) {
  if (m == 0) throw std::invalid_argument("fm_envelope needs m >= 1");
  const double level = std::exp(-1.0);
  FmEnvelope env;
  env.t_max = 1.0 / static_cast<double>(m);
  env.f_max = m == 1 ? 1.0
                     : static_cast<double>(std::exp((static_cast<long double>(m) - 1) *
                                                    std::log1p(-1.0L / m)));
  // Increasing on [0, 1/m]: a is the first point reaching the level.
  double lo = 0.0;
  double hi = env.t_max;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (fm_value(m, mid) >= level ? hi : lo) = mid;
  }
  env.a = hi;
  if (m == 1) {
    env.b = 1.0;
    return env;
  }
  // Decreasing on [1/m, 1]: b is the last point above the level.
  lo = env.t_max;
  hi = 1.0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (fm_value(m, mid) >= level ? lo : hi) = mid;
  }
  env.b = lo;
  return env;
}

VsReport vs_inequality_check(const MetricMeasureSpace& space, const ScalarField& field,
                             const Point& x, const TieBreakRule& rule,
                             const std::vector<Distance>& radii,
                             const std::vector<std::uint64_t>& ms) {
  const SphereTable table(space, x);
  const double anchor = field.anchor_value();
  VsReport report;
  for (std::uint64_t m : ms) {
    const WideFloat error = exact_nn_breakdown(space, field, x, rule, m).error;
    for (const auto& r : radii) {
      VsRow row;
      row.radius = r;
      row.m = m;
      const MassSplit split = table.closed_split(r);
      const WideFloat& closed = split.inside;
      if (closed.is_zero() || split.outside.is_zero()) {
        row.skipped = true;
        report.rows.push_back(row);
        continue;
      }
      row.lhs = table.ball_deviation(r, true, field, anchor) / closed;
      const WideFloat denom =
          closed * static_cast<double>(m) * complement_power(split, static_cast<double>(m - 1));
      row.rhs = error / denom;
      row.holds = leq_up_to_rounding(row.lhs, row.rhs);
      row.margin = row.rhs.to_double() - row.lhs.to_double();
      report.all_hold = report.all_hold && row.holds;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::vector<GeomIdeaRow> geom_idea_check(const MetricMeasureSpace& space, const ScalarField& field,
                                         const Point& x, const TieBreakRule& rule,
                                         const std::vector<Distance>& radii,
                                         const std::vector<std::uint64_t>& ms) {
  const SphereTable table(space, x);
  const double anchor = field.anchor_value();
  const double two_bound = 2.0 * field.bound();
  std::vector<GeomIdeaRow> out;
  for (std::uint64_t m : ms) {
    const ExactBreakdown b = exact_nn_breakdown(space, field, x, rule, m);
    const double md = static_cast<double>(m);
    for (const auto& r : radii) {
      GeomIdeaRow row;
      row.radius = r;
      row.m = m;
      for (const auto& term : b.rows) {
        if (term.radius < r) {
          row.interior += term.contribution;
        } else if (term.radius == r) {
          row.sphere += term.contribution;
        } else {
          row.exterior += term.contribution;
        }
      }
      const WideFloat open = table.open(r);
      const WideFloat sphere = table.sphere(r);
      const WideFloat closed = open + sphere;
      row.interior_bound = table.ball_deviation(r, false, field, anchor) * md;
      row.sphere_bound = sphere * (two_bound * md) *
                         WideFloat::exp_neg((md - 1.0L) * open.to_long_double());
      row.exterior_bound = WideFloat(two_bound) * WideFloat::exp_neg(md * closed.to_long_double());
      row.holds = leq_up_to_rounding(row.interior, row.interior_bound) &&
                  leq_up_to_rounding(row.sphere, row.sphere_bound) &&
                  leq_up_to_rounding(row.exterior, row.exterior_bound);
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace lebnn
