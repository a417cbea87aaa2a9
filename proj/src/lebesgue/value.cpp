#include <algorithm>
#include <stdexcept>

#include "lebnn/errors.hpp"
#include "lebnn/lebesgue.hpp"

namespace lebnn {

namespace {

// Positive and negative parts keep the signed mean inside WideFloat range.
struct SignedSum {
  WideFloat pos;
  WideFloat neg;
  void add(const WideFloat& w, double v) {
    if (v > 0) pos += w * v;
    if (v < 0) neg += w * -v;
  }
  double mean(const WideFloat& mass) const {
    return (pos / mass).to_double() - (neg / mass).to_double();
  }
};

double closed_ball_mean(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                        const SphereTable* table, const Distance& r) {
  if (table != nullptr) {
    const auto& atoms = space.atoms();
    SignedSum sum;
    WideFloat mass;
    for (const auto& row : table->rows()) {
      if (row.radius > r) break;
      for (std::size_t i : row.members) sum.add(atoms[i].prob, field.evaluate(atoms[i].point));
      mass = row.closed;
    }
    if (mass.is_zero()) throw UndefinedRatio("null ball at radius " + r.to_string());
    return sum.mean(mass);
  }
  const auto [lo, hi] = *space.interval();
  const double rr = r.to_double();
  const double a = std::max(lo, x.coord - rr), b = std::min(hi, x.coord + rr);
  if (!(b > a)) throw UndefinedRatio("null ball at radius " + r.to_string());
  if (!field.has_abs_integral()) {
    throw UnsupportedOperation("field '" + field.name() + "' has no closed-form integral");
  }
  // eta + bound >= 0, so its integral is an absolute integral about -bound.
  const double shift = field.bound();
  return field.abs_integral(a, b, -shift) / (b - a) - shift;
}

void finish(LebesgueValue& out, std::size_t tail, double tolerance) {
  const auto& d = out.diagnostics;
  if (d.empty()) throw std::invalid_argument("Lebesgue value: no probes");
  out.l_hat = d.back().value;
  out.stderr_ = d.back().stderr_;
  const std::size_t start = d.size() > tail ? d.size() - tail : 0;
  double lo = d[start].value, hi = d[start].value;
  for (std::size_t i = start; i < d.size(); ++i) {
    lo = std::min(lo, d[i].value);
    hi = std::max(hi, d[i].value);
  }
  out.tail_spread = hi - lo;
  out.converged = out.tail_spread <= tolerance;
}

}  // namespace

LebesgueValue lebesgue_value_estimate(const MetricMeasureSpace& space, const ScalarField& field,
                                      const Point& x, ValueMethod method,
                                      const ValueParams& params) {
  LebesgueValue out;
  if (method == ValueMethod::ratio) {
    std::optional<SphereTable> table;
    std::vector<Distance> probes;
    if (space.is_atomic()) {
      table.emplace(space, x);
      for (const auto& row : table->rows()) probes.push_back(row.radius);
      std::reverse(probes.begin(), probes.end());
    } else if (space.interval()) {
      probes = params.probes.empty() ? default_interval_probes(space) : params.probes;
      std::sort(probes.begin(), probes.end(), [](const Distance& a, const Distance& b) { return a > b; });
    } else {
      throw UnsupportedOperation("ratio method needs an atomic or interval space");
    }
    for (const auto& r : probes) {
      ValueDiagnostic d;
      d.radius = r;
      d.value = closed_ball_mean(space, field, x, table ? &*table : nullptr, r);
      out.diagnostics.push_back(d);
    }
    finish(out, params.tail, params.tolerance);
    return out;
  }
  const RulePtr rule = params.rule ? params.rule : lexicographic_rule();
  if (!rule->is_isimin()) throw UnsupportedOperation("nn method needs an ISIMIN rule");
  if (params.m_grid.empty()) throw std::invalid_argument("nn method needs an m grid");
  for (std::uint64_t m : params.m_grid) {
    ValueDiagnostic d;
    d.m = m;
    if (space.is_atomic() && exact_supported(space, *rule)) {
      const auto& atoms = space.atoms();
      SignedSum sum;
      for (const auto& am : nn_atom_distribution(space, x, *rule, m)) {
        sum.add(am.prob, field.evaluate(atoms[am.atom].point));
      }
      d.value = sum.mean(WideFloat::one());
    } else {
      const McEstimate est = mc_nn_statistic(
          space, x, *rule, m, params.options,
          [&](const Point& p, const Distance&) { return field.evaluate(p); });
      d.value = est.mean;
      d.stderr_ = est.stderr_;
    }
    out.diagnostics.push_back(d);
  }
  finish(out, params.tail, params.tolerance);
  return out;
}

}  // namespace lebnn
