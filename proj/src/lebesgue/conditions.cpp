#include <cmath>
#include <stdexcept>

#include "lebnn/errors.hpp"
#include "lebnn/lebesgue.hpp"

namespace lebnn {

namespace {

void record(ConditionReport& report, ProbeRatio probe) {
  const bool larger = probe.infinite ? !report.infinite
                                     : !report.infinite && probe.value > report.constant;
  if (larger) {
    report.constant = probe.value;
    report.infinite = probe.infinite;
    report.witness = {probe.radius};
  } else if (probe.infinite == report.infinite && probe.value == report.constant &&
             !report.witness.empty()) {
    report.witness.push_back(probe.radius);
  }
  report.probes.push_back(std::move(probe));
}

ProbeRatio make_ratio(const Distance& r, const WideFloat& num, const WideFloat& den) {
  ProbeRatio p;
  p.radius = r;
  if (den.is_zero()) {
    // 0/0 counts as 0.
    p.infinite = !num.is_zero();
  } else {
    p.value = num / den;
  }
  return p;
}

}  // namespace

ConditionReport check_measure_continuity(const MetricMeasureSpace& space, const Point& x,
                                         std::optional<Distance> R,
                                         const std::vector<Distance>& probes) {
  ConditionReport report;
  report.kind = "measure_continuity";
  const Distance zero = Distance::exact(0);
  if (space.is_atomic()) {
    const SphereTable table = sphere_table(space, x);
    const Distance limit = R ? *R : table.rows().back().radius;
    for (const auto& row : table.rows()) {
      if (row.radius > zero && row.radius < limit) {
        record(report, make_ratio(row.radius, row.sphere, row.open));
      }
    }
  } else {
    if (!R) throw std::invalid_argument("measure continuity on a non-atomic space needs R");
    for (const auto& r : probes) {
      if (!(r > zero && r < *R)) throw std::invalid_argument("probe radii must lie in (0, R)");
      record(report, make_ratio(r, space.measure_sphere(x, r), space.measure_open_ball(x, r)));
    }
  }
  report.holds = !report.infinite;
  return report;
}

ConditionReport check_tie_bias(const MetricMeasureSpace& space, const ScalarField& field,
                               const Point& x, const TieBreakRule& rule,
                               const std::vector<std::uint64_t>& ms, const McOptions& options) {
  if (!space.is_atomic()) throw UnsupportedOperation("tie-bias check needs an atomic space");
  ConditionReport report;
  report.kind = "tie_bias";
  if (exact_supported(space, rule)) {
    for (std::uint64_t m : ms) {
      for (const auto& term : exact_nn_breakdown(space, field, x, rule, m).rows) {
        ProbeRatio p = make_ratio(term.radius, WideFloat(term.rule_mean), WideFloat(term.mu_mean));
        p.m = m;
        record(report, std::move(p));
      }
    }
    report.holds = !report.infinite;
    return report;
  }
  // Monte Carlo: per-sphere conditional means of |eta(NN) - anchor|.
  report.estimated = true;
  const SphereTable table = sphere_table(space, x);
  const double anchor = field.anchor_value();
  const std::size_t rows = table.rows().size();
  for (std::uint64_t m : ms) {
    std::vector<std::size_t> sphere(options.trials);
    std::vector<double> dev(options.trials);
    run_trials(options.trials, options.workers, [&](std::size_t i) {
      Rng samples = derive_rng(options.seed, i, Stream::samples);
      Rng ties = derive_rng(options.seed, i, Stream::ties);
      std::vector<Point> pts;
      pts.reserve(m);
      for (std::uint64_t k = 0; k < m; ++k) pts.push_back(space.sample(samples));
      const NnChoice nn = select_nn(space, x, pts, rule, ties);
      sphere[i] = *table.find(nn.distance);
      dev[i] = std::fabs(field.evaluate(nn.point) - anchor);
      return 0.0;
    });
    std::vector<std::vector<double>> by_row(rows);
    for (std::size_t i = 0; i < options.trials; ++i) by_row[sphere[i]].push_back(dev[i]);
    for (std::size_t k = 0; k < rows; ++k) {
      if (by_row[k].empty()) continue;
      const McEstimate est = summarize(by_row[k]);
      const double mu = space.sphere_conditional_mean(x, table.rows()[k].radius, field, anchor);
      ProbeRatio p = make_ratio(table.rows()[k].radius, WideFloat(est.mean), WideFloat(mu));
      p.m = m;
      p.stderr_ = mu > 0.0 ? est.stderr_ / mu : 0.0;
      record(report, std::move(p));
    }
  }
  report.holds = !report.infinite;
  return report;
}

}  // namespace lebnn
