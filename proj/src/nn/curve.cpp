#include <stdexcept>

#include "lebnn/errors.hpp"
#include "lebnn/nn.hpp"

namespace lebnn {

std::string to_string(Method method) { return method == Method::exact ? "exact" : "mc"; }

void ConvergenceCurve::add(const ConvergenceRow& row) {
  if (!rows_.empty() && row.m <= rows_.back().m) {
    throw std::invalid_argument("convergence curve: m must be strictly increasing");
  }
  if (row.method == Method::exact && row.stderr_ != 0.0) {
    throw std::invalid_argument("convergence curve: exact rows have no standard error");
  }
  rows_.push_back(row);
}

ConvergenceCurve nn_convergence(const MetricMeasureSpace& space, const ScalarField& field,
                                const Point& x, const TieBreakRule& rule,
                                const std::vector<std::uint64_t>& m_grid, Mode mode,
                                const McOptions& options) {
  const bool exact = mode == Mode::exact || (mode == Mode::automatic && exact_supported(space, rule));
  if (mode == Mode::exact && !exact_supported(space, rule)) {
    throw UnsupportedOperation("exact mode unavailable for " + space.name() + " with rule " +
                               rule.name());
  }
  ConvergenceCurve curve;
  for (std::uint64_t m : m_grid) {
    ConvergenceRow row;
    row.m = m;
    if (exact) {
      row.error = exact_nn_error(space, field, x, rule, m);
      row.method = Method::exact;
    } else {
      const McEstimate est = mc_nn_error(space, field, x, rule, m, options);
      row.error = est.mean;
      row.stderr_ = est.stderr_;
      row.method = Method::mc;
    }
    curve.add(row);
  }
  curve.metadata["space"] = space.name();
  curve.metadata["rule"] = rule.name();
  curve.metadata["x"] = to_string(x);
  curve.metadata["field"] = field.name();
  curve.metadata["anchor"] = std::to_string(field.anchor_value());
  if (!exact) {
    curve.metadata["seed"] = std::to_string(options.seed);
    curve.metadata["trials"] = std::to_string(options.trials);
  }
  return curve;
}

}  // namespace lebnn
