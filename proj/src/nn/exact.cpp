#include <cmath>
#include <stdexcept>

#include "lebnn/errors.hpp"
#include "lebnn/nn.hpp"

namespace lebnn {

namespace {

struct RowLaw {
  WideFloat total;
  // Per member of the row, aligned with SphereRow::members.
  std::vector<WideFloat> atom_prob;
};

RowLaw isimin_row(const MetricMeasureSpace& space, const SphereRow& row, double m) {
  RowLaw law;
  law.total = complement_power_gap(row.open_split(), row.closed_split(), row.sphere, m);
  const auto& atoms = space.atoms();
  for (std::size_t i : row.members) law.atom_prob.push_back(law.total * atoms[i].prob / row.sphere);
  return law;
}

RowLaw side_row(const MetricMeasureSpace& space, const Point& x, const SphereRow& row, double m,
                const SidePreference& side) {
  const auto& atoms = space.atoms();
  WideFloat s_pref;
  WideFloat s_other;
  std::vector<bool> is_pref;
  for (std::size_t i : row.members) {
    const bool p = side.preferred(x, atoms[i].point);
    is_pref.push_back(p);
    (p ? s_pref : s_other) += atoms[i].prob;
  }
  RowLaw law;
  law.total = complement_power_gap(row.open_split(), row.closed_split(), row.sphere, m);
  // Samples avoid the open ball and the other side, and one hits this side.
  const MassSplit pref_hi{row.open + s_other, row.exterior + s_pref};
  const MassSplit other_hi{row.open + s_pref, row.exterior + s_other};
  const WideFloat only_pref = complement_power_gap(pref_hi, row.closed_split(), s_pref, m);
  const WideFloat only_other = complement_power_gap(other_hi, row.closed_split(), s_other, m);
  const WideFloat both = law.total - only_pref - only_other;
  const double w = side.weight(row.radius);
  const WideFloat p_pref = only_pref + both * w;
  const WideFloat p_other = only_other + both * (1.0 - w);
  for (std::size_t k = 0; k < row.members.size(); ++k) {
    const WideFloat& p = atoms[row.members[k]].prob;
    law.atom_prob.push_back(is_pref[k] ? p_pref * p / s_pref : p_other * p / s_other);
  }
  return law;
}

RowLaw row_law(const MetricMeasureSpace& space, const Point& x, const SphereRow& row, double m,
               const TieBreakRule& rule) {
  if (rule.is_isimin()) return isimin_row(space, row, m);
  if (const auto* side = rule.side_preference()) return side_row(space, x, row, m, *side);
  throw UnsupportedOperation("rule '" + rule.name() + "' has no exact sphere law");
}

void require_exact(const MetricMeasureSpace& space, const TieBreakRule& rule, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("m must be >= 1");
  if (!exact_supported(space, rule)) {
    throw UnsupportedOperation("exact engine needs an atomic space and an ISIMIN or side rule (" +
                               space.name() + ", " + rule.name() + ")");
  }
}

}  // namespace

bool exact_supported(const MetricMeasureSpace& space, const TieBreakRule& rule) {
  return space.is_atomic() && (rule.is_isimin() || rule.side_preference() != nullptr);
}

std::vector<RadiusMass> nn_distance_distribution(const MetricMeasureSpace& space, const Point& x,
                                                 std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("m must be >= 1");
  const SphereTable table(space, x);
  std::vector<RadiusMass> out;
  for (const auto& row : table.rows()) {
    out.push_back({row.radius, complement_power_gap(row.open_split(), row.closed_split(), row.sphere,
                                                    static_cast<double>(m))});
  }
  return out;
}

std::vector<AtomMass> nn_atom_distribution(const MetricMeasureSpace& space, const Point& x,
                                           const TieBreakRule& rule, std::uint64_t m) {
  require_exact(space, rule, m);
  const SphereTable table(space, x);
  std::vector<AtomMass> out;
  for (const auto& row : table.rows()) {
    const RowLaw law = row_law(space, x, row, static_cast<double>(m), rule);
    for (std::size_t k = 0; k < row.members.size(); ++k) {
      out.push_back({row.members[k], law.atom_prob[k]});
    }
  }
  return out;
}

ExactBreakdown exact_nn_breakdown(const MetricMeasureSpace& space, const ScalarField& field,
                                  const Point& x, const TieBreakRule& rule, std::uint64_t m) {
  require_exact(space, rule, m);
  const SphereTable table(space, x);
  const auto& atoms = space.atoms();
  const double anchor = field.anchor_value();
  ExactBreakdown out;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const auto& row = table.rows()[r];
    const RowLaw law = row_law(space, x, row, static_cast<double>(m), rule);
    SphereTerm term{row.radius, row.sphere, row.open, row.closed, law.total, WideFloat(), 0.0, 0.0};
    const WideFloat mu_dev = table.row_deviation(r, field, anchor);
    term.mu_mean = (mu_dev / row.sphere).to_double();
    if (rule.is_isimin()) {
      term.contribution = law.total * mu_dev / row.sphere;
      term.rule_mean = term.mu_mean;
    } else {
      for (std::size_t k = 0; k < row.members.size(); ++k) {
        const auto& a = atoms[row.members[k]];
        term.contribution += law.atom_prob[k] * std::fabs(field.evaluate(a.point) - anchor);
      }
      term.rule_mean = law.total.is_zero() ? 0.0 : (term.contribution / law.total).to_double();
    }
    out.error += term.contribution;
    out.rows.push_back(std::move(term));
  }
  return out;
}

double exact_nn_error(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                      const TieBreakRule& rule, std::uint64_t m) {
  return exact_nn_breakdown(space, field, x, rule, m).error.to_double();
}

}  // namespace lebnn
