#include "lebnn/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "lebnn/errors.hpp"
#include "lebnn/rational.hpp"

namespace lebnn {

namespace {

const AtomicSpace& exact_atomic(const MetricMeasureSpace& space) {
  const auto* atomic = dynamic_cast<const AtomicSpace*>(&space);
  if (atomic == nullptr || !atomic->has_exact_probabilities()) {
    throw UnsupportedOperation("oracle needs an atomic space with exact probabilities");
  }
  return *atomic;
}

}  // namespace

std::vector<mpq_class> brute_force_nn_distribution(const MetricMeasureSpace& space, const Point& x,
                                                   const TieBreakRule& rule, std::uint64_t m,
                                                   const EnumerationBudget& budget) {
  if (m == 0) throw std::invalid_argument("m must be >= 1");
  const auto& atoms = exact_atomic(space).atoms();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (*atoms[i].exact > 0) support.push_back(i);
  }
  const double required = std::pow(static_cast<double>(support.size()), static_cast<double>(m));
  if (required > static_cast<double>(budget.max_configurations)) {
    throw BudgetExceeded(required, budget.max_configurations);
  }
  std::vector<Distance> dist(atoms.size());
  for (std::size_t i : support) dist[i] = space.distance(x, atoms[i].point);

  std::vector<mpq_class> law(atoms.size(), mpq_class(0));
  std::vector<std::size_t> digits(m, 0);  // odometer over support^m
  std::vector<Candidate> candidates;
  while (true) {
    mpq_class weight = 1;
    Distance best = Distance::infinity();
    for (std::size_t d : digits) {
      const std::size_t a = support[d];
      weight *= *atoms[a].exact;
      if (dist[a] < best) best = dist[a];
    }
    candidates.clear();
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t a = support[digits[k]];
      if (dist[a] == best) candidates.push_back({k + 1, atoms[a].point});
    }
    const auto probs = rule.tie_distribution(x, best, candidates);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (probs[c] != 0) law[support[digits[candidates[c].index - 1]]] += weight * probs[c];
    }
    std::size_t pos = 0;
    while (pos < m && ++digits[pos] == support.size()) digits[pos++] = 0;
    if (pos == m) break;
  }
  return law;
}

mpq_class brute_force_nn_error(const MetricMeasureSpace& space, const ScalarField& field,
                               const Point& x, const TieBreakRule& rule, std::uint64_t m,
                               const EnumerationBudget& budget) {
  const auto law = brute_force_nn_distribution(space, x, rule, m, budget);
  const auto& atoms = space.atoms();
  const mpq_class anchor = mpq_from_double(field.anchor_value());
  mpq_class total = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (law[i] != 0) total += law[i] * abs(mpq_from_double(field.evaluate(atoms[i].point)) - anchor);
  }
  return total;
}

mpq_class brute_force_risk(const LabeledModel& model, const TieBreakRule& rule, std::uint64_t m,
                           const EnumerationBudget& budget) {
  const auto& space = model.space();
  const auto& atoms = exact_atomic(space).atoms();
  std::vector<mpq_class> eta;
  for (const auto& a : atoms) eta.push_back(mpq_from_double(model.eta().evaluate(a.point)));
  mpq_class total = 0;
  for (std::size_t x = 0; x < atoms.size(); ++x) {
    if (*atoms[x].exact == 0) continue;
    const auto law = brute_force_nn_distribution(space, atoms[x].point, rule, m, budget);
    mpq_class inner = 0;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (law[a] == 0) continue;
      inner += law[a] * (eta[x] * (1 - eta[a]) + (1 - eta[x]) * eta[a]);
    }
    total += *atoms[x].exact * inner;
  }
  return total;
}

std::vector<SphereConditional> sphere_conditionals(const MetricMeasureSpace& space, const Point& x,
                                                   const std::vector<mpq_class>& nn_law) {
  const auto& atoms = exact_atomic(space).atoms();
  if (nn_law.size() != atoms.size()) throw std::invalid_argument("law size differs from atom count");
  std::vector<SphereConditional> out;
  const SphereTable table = sphere_table(space, x);
  for (const auto& row : table.rows()) {
    SphereConditional s;
    s.radius = row.radius;
    mpq_class nn_total = 0, mu_total = 0;
    for (std::size_t i : row.members) {
      s.atoms.push_back(i);
      nn_total += nn_law[i];
      mu_total += *atoms[i].exact;
    }
    if (nn_total == 0) continue;
    for (std::size_t i : row.members) {
      s.nn.push_back(nn_law[i] / nn_total);
      s.mu.push_back(*atoms[i].exact / mu_total);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace lebnn
