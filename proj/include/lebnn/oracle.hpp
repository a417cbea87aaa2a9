#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "lebnn/classify.hpp"
#include "lebnn/field.hpp"
#include "lebnn/space.hpp"
#include "lebnn/tiebreak.hpp"

namespace lebnn {

struct EnumerationBudget {
  std::uint64_t max_configurations = 10000000;
};

// Law of the chosen NN atom by summing over every ordered sample of m
// positive-mass atoms, in rationals. Entry i belongs to space.atoms()[i].
// Needs exact atom probabilities; BudgetExceeded when |atoms|^m is too large.
std::vector<mpq_class> brute_force_nn_distribution(const MetricMeasureSpace& space, const Point& x,
                                                   const TieBreakRule& rule, std::uint64_t m,
                                                   const EnumerationBudget& budget = {});

// sum_a P(NN = a) |eta(a) - anchor|.
mpq_class brute_force_nn_error(const MetricMeasureSpace& space, const ScalarField& field,
                               const Point& x, const TieBreakRule& rule, std::uint64_t m,
                               const EnumerationBudget& budget = {});

// P(Y_NN != Y) with the anchor drawn from the model and labels integrated out.
mpq_class brute_force_risk(const LabeledModel& model, const TieBreakRule& rule, std::uint64_t m,
                           const EnumerationBudget& budget = {});

struct SphereConditional {
  Distance radius;
  std::vector<std::size_t> atoms;
  std::vector<mpq_class> nn;  // P(NN = a | NN on the sphere)
  std::vector<mpq_class> mu;  // P(X = a | X on the sphere)
  bool equal() const { return nn == mu; }
};

// One entry per sphere around x that the NN reaches with positive probability.
std::vector<SphereConditional> sphere_conditionals(const MetricMeasureSpace& space, const Point& x,
                                                   const std::vector<mpq_class>& nn_law);

}  // namespace lebnn
