#pragma once

#include <cstdint>
#include <vector>

#include "lebnn/field.hpp"
#include "lebnn/nn.hpp"
#include "lebnn/space.hpp"
#include "lebnn/tiebreak.hpp"

namespace lebnn {

// X ~ space, Y | X ~ Bernoulli(eta(X)).
class LabeledModel {
 public:
  // Throws std::domain_error if eta leaves [0,1] on an atom.
  LabeledModel(SpacePtr space, ScalarField eta);
  const MetricMeasureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const ScalarField& eta() const { return eta_; }
  // One uniform per label.
  int sample_label(const Point& p, Rng& rng) const;

 private:
  SpacePtr space_;
  ScalarField eta_;
};

struct SurrogateBayes {
  double surrogate = 0.0;  // 2 E[eta (1 - eta)]
  double bayes = 0.0;      // E[min(eta, 1 - eta)]
  double stderr_ = 0.0;    // of the surrogate, Monte Carlo only
};

// Exact on atomic spaces, Monte Carlo otherwise.
SurrogateBayes surrogate_and_bayes(const LabeledModel& model, const McOptions& options = {});

struct RiskReport {
  std::uint64_t m = 0;
  double risk = 0.0;
  double stderr_ = 0.0;
  double surrogate = 0.0;
  double bayes = 0.0;
  double prop_inf_bound = 0.0;
  // E[eta(NN)(1 - eta(X)) + eta(X)(1 - eta(NN))], a second route to the risk.
  double identity_risk = 0.0;
  double identity_stderr = 0.0;
  Method method = Method::exact;
  bool bound_estimated = false;
};

// Exact needs an atomic space and a rule the exact engine supports; automatic
// falls back to Monte Carlo. The anchor is never part of its own sample.
RiskReport nn_classification_risk(const LabeledModel& model, const TieBreakRule& rule,
                                  std::uint64_t m, Mode mode, const McOptions& options = {});

// sum_x p(x) E|eta(X^x_m) - eta(x)| over the atoms x.
double prop_inf_bound(const LabeledModel& model, const TieBreakRule& rule, std::uint64_t m);

struct Realizability {
  bool realizable = false;  // eta(a) in {0,1} up to tolerance on every atom
  double half_mass = 0.0;   // P(eta(X) = 1/2)
  bool half_mass_zero() const { return half_mass == 0.0; }
};
Realizability realizability_check(const LabeledModel& model, double tolerance = 1e-9);

}  // namespace lebnn
