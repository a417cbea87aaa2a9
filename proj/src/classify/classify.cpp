#include "lebnn/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lebnn/errors.hpp"

namespace lebnn {

namespace {

double mismatch(double a, double b) { return a * (1.0 - b) + (1.0 - a) * b; }

bool exact_possible(const LabeledModel& model, const TieBreakRule& rule) {
  return exact_supported(model.space(), rule);
}

}  // namespace

LabeledModel::LabeledModel(SpacePtr space, ScalarField eta)
    : space_(std::move(space)), eta_(std::move(eta)) {
  if (!space_) throw std::invalid_argument("labeled model: null space");
  if (!space_->is_atomic()) return;
  for (const auto& a : space_->atoms()) {
    const double v = eta_.evaluate(a.point);
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::domain_error("regression function outside [0,1] at " + to_string(a.point));
    }
  }
}

int LabeledModel::sample_label(const Point& p, Rng& rng) const {
  const double v = eta_.evaluate(p);
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("regression function outside [0,1] at " + to_string(p));
  }
  return uniform01(rng) < v ? 1 : 0;
}

SurrogateBayes surrogate_and_bayes(const LabeledModel& model, const McOptions& options) {
  SurrogateBayes out;
  const auto& eta = model.eta();
  if (model.space().is_atomic()) {
    WideFloat sur, bay;
    for (const auto& a : model.space().atoms()) {
      const double v = eta.evaluate(a.point);
      sur += a.prob * (2.0 * v * (1.0 - v));
      bay += a.prob * std::min(v, 1.0 - v);
    }
    out.surrogate = sur.to_double();
    out.bayes = bay.to_double();
    return out;
  }
  std::vector<double> bayes(options.trials);
  const auto values = run_trials(options.trials, options.workers, [&](std::size_t i) {
    Rng rng = derive_rng(options.seed, i, Stream::samples);
    const double v = eta.evaluate(model.space().sample(rng));
    bayes[i] = std::min(v, 1.0 - v);
    return 2.0 * v * (1.0 - v);
  });
  const McEstimate s = summarize(values);
  out.surrogate = s.mean;
  out.stderr_ = s.stderr_;
  out.bayes = summarize(bayes).mean;
  return out;
}

double prop_inf_bound(const LabeledModel& model, const TieBreakRule& rule, std::uint64_t m) {
  if (!model.space().is_atomic()) {
    throw UnsupportedOperation("prop_inf_bound needs an atomic space");
  }
  WideFloat total;
  for (const auto& a : model.space().atoms()) {
    if (a.prob.is_zero()) continue;
    const ScalarField anchored = model.eta().anchored_at(a.point);
    total += a.prob * exact_nn_error(model.space(), anchored, a.point, rule, m);
  }
  return total.to_double();
}

RiskReport nn_classification_risk(const LabeledModel& model, const TieBreakRule& rule,
                                  std::uint64_t m, Mode mode, const McOptions& options) {
  if (m == 0) throw std::invalid_argument("m must be >= 1");
  const bool exact = exact_possible(model, rule);
  if (mode == Mode::exact && !exact) {
    throw UnsupportedOperation("exact risk needs an atomic space and an ISIMIN or side rule");
  }
  RiskReport out;
  out.m = m;
  const SurrogateBayes sb = surrogate_and_bayes(model, options);
  out.surrogate = sb.surrogate;
  out.bayes = sb.bayes;
  const auto& space = model.space();
  const auto& eta = model.eta();

  if (exact && mode != Mode::mc) {
    out.method = Method::exact;
    const auto& atoms = space.atoms();
    WideFloat risk;
    for (const auto& x : atoms) {
      if (x.prob.is_zero()) continue;
      const double ex = eta.evaluate(x.point);
      WideFloat inner;
      for (const auto& am : nn_atom_distribution(space, x.point, rule, m)) {
        inner += am.prob * mismatch(ex, eta.evaluate(atoms[am.atom].point));
      }
      risk += x.prob * inner;
    }
    out.risk = risk.to_double();
    out.identity_risk = out.risk;
    out.prop_inf_bound = prop_inf_bound(model, rule, m);
    return out;
  }

  out.method = Method::mc;
  std::vector<double> identity(options.trials);
  std::vector<double> gap(options.trials);
  const auto errors = run_trials(options.trials, options.workers, [&](std::size_t i) {
    Rng samples = derive_rng(options.seed, i, Stream::samples);
    Rng ties = derive_rng(options.seed, i, Stream::ties);
    Rng labels = derive_rng(options.seed, i, Stream::labels);
    const Point x = space.sample(samples);
    const int y = model.sample_label(x, labels);
    std::vector<Point> train;
    std::vector<int> train_labels;
    train.reserve(m);
    train_labels.reserve(m);
    for (std::uint64_t k = 0; k < m; ++k) {
      train.push_back(space.sample(samples));
      train_labels.push_back(model.sample_label(train.back(), labels));
    }
    const NnChoice nn = select_nn(space, x, train, rule, ties);
    const double ex = eta.evaluate(x), en = eta.evaluate(nn.point);
    identity[i] = mismatch(ex, en);
    gap[i] = std::fabs(en - ex);
    return train_labels[nn.index - 1] != y ? 1.0 : 0.0;
  });
  const McEstimate direct = summarize(errors);
  const McEstimate ident = summarize(identity);
  out.risk = direct.mean;
  out.stderr_ = direct.stderr_;
  out.identity_risk = ident.mean;
  out.identity_stderr = ident.stderr_;
  if (exact) {
    out.prop_inf_bound = prop_inf_bound(model, rule, m);
  } else {
    out.prop_inf_bound = summarize(gap).mean;
    out.bound_estimated = true;
  }
  return out;
}

Realizability realizability_check(const LabeledModel& model, double tolerance) {
  if (!model.space().is_atomic()) {
    throw UnsupportedOperation("realizability check needs an atomic space");
  }
  Realizability out;
  out.realizable = true;
  WideFloat half;
  for (const auto& a : model.space().atoms()) {
    if (a.prob.is_zero()) continue;
    const double v = model.eta().evaluate(a.point);
    if (!(v <= tolerance || v >= 1.0 - tolerance)) out.realizable = false;
    if (v == 0.5) half += a.prob;
  }
  out.half_mass = half.to_double();
  return out;
}

}  // namespace lebnn
