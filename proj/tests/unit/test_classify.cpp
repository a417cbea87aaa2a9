#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lebnn/classify.hpp"
#include "lebnn/errors.hpp"
#include "lebnn/oracle.hpp"
#include "lebnn/rational.hpp"
#include "lebnn/space_config.hpp"
#include "lebnn/spaces.hpp"

using namespace lebnn;

namespace {

std::shared_ptr<FiniteAtomicSpace> two_atoms() {
  return FiniteAtomicSpace::on_line({mpq_class(1, 2), mpq_class(1, 2)}, {0, 1});
}

LabeledModel noisy() { return LabeledModel(two_atoms(), ScalarField::table({0.3, 0.8})); }

}  // namespace

TEST_CASE("surrogate and Bayes risk") {
  const auto sb = surrogate_and_bayes(noisy());
  CHECK(sb.surrogate == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(sb.bayes == doctest::Approx(0.25).epsilon(1e-15));
  const auto real = surrogate_and_bayes(LabeledModel(two_atoms(), ScalarField::table({0.0, 1.0})));
  CHECK(real.surrogate == 0.0);
  CHECK(real.bayes == 0.0);
  const auto half = surrogate_and_bayes(LabeledModel(two_atoms(), ScalarField::constant(0.5)));
  CHECK(half.surrogate == 0.5);
  CHECK(half.bayes == 0.5);

  Rng meta(7);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_finite_space(meta, 2 + uniform_index(meta, 6), 4, true);
    std::vector<double> values;
    for (std::size_t k = 0; k < s->size(); ++k) values.push_back(uniform01(meta));
    const auto r = surrogate_and_bayes(LabeledModel(s, ScalarField::table(values)));
    CHECK(r.bayes <= r.surrogate + 1e-15);
    CHECK(r.surrogate <= 2 * r.bayes + 1e-15);
  }

  // Interval model by sampling: eta(t) = t gives 2 E[t(1-t)] = 1/3, E[min] = 1/4.
  McOptions opt;
  opt.trials = 200000;
  const auto mc = surrogate_and_bayes(
      LabeledModel(std::make_shared<UniformIntervalSpace>(), ScalarField::identity()), opt);
  CHECK(std::fabs(mc.surrogate - 1.0 / 3) <= 5 * mc.stderr_);
  CHECK(mc.bayes == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("model validation and labels") {
  CHECK_THROWS_AS(LabeledModel(two_atoms(), ScalarField::table({0.3, 1.5})), std::domain_error);
  const auto model = noisy();
  Rng rng(11);
  const std::size_t n = 1000000;
  for (std::size_t i = 0; i < 2; ++i) {
    const Point p = model.space().atoms()[i].point;
    std::size_t ones = 0;
    for (std::size_t k = 0; k < n; ++k) ones += model.sample_label(p, rng);
    const double v = model.eta().evaluate(p);
    const double se = std::sqrt(v * (1 - v) / n);
    CHECK(std::fabs(static_cast<double>(ones) / n - v) <= 5 * se);
  }
}

TEST_CASE("exact risk") {
  const auto model = noisy();
  const auto lex = lexicographic_rule();
  const auto r1 = nn_classification_risk(model, *lex, 1, Mode::exact);
  CHECK(r1.method == Method::exact);
  CHECK(r1.risk == doctest::Approx(0.495).epsilon(1e-15));
  CHECK(r1.prop_inf_bound == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::fabs(r1.risk - r1.surrogate) <= r1.prop_inf_bound);
  CHECK(r1.risk == doctest::Approx(to_double(brute_force_risk(model, *lex, 1))).epsilon(1e-15));
  for (std::uint64_t m = 1; m <= 4; ++m) {
    for (const auto& rule : {lexicographic_rule(), uniform_random_rule()}) {
      const auto r = nn_classification_risk(model, *rule, m, Mode::exact);
      CHECK(r.risk == doctest::Approx(to_double(brute_force_risk(model, *rule, m))).epsilon(1e-14));
    }
  }
  const auto r64 = nn_classification_risk(model, *lex, 64, Mode::exact);
  CHECK(std::fabs(r64.risk - 0.37) <= 1e-6);
  double previous_gap = 1.0;
  for (std::uint64_t m : {1, 2, 4, 8, 16, 32, 64}) {
    const auto r = nn_classification_risk(model, *lex, m, Mode::exact);
    CHECK(std::fabs(r.risk - r.surrogate) <= r.prop_inf_bound);
    CHECK(std::fabs(r.risk - r.surrogate) <= previous_gap);
    previous_gap = std::fabs(r.risk - r.surrogate);
  }

  const LabeledModel realizable(two_atoms(), ScalarField::table({0.0, 1.0}));
  CHECK(nn_classification_risk(realizable, *lex, 3, Mode::exact).risk ==
        doctest::Approx(0.125).epsilon(1e-15));
  CHECK(nn_classification_risk(realizable, *lex, 256, Mode::exact).risk < 1e-3);

  const LabeledModel flat(two_atoms(), ScalarField::constant(0.4));
  const auto rf = nn_classification_risk(flat, *lex, 5, Mode::exact);
  CHECK(rf.prop_inf_bound == 0.0);
  CHECK(rf.risk == doctest::Approx(rf.surrogate).epsilon(1e-15));
}

TEST_CASE("risk on the signed harmonic model") {
  const LabeledModel model(std::make_shared<SignedHarmonicSpace>(8),
                           ScalarField::positive_indicator());
  const auto r = nn_classification_risk(model, *lexicographic_rule(), 10000, Mode::exact);
  CHECK(r.prop_inf_bound < 0.02);
  CHECK(std::fabs(r.risk - r.surrogate) <= r.prop_inf_bound);
  CHECK(r.surrogate == 0.0);
}

TEST_CASE("Monte Carlo risk") {
  const auto model = noisy();
  McOptions opt;
  opt.trials = 100000;
  opt.workers = 4;
  const auto r = nn_classification_risk(model, *lexicographic_rule(), 64, Mode::mc, opt);
  CHECK(r.method == Method::mc);
  CHECK(std::fabs(r.risk - 0.37) <= 4 * r.stderr_);
  CHECK(std::fabs(r.identity_risk - 0.37) <= 4 * r.identity_stderr);
  CHECK(std::fabs(r.risk - r.identity_risk) <= 4 * (r.stderr_ + r.identity_stderr));
  CHECK(std::fabs(r.risk - r.surrogate) <= r.prop_inf_bound + 4 * r.stderr_);

  opt.workers = 1;
  const auto again = nn_classification_risk(model, *lexicographic_rule(), 64, Mode::mc, opt);
  CHECK(again.risk == r.risk);
  CHECK(again.stderr_ == r.stderr_);

  opt.trials = 50000;
  const auto m1 = nn_classification_risk(model, *uniform_random_rule(), 1, Mode::mc, opt);
  CHECK(std::fabs(m1.risk - 0.495) <= 4 * m1.stderr_);

  // No exact route on an interval space: automatic mode samples.
  const LabeledModel interval(std::make_shared<UniformIntervalSpace>(), ScalarField::identity());
  opt.trials = 20000;
  const auto ri = nn_classification_risk(interval, *lexicographic_rule(), 20, Mode::automatic, opt);
  CHECK(ri.method == Method::mc);
  CHECK(ri.bound_estimated);
  CHECK(std::fabs(ri.risk - ri.surrogate) <= ri.prop_inf_bound + 4 * ri.stderr_);
  CHECK_THROWS_AS(nn_classification_risk(interval, *lexicographic_rule(), 20, Mode::exact),
                  UnsupportedOperation);
}

TEST_CASE("realizability") {
  CHECK(realizability_check(LabeledModel(two_atoms(), ScalarField::table({0.0, 1.0}))).realizable);
  const auto half = realizability_check(LabeledModel(two_atoms(), ScalarField::table({0.5, 1.0})));
  CHECK(!half.realizable);
  CHECK(!half.half_mass_zero());
  CHECK(half.half_mass == 0.5);
  const auto near = realizability_check(LabeledModel(two_atoms(), ScalarField::table({1e-12, 1.0})),
                                        1e-9);
  CHECK(near.realizable);
  CHECK(near.half_mass_zero());
  CHECK(!realizability_check(noisy()).realizable);
}
