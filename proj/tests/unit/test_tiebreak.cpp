#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "lebnn/errors.hpp"
#include "lebnn/nn.hpp"
#include "lebnn/spaces.hpp"
#include "lebnn/tiebreak.hpp"

using namespace lebnn;

namespace {

Point h(std::int64_t label) { return SignedHarmonicSpace::atom(label); }

std::vector<Candidate> cands(std::initializer_list<std::size_t> idx) {
  std::vector<Candidate> out;
  for (std::size_t i : idx) out.push_back({i, Point{static_cast<std::int64_t>(i), 0.5}});
  return out;
}

}  // namespace

TEST_CASE("lexicographic rule") {
  const auto lex = lexicographic_rule();
  Rng rng(1);
  CHECK(lex->is_isimin());
  CHECK(lex->choose(h(0), Distance::exact(1, 2), cands({3, 1, 7}), rng) == 1);
  CHECK(lex->choose(h(0), Distance::exact(1, 2), cands({5}), rng) == 5);
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng r(s);
    CHECK(lex->choose(h(0), Distance::exact(1, 2), cands({2, 9}), r) == 2);
  }
  CHECK_THROWS(lex->choose(h(0), Distance(), {}, rng));
}

TEST_CASE("uniform rule frequencies") {
  const auto uni = uniform_random_rule();
  CHECK(uni->is_isimin());
  Rng rng = derive_rng(5, 0, Stream::ties);
  const int trials = 100000;
  int ones = 0;
  for (int i = 0; i < trials; ++i) ones += uni->choose(h(0), Distance(), cands({1, 2}), rng) == 1;
  const double sigma = 0.5 / std::sqrt(static_cast<double>(trials));
  CHECK(std::fabs(ones / static_cast<double>(trials) - 0.5) <= 5 * sigma);

  for (int i = 0; i < 100; ++i) CHECK(uni->choose(h(0), Distance(), cands({4}), rng) == 4);

  std::map<std::size_t, int> counts;
  for (int i = 0; i < trials; ++i) ++counts[uni->choose(h(0), Distance(), cands({1, 2, 3}), rng)];
  double chi2 = 0.0;
  const double expected = trials / 3.0;
  for (std::size_t k = 1; k <= 3; ++k) chi2 += std::pow(counts[k] - expected, 2) / expected;
  // Two degrees of freedom: P(chi2 > t) = exp(-t/2), so level 1e-6 is t = 27.63.
  CHECK(chi2 < -2.0 * std::log(1e-6));
}

TEST_CASE("ISIMIN choices ignore point values") {
  Rng meta(17);
  for (const auto& rule : {lexicographic_rule(), uniform_random_rule()}) {
    for (int trial = 0; trial < 2000; ++trial) {
      std::vector<Candidate> c;
      const std::size_t k = 1 + uniform_index(meta, 6);
      for (std::size_t i = 0; i < k; ++i) {
        c.push_back({1 + uniform_index(meta, 100) + 100 * i, h(static_cast<std::int64_t>(i + 1))});
      }
      std::vector<Candidate> shuffled = c;
      std::vector<Point> pts;
      for (const auto& cand : c) pts.push_back(cand.point);
      std::shuffle(pts.begin(), pts.end(), meta);
      for (std::size_t i = 0; i < k; ++i) shuffled[i].point = pts[i];
      Rng a(trial);
      Rng b(trial);
      CHECK(rule->choose(h(0), Distance(), c, a) == rule->choose(h(0), Distance(), shuffled, b));
      CHECK(rule->tie_distribution(h(0), Distance(), c) ==
            rule->tie_distribution(h(0), Distance(), shuffled));
    }
  }
}

TEST_CASE("select_nn examples") {
  const SignedHarmonicSpace s(8);
  Rng ties(0);
  const auto lex = lexicographic_rule();
  const auto pos = positive_preference_rule();
  auto c1 = select_nn(s, h(0), {h(2), h(-2), h(3)}, *lex, ties);
  CHECK(c1.index == 3);
  CHECK(c1.point == h(3));
  CHECK(c1.distance == Distance::exact(1, 3));
  CHECK(select_nn(s, h(0), {h(2), h(-2)}, *lex, ties).index == 1);
  auto c2 = select_nn(s, h(0), {h(2), h(-2)}, *pos, ties);
  CHECK(c2.index == 1);
  CHECK(c2.point == h(2));
  auto c3 = select_nn(s, h(0), {h(-2), h(2)}, *pos, ties);
  CHECK(c3.index == 2);
  CHECK(c3.point == h(2));
  CHECK_THROWS_AS(select_nn(s, h(0), {}, *lex, ties), std::invalid_argument);
  CHECK_FALSE(pos->is_isimin());
}

TEST_CASE("select_nn returns a minimizer") {
  Rng meta(99);
  const auto rules = {lexicographic_rule(), uniform_random_rule(), positive_preference_rule(),
                      biased_bernoulli_rule(2.0)};
  for (int inst = 0; inst < 10000; ++inst) {
    const auto space = random_finite_space(meta, 2 + uniform_index(meta, 6), 4, inst % 2 == 0);
    std::vector<Point> samples;
    const std::size_t m = 1 + uniform_index(meta, 12);
    for (std::size_t i = 0; i < m; ++i) samples.push_back(space->sample(meta));
    const Point x = space->atoms()[uniform_index(meta, space->size())].point;
    Distance best = Distance::infinity();
    for (const auto& p : samples) best = std::min(best, space->distance(x, p), [](auto& a, auto& b) { return a < b; });
    for (const auto& rule : rules) {
      const auto c = select_nn(*space, x, samples, *rule, meta);
      REQUIRE(c.index >= 1);
      REQUIRE(c.index <= m);
      CHECK(samples[c.index - 1] == c.point);
      CHECK(space->distance(x, c.point) == best);
    }
  }
}

TEST_CASE("biased Bernoulli rule") {
  const auto rule = biased_bernoulli_rule(2.0);
  CHECK_FALSE(rule->is_isimin());
  const auto* side = rule->side_preference();
  REQUIRE(side != nullptr);
  CHECK(side->weight(Distance::exact(1, 4)) == 0.25);
  CHECK(side->exact_weight(Distance::exact(1, 3)) == mpq_class(1, 3));
  CHECK(side->weight(Distance::exact(1, 1)) == bernoulli_clip());
  CHECK(biased_bernoulli_rule(3.0)->side_preference()->weight(Distance::exact(1, 2)) ==
        bernoulli_clip());

  const std::vector<Candidate> tie{{1, h(-3)}, {2, h(3)}};
  const auto law = rule->tie_distribution(h(0), Distance::exact(1, 3), tie);
  CHECK(law[0] == mpq_class(2, 3));
  CHECK(law[1] == mpq_class(1, 3));
  Rng ties = derive_rng(3, 0, Stream::ties);
  const int trials = 100000;
  int plus = 0;
  for (int i = 0; i < trials; ++i) plus += rule->choose(h(0), Distance::exact(1, 3), tie, ties) == 2;
  const double p = 1.0 / 3.0;
  CHECK(std::fabs(plus / static_cast<double>(trials) - p) <= 5 * std::sqrt(p * (1 - p) / trials));
  // Singleton tie sets are deterministic.
  for (int i = 0; i < 100; ++i) {
    CHECK(rule->choose(h(0), Distance::exact(1, 3), {{4, h(-3)}}, ties) == 4);
  }
  CHECK_THROWS(biased_bernoulli_rule(1.0));
}

TEST_CASE("prefer-label rule") {
  const auto rule = prefer_label_rule(2);
  Rng ties(0);
  const std::vector<Candidate> tie{{1, Point{1, -1.0}}, {2, Point{2, 1.0}}, {3, Point{1, -1.0}}};
  CHECK(rule->choose(Point{0, 0.0}, Distance::exact(1), tie, ties) == 2);
  const auto law = rule->tie_distribution(Point{0, 0.0}, Distance::exact(1), tie);
  CHECK(law == std::vector<mpq_class>{0, 1, 0});
}

TEST_CASE("rule parsing") {
  CHECK(parse_rule("lex")->name() == "lex");
  CHECK(parse_rule("uniform")->name() == "uniform");
  CHECK(parse_rule("positive")->name() == "positive");
  CHECK(parse_rule("bernoulli:C=2.0")->side_preference()->weight(Distance::exact(1, 5)) == 0.2);
  CHECK(parse_rule("prefer:label=2")->name() == "prefer:label=2");
  CHECK_THROWS_AS(parse_rule("nearest"), ConfigError);
  CHECK_THROWS_AS(parse_rule("bernoulli:K=2"), ConfigError);
  CHECK_THROWS_AS(parse_rule("bernoulli:C=abc"), ConfigError);
}
