#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <map>

#include "lebnn/errors.hpp"
#include "lebnn/rational.hpp"
#include "lebnn/space_config.hpp"
#include "lebnn/spaces.hpp"

using namespace lebnn;

namespace {

Distance inv(std::int64_t n) { return Distance::exact(1, n); }

std::shared_ptr<FiniteAtomicSpace> three_atoms() {
  // x at 0 (no mass), a at -1, b at +1, c at 2.
  return FiniteAtomicSpace::on_line(parse_rational_list("0, 1/5, 3/10, 1/2", "probs"),
                                    parse_rational_list("0, -1, 1, 2", "positions"));
}

// Adaptive Simpson in u with t = 2^-u, so every dyadic band gets resolution.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15 * eps) {
    return left + right + (left + right - whole) / 15;
  }
  return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double quad_log(const std::function<double(double)>& eta, double u_lo, double u_hi) {
  // integral over t in [2^-u_hi, 2^-u_lo] of eta(t) dt = integral over u of eta(2^-u) 2^-u ln2 du
  auto g = [&](double u) { return eta(std::exp2(-u)) * std::exp2(-u) * std::log(2.0); };
  double total = 0.0;
  const int panels = 4096;
  const double h = (u_hi - u_lo) / panels;
  for (int i = 0; i < panels; ++i) {
    const double a = u_lo + i * h;
    const double b = a + h;
    const double fa = g(a);
    const double fb = g(b);
    const double fm = g(0.5 * (a + b));
    total += simpson(g, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 1e-18, 40);
  }
  return total;
}

}  // namespace

TEST_CASE("signed harmonic weights") {
  const SignedHarmonicSpace s(8);
  CHECK(s.normalizer().to_double() == doctest::Approx(0.316421509021893).epsilon(1e-14));
  WideFloat total;
  for (const auto& a : s.atoms()) total += a.prob;
  CHECK(std::fabs(total.to_double() - 1.0) < std::ldexp(1.0, -40));
  mpq_class exact_total = 0;
  for (const auto& a : s.atoms()) exact_total += *a.exact;
  CHECK(exact_total == 1);
  const Point zero = SignedHarmonicSpace::atom(0);
  CHECK(s.measure_sphere(zero, inv(1)).to_double() ==
        doctest::Approx(0.790085354099).epsilon(1e-11));
  CHECK(s.measure_closed_ball(zero, inv(2)).to_double() ==
        doctest::Approx(0.209914645901).epsilon(1e-11));
  CHECK(s.measure_open_ball(zero, inv(2)).to_double() ==
        doctest::Approx(0.0123933073767).epsilon(1e-10));
  CHECK(s.measure_sphere(zero, Distance()).is_zero());
  CHECK(s.atoms()[2].point.label == -1);
  CHECK(s.atoms()[2].prob.is_zero());
  CHECK(s.truncation_bound().exponent() < -500);
}

TEST_CASE("weights far below double range") {
  const SignedHarmonicSpace s(20);
  const Point zero = SignedHarmonicSpace::atom(0);
  const WideFloat last = s.measure_sphere(zero, inv(20));
  CHECK_FALSE(last.is_zero());
  CHECK(last.to_double() == 0.0);
  CHECK(last.log2() == doctest::Approx(-1048576.0 - std::log2(s.normalizer().to_double())));
  CHECK(s.measure_open_ball(zero, inv(19)) == last);
}

TEST_CASE("closed = open + sphere on every probe radius") {
  std::vector<SpacePtr> spaces = {std::make_shared<SignedHarmonicSpace>(8),
                                  std::make_shared<SignedHarmonicSpace>(5), three_atoms(),
                                  std::make_shared<DyadicIntervalSpace>(3),
                                  std::make_shared<UniformIntervalSpace>(-1.0, 2.0)};
  for (const auto& s : spaces) {
    const Point x = s->is_atomic() ? s->atoms().front().point : Point{0, 0.25};
    std::vector<Distance> probes;
    if (s->is_atomic()) {
      for (std::int64_t n = 1; n <= 60; ++n) probes.push_back(Distance::exact(1, n));
      for (std::int64_t n = 1; n <= 5; ++n) probes.push_back(Distance::exact(n, 1));
      probes.push_back(Distance::exact(7, 12));
    } else {
      for (double r : {0.0, 1e-9, 0.01, 0.25, 0.5, 1.0, 3.0}) probes.push_back(Distance::real(r));
    }
    WideFloat prev;
    std::sort(probes.begin(), probes.end());
    for (const auto& r : probes) {
      INFO(s->name() << " r=" << r.to_string());
      const WideFloat closed = s->measure_closed_ball(x, r);
      CHECK(closed == s->measure_open_ball(x, r) + s->measure_sphere(x, r));
      CHECK(prev <= closed);
      prev = closed;
    }
    CHECK(std::fabs(prev.to_double() - 1.0) < std::ldexp(1.0, -40));
  }
}

TEST_CASE("sphere table rows") {
  const auto s = three_atoms();
  const SphereTable t(*s, s->atoms()[0].point);
  REQUIRE(t.rows().size() == 2);
  CHECK(t.rows()[0].radius == Distance::exact(1));
  CHECK(t.rows()[0].sphere.to_double() == doctest::Approx(0.5));
  CHECK(t.rows()[0].open.is_zero());
  CHECK(t.rows()[0].closed.to_double() == doctest::Approx(0.5));
  CHECK(t.rows()[1].radius == Distance::exact(2));
  CHECK(t.rows()[1].sphere.to_double() == doctest::Approx(0.5));
  CHECK(t.rows()[1].open == t.rows()[0].closed);
  CHECK(t.rows()[1].closed.to_double() == doctest::Approx(1.0));
  CHECK(t.rows()[0].exterior.to_double() == doctest::Approx(0.5));

  const SignedHarmonicSpace h(8);
  const SphereTable ht(h, SignedHarmonicSpace::atom(0));
  REQUIRE(ht.rows().size() == 8);
  for (std::size_t k = 0; k + 1 < ht.rows().size(); ++k) {
    CHECK(ht.rows()[k].radius < ht.rows()[k + 1].radius);
    CHECK(ht.rows()[k + 1].open == ht.rows()[k].closed);
    CHECK(ht.rows()[k].sphere > WideFloat());
  }
  CHECK(ht.rows().back().radius == inv(1));
  CHECK(ht.rows().back().sphere.to_double() == doctest::Approx(0.790085354099).epsilon(1e-11));
  CHECK(h.sphere_radii(SignedHarmonicSpace::atom(0)).front() == inv(8));
  CHECK_THROWS_AS(SphereTable(DyadicIntervalSpace(3), Point{0, 0.0}), UnsupportedOperation);
}

TEST_CASE("sphere conditional mean") {
  const SignedHarmonicSpace h(8);
  const auto eta = ScalarField::positive_indicator();
  for (std::int64_t n = 1; n <= 8; ++n) {
    CHECK(h.sphere_conditional_mean(SignedHarmonicSpace::atom(0), inv(n), eta, 0.0) ==
          doctest::Approx(1.0 / n).epsilon(1e-14));
  }
  CHECK_THROWS_AS(h.sphere_conditional_mean(SignedHarmonicSpace::atom(0), inv(9), eta, 0.0),
                  UndefinedRatio);
}

TEST_CASE("support check") {
  const SignedHarmonicSpace h(8);
  std::vector<Distance> radii;
  for (std::int64_t n = 1; n <= 8; ++n) radii.push_back(inv(n));
  CHECK(support_check(h, SignedHarmonicSpace::atom(0), radii));
  radii.push_back(inv(9));
  CHECK_FALSE(support_check(h, SignedHarmonicSpace::atom(0), radii));

  const auto single = FiniteAtomicSpace::on_line({mpq_class(1)}, {mpq_class(0)});
  CHECK(support_check(*single, single->atoms()[0].point, {Distance(), inv(1000)}));
  const auto far = three_atoms();
  CHECK_FALSE(support_check(*far, far->atoms()[0].point, {Distance::exact(2), inv(2)}));
}

TEST_CASE("normalize_to_ball") {
  const SpacePtr h = std::make_shared<SignedHarmonicSpace>(8);
  const Point zero = SignedHarmonicSpace::atom(0);
  const auto whole = normalize_to_ball(h, zero, inv(1));
  REQUIRE(whole->atoms().size() == h->atoms().size());
  for (std::size_t i = 0; i < whole->atoms().size(); ++i) {
    CHECK(*whole->atoms()[i].exact == *h->atoms()[i].exact);
  }
  const auto half = normalize_to_ball(h, zero, inv(2));
  const double w = half->measure_sphere(zero, inv(2)).to_double();
  const Point plus_half = SignedHarmonicSpace::atom(2);
  double w_plus = 0.0;
  for (const auto& a : half->atoms()) {
    if (a.point == plus_half) w_plus = a.prob.to_double();
  }
  CHECK(w_plus == doctest::Approx(0.470480126998).epsilon(1e-11));
  CHECK(w == doctest::Approx(2 * 0.470480126998).epsilon(1e-11));
  CHECK(half->measure_closed_ball(zero, inv(2)) == half->measure_closed_ball(zero, inv(1)));

  const SpacePtr d = std::make_shared<DyadicIntervalSpace>(3);
  const auto dn = normalize_to_ball(d, Point{0, 0.0}, Distance::real(0.5));
  CHECK(dn->measure_closed_ball(Point{0, 0.0}, Distance::real(0.25)).to_double() == 0.5);

  const SpacePtr f = three_atoms();
  CHECK_THROWS_AS(normalize_to_ball(f, f->atoms()[0].point, inv(2)), std::domain_error);

  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    CHECK(h->distance(zero, half->sample(rng)) <= inv(2));
  }
}

TEST_CASE("signed harmonic sampling frequencies") {
  const SignedHarmonicSpace h(8);
  Rng rng = derive_rng(11, 0, Stream::samples);
  const int draws = 1000000;
  std::map<std::int64_t, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[h.sample(rng).label];
  for (const auto& a : h.atoms()) {
    const double p = a.prob.to_double();
    if (p < 1e-4) {
      if (p == 0.0) CHECK(counts[a.point.label] == 0);
      continue;
    }
    const double se = std::sqrt(p * (1 - p) / draws);
    INFO("label " << a.point.label);
    CHECK(std::fabs(counts[a.point.label] / static_cast<double>(draws) - p) <= 5 * se);
  }
}

TEST_CASE("dyadic closed form against quadrature") {
  const DyadicIntervalSpace d(3);
  const auto th = d.thresholds();
  REQUIRE(th.size() == 8);
  const double closed = dyadic_primitive(3, th[1]);
  CHECK(closed == doctest::Approx(th[2] - th[3] + th[4] - th[5]).epsilon(1e-15));
  CHECK(closed == doctest::Approx(0.0038909914437681436).epsilon(1e-15));
  const auto eta = d.canonical_field();
  auto f = [&](double t) { return eta.evaluate(Point{0, t}); };
  // [2^-200, theta_2]: the remaining sliver below 2^-200 contributes < 1e-60.
  const double numeric = quad_log(f, 4.0, 200.0);
  CHECK(std::fabs(numeric - closed) < 1e-12 * closed);
  const double ratios[] = {0.765563965775073, 0.0622558631002903, 0.996093809604645,
                           1.52587890589473e-5, 0.999999999767169, 0.0};
  for (int n = 1; n <= 6; ++n) {
    const double r = th[n - 1];
    CHECK(eta.abs_integral(0.0, r, 0.0) / r == doctest::Approx(ratios[n - 1]).epsilon(1e-13));
  }
}

TEST_CASE("space config") {
  const auto spec = parse_space_spec("finite_atomic:probs=1/5,3/10,1/2,positions=-1,1,2");
  CHECK(spec.kind == "finite_atomic");
  CHECK(spec.params.at("probs") == "1/5,3/10,1/2");
  CHECK(spec.params.at("positions") == "-1,1,2");
  const auto s = build_space(spec);
  CHECK(s->atoms().size() == 3);
  CHECK(*s->atoms()[0].exact == mpq_class(1, 5));
  CHECK(build_space(parse_space_spec("signed_harmonic:N=6"))->name() == "signed_harmonic:N=6");
  CHECK(build_space(parse_space_spec("dyadic:D=2"))->name() == "dyadic:D=2");
  CHECK(build_space(parse_space_spec("unit_interval"))->interval()->second == 1.0);
  CHECK(parse_rational("2^-3") == mpq_class(1, 8));
  CHECK(parse_rational("0.2") == mpq_class(1, 5));
  CHECK(parse_rational("-1.5e-1") == mpq_class(-3, 20));
  CHECK_THROWS_AS(build_space(parse_space_spec("finite_atomic:probs=1/2,1/3,positions=0,1")),
                  ConfigError);
  CHECK_THROWS_AS(build_space(parse_space_spec("signed_harmonic:M=3")), ConfigError);
  CHECK_THROWS_AS(build_space(parse_space_spec("torus")), ConfigError);
  CHECK_THROWS_AS(
      build_space(parse_space_spec("finite_atomic:probs=1/3,1/3,1/3,distances=0 1 5;1 0 1;5 1 0")),
      ConfigError);
  const auto table = build_space(
      parse_space_spec("finite_atomic:probs=1/3,1/3,1/3,distances=0 1 2;1 0 1;2 1 0"));
  CHECK(table->distance(table->atoms()[0].point, table->atoms()[2].point) == Distance::exact(2));
}
