#include "lebnn/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "lebnn/classify.hpp"
#include "lebnn/cli.hpp"
#include "lebnn/errors.hpp"
#include "lebnn/lebesgue.hpp"
#include "lebnn/nn.hpp"
#include "lebnn/oracle.hpp"
#include "lebnn/rational.hpp"
#include "lebnn/space_config.hpp"
#include "lebnn/spaces.hpp"

namespace lebnn {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string num(const mpq_class& q) { return q.get_str(); }

std::string pair_str(const std::vector<mpq_class>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + num(v[i]);
  return out + ")";
}

Point harmonic_origin() { return SignedHarmonicSpace::atom(0); }

// x (massless) at 0, a at -1, b at +1, c at 2; labels 0..3.
std::shared_ptr<FiniteAtomicSpace> three_atoms() {
  return FiniteAtomicSpace::on_line(parse_rational_list("0, 1/5, 3/10, 1/2", "probs"),
                                    parse_rational_list("0, -1, 1, 2", "positions"));
}

LabeledModel noisy_pair() {
  return LabeledModel(FiniteAtomicSpace::on_line({mpq_class(1, 2), mpq_class(1, 2)}, {0, 1}),
                      ScalarField::table({0.3, 0.8}));
}

LabeledModel realizable_pair() {
  return LabeledModel(FiniteAtomicSpace::on_line({mpq_class(1, 2), mpq_class(1, 2)}, {0, 1}),
                      ScalarField::table({0.0, 1.0}));
}

CriterionResult a1(const VerifyOptions&) {
  CriterionResult out{"A1", "sphere law on the three-atom instance", true, ""};
  const auto s = three_atoms();
  const Point x = s->atoms()[0].point;
  const std::vector<mpq_class> expected = {mpq_class(2, 5), mpq_class(3, 5)};
  for (const auto& rule : {lexicographic_rule(), uniform_random_rule()}) {
    for (std::uint64_t m = 1; m <= 4; ++m) {
      const auto cond = sphere_conditionals(*s, x, brute_force_nn_distribution(*s, x, *rule, m));
      if (cond.empty() || cond[0].nn != expected || !cond[0].equal()) {
        out.pass = false;
        out.detail += rule->name() + " m=" + std::to_string(m) + " gives " +
                      (cond.empty() ? std::string("nothing") : pair_str(cond[0].nn)) + "; ";
      }
    }
  }
  const auto prefer = sphere_conditionals(
      *s, x, brute_force_nn_distribution(*s, x, *prefer_label_rule(2), 2));
  const std::vector<mpq_class> biased = {mpq_class(8, 25), mpq_class(17, 25)};
  const bool prefer_ok = !prefer.empty() && prefer[0].nn == biased &&
                         abs(prefer[0].nn[0] - expected[0]) >= mpq_class(1, 20);
  out.pass = out.pass && prefer_ok;
  out.detail += "lex/uniform m=1..4 conditional (2/5,3/5); prefer-b m=2 " +
                (prefer.empty() ? std::string("none") : pair_str(prefer[0].nn));
  return out;
}

CriterionResult a2(const VerifyOptions&) {
  CriterionResult out{"A2", "positive preference does not converge", true, ""};
  const SignedHarmonicSpace s(8);
  const auto eta = ScalarField::positive_indicator();
  const double floor = 1.0 / (4.0 * std::exp(2.0));
  for (std::uint64_t m : {10ULL, 243ULL, 82932ULL}) {
    const double e = exact_nn_error(s, eta, harmonic_origin(), *positive_preference_rule(), m);
    bool ok = e >= floor;
    if (m != 82932) {
      const double closed = 0.5 * std::pow(1.0 - 2.0 / static_cast<double>(m), m - 1.0);
      ok = ok && e >= 0.06 && e >= closed;
    }
    out.pass = out.pass && ok;
    out.detail += "m=" + std::to_string(m) + " error=" + num(e) + (ok ? "" : " FAIL") + "; ";
  }
  out.detail += "floor=" + num(floor);
  return out;
}

CriterionResult a3(const VerifyOptions&) {
  CriterionResult out{"A3", "bounded-bias rule converges", true, ""};
  const SignedHarmonicSpace s(8);
  const auto eta = ScalarField::positive_indicator();
  const auto rule = biased_bernoulli_rule(2.0);
  double previous = INFINITY;
  for (std::uint64_t m : {100ULL, 10000ULL, 1000000ULL}) {
    const double e = exact_nn_error(s, eta, harmonic_origin(), *rule, m);
    out.pass = out.pass && e < previous;
    previous = e;
    out.detail += "m=" + std::to_string(m) + " error=" + num(e) + "; ";
  }
  out.pass = out.pass && previous < 0.25;
  out.detail += "threshold=0.25";
  return out;
}

CriterionResult a4(const VerifyOptions&) {
  CriterionResult out{"A4", "Lebesgue ratio bounds", true, ""};
  const SignedHarmonicSpace s(8);
  const auto eta = ScalarField::positive_indicator();
  for (std::int64_t n = 1; n <= 6; ++n) {
    const auto q = exact_lebesgue_ratio(s, eta, harmonic_origin(), Distance::exact(1, n),
                                        Ball::closed);
    if (!q || *q > mpq_class(1, n)) {
      out.pass = false;
      out.detail += "harmonic n=" + std::to_string(n) + " FAIL; ";
    }
  }
  out.detail += "harmonic ratio(1/n) <= 1/n for n=1..6; ";
  const DyadicIntervalSpace d(3);
  const auto field = d.canonical_field();
  const Point origin{0, 0.0};
  for (int m = 1; m <= 2; ++m) {
    const double even =
        lebesgue_ratio(d, field, origin, Distance::real(dyadic_theta(2 * m)), Ball::closed);
    const double odd =
        lebesgue_ratio(d, field, origin, Distance::real(dyadic_theta(2 * m + 1)), Ball::closed);
    const bool ok = even <= std::ldexp(1.0, -(1 << (2 * m))) + 1e-12 &&
                    odd >= 1.0 - std::ldexp(1.0, -(1 << (2 * m + 1))) - 1e-12;
    out.pass = out.pass && ok;
    out.detail += "dyadic m=" + std::to_string(m) + " even=" + num(even) + " odd=" + num(odd) +
                  (ok ? "" : " FAIL") + "; ";
  }
  return out;
}

CriterionResult a5(const VerifyOptions&) {
  CriterionResult out{"A5", "alpha-sequence inequalities", true, ""};
  const SignedHarmonicSpace s(8);
  const auto eta = ScalarField::positive_indicator();
  const std::uint64_t m_max = 1000000;
  const auto seq = alpha_sequence(s, eta, harmonic_origin(), 0.5, m_max);
  const auto rep = check_alpha_inequalities(s, eta, harmonic_origin(), seq);
  out.pass = seq.exact && rep.exact && rep.holds() && rep.checked == m_max - seq.m_start + 1;
  out.detail = "alpha=1/2 m=" + std::to_string(seq.m_start) + ".." + std::to_string(m_max) +
               " checked=" + std::to_string(rep.checked) +
               " failures=" + std::to_string(rep.m1_failures) + "/" +
               std::to_string(rep.m2_failures) + " exact=" + (rep.exact ? "yes" : "no");
  return out;
}

// Oracle split of the error into the parts at distance <, = and > r.
struct OracleParts {
  mpq_class interior, sphere, exterior;
};

OracleParts oracle_parts(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                         const TieBreakRule& rule, std::uint64_t m, const Distance& r) {
  const auto law = brute_force_nn_distribution(space, x, rule, m);
  const mpq_class anchor = mpq_from_double(field.anchor_value());
  OracleParts p;
  const auto& atoms = space.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (law[i] == 0) continue;
    const mpq_class term =
        law[i] * abs(mpq_from_double(field.evaluate(atoms[i].point)) - anchor);
    const Distance d = space.distance(x, atoms[i].point);
    if (d < r) {
      p.interior += term;
    } else if (d == r) {
      p.sphere += term;
    } else {
      p.exterior += term;
    }
  }
  return p;
}

bool close(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

CriterionResult a6(const VerifyOptions& options) {
  CriterionResult out{"A6", "interior, sphere and exterior error bounds", true, ""};
  struct Case {
    SpacePtr space;
    Point x;
    ScalarField field;
    std::vector<RulePtr> rules;
    std::string name;
  };
  std::vector<Case> cases;
  const auto harmonic = std::make_shared<SignedHarmonicSpace>(8);
  cases.push_back({harmonic, harmonic_origin(), ScalarField::positive_indicator(),
                   {lexicographic_rule(), positive_preference_rule(), biased_bernoulli_rule(2.0)},
                   "harmonic"});
  Rng meta(options.seed);
  for (int i = 0; i < 2; ++i) {
    const auto f = random_finite_space(meta, 5, 3, false);
    std::vector<double> values;
    for (std::size_t k = 0; k < f->size(); ++k) values.push_back(uniform01(meta));
    const Point x = f->atoms()[0].point;
    cases.push_back({f, x, ScalarField::table(values).anchored_at(x),
                     {lexicographic_rule(), uniform_random_rule(), positive_preference_rule()},
                     "random" + std::to_string(i + 1)});
  }
  const std::vector<std::uint64_t> ms = {1, 10, 100, 1000};
  std::size_t points = 0, oracle_points = 0;
  for (const auto& c : cases) {
    const auto radii = sphere_table(*c.space, c.x).rows();
    std::vector<Distance> rs;
    for (const auto& row : radii) rs.push_back(row.radius);
    for (const auto& rule : c.rules) {
      for (const auto& row : geom_idea_check(*c.space, c.field, c.x, *rule, rs, ms)) {
        ++points;
        if (!row.holds) {
          out.pass = false;
          out.detail += c.name + " " + rule->name() + " r=" + row.radius.to_string() +
                        " m=" + std::to_string(row.m) + " bound FAIL; ";
        }
      }
      const auto vs = vs_inequality_check(*c.space, c.field, c.x, *rule, rs, ms);
      if (rule->is_isimin() && !vs.all_hold) {
        out.pass = false;
        out.detail += c.name + " " + rule->name() + " vs FAIL; ";
      }
      for (std::uint64_t m = 1; m <= 3; ++m) {
        const double total = to_double(brute_force_nn_error(*c.space, c.field, c.x, *rule, m));
        for (const auto& row : geom_idea_check(*c.space, c.field, c.x, *rule, rs, {m})) {
          ++oracle_points;
          const auto p = oracle_parts(*c.space, c.field, c.x, *rule, m, row.radius);
          const double sum = to_double(p.interior + p.sphere + p.exterior);
          const bool ok = close(sum, total) && close(to_double(p.interior), row.interior.to_double()) &&
                          close(to_double(p.sphere), row.sphere.to_double()) &&
                          close(to_double(p.exterior), row.exterior.to_double()) &&
                          to_double(p.interior) <= row.interior_bound.to_double() * (1 + 1e-12) &&
                          to_double(p.sphere) <= row.sphere_bound.to_double() * (1 + 1e-12) &&
                          to_double(p.exterior) <= row.exterior_bound.to_double() * (1 + 1e-12);
          if (!ok) {
            out.pass = false;
            out.detail += c.name + " " + rule->name() + " r=" + row.radius.to_string() +
                          " m=" + std::to_string(m) + " oracle FAIL; ";
          }
        }
      }
    }
  }
  out.detail += "grid points=" + std::to_string(points) +
                " oracle points=" + std::to_string(oracle_points);
  return out;
}

CriterionResult a7(const VerifyOptions&) {
  CriterionResult out{"A7", "sandwich between sphere mass powers", true, ""};
  std::vector<std::pair<SpacePtr, Point>> cases = {
      {std::make_shared<SignedHarmonicSpace>(8), harmonic_origin()},
      {std::make_shared<SignedHarmonicSpace>(8), SignedHarmonicSpace::atom(2)},
      {std::make_shared<SignedHarmonicSpace>(4), SignedHarmonicSpace::atom(-3)},
      {three_atoms(), Point{0, 0.0}}};
  std::size_t checks = 0;
  for (const auto& [space, x] : cases) {
    const auto& atoms = space->atoms();
    const SphereTable table(*space, x);
    mpq_class open = 0;
    std::vector<mpq_class> sphere_q;
    std::vector<mpq_class> open_q;
    for (const auto& row : table.rows()) {
      mpq_class s = 0;
      for (std::size_t i : row.members) s += *atoms[i].exact;
      open_q.push_back(open);
      sphere_q.push_back(s);
      open += s;
    }
    for (std::uint64_t m = 1; m <= 20; ++m) {
      const auto wide = nn_distance_distribution(*space, x, m);
      for (std::size_t k = 0; k < sphere_q.size(); ++k) {
        mpq_class above = 1 - open_q[k], below = 1 - open_q[k] - sphere_q[k];
        mpq_class pa = 1, pb = 1, ps = 1;
        for (std::uint64_t j = 0; j < m; ++j) {
          pa *= above;
          pb *= below;
          ps *= sphere_q[k];
        }
        const mpq_class nn = pa - pb;
        const bool ok = m * sphere_q[k] >= nn && nn >= ps &&
                        std::fabs(wide[k].prob.to_double() - to_double(nn)) <=
                            1e-12 * to_double(nn) + 1e-300;
        ++checks;
        if (!ok) {
          out.pass = false;
          out.detail += space->name() + " x=" + to_string(x) + " m=" + std::to_string(m) +
                        " r=" + table.rows()[k].radius.to_string() + " FAIL; ";
        }
      }
    }
  }
  out.detail += "exact checks=" + std::to_string(checks) + " m=1..20";
  return out;
}

CriterionResult a8(const VerifyOptions& options) {
  CriterionResult out{"A8", "online and batch NN agree", true, ""};
  Rng meta(options.seed + 8);
  const auto lex = lexicographic_rule();
  std::size_t prefixes = 0;
  for (int stream = 0; stream < 1000; ++stream) {
    const auto space = random_finite_space(meta, 2 + uniform_index(meta, 7), 5, stream % 3 == 0);
    std::vector<double> values;
    for (std::size_t i = 0; i < space->size(); ++i) values.push_back(uniform01(meta));
    const auto eta = ScalarField::table(values);
    const Point x = space->atoms()[uniform_index(meta, space->size())].point;
    const std::size_t len = 1 + uniform_index(meta, 50);
    std::vector<Point> prefix;
    OnlineNNState st;
    for (std::size_t k = 0; k < len; ++k) {
      prefix.push_back(space->sample(meta));
      st = online_nn_step(st, *space, prefix.back(), eta, x);
      const auto batch = select_nn(*space, x, prefix, *lex, meta);
      ++prefixes;
      if (!(st.best == batch.distance) || st.value != eta.evaluate(batch.point) ||
          st.best_index != batch.index) {
        out.pass = false;
        out.detail = "stream " + std::to_string(stream) + " prefix " + std::to_string(k + 1) +
                     " differs; ";
        break;
      }
    }
  }
  out.detail += "streams=1000 prefixes=" + std::to_string(prefixes);
  return out;
}

CriterionResult a9(const VerifyOptions& options) {
  CriterionResult out{"A9", "classification risk converges", true, ""};
  const auto model = noisy_pair();
  const auto lex = lexicographic_rule();
  const auto exact64 = nn_classification_risk(model, *lex, 64, Mode::exact);
  const bool exact_ok = std::fabs(exact64.risk - 0.37) <= 1e-6;
  McOptions mc;
  mc.trials = 100000;
  mc.seed = options.seed;
  mc.workers = options.workers;
  const auto sampled = nn_classification_risk(model, *lex, 64, Mode::mc, mc);
  const bool mc_ok = std::fabs(sampled.risk - 0.37) <= 4 * sampled.stderr_;
  bool bound_ok = true;
  for (std::uint64_t m : {1ULL, 2ULL, 4ULL, 8ULL, 16ULL, 32ULL, 64ULL, 128ULL, 256ULL}) {
    const auto r = nn_classification_risk(model, *lex, m, Mode::exact);
    bound_ok = bound_ok && std::fabs(r.risk - r.surrogate) <= r.prop_inf_bound;
  }
  const double realizable = nn_classification_risk(realizable_pair(), *lex, 256, Mode::exact).risk;
  const bool real_ok = realizable < 1e-3;
  out.pass = exact_ok && mc_ok && bound_ok && real_ok;
  out.detail = "exact m=64 risk=" + num(exact64.risk) + "; mc m=64 risk=" + num(sampled.risk) +
               " se=" + num(sampled.stderr_) + "; bound " + (bound_ok ? "holds" : "FAILS") +
               " m=1..256; realizable m=256 risk=" + num(realizable);
  return out;
}

CriterionResult a10(const VerifyOptions&) {
  CriterionResult out{"A10", "f_m envelope", true, ""};
  double min_gap = INFINITY;
  for (std::uint64_t m = 2; m <= 100; ++m) {
    const auto e = fm_envelope(m);
    const auto next = fm_envelope(m + 1);
    const double closed = std::pow(1.0 - 1.0 / static_cast<double>(m), m - 1.0);
    const bool ok = std::fabs(e.t_max - 1.0 / static_cast<double>(m)) <= 1e-14 &&
                    std::fabs(e.f_max - closed) <= 1e-14 && e.f_max > std::exp(-1.0) &&
                    next.b >= e.a && next.b <= e.b;
    min_gap = std::min(min_gap, e.f_max - std::exp(-1.0));
    if (!ok) {
      out.pass = false;
      out.detail += "m=" + std::to_string(m) + " FAIL; ";
    }
  }
  out.detail += "m=2..100 min(max f_m - 1/e)=" + num(min_gap);
  return out;
}

CriterionResult a11(const VerifyOptions& options) {
  CriterionResult out{"A11", "output independent of worker count", true, ""};
  std::vector<ExperimentConfig> configs;
  ExperimentConfig nn;
  nn.command = "nnconv";
  nn.space = "signed_harmonic:N=8";
  nn.rule = "uniform";
  nn.m_grid = "1,10,100";
  nn.mode = "mc";
  nn.trials = 20000;
  nn.seed = options.seed;
  configs.push_back(nn);
  ExperimentConfig interval = nn;
  interval.space = "unit_interval";
  interval.field = "identity";
  interval.anchor = "0.5";
  configs.push_back(interval);
  ExperimentConfig cls = nn;
  cls.command = "classify";
  cls.space = "finite_atomic:probs=1/2,1/2,positions=0,1";
  cls.field = "table:values=0.3,0.8";
  cls.rule = "lex";
  cls.m_grid = "1,64";
  configs.push_back(cls);
  for (const auto& base : configs) {
    std::string reference;
    for (unsigned w : {1U, 2U, 3U}) {
      ExperimentConfig c = base;
      c.workers = w;
      const auto rendered = render_experiment(c);
      if (w == 1) {
        reference = rendered.csv;
      } else if (rendered.csv != reference) {
        out.pass = false;
        out.detail += c.command + " on " + c.space + " differs at workers=" + std::to_string(w) + "; ";
      }
    }
  }
  out.detail += "nnconv x2 and classify rendered with workers 1,2,3";
  return out;
}

const std::vector<std::pair<std::string, std::function<CriterionResult(const VerifyOptions&)>>>&
acceptance_table() {
  static const std::vector<
      std::pair<std::string, std::function<CriterionResult(const VerifyOptions&)>>>
      table = {{"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},   {"A5", a5},  {"A6", a6},
               {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}, {"A11", a11}};
  return table;
}

}  // namespace

std::vector<std::string> acceptance_criteria() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : acceptance_table()) ids.push_back(id);
  return ids;
}

CriterionResult run_acceptance_criterion(const std::string& id, const VerifyOptions& options) {
  for (const auto& [key, fn] : acceptance_table()) {
    if (key != id) continue;
    try {
      return fn(options);
    } catch (const std::exception& e) {
      return {id, "error", false, std::string("exception: ") + e.what()};
    }
  }
  throw std::invalid_argument("unknown criterion " + id);
}

std::vector<CriterionResult> run_acceptance_suite(const VerifyOptions& options) {
  std::vector<CriterionResult> out;
  for (const auto& id : acceptance_criteria()) out.push_back(run_acceptance_criterion(id, options));
  return out;
}

std::vector<CriterionResult> run_oracle_suite(const VerifyOptions& options) {
  std::vector<CriterionResult> out;
  const std::vector<RulePtr> rules = {lexicographic_rule(), uniform_random_rule(),
                                      biased_bernoulli_rule(2.0), positive_preference_rule()};
  auto guarded = [&](CriterionResult r, const std::function<void(CriterionResult&)>& body) {
    try {
      body(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail += std::string("exception: ") + e.what();
    }
    out.push_back(r);
  };

  guarded({"O1", "sphere law for ISIMIN rules", true, ""}, [&](CriterionResult& r) {
    Rng meta(options.seed + 1);
    std::size_t spheres = 0;
    for (int cfg = 0; cfg < 20; ++cfg) {
      const auto s = random_finite_space(meta, 2 + uniform_index(meta, 4), 2, cfg % 2 == 0);
      const Point x = s->atoms()[uniform_index(meta, s->size())].point;
      for (const auto& rule : {lexicographic_rule(), uniform_random_rule()}) {
        for (std::uint64_t m = 1; m <= 4; ++m) {
          for (const auto& c : sphere_conditionals(*s, x, brute_force_nn_distribution(*s, x, *rule, m))) {
            ++spheres;
            if (!c.equal()) {
              r.pass = false;
              r.detail += "cfg " + std::to_string(cfg) + " " + rule->name() + " FAIL; ";
            }
          }
        }
      }
    }
    r.detail += "random spaces=20 spheres=" + std::to_string(spheres);
  });

  guarded({"O2", "non-ISIMIN rule breaks the sphere law", true, ""}, [&](CriterionResult& r) {
    const auto s = three_atoms();
    const Point x = s->atoms()[0].point;
    const auto c = sphere_conditionals(*s, x, brute_force_nn_distribution(*s, x, *prefer_label_rule(2), 2));
    r.pass = !c.empty() && c[0].nn == std::vector<mpq_class>{mpq_class(8, 25), mpq_class(17, 25)} &&
             !c[0].equal();
    r.detail = "prefer-b m=2 conditional " + (c.empty() ? std::string("none") : pair_str(c[0].nn));
  });

  guarded({"O3", "oracle equals exact engine", true, ""}, [&](CriterionResult& r) {
    Rng meta(options.seed + 2);
    double worst = 0.0;
    std::size_t cases = 0;
    for (int cfg = 0; cfg < 30; ++cfg) {
      const auto s = random_finite_space(meta, 2 + uniform_index(meta, 4), 3, cfg % 3 == 0);
      std::vector<double> values;
      for (std::size_t i = 0; i < s->size(); ++i) values.push_back(uniform01(meta));
      const Point x = s->atoms()[uniform_index(meta, s->size())].point;
      const auto eta = ScalarField::table(values).anchored_at(x);
      for (const auto& rule : rules) {
        for (std::uint64_t m = 1; m <= 4; ++m) {
          const double oracle = to_double(brute_force_nn_error(*s, eta, x, *rule, m));
          worst = std::max(worst, std::fabs(oracle - exact_nn_error(*s, eta, x, *rule, m)));
          ++cases;
        }
      }
    }
    r.pass = worst <= 1e-12;
    r.detail = "cases=" + std::to_string(cases) + " max diff=" + num(worst);
  });

  guarded({"O4", "oracle risk equals exact risk", true, ""}, [&](CriterionResult& r) {
    Rng meta(options.seed + 3);
    double worst = 0.0;
    for (int cfg = 0; cfg < 20; ++cfg) {
      const auto s = random_finite_space(meta, 2 + uniform_index(meta, 3), 3, true);
      std::vector<double> values;
      for (std::size_t i = 0; i < s->size(); ++i) values.push_back(uniform01(meta));
      const LabeledModel model(s, ScalarField::table(values));
      for (const auto& rule : rules) {
        for (std::uint64_t m = 1; m <= 3; ++m) {
          const double oracle = to_double(brute_force_risk(model, *rule, m));
          worst = std::max(worst,
                           std::fabs(oracle - nn_classification_risk(model, *rule, m, Mode::exact).risk));
        }
      }
    }
    const double two = to_double(brute_force_risk(noisy_pair(), *lexicographic_rule(), 1));
    const mpq_class real = brute_force_risk(realizable_pair(), *lexicographic_rule(), 3);
    r.pass = worst <= 1e-12 && std::fabs(two - 0.495) <= 1e-15 && real == mpq_class(1, 8);
    r.detail = "models=20 max diff=" + num(worst) + "; noisy pair m=1 " + num(two) +
               "; realizable m=3 " + num(real);
  });

  guarded({"O5", "oracle agrees with Monte Carlo", true, ""}, [&](CriterionResult& r) {
    Rng meta(options.seed + 4);
    double worst = 0.0;
    for (int cfg = 0; cfg < 10; ++cfg) {
      const auto s = random_finite_space(meta, 3 + uniform_index(meta, 3), 3, false);
      std::vector<double> values;
      for (std::size_t i = 0; i < s->size(); ++i) values.push_back(uniform01(meta));
      const Point x = s->atoms()[0].point;
      const auto eta = ScalarField::table(values).anchored_at(x);
      const auto& rule = rules[cfg % rules.size()];
      const std::uint64_t m = 1 + uniform_index(meta, 4);
      McOptions opt;
      opt.trials = options.oracle_mc_trials;
      opt.seed = options.seed + 100 + cfg;
      opt.workers = options.workers;
      const auto est = mc_nn_error(*s, eta, x, *rule, m, opt);
      const double oracle = to_double(brute_force_nn_error(*s, eta, x, *rule, m));
      const double z = est.stderr_ > 0 ? std::fabs(est.mean - oracle) / est.stderr_
                                       : (std::fabs(est.mean - oracle) <= 1e-12 ? 0.0 : INFINITY);
      worst = std::max(worst, z);
    }
    r.pass = worst <= 5.0;
    r.detail = "instances=10 trials=" + std::to_string(options.oracle_mc_trials) +
               " max |z|=" + num(worst);
  });
  return out;
}

}  // namespace lebnn
