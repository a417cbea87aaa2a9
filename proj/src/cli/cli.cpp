#include "lebnn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "lebnn/classify.hpp"
#include "lebnn/csv.hpp"
#include "lebnn/errors.hpp"
#include "lebnn/lebesgue.hpp"
#include "lebnn/nn.hpp"
#include "lebnn/rational.hpp"
#include "lebnn/space_config.hpp"
#include "lebnn/spaces.hpp"
#include "lebnn/verify.hpp"

namespace lebnn {

namespace {

std::uint64_t parse_count(const std::string& text, const std::string& field) {
  mpq_class q;
  try {
    q = parse_rational(text);
  } catch (const ConfigError& e) {
    throw ConfigError(field, e.what());
  }
  if (q.get_den() != 1 || q < 1 || q > mpq_class(static_cast<double>(1ULL << 62))) {
    throw ConfigError(field, "expected a positive integer, got '" + text + "'");
  }
  return q.get_num().get_ui();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, sep)) out.push_back(token);
  return out;
}

struct ModelPreset {
  const char* space;
  const char* field;
};

const std::map<std::string, ModelPreset>& presets() {
  static const std::map<std::string, ModelPreset> table = {
      {"noisy_pair", {"finite_atomic:probs=1/2,1/2,positions=0,1", "table:values=0.3,0.8"}},
      {"realizable_pair", {"finite_atomic:probs=1/2,1/2,positions=0,1", "table:values=0,1"}},
      {"harmonic", {"signed_harmonic:N=8", "positive"}},
  };
  return table;
}

Mode parse_mode(const std::string& text) {
  if (text == "auto") return Mode::automatic;
  if (text == "exact") return Mode::exact;
  if (text == "mc") return Mode::mc;
  throw ConfigError("mode", "expected auto, exact or mc, got '" + text + "'");
}

SpaceSpec space_spec(const std::string& text) {
  if (!text.empty() && text[0] == '@') return parse_space_file(text.substr(1));
  return parse_space_spec(text);
}

struct Context {
  SpacePtr space;
  Point x;
  ScalarField raw;    // as configured
  ScalarField field;  // with override and anchor applied
};

Context build_context(const ExperimentConfig& c) {
  std::string space_text = c.space, field_text = c.field;
  if (!c.model.empty()) {
    const auto it = presets().find(c.model);
    if (it == presets().end()) throw ConfigError("model", "unknown model '" + c.model + "'");
    space_text = it->second.space;
    field_text = it->second.field;
  }
  const SpacePtr space = build_space(space_spec(space_text));
  const Point x = parse_point(c.anchor, *space);
  ScalarField raw = build_field(parse_space_spec(field_text), *space);
  ScalarField field = raw;
  if (c.override_value) field = field.with_override(x, *c.override_value);
  field = c.anchor_value ? field.with_anchor(*c.anchor_value) : field.anchored_at(x);
  return {space, x, raw, field};
}

McOptions mc_options(const ExperimentConfig& c) {
  McOptions o;
  o.trials = c.trials;
  o.seed = c.seed;
  o.workers = c.workers;
  return o;
}

CsvTable with_trailer(CsvTable table, const ExperimentConfig& c) {
  for (const auto& [k, v] : describe(c)) table.add_meta(k, v);
  return table;
}

std::string ratio_cell(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                       const Distance& r, Ball ball) {
  try {
    return cell(lebesgue_ratio(space, field, x, r, ball));
  } catch (const UndefinedRatio&) {
    return "nan";
  }
}

Rendered cmd_ratio(const ExperimentConfig& c) {
  const Context ctx = build_context(c);
  CsvTable t({"r", "ratio_closed", "ratio_open"});
  for (const auto& r : parse_radii(c.radii, *ctx.space, ctx.x)) {
    t.add_row({cell(r), ratio_cell(*ctx.space, ctx.field, ctx.x, r, Ball::closed),
               ratio_cell(*ctx.space, ctx.field, ctx.x, r, Ball::open)});
  }
  return {with_trailer(std::move(t), c).render(), true, ""};
}

Rendered cmd_alphaseq(const ExperimentConfig& c) {
  const Context ctx = build_context(c);
  const auto seq = alpha_sequence(*ctx.space, ctx.field, ctx.x, c.alpha, c.m_max);
  CsvTable t({"m", "m_hi", "r_m", "M_value", "M_open"});
  for (const auto& s : seq.segments) {
    t.add_row({cell(s.m_lo), cell(s.m_hi), cell(s.radius), cell(s.closed_value),
               cell(s.open_value)});
  }
  t = with_trailer(std::move(t), c);
  t.add_meta("trivial", to_string(seq.trivial));
  Rendered out{"", true, ""};
  if (seq.trivial == Triviality::none) {
    const auto rep = check_alpha_inequalities(*ctx.space, ctx.field, ctx.x, seq);
    t.add_meta("m_start", std::to_string(seq.m_start));
    t.add_meta("exact", cell(rep.exact));
    t.add_meta("checked", std::to_string(rep.checked));
    t.add_meta("m1_failures", std::to_string(rep.m1_failures));
    t.add_meta("m2_failures", std::to_string(rep.m2_failures));
    out.verdict = rep.holds();
    if (!out.verdict) out.diagnostic = "alpha-sequence inequalities fail";
  }
  out.csv = t.render();
  return out;
}

Rendered cmd_conditions(const ExperimentConfig& c) {
  const Context ctx = build_context(c);
  if (c.kind != "measure" && c.kind != "tie" && c.kind != "both") {
    throw ConfigError("kind", "expected measure, tie or both");
  }
  CsvTable t({"condition", "r", "m", "ratio", "stderr"});
  std::vector<std::pair<std::string, std::string>> meta;
  Rendered out{"", true, ""};
  auto emit = [&](const ConditionReport& rep) {
    for (const auto& p : rep.probes) {
      t.add_row({rep.kind, cell(p.radius), cell(p.m), p.infinite ? "inf" : cell(p.value),
                 cell(p.stderr_)});
    }
    meta.emplace_back(rep.kind + "_constant", rep.infinite ? "inf" : cell(rep.constant));
    meta.emplace_back(rep.kind + "_holds", cell(rep.holds));
    meta.emplace_back(rep.kind + "_estimated", cell(rep.estimated));
    if (!rep.holds) {
      out.verdict = false;
      out.diagnostic += rep.kind + " condition fails; ";
    }
  };
  if (c.kind != "tie") {
    std::optional<Distance> R;
    if (!c.R.empty()) R = parse_distance(c.R, *ctx.space);
    std::vector<Distance> probes;
    if (!ctx.space->is_atomic()) probes = parse_radii(c.radii, *ctx.space, ctx.x);
    emit(check_measure_continuity(*ctx.space, ctx.x, R, probes));
  }
  if (c.kind != "measure") {
    emit(check_tie_bias(*ctx.space, ctx.field, ctx.x, *parse_rule(c.rule), parse_m_grid(c.m_grid),
                        mc_options(c)));
  }
  t = with_trailer(std::move(t), c);
  for (const auto& [k, v] : meta) t.add_meta(k, v);
  out.csv = t.render();
  return out;
}

Rendered cmd_nnconv(const ExperimentConfig& c) {
  const Context ctx = build_context(c);
  const auto curve = nn_convergence(*ctx.space, ctx.field, ctx.x, *parse_rule(c.rule),
                                    parse_m_grid(c.m_grid), parse_mode(c.mode), mc_options(c));
  CsvTable t({"m", "error", "stderr", "method"});
  for (const auto& r : curve.rows()) {
    t.add_row({cell(r.m), cell(r.error), cell(r.stderr_), to_string(r.method)});
  }
  return {with_trailer(std::move(t), c).render(), true, ""};
}

Rendered cmd_alongseq(const ExperimentConfig& c) {
  const Context ctx = build_context(c);
  std::vector<Distance> radii;
  if (c.radii == "alpha") {
    radii = alpha_sequence(*ctx.space, ctx.field, ctx.x, c.alpha, c.m_max).radii();
  } else {
    radii = parse_radii(c.radii, *ctx.space, ctx.x);
  }
  const auto rep = along_sequence_check(*ctx.space, ctx.field, ctx.x, radii, c.tail, c.tolerance);
  CsvTable t({"r", "ratio_closed", "ratio_open"});
  for (const auto& r : rep.rows) {
    t.add_row({cell(r.radius), cell(r.closed), r.open_defined ? cell(r.open) : "nan"});
  }
  t = with_trailer(std::move(t), c);
  t.add_meta("tail_max", cell(rep.tail_max));
  t.add_meta("tail_nonincreasing", cell(rep.tail_nonincreasing));
  t.add_meta("lebesgue", cell(rep.lebesgue));
  return {t.render(), rep.lebesgue, rep.lebesgue ? "" : "ratios do not vanish along the sequence"};
}

Rendered cmd_lebvalue(const ExperimentConfig& c) {
  const Context ctx = build_context(c);
  ValueParams params;
  ValueMethod method;
  if (c.method == "ratio") {
    method = ValueMethod::ratio;
    if (c.radii != "table" && !ctx.space->is_atomic()) {
      params.probes = parse_radii(c.radii, *ctx.space, ctx.x);
    }
  } else if (c.method == "nn") {
    method = ValueMethod::nn;
    params.rule = parse_rule(c.rule);
    params.m_grid = parse_m_grid(c.m_grid);
  } else {
    throw ConfigError("method", "expected ratio or nn");
  }
  params.options = mc_options(c);
  params.tail = c.tail;
  params.tolerance = c.tolerance;
  const auto v = lebesgue_value_estimate(*ctx.space, ctx.field, ctx.x, method, params);
  CsvTable t({"r", "m", "value", "stderr"});
  for (const auto& d : v.diagnostics) {
    t.add_row({method == ValueMethod::ratio ? cell(d.radius) : "", cell(d.m), cell(d.value),
               cell(d.stderr_)});
  }
  t = with_trailer(std::move(t), c);
  t.add_meta("l_hat", cell(v.l_hat));
  t.add_meta("l_hat_stderr", cell(v.stderr_));
  t.add_meta("tail_spread", cell(v.tail_spread));
  t.add_meta("converged", cell(v.converged));
  return {t.render(), v.converged, v.converged ? "" : "estimate did not settle"};
}

Rendered cmd_classify(const ExperimentConfig& c) {
  const Context ctx = build_context(c);
  const LabeledModel model(ctx.space, ctx.raw);
  const auto rule = parse_rule(c.rule);
  const Mode mode = parse_mode(c.mode);
  CsvTable t({"m", "risk", "stderr", "surrogate", "bayes", "prop_inf_bound", "method"});
  Rendered out{"", true, ""};
  for (std::uint64_t m : parse_m_grid(c.m_grid)) {
    const auto r = nn_classification_risk(model, *rule, m, mode, mc_options(c));
    t.add_row({cell(m), cell(r.risk), cell(r.stderr_), cell(r.surrogate), cell(r.bayes),
               cell(r.prop_inf_bound), to_string(r.method)});
    if (std::fabs(r.risk - r.surrogate) > r.prop_inf_bound + 4 * r.stderr_ + 1e-15) {
      out.verdict = false;
      out.diagnostic += "m=" + std::to_string(m) + " exceeds the bound; ";
    }
  }
  out.csv = with_trailer(std::move(t), c).render();
  return out;
}

Rendered cmd_verify(const ExperimentConfig& c) {
  VerifyOptions opt;
  opt.seed = c.seed;
  opt.workers = c.workers;
  std::vector<CriterionResult> results;
  if (!c.criterion.empty()) {
    try {
      results.push_back(run_acceptance_criterion(c.criterion, opt));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("criterion", e.what());
    }
  } else if (c.suite == "paper") {
    results = run_acceptance_suite(opt);
  } else if (c.suite == "oracle") {
    results = run_oracle_suite(opt);
  } else if (c.suite == "all") {
    results = run_acceptance_suite(opt);
    for (auto& r : run_oracle_suite(opt)) results.push_back(std::move(r));
  } else {
    throw ConfigError("suite", "expected paper, oracle or all");
  }
  CsvTable t({"id", "criterion", "status", "detail"});
  Rendered out{"", true, ""};
  for (const auto& r : results) {
    t.add_row({r.id, r.title, r.pass ? "PASS" : "FAIL", r.detail});
    if (!r.pass) {
      out.verdict = false;
      out.diagnostic += r.id + " failed; ";
    }
  }
  out.csv = with_trailer(std::move(t), c).render();
  return out;
}

std::string opt_str(const std::optional<double>& v) { return v ? cell(*v) : ""; }

}  // namespace

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& c) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"ratio", {"space", "field", "x", "anchor", "override", "radii"}},
      {"alphaseq", {"space", "field", "x", "anchor", "override", "alpha", "m_max"}},
      {"conditions", {"space", "field", "x", "anchor", "override", "rule", "m_grid", "radii",
                      "kind", "R", "trials", "seed"}},
      {"nnconv", {"space", "field", "x", "anchor", "override", "rule", "m_grid", "mode", "trials",
                  "seed"}},
      {"alongseq", {"space", "field", "x", "anchor", "override", "radii", "alpha", "m_max", "tail",
                    "tolerance"}},
      {"lebvalue", {"space", "field", "x", "anchor", "override", "rule", "m_grid", "radii",
                    "method", "trials", "seed", "tail", "tolerance"}},
      {"classify", {"space", "field", "model", "rule", "m_grid", "mode", "trials", "seed"}},
      {"verify", {"suite", "criterion", "seed"}},
  };
  const std::vector<std::pair<std::string, std::string>> all = {
      {"space", c.model.empty() ? c.space : ""},
      {"field", c.model.empty() ? c.field : ""},
      {"model", c.model},
      {"x", c.anchor},
      {"anchor", opt_str(c.anchor_value)},
      {"override", opt_str(c.override_value)},
      {"rule", c.rule},
      {"m_grid", c.m_grid},
      {"radii", c.radii},
      {"kind", c.kind},
      {"R", c.R},
      {"method", c.method},
      {"suite", c.criterion.empty() ? c.suite : ""},
      {"criterion", c.criterion},
      {"mode", c.mode},
      {"alpha", cell(c.alpha)},
      {"m_max", cell(c.m_max)},
      {"trials", cell(static_cast<std::uint64_t>(c.trials))},
      {"seed", cell(c.seed)},
      {"tail", cell(static_cast<std::uint64_t>(c.tail))},
      {"tolerance", cell(c.tolerance)},
  };
  std::vector<std::pair<std::string, std::string>> out = {{"command", c.command}};
  const auto it = keys.find(c.command);
  for (const auto& [k, v] : all) {
    if (v.empty()) continue;
    if (it == keys.end() || it->second.count(k)) out.emplace_back(k, v);
  }
  return out;
}

std::vector<std::uint64_t> parse_m_grid(const std::string& text) {
  std::set<std::uint64_t> values;
  for (const auto& token : split(text, ',')) {
    if (token.empty()) continue;
    const auto parts = split(token, ':');
    if (parts.size() == 1) {
      values.insert(parse_count(parts[0], "m"));
      continue;
    }
    const std::uint64_t a = parse_count(parts[0], "m");
    const std::uint64_t b = parse_count(parts[1], "m");
    if (a > b) throw ConfigError("m", "empty range '" + token + "'");
    if (parts.size() == 2) {
      if (b - a > 10000000) throw ConfigError("m", "range '" + token + "' is too long");
      for (std::uint64_t m = a; m <= b; ++m) values.insert(m);
      continue;
    }
    if (parts[2] != "log" || parts.size() > 4) {
      throw ConfigError("m", "expected a:b, a:b:log or a:b:log:k, got '" + token + "'");
    }
    if (parts.size() == 3) {
      for (long double p = 1; p <= static_cast<long double>(b); p *= 10) {
        for (int f : {1, 3}) {
          const auto v = static_cast<std::uint64_t>(f * p);
          if (v >= a && v <= b) values.insert(v);
        }
      }
    } else {
      const std::uint64_t k = parse_count(parts[3], "m");
      for (std::uint64_t j = 0;; ++j) {
        const long double v = std::round(std::pow(10.0L, static_cast<long double>(j) / k));
        if (v > static_cast<long double>(b)) break;
        if (v >= a) values.insert(static_cast<std::uint64_t>(v));
      }
    }
  }
  if (values.empty()) throw ConfigError("m", "empty grid '" + text + "'");
  return {values.begin(), values.end()};
}

Distance parse_distance(const std::string& text, const MetricMeasureSpace& space) {
  mpq_class q;
  try {
    q = parse_rational(text);
  } catch (const ConfigError& e) {
    throw ConfigError("radius", e.what());
  }
  if (q <= 0) throw ConfigError("radius", "radius must be positive, got '" + text + "'");
  if (space.is_atomic()) {
    try {
      const auto [n, d] = to_int64_fraction(q);
      return Distance::exact(n, d);
    } catch (const std::overflow_error&) {
      throw ConfigError("radius", "radius '" + text + "' does not fit an exact distance");
    }
  }
  return Distance::real(to_double(q));
}

std::vector<Distance> parse_radii(const std::string& text, const MetricMeasureSpace& space,
                                  const Point& x) {
  std::vector<Distance> out;
  const auto parts = split(text, ':');
  auto range = [&](const char* what) {
    if (parts.size() != 3) throw ConfigError("radii", std::string("expected ") + what + ":a:b");
    const std::uint64_t a = parse_count(parts[1], "radii");
    const std::uint64_t b = parse_count(parts[2], "radii");
    if (a > b || b - a > 100000) throw ConfigError("radii", "bad range in '" + text + "'");
    return std::make_pair(a, b);
  };
  if (text == "table") {
    if (space.is_atomic()) {
      const SphereTable table = sphere_table(space, x);
      for (const auto& row : table.rows()) {
        if (!(row.radius == Distance::exact(0))) out.push_back(row.radius);
      }
    } else {
      out = default_interval_probes(space);
    }
  } else if (parts[0] == "inv") {
    const auto [a, b] = range("inv");
    for (std::uint64_t n = a; n <= b; ++n) {
      out.push_back(space.is_atomic() ? Distance::exact(1, static_cast<std::int64_t>(n))
                                      : Distance::real(1.0 / static_cast<double>(n)));
    }
  } else if (parts[0] == "pow2") {
    const auto [a, b] = range("pow2");
    for (std::uint64_t k = a; k <= b; ++k) {
      if (space.is_atomic()) {
        if (k > 62) throw ConfigError("radii", "2^-k with k > 62 is not an exact distance");
        out.push_back(Distance::exact(1, std::int64_t{1} << k));
      } else {
        out.push_back(Distance::real(std::ldexp(1.0, -static_cast<int>(k))));
      }
    }
  } else if (parts[0] == "theta") {
    const auto* dyadic = dynamic_cast<const DyadicIntervalSpace*>(&space);
    if (dyadic == nullptr) throw ConfigError("radii", "theta radii need a dyadic space");
    const int depth = dyadic->depth();
    const std::string which = parts.size() == 2 ? parts[1] : "";
    std::vector<int> idx;
    if (which == "odd") {
      for (int m = 1; m < depth; ++m) idx.push_back(2 * m + 1);
    } else if (which == "even") {
      for (int m = 1; m <= depth; ++m) idx.push_back(2 * m);
    } else if (which == "all") {
      for (int n = 1; n <= 2 * depth; ++n) idx.push_back(n);
    } else {
      throw ConfigError("radii", "expected theta:odd, theta:even or theta:all");
    }
    for (int n : idx) {
      if (n > 10) throw ConfigError("radii", "theta_" + std::to_string(n) + " underflows a double");
      out.push_back(Distance::real(dyadic_theta(n)));
    }
  } else {
    for (const auto& token : split(text, ',')) {
      if (!token.empty()) out.push_back(parse_distance(token, space));
    }
  }
  std::sort(out.begin(), out.end(), [](const Distance& a, const Distance& b) { return b < a; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw ConfigError("radii", "no radii in '" + text + "'");
  return out;
}

Rendered render_experiment(const ExperimentConfig& c) {
  if (c.trials == 0) throw ConfigError("trials", "must be >= 1");
  if (c.workers == 0) throw ConfigError("workers", "must be >= 1");
  if (c.command == "ratio") return cmd_ratio(c);
  if (c.command == "alphaseq") return cmd_alphaseq(c);
  if (c.command == "conditions") return cmd_conditions(c);
  if (c.command == "nnconv") return cmd_nnconv(c);
  if (c.command == "alongseq") return cmd_alongseq(c);
  if (c.command == "lebvalue") return cmd_lebvalue(c);
  if (c.command == "classify") return cmd_classify(c);
  if (c.command == "verify") return cmd_verify(c);
  throw ConfigError("command", "unknown command '" + c.command + "'");
}

int run_experiment(const ExperimentConfig& config, std::ostream& err) {
  const Rendered r = render_experiment(config);
  if (config.out.empty() || config.out == "-") {
    std::cout << r.csv << std::flush;
  } else {
    std::ofstream f(config.out, std::ios::binary);
    if (!f) throw ConfigError("out", "cannot open '" + config.out + "' for writing");
    f << r.csv;
    if (!f) throw ConfigError("out", "failed writing '" + config.out + "'");
  }
  if (r.verdict) return 0;
  err << config.command << ": " << r.diagnostic << "\n";
  return config.assert_ || config.command == "verify" ? 1 : 0;
}

}  // namespace lebnn
