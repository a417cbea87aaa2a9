#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "lebnn/cli.hpp"
#include "lebnn/errors.hpp"
#include "lebnn/rational.hpp"

namespace lebnn {

namespace {

enum Opt : unsigned {
  kSpace = 1u << 0,
  kField = 1u << 1,
  kAnchor = 1u << 2,
  kRule = 1u << 3,
  kGrid = 1u << 4,
  kRadii = 1u << 5,
  kAlpha = 1u << 6,
  kSampling = 1u << 7,
  kMode = 1u << 8,
  kTail = 1u << 9,
};

struct Raw {
  std::string trials;
  std::string m_max;
  std::string m_single;
  std::string seed;
  std::optional<double> anchor_value;
  std::optional<double> override_value;
};

std::uint64_t to_count(const std::string& text, const char* field) {
  mpq_class q;
  try {
    q = parse_rational(text);
  } catch (const ConfigError& e) {
    throw ConfigError(field, e.what());
  }
  if (q.get_den() != 1 || q < 0 || q > mpq_class(1.8e19)) {
    throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
  }
  return std::stoull(q.get_num().get_str());
}

void add_options(CLI::App* sub, unsigned which, ExperimentConfig& c, Raw& raw) {
  if (which & kSpace) {
    sub->add_option("--space", c.space, "space spec, or @file for a key = value file")
        ->capture_default_str();
  }
  if (which & kField) sub->add_option("--field", c.field, "field spec")->capture_default_str();
  if (which & kAnchor) {
    sub->add_option("--x", c.anchor, "anchor: atom label or coordinate")->capture_default_str();
    sub->add_option("--anchor", raw.anchor_value, "compare against this value instead of eta(x)");
    sub->add_option("--override", raw.override_value, "replace eta(x) by this value");
  }
  if (which & kRule) sub->add_option("--rule", c.rule, "tie-breaking rule")->capture_default_str();
  if (which & kGrid) {
    sub->add_option("--m-grid", c.m_grid, "sample sizes")->capture_default_str();
    sub->add_option("--m", raw.m_single, "single sample size (overrides --m-grid)");
  }
  if (which & kRadii) sub->add_option("--radii", c.radii, "probe radii")->capture_default_str();
  if (which & kAlpha) {
    sub->add_option("--alpha", c.alpha, "exponent in (0,1)")->capture_default_str();
    sub->add_option("--m-max", raw.m_max, "largest m of the sequence");
  }
  if (which & kSampling) {
    sub->add_option("--trials", raw.trials, "Monte Carlo trials");
    sub->add_option("--workers", c.workers, "worker threads")->capture_default_str();
  }
  if (which & kMode) sub->add_option("--mode", c.mode, "auto, exact or mc")->capture_default_str();
  if (which & kTail) {
    sub->add_option("--tail", c.tail, "probes in the verdict tail")->capture_default_str();
    sub->add_option("--tolerance", c.tolerance, "verdict tolerance")->capture_default_str();
  }
  sub->add_option("--seed", raw.seed, "master seed (default $LEBNN_SEED or 42)");
  sub->add_option("--out", c.out, "output path, - for stdout")->capture_default_str();
  sub->add_flag("--assert", c.assert_, "exit 1 when the verdict is negative");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& err) {
  ExperimentConfig c;
  Raw raw;
  CLI::App app{"Nearest-neighbor and Lebesgue-point experiments", "lebnn"};
  app.require_subcommand(1, 1);
  const unsigned ctx = kSpace | kField | kAnchor;

  add_options(app.add_subcommand("ratio", "Lebesgue ratios over closed and open balls"),
              ctx | kRadii, c, raw);
  add_options(app.add_subcommand("alphaseq", "alpha-sequence radii and their inequalities"),
              ctx | kAlpha, c, raw);
  auto* cond = app.add_subcommand("conditions", "measure-continuity and tie-bias constants");
  add_options(cond, ctx | kRule | kGrid | kRadii | kSampling, c, raw);
  cond->add_option("--kind", c.kind, "measure, tie or both")->capture_default_str();
  cond->add_option("--R", c.R, "probe radii below R");
  add_options(app.add_subcommand("nnconv", "NN error curve over m"),
              ctx | kRule | kGrid | kSampling | kMode, c, raw);
  add_options(app.add_subcommand("alongseq", "ratios along a vanishing radius sequence"),
              ctx | kRadii | kAlpha | kTail, c, raw);
  auto* value = app.add_subcommand("lebvalue", "estimate the Lebesgue value at x");
  add_options(value, ctx | kRule | kGrid | kRadii | kSampling | kTail, c, raw);
  value->add_option("--method", c.method, "ratio or nn")->capture_default_str();
  auto* cls = app.add_subcommand("classify", "NN classification risk over m");
  add_options(cls, kSpace | kField | kRule | kGrid | kSampling | kMode, c, raw);
  cls->add_option("--model", c.model, "preset: noisy_pair, realizable_pair, harmonic");
  auto* ver = app.add_subcommand("verify", "acceptance and oracle suites");
  add_options(ver, kSampling, c, raw);
  ver->add_option("--suite", c.suite, "paper (A1-A11), oracle or all")->capture_default_str();
  ver->add_option("--criterion", c.criterion, "run one criterion, e.g. A5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cout, err);
    return code == 0 ? 0 : 2;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    c.anchor_value = raw.anchor_value;
    c.override_value = raw.override_value;
    if (!raw.m_single.empty()) c.m_grid = raw.m_single;
    if (!raw.trials.empty()) c.trials = to_count(raw.trials, "trials");
    if (!raw.m_max.empty()) c.m_max = to_count(raw.m_max, "m-max");
    std::string seed = raw.seed;
    if (seed.empty()) {
      const char* env = std::getenv("LEBNN_SEED");
      if (env != nullptr && *env != '\0') seed = env;
    }
    if (!seed.empty()) c.seed = to_count(seed, "seed");
    return run_experiment(c, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedOperation& e) {
    err << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace lebnn
