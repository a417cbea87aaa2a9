#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lebnn/distance.hpp"
#include "lebnn/space.hpp"

namespace lebnn {

// Everything a run depends on. Serialized into the CSV trailer except for
// `workers` and `out`, which do not change the numbers.
struct ExperimentConfig {
  std::string command;
  std::string space = "signed_harmonic:N=8";
  std::string field = "positive";
  std::string anchor = "0";
  std::optional<double> anchor_value;
  std::optional<double> override_value;
  std::string rule = "lex";
  std::string m_grid = "1:1e6:log";
  std::string radii = "table";
  std::string kind = "both";  // conditions: measure, tie or both
  std::string R;              // conditions: empty for the default
  std::string method = "ratio";
  std::string suite = "paper";
  std::string criterion;  // verify: a single criterion id
  std::string model;      // classify: preset replacing space and field
  std::string mode = "auto";
  double alpha = 0.5;
  std::uint64_t m_max = 1000000;
  std::size_t trials = 100000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::size_t tail = 3;
  double tolerance = 1e-2;
  std::string out = "-";
  bool assert_ = false;
};

// Trailer entries for a config, in a fixed order.
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config);

struct Rendered {
  std::string csv;
  // False when a verdict the command computes is negative.
  bool verdict = true;
  std::string diagnostic;
};

// Runs the command and renders its CSV. Throws ConfigError on bad input.
Rendered render_experiment(const ExperimentConfig& config);

// Writes the CSV to config.out. Exit status: 0, or 1 when --assert is set and
// the verdict is negative (verify always asserts).
int run_experiment(const ExperimentConfig& config, std::ostream& err);

// Parses arguments and runs; 2 on usage or configuration errors.
int run_cli(int argc, const char* const* argv, std::ostream& err);

// Grid syntax: "10", "1,10,100", "a:b" (every integer), "a:b:log" (1 and 3
// times powers of ten within [a, b]), "a:b:log:k" (k points per decade).
std::vector<std::uint64_t> parse_m_grid(const std::string& text);

// "table", "inv:a:b" (1/n), "pow2:a:b" (2^-k), "theta:odd|even|all", or a
// list of rationals. Returned in decreasing order.
std::vector<Distance> parse_radii(const std::string& text, const MetricMeasureSpace& space,
                                  const Point& x);

Distance parse_distance(const std::string& text, const MetricMeasureSpace& space);

}  // namespace lebnn
