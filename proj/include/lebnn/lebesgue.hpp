#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lebnn/field.hpp"
#include "lebnn/nn.hpp"
#include "lebnn/space.hpp"
#include "lebnn/tiebreak.hpp"
#include "lebnn/widefloat.hpp"

namespace lebnn {

enum class Ball { open, closed };

// E[1_B(X) |eta(X) - anchor|] for atomic spaces and interval spaces whose
// field carries an integral.
WideFloat ball_deviation(const MetricMeasureSpace& space, const ScalarField& field,
                         const Point& x, const Distance& r, Ball ball);
WideFloat ball_mass(const MetricMeasureSpace& space, const Point& x, const Distance& r, Ball ball);

// E[1_B |eta - anchor|] / P(B); UndefinedRatio on a null ball.
double lebesgue_ratio(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                      const Distance& r, Ball ball);

// The same ratio in rationals; nullopt unless the space is atomic with exact
// probabilities.
std::optional<mpq_class> exact_lebesgue_ratio(const MetricMeasureSpace& space,
                                              const ScalarField& field, const Point& x,
                                              const Distance& r, Ball ball);

// M_alpha(r) = E[1_B |eta - anchor|]^alpha P(B)^(1-alpha).
WideFloat m_alpha(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                  double alpha, const Distance& r, Ball ball = Ball::closed);

enum class Triviality { none, atom_at_anchor, vanishing_integral };
std::string to_string(Triviality t);

// Consecutive m sharing the radius r_m.
struct AlphaSegment {
  std::uint64_t m_lo = 0;
  std::uint64_t m_hi = 0;
  Distance radius;
  WideFloat closed_value;  // M_alpha(r) over the closed ball
  WideFloat open_value;    // the same over the open ball
};

struct AlphaSequence {
  double alpha = 0.5;
  std::uint64_t m_start = 0;
  std::uint64_t m_max = 0;
  Triviality trivial = Triviality::none;
  // Segment boundaries decided in rational arithmetic.
  bool exact = false;
  std::vector<AlphaSegment> segments;

  // Segment holding m; nullopt outside the stored range.
  std::optional<AlphaSegment> at(std::uint64_t m) const;
  // Distinct radii, decreasing.
  std::vector<Distance> radii() const;
};

// Atomic spaces: every m in [m_start, m_max] is covered by the segments.
// Interval spaces: r_m by bisection at m_start and a 1-2-5 grid up to m_max,
// one segment per grid point, with closed_value taken at the returned radius
// and open_value just below it.
AlphaSequence alpha_sequence(const MetricMeasureSpace& space, const ScalarField& field,
                             const Point& x, double alpha, std::uint64_t m_max);

struct AlphaInequalityReport {
  std::uint64_t checked = 0;  // number of m values
  bool exact = false;
  std::uint64_t m1_failures = 0;
  std::uint64_t m2_failures = 0;
  bool holds() const { return m1_failures == 0 && m2_failures == 0; }
};
// m M(r_m) >= 1 over the closed ball and m M(r_m) <= 1 over the open ball,
// for every stored m. Atomic spaces with exact probabilities and rational
// alpha = p/q compare m^q D^p P^(q-p) with 1 in rational arithmetic.
AlphaInequalityReport check_alpha_inequalities(const MetricMeasureSpace& space,
                                               const ScalarField& field, const Point& x,
                                               const AlphaSequence& seq);

struct ProbeRatio {
  Distance radius;
  std::uint64_t m = 0;  // tie-bias rows only
  WideFloat value;
  bool infinite = false;
  double stderr_ = 0.0;
};

struct ConditionReport {
  std::string kind;  // "measure_continuity" or "tie_bias"
  WideFloat constant;
  bool infinite = false;
  std::vector<Distance> witness;
  std::vector<ProbeRatio> probes;
  bool holds = true;
  bool estimated = false;  // Monte Carlo fallback
};

// sup P(S_r) / P(B_r) over probe radii below R. Atomic spaces probe every
// table radius below R (R defaults to the largest one) and ignore probes.
ConditionReport check_measure_continuity(const MetricMeasureSpace& space, const Point& x,
                                         std::optional<Distance> R = std::nullopt,
                                         const std::vector<Distance>& probes = {});

// sup over spheres and m of E[|eta(NN) - anchor| | NN on S_r] /
// E[|eta(X) - anchor| | X on S_r]. Rules without a closed form are estimated
// by Monte Carlo using options.
ConditionReport check_tie_bias(const MetricMeasureSpace& space, const ScalarField& field,
                               const Point& x, const TieBreakRule& rule,
                               const std::vector<std::uint64_t>& ms,
                               const McOptions& options = {});

enum class ValueMethod { ratio, nn };

struct ValueParams {
  RulePtr rule;                           // nn method; lexicographic when null
  std::vector<std::uint64_t> m_grid;      // nn method
  std::vector<Distance> probes;           // ratio method, interval spaces
  McOptions options;
  std::size_t tail = 3;
  double tolerance = 1e-2;
};

struct ValueDiagnostic {
  Distance radius;       // ratio method
  std::uint64_t m = 0;   // nn method
  double value = 0.0;
  double stderr_ = 0.0;
};

struct LebesgueValue {
  double l_hat = 0.0;
  double stderr_ = 0.0;
  std::vector<ValueDiagnostic> diagnostics;
  double tail_spread = 0.0;
  bool converged = false;
};

// ratio: E[eta(X) | X in closed B_r] down to the smallest probe.
// nn: E[eta(NN)] over the m grid, exact when available.
LebesgueValue lebesgue_value_estimate(const MetricMeasureSpace& space, const ScalarField& field,
                                      const Point& x, ValueMethod method,
                                      const ValueParams& params);

struct AlongRow {
  Distance radius;
  double closed = 0.0;
  double open = 0.0;
  bool open_defined = true;
};

struct AlongReport {
  std::vector<AlongRow> rows;
  bool tail_nonincreasing = false;
  double tail_max = 0.0;
  // Numerical proxy: the last `tail` closed ratios are non-increasing and
  // below tolerance.
  bool lebesgue = false;
};

AlongReport along_sequence_check(const MetricMeasureSpace& space, const ScalarField& field,
                                 const Point& x, const std::vector<Distance>& radii,
                                 std::size_t tail = 3, double tolerance = 1e-2);

// Default probes for an interval space around x: the dyadic thresholds for
// dyadic spaces, else 2^-k for k = 1..40.
std::vector<Distance> default_interval_probes(const MetricMeasureSpace& space);

}  // namespace lebnn
