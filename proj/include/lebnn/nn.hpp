#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lebnn/field.hpp"
#include "lebnn/space.hpp"
#include "lebnn/tiebreak.hpp"
#include "lebnn/widefloat.hpp"

namespace lebnn {

struct NnChoice {
  std::size_t index = 0;  // 1-based position in the sample
  Point point;
  Distance distance;
};

// Nearest neighbor of x in samples; ties resolved by rule with the tie stream.
NnChoice select_nn(const MetricMeasureSpace& space, const Point& x,
                   const std::vector<Point>& samples, const TieBreakRule& rule, Rng& ties);

// Streaming nearest neighbor keeping the first minimizer.
struct OnlineNNState {
  Distance best = Distance::infinity();
  double value = 0.0;
  std::size_t count = 0;
  std::size_t best_index = 0;  // 1-based, 0 before the first sample
};

OnlineNNState online_nn_step(const OnlineNNState& state, const MetricMeasureSpace& space,
                             const Point& sample, const ScalarField& field, const Point& x);

struct McOptions {
  std::size_t trials = 100000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
};

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t trials = 0;
};

// Runs trial(i) for i in [0, trials) on `workers` threads; results by index.
std::vector<double> run_trials(std::size_t trials, unsigned workers,
                               const std::function<double(std::size_t)>& trial);

// Mean and standard error with compensated sums in index order.
McEstimate summarize(const std::vector<double>& values);

// Monte Carlo mean of g(NN) with m fresh samples per trial.
McEstimate mc_nn_statistic(const MetricMeasureSpace& space, const Point& x,
                           const TieBreakRule& rule, std::uint64_t m, const McOptions& options,
                           const std::function<double(const Point&, const Distance&)>& g);

// Monte Carlo E|eta(NN) - anchor| with m fresh samples per trial.
McEstimate mc_nn_error(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                       const TieBreakRule& rule, std::uint64_t m, const McOptions& options);

struct RadiusMass {
  Distance radius;
  WideFloat prob;
};

// P(NN distance = r) = (1 - P(B_r))^m - (1 - P(closed B_r))^m per table radius.
std::vector<RadiusMass> nn_distance_distribution(const MetricMeasureSpace& space, const Point& x,
                                                 std::uint64_t m);

struct AtomMass {
  std::size_t atom;  // index into space.atoms()
  WideFloat prob;
};

bool exact_supported(const MetricMeasureSpace& space, const TieBreakRule& rule);

// Law of the chosen NN atom. ISIMIN rules use the mu-conditional on each
// sphere; side-preference rules split each sphere into its two sides.
std::vector<AtomMass> nn_atom_distribution(const MetricMeasureSpace& space, const Point& x,
                                           const TieBreakRule& rule, std::uint64_t m);

struct SphereTerm {
  Distance radius;
  WideFloat sphere;
  WideFloat open;
  WideFloat closed;
  // P(NN on this sphere).
  WideFloat nn_prob;
  // E[1{NN on sphere} |eta(NN) - anchor|].
  WideFloat contribution;
  // E[|eta(NN) - anchor| | NN on sphere] and E[|eta(X) - anchor| | X on sphere].
  double rule_mean = 0.0;
  double mu_mean = 0.0;
};

struct ExactBreakdown {
  std::vector<SphereTerm> rows;
  WideFloat error;
};

ExactBreakdown exact_nn_breakdown(const MetricMeasureSpace& space, const ScalarField& field,
                                  const Point& x, const TieBreakRule& rule, std::uint64_t m);

// E|eta(NN) - anchor| exactly; UnsupportedOperation when neither the space
// is atomic nor the rule has a closed form.
double exact_nn_error(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                      const TieBreakRule& rule, std::uint64_t m);

// f_m(t) = m t (1-t)^(m-1).
double fm_value(std::uint64_t m, double t);

struct FmEnvelope {
  double t_max = 0.0;
  double f_max = 0.0;
  double a = 0.0;  // {f_m >= 1/e} = [a, b]
  double b = 0.0;
};

FmEnvelope fm_envelope(std::uint64_t m, double tolerance = 1e-14);

struct VsRow {
  Distance radius;
  std::uint64_t m = 0;
  WideFloat lhs;  // closed-ball Lebesgue ratio
  WideFloat rhs;  // error / (m P(closed B) (1 - P(closed B))^(m-1))
  bool skipped = false;
  bool holds = true;
  double margin = 0.0;  // rhs - lhs
};

struct VsReport {
  std::vector<VsRow> rows;
  bool all_hold = true;
};

VsReport vs_inequality_check(const MetricMeasureSpace& space, const ScalarField& field,
                             const Point& x, const TieBreakRule& rule,
                             const std::vector<Distance>& radii,
                             const std::vector<std::uint64_t>& ms);

// The three bounds on the interior, sphere and exterior parts of the error.
struct GeomIdeaRow {
  Distance radius;
  std::uint64_t m = 0;
  WideFloat interior, interior_bound;
  WideFloat sphere, sphere_bound;
  WideFloat exterior, exterior_bound;
  bool holds = true;
};

std::vector<GeomIdeaRow> geom_idea_check(const MetricMeasureSpace& space, const ScalarField& field,
                                         const Point& x, const TieBreakRule& rule,
                                         const std::vector<Distance>& radii,
                                         const std::vector<std::uint64_t>& ms);

enum class Method { exact, mc };

struct ConvergenceRow {
  std::uint64_t m = 0;
  double error = 0.0;
  double stderr_ = 0.0;
  Method method = Method::exact;
};

class ConvergenceCurve {
 public:
  // Rows must have strictly increasing m; exact rows carry stderr 0.
  void add(const ConvergenceRow& row);
  const std::vector<ConvergenceRow>& rows() const { return rows_; }
  std::map<std::string, std::string> metadata;

 private:
  std::vector<ConvergenceRow> rows_;
};

enum class Mode { automatic, exact, mc };

ConvergenceCurve nn_convergence(const MetricMeasureSpace& space, const ScalarField& field,
                                const Point& x, const TieBreakRule& rule,
                                const std::vector<std::uint64_t>& m_grid, Mode mode,
                                const McOptions& options);

std::string to_string(Method method);

}  // namespace lebnn
