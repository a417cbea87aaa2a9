#include <stdexcept>

#include "lebnn/nn.hpp"

namespace lebnn {

NnChoice select_nn(const MetricMeasureSpace& space, const Point& x,
                   const std::vector<Point>& samples, const TieBreakRule& rule, Rng& ties) {
  if (samples.empty()) throw std::invalid_argument("select_nn: empty sample");
  Distance best = Distance::infinity();
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Distance d = space.distance(x, samples[i]);
    if (d < best) {
      best = d;
      candidates.clear();
    }
    if (d == best) candidates.push_back({i + 1, samples[i]});
  }
  const std::size_t chosen = rule.choose(x, best, candidates, ties);
  return {chosen, samples[chosen - 1], best};
}

OnlineNNState online_nn_step(const OnlineNNState& state, const MetricMeasureSpace& space,
                             const Point& sample, const ScalarField& field, const Point& x) {
  OnlineNNState next = state;
  ++next.count;
  const Distance d = space.distance(x, sample);
  if (d < state.best) {
    next.best = d;
    next.value = field.evaluate(sample);
    next.best_index = next.count;
  }
  return next;
}

}  // namespace lebnn
