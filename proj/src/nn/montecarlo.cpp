#include <cmath>
#include <exception>
#include <thread>

#include "lebnn/nn.hpp"

namespace lebnn {

namespace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

std::vector<double> run_trials(std::size_t trials, unsigned workers,
                               const std::function<double(std::size_t)>& trial) {
  std::vector<double> out(trials, 0.0);
  if (workers <= 1 || trials < 2) {
    for (std::size_t i = 0; i < trials; ++i) out[i] = trial(i);
    return out;
  }
  const std::size_t k = std::min<std::size_t>(workers, trials);
  std::vector<std::exception_ptr> errors(k);
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (std::size_t w = 0; w < k; ++w) {
    const std::size_t lo = trials * w / k;
    const std::size_t hi = trials * (w + 1) / k;
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) out[i] = trial(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

McEstimate summarize(const std::vector<double>& values) {
  McEstimate est;
  est.trials = values.size();
  if (values.empty()) return est;
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  est.mean = sum.value() / static_cast<double>(values.size());
  if (values.size() > 1) {
    CompensatedSum sq;
    for (double v : values) sq.add((v - est.mean) * (v - est.mean));
    const double n = static_cast<double>(values.size());
    est.stderr_ = std::sqrt(sq.value() / (n - 1.0) / n);
  }
  return est;
}

McEstimate mc_nn_statistic(const MetricMeasureSpace& space, const Point& x,
                           const TieBreakRule& rule, std::uint64_t m, const McOptions& options,
                           const std::function<double(const Point&, const Distance&)>& g) {
  if (m == 0) throw std::invalid_argument("Monte Carlo NN: m must be >= 1");
  if (options.trials == 0) throw std::invalid_argument("Monte Carlo NN: trials must be >= 1");
  auto trial = [&](std::size_t i) {
    Rng samples = derive_rng(options.seed, i, Stream::samples);
    Rng ties = derive_rng(options.seed, i, Stream::ties);
    Distance best = Distance::infinity();
    std::vector<Candidate> candidates;
    for (std::uint64_t k = 1; k <= m; ++k) {
      const Point p = space.sample(samples);
      const Distance d = space.distance(x, p);
      if (d < best) {
        best = d;
        candidates.clear();
      }
      if (d == best) candidates.push_back({static_cast<std::size_t>(k), p});
    }
    const std::size_t chosen = rule.choose(x, best, candidates, ties);
    for (const auto& c : candidates) {
      if (c.index == chosen) return g(c.point, best);
    }
    throw std::logic_error("tie-break rule returned an index outside the candidates");
  };
  return summarize(run_trials(options.trials, options.workers, trial));
}

McEstimate mc_nn_error(const MetricMeasureSpace& space, const ScalarField& field, const Point& x,
                       const TieBreakRule& rule, std::uint64_t m, const McOptions& options) {
  const double anchor = field.anchor_value();
  return mc_nn_statistic(space, x, rule, m, options, [&](const Point& p, const Distance&) {
    return std::fabs(field.evaluate(p) - anchor);
  });
}

}  // namespace lebnn
