#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lebnn/space.hpp"

namespace lebnn {

// Atoms +-1/n, n = 1..N, and 0 on the real line. Labels: +n for 1/n, -n for
// -1/n, 0 for the origin.
class SignedHarmonicSpace : public AtomicSpace {
 public:
  explicit SignedHarmonicSpace(int max_index = 8);

  std::string name() const override;
  Distance distance(const Point& p, const Point& q) const override;

  int max_index() const { return n_; }
  const WideFloat& normalizer() const { return normalizer_; }
  // 2^(-2^(N+1)) / R: mass of the first omitted sphere after truncation.
  WideFloat truncation_bound() const;

  static Point atom(std::int64_t label);

 private:
  SignedHarmonicSpace(int max_index, WideFloat normalizer);
  int n_;
  WideFloat normalizer_;
};

// Finite space with explicit probabilities. The metric is either a 1-D
// embedding (rational positions) or a validated symmetric distance table.
class FiniteAtomicSpace : public AtomicSpace {
 public:
  static std::shared_ptr<FiniteAtomicSpace> on_line(const std::vector<mpq_class>& probs,
                                                    const std::vector<mpq_class>& positions);
  static std::shared_ptr<FiniteAtomicSpace> with_table(
      const std::vector<mpq_class>& probs, const std::vector<std::vector<mpq_class>>& table);

  std::string name() const override { return "finite_atomic"; }
  Distance distance(const Point& p, const Point& q) const override;

  std::size_t size() const { return atoms().size(); }
  static Point atom(std::size_t index, double coord) {
    return Point{static_cast<std::int64_t>(index), coord};
  }

 private:
  FiniteAtomicSpace(std::vector<Atom> atoms, std::vector<std::vector<Distance>> table);
  std::vector<std::vector<Distance>> table_;
};

// Random instance on the integer line: atom 0 sits at position 0 (the usual
// anchor) with mass zero unless anchor_mass is set; the other atoms take
// distinct positions in [-grid, grid] and integer weights 1..9, so ties
// between +k and -k are common.
std::shared_ptr<FiniteAtomicSpace> random_finite_space(Rng& rng, std::size_t atoms, int grid,
                                                       bool anchor_mass);

// Atomic space whose metric is inherited from another space.
class RestrictedAtomicSpace : public AtomicSpace {
 public:
  RestrictedAtomicSpace(SpacePtr base, std::vector<Atom> atoms, std::string name);
  std::string name() const override { return name_; }
  Distance distance(const Point& p, const Point& q) const override;

 private:
  SpacePtr base_;
  std::string name_;
};

// Normalized Lebesgue measure on [lo, hi].
class UniformIntervalSpace : public MetricMeasureSpace {
 public:
  UniformIntervalSpace(double lo = 0.0, double hi = 1.0);

  std::string name() const override;
  Distance distance(const Point& p, const Point& q) const override;
  Point sample(Rng& rng) const override;
  WideFloat measure_open_ball(const Point& x, const Distance& r) const override;
  WideFloat measure_sphere(const Point& x, const Distance& r) const override;
  std::optional<std::pair<double, double>> interval() const override {
    return std::make_pair(lo_, hi_);
  }

 private:
  double lo_;
  double hi_;
};

// Lebesgue measure on [0,1] paired with the dyadic thresholds of depth D.
class DyadicIntervalSpace : public UniformIntervalSpace {
 public:
  explicit DyadicIntervalSpace(int depth = 3);
  std::string name() const override;
  int depth() const { return depth_; }
  // theta_1 .. theta_{2D+2}.
  std::vector<double> thresholds() const;
  ScalarField canonical_field() const { return ScalarField::dyadic(depth_); }

 private:
  int depth_;
};

}  // namespace lebnn
