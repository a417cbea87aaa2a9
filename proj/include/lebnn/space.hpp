#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lebnn/distance.hpp"
#include "lebnn/field.hpp"
#include "lebnn/rng.hpp"
#include "lebnn/widefloat.hpp"

namespace lebnn {

struct Atom {
  Point point;
  WideFloat prob;
  // Exact probability when the space was built from exact data.
  std::optional<mpq_class> exact;
};

class SphereTable;

// Metric space with a Borel probability measure.
class MetricMeasureSpace {
 public:
  virtual ~MetricMeasureSpace() = default;

  virtual std::string name() const = 0;
  virtual Distance distance(const Point& p, const Point& q) const = 0;
  virtual Point sample(Rng& rng) const = 0;

  virtual WideFloat measure_open_ball(const Point& x, const Distance& r) const = 0;
  virtual WideFloat measure_sphere(const Point& x, const Distance& r) const = 0;
  // open + sphere, evaluated as that sum.
  WideFloat measure_closed_ball(const Point& x, const Distance& r) const;

  virtual bool is_atomic() const { return false; }
  // Atoms with their probabilities, including zero-mass atoms. Atomic only.
  virtual const std::vector<Atom>& atoms() const;
  // Sorted radii with positive sphere mass. Atomic only.
  std::vector<Distance> sphere_radii(const Point& x) const;
  // E[|eta(X) - center| | X in S_r]. Atomic only; zero sphere mass throws
  // UndefinedRatio.
  double sphere_conditional_mean(const Point& x, const Distance& r, const ScalarField& field,
                                 double center) const;

  // Domain [lo, hi] for interval spaces with normalized Lebesgue measure.
  virtual std::optional<std::pair<double, double>> interval() const { return std::nullopt; }
};

using SpacePtr = std::shared_ptr<const MetricMeasureSpace>;

// Space given by a finite list of atoms. Measure queries sum atoms by exact
// distance comparison, so sphere/ball membership never involves rounding.
class AtomicSpace : public MetricMeasureSpace {
 public:
  explicit AtomicSpace(std::vector<Atom> atoms);

  bool is_atomic() const override { return true; }
  const std::vector<Atom>& atoms() const override { return atoms_; }
  Point sample(Rng& rng) const override;
  WideFloat measure_open_ball(const Point& x, const Distance& r) const override;
  WideFloat measure_sphere(const Point& x, const Distance& r) const override;

  // True when every atom carries an exact probability.
  bool has_exact_probabilities() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

struct SphereRow {
  Distance radius;
  WideFloat sphere;
  WideFloat open;
  WideFloat closed;
  // Mass outside the closed ball.
  WideFloat exterior;
  // Indices into atoms() of the positive-mass atoms on this sphere.
  std::vector<std::size_t> members;

  MassSplit open_split() const { return {open, sphere + exterior}; }
  MassSplit closed_split() const { return {closed, exterior}; }
};

// Sphere decomposition around x: one row per distinct distance carrying
// positive mass, radii strictly increasing. open(k+1) == closed(k) exactly.
class SphereTable {
 public:
  SphereTable(const MetricMeasureSpace& space, const Point& x);

  const std::vector<SphereRow>& rows() const { return rows_; }
  const Point& center() const { return x_; }
  const MetricMeasureSpace& space() const { return *space_; }
  std::optional<std::size_t> find(const Distance& r) const;

  WideFloat open(const Distance& r) const;
  WideFloat sphere(const Distance& r) const;
  WideFloat closed(const Distance& r) const;
  // {closed ball, its complement} at any radius, from the table sums.
  MassSplit closed_split(const Distance& r) const;

  // E[1_B(X) |eta(X) - center|] over the open or closed ball of radius r.
  WideFloat ball_deviation(const Distance& r, bool closed, const ScalarField& field,
                           double center) const;
  // E[1_{S_k}(X) |eta(X) - center|] for row k.
  WideFloat row_deviation(std::size_t k, const ScalarField& field, double center) const;

 private:
  const MetricMeasureSpace* space_;
  Point x_;
  std::vector<SphereRow> rows_;
};

SphereTable sphere_table(const MetricMeasureSpace& space, const Point& x);

// Probe-based support membership: measure_closed_ball(x, r) > 0 for all r.
bool support_check(const MetricMeasureSpace& space, const Point& x,
                   const std::vector<Distance>& radii);

// nu(A) = mu(A ∩ closed ball(x, R)) / mu(closed ball(x, R)).
SpacePtr normalize_to_ball(const SpacePtr& space, const Point& x, const Distance& radius);

}  // namespace lebnn
