#include "lebnn/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lebnn/errors.hpp"
#include "lebnn/spaces.hpp"

namespace lebnn {

WideFloat MetricMeasureSpace::measure_closed_ball(const Point& x, const Distance& r) const {
  return measure_open_ball(x, r) + measure_sphere(x, r);
}

const std::vector<Atom>& MetricMeasureSpace::atoms() const {
  throw UnsupportedOperation(name() + " is not atomic");
}

std::vector<Distance> MetricMeasureSpace::sphere_radii(const Point& x) const {
  const SphereTable table(*this, x);
  std::vector<Distance> out;
  out.reserve(table.rows().size());
  for (const auto& row : table.rows()) out.push_back(row.radius);
  return out;
}

double MetricMeasureSpace::sphere_conditional_mean(const Point& x, const Distance& r,
                                                   const ScalarField& field, double center) const {
  const SphereTable table(*this, x);
  const auto k = table.find(r);
  if (!k) throw UndefinedRatio("sphere of radius " + r.to_string() + " has zero mass");
  return (table.row_deviation(*k, field, center) / table.rows()[*k].sphere).to_double();
}

AtomicSpace::AtomicSpace(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("atomic space needs at least one atom");
  cumulative_.reserve(atoms_.size());
  double acc = 0.0;
  for (const auto& a : atoms_) {
    acc += a.prob.to_double();
    cumulative_.push_back(acc);
  }
  if (!(acc > 0.0)) throw std::invalid_argument("atomic space has no mass");
}

bool AtomicSpace::has_exact_probabilities() const {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.exact.has_value(); });
}

Point AtomicSpace::sample(Rng& rng) const {
  const double u = uniform01(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) {
    // u rounded onto the total: take the last atom with mass.
    std::size_t i = atoms_.size();
    while (i > 0 && atoms_[i - 1].prob.is_zero()) --i;
    return atoms_[i - 1].point;
  }
  return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].point;
}

WideFloat AtomicSpace::measure_open_ball(const Point& x, const Distance& r) const {
  return SphereTable(*this, x).open(r);
}

WideFloat AtomicSpace::measure_sphere(const Point& x, const Distance& r) const {
  return SphereTable(*this, x).sphere(r);
}

SphereTable::SphereTable(const MetricMeasureSpace& space, const Point& x) : space_(&space), x_(x) {
  if (!space.is_atomic()) throw UnsupportedOperation("sphere table needs an atomic space");
  const auto& atoms = space.atoms();
  std::vector<std::pair<Distance, std::size_t>> order;
  order.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!atoms[i].prob.is_zero()) order.emplace_back(space.distance(x, atoms[i].point), i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [d, i] : order) {
    if (rows_.empty() || rows_.back().radius != d) {
      SphereRow row;
      row.radius = d;
      rows_.push_back(std::move(row));
    }
    rows_.back().members.push_back(i);
  }
  WideFloat prefix;
  for (auto& row : rows_) {
    for (std::size_t i : row.members) row.sphere += atoms[i].prob;
    row.open = prefix;
    row.closed = row.open + row.sphere;
    prefix = row.closed;
  }
  WideFloat suffix;
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
    it->exterior = suffix;
    suffix += it->sphere;
  }
}

std::optional<std::size_t> SphereTable::find(const Distance& r) const {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), r,
                             [](const SphereRow& row, const Distance& d) { return row.radius < d; });
  if (it == rows_.end() || it->radius != r) return std::nullopt;
  return static_cast<std::size_t>(it - rows_.begin());
}

WideFloat SphereTable::open(const Distance& r) const {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), r,
                             [](const SphereRow& row, const Distance& d) { return row.radius < d; });
  if (it == rows_.begin()) return WideFloat();
  return std::prev(it)->closed;
}

WideFloat SphereTable::sphere(const Distance& r) const {
  const auto k = find(r);
  return k ? rows_[*k].sphere : WideFloat();
}

WideFloat SphereTable::closed(const Distance& r) const { return open(r) + sphere(r); }

MassSplit SphereTable::closed_split(const Distance& r) const {
  auto it = std::upper_bound(rows_.begin(), rows_.end(), r,
                             [](const Distance& d, const SphereRow& row) { return d < row.radius; });
  if (it == rows_.begin()) {
    WideFloat total;
    for (const auto& row : rows_) total += row.sphere;
    return {WideFloat(), total};
  }
  return std::prev(it)->closed_split();
}

WideFloat SphereTable::row_deviation(std::size_t k, const ScalarField& field, double center) const {
  const auto& atoms = space_->atoms();
  WideFloat sum;
  for (std::size_t i : rows_.at(k).members) {
    sum += atoms[i].prob * std::fabs(field.evaluate(atoms[i].point) - center);
  }
  return sum;
}

WideFloat SphereTable::ball_deviation(const Distance& r, bool closed, const ScalarField& field,
                                      double center) const {
  WideFloat sum;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const auto& radius = rows_[k].radius;
    if (radius < r || (closed && radius == r)) {
      sum += row_deviation(k, field, center);
    } else {
      break;
    }
  }
  return sum;
}

SphereTable sphere_table(const MetricMeasureSpace& space, const Point& x) {
  return SphereTable(space, x);
}

bool support_check(const MetricMeasureSpace& space, const Point& x,
                   const std::vector<Distance>& radii) {
  return std::all_of(radii.begin(), radii.end(), [&](const Distance& r) {
    return !space.measure_closed_ball(x, r).is_zero();
  });
}

SpacePtr normalize_to_ball(const SpacePtr& space, const Point& x, const Distance& radius) {
  if (!space) throw std::invalid_argument("normalize_to_ball: null space");
  if (radius.is_infinite()) return space;
  const WideFloat mass = space->measure_closed_ball(x, radius);
  if (mass.is_zero()) {
    throw std::domain_error("normalize_to_ball: closed ball of radius " + radius.to_string() +
                            " has zero mass");
  }
  if (space->is_atomic()) {
    const auto* atomic = dynamic_cast<const AtomicSpace*>(space.get());
    std::optional<mpq_class> exact_mass;
    if (atomic != nullptr && atomic->has_exact_probabilities()) {
      mpq_class m = 0;
      for (const auto& a : space->atoms()) {
        if (space->distance(x, a.point) <= radius) m += *a.exact;
      }
      exact_mass = m;
    }
    std::vector<Atom> kept;
    for (const auto& a : space->atoms()) {
      if (space->distance(x, a.point) > radius) continue;
      Atom b{a.point, a.prob / mass, std::nullopt};
      if (exact_mass) b.exact = mpq_class(*a.exact / *exact_mass);
      kept.push_back(std::move(b));
    }
    return std::make_shared<RestrictedAtomicSpace>(
        space, std::move(kept), space->name() + "|ball(" + radius.to_string() + ")");
  }
  if (const auto dom = space->interval()) {
    const double r = radius.to_double();
    const double lo = std::max(dom->first, x.coord - r);
    const double hi = std::min(dom->second, x.coord + r);
    return std::make_shared<UniformIntervalSpace>(lo, hi);
  }
  throw UnsupportedOperation("normalize_to_ball: unsupported space " + space->name());
}

}  // namespace lebnn
