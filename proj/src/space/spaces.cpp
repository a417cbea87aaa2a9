#include "lebnn/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "lebnn/errors.hpp"
#include "lebnn/rational.hpp"

namespace lebnn {

namespace {

constexpr int kMaxExactHarmonic = 14;

WideFloat harmonic_normalizer(int n) {
  if (n < 2 || n > 62) throw std::invalid_argument("signed_harmonic: N must be in 2..62");
  WideFloat r;
  for (int k = n; k >= 1; --k) r += WideFloat::pow2(-(std::int64_t{1} << k));
  return r;
}

mpq_class exact_pow2_neg(std::int64_t e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return mpq_class(mpz_class(1), p);
}

std::vector<Atom> harmonic_atoms(int n, const WideFloat& normalizer) {
  const bool exact = n <= kMaxExactHarmonic;
  mpq_class exact_r = 0;
  if (exact) {
    for (int k = 1; k <= n; ++k) exact_r += exact_pow2_neg(std::int64_t{1} << k);
  }
  std::vector<Atom> atoms;
  atoms.push_back({Point{0, 0.0}, WideFloat(), exact ? std::optional<mpq_class>(0) : std::nullopt});
  for (int k = 1; k <= n; ++k) {
    const WideFloat t = WideFloat::pow2(-(std::int64_t{1} << k)) / normalizer;
    const double inv = 1.0 / k;
    Atom pos{Point{k, inv}, t * inv, std::nullopt};
    Atom neg{Point{-k, -inv}, k == 1 ? WideFloat() : t * (static_cast<double>(k - 1) / k),
             std::nullopt};
    if (exact) {
      const mpq_class te = exact_pow2_neg(std::int64_t{1} << k) / exact_r;
      pos.exact = mpq_class(te / k);
      neg.exact = mpq_class(te * (k - 1) / k);
      pos.exact->canonicalize();
      neg.exact->canonicalize();
    }
    atoms.push_back(std::move(pos));
    atoms.push_back(std::move(neg));
  }
  return atoms;
}

// Signed rational position of a harmonic label: sign / |label|.
std::pair<std::int64_t, std::int64_t> harmonic_position(std::int64_t label) {
  if (label == 0) return {0, 1};
  return {label > 0 ? 1 : -1, std::llabs(label)};
}

Distance exact_distance(const mpq_class& a, const mpq_class& b) {
  mpq_class d = a - b;
  if (d < 0) d = -d;
  const auto [num, den] = to_int64_fraction(d);
  return Distance::exact(num, den);
}

std::vector<Atom> finite_atoms(const std::vector<mpq_class>& probs,
                               const std::vector<double>& coords) {
  if (probs.empty()) throw ConfigError("probs", "finite space needs at least one atom");
  mpq_class total = 0;
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < 0) throw ConfigError("probs", "negative probability at atom " + std::to_string(i));
    total += probs[i];
    atoms.push_back({Point{static_cast<std::int64_t>(i), coords[i]}, to_wide(probs[i]), probs[i]});
  }
  if (total != 1) throw ConfigError("probs", "probabilities sum to " + total.get_str() + ", not 1");
  return atoms;
}

}  // namespace

SignedHarmonicSpace::SignedHarmonicSpace(int max_index)
    : SignedHarmonicSpace(max_index, harmonic_normalizer(max_index)) {}

SignedHarmonicSpace::SignedHarmonicSpace(int max_index, WideFloat normalizer)
    : AtomicSpace(harmonic_atoms(max_index, normalizer)), n_(max_index), normalizer_(normalizer) {}

std::string SignedHarmonicSpace::name() const { return "signed_harmonic:N=" + std::to_string(n_); }

Point SignedHarmonicSpace::atom(std::int64_t label) {
  if (label == 0) return Point{0, 0.0};
  const double inv = 1.0 / static_cast<double>(std::llabs(label));
  return Point{label, label > 0 ? inv : -inv};
}

Distance SignedHarmonicSpace::distance(const Point& p, const Point& q) const {
  if (std::llabs(p.label) > n_ || std::llabs(q.label) > n_) {
    throw std::out_of_range("label outside signed_harmonic:N=" + std::to_string(n_));
  }
  const auto [s1, n1] = harmonic_position(p.label);
  const auto [s2, n2] = harmonic_position(q.label);
  return Distance::exact(std::llabs(s1 * n2 - s2 * n1), n1 * n2);
}

WideFloat SignedHarmonicSpace::truncation_bound() const {
  if (n_ >= 62) return WideFloat();
  return WideFloat::pow2(-(std::int64_t{1} << (n_ + 1))) / normalizer_;
}

std::shared_ptr<FiniteAtomicSpace> FiniteAtomicSpace::on_line(
    const std::vector<mpq_class>& probs, const std::vector<mpq_class>& positions) {
  if (positions.size() != probs.size()) {
    throw ConfigError("positions", "expected " + std::to_string(probs.size()) + " positions");
  }
  std::vector<double> coords;
  std::vector<std::vector<Distance>> table(probs.size(), std::vector<Distance>(probs.size()));
  for (std::size_t i = 0; i < probs.size(); ++i) {
    coords.push_back(to_double(positions[i]));
    for (std::size_t j = 0; j < probs.size(); ++j) {
      if (i != j && positions[i] == positions[j]) {
        throw ConfigError("positions", "atoms " + std::to_string(i) + " and " + std::to_string(j) +
                                           " share a position");
      }
      table[i][j] = exact_distance(positions[i], positions[j]);
    }
  }
  return std::shared_ptr<FiniteAtomicSpace>(
      new FiniteAtomicSpace(finite_atoms(probs, coords), std::move(table)));
}

std::shared_ptr<FiniteAtomicSpace> FiniteAtomicSpace::with_table(
    const std::vector<mpq_class>& probs, const std::vector<std::vector<mpq_class>>& raw) {
  const std::size_t n = probs.size();
  if (raw.size() != n) throw ConfigError("distances", "expected " + std::to_string(n) + " rows");
  std::vector<std::vector<Distance>> table(n, std::vector<Distance>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i].size() != n) {
      throw ConfigError("distances", "row " + std::to_string(i) + " needs " + std::to_string(n) +
                                         " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (raw[i][j] < 0) throw ConfigError("distances", "negative distance");
      if (raw[i][j] != raw[j][i]) throw ConfigError("distances", "table is not symmetric");
      if ((i == j) != (raw[i][j] == 0)) {
        throw ConfigError("distances", "zero distance exactly on the diagonal required");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (raw[i][k] > raw[i][j] + raw[j][k]) {
          throw ConfigError("distances", "triangle inequality fails for (" + std::to_string(i) +
                                             "," + std::to_string(j) + "," + std::to_string(k) + ")");
        }
      }
      const auto [num, den] = to_int64_fraction(raw[i][j]);
      table[i][j] = Distance::exact(num, den);
    }
  }
  std::vector<double> coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back(static_cast<double>(i));
  return std::shared_ptr<FiniteAtomicSpace>(
      new FiniteAtomicSpace(finite_atoms(probs, coords), std::move(table)));
}

FiniteAtomicSpace::FiniteAtomicSpace(std::vector<Atom> atoms,
                                     std::vector<std::vector<Distance>> table)
    : AtomicSpace(std::move(atoms)), table_(std::move(table)) {}

Distance FiniteAtomicSpace::distance(const Point& p, const Point& q) const {
  const auto n = static_cast<std::int64_t>(table_.size());
  if (p.label < 0 || p.label >= n || q.label < 0 || q.label >= n) {
    throw std::out_of_range("label outside finite_atomic space");
  }
  return table_[static_cast<std::size_t>(p.label)][static_cast<std::size_t>(q.label)];
}

std::shared_ptr<FiniteAtomicSpace> random_finite_space(Rng& rng, std::size_t atoms, int grid,
                                                       bool anchor_mass) {
  if (atoms < 2 || static_cast<std::size_t>(2 * grid) < atoms - 1) {
    throw std::invalid_argument("random_finite_space: need 2 <= atoms <= 2*grid + 1");
  }
  std::vector<mpq_class> positions{0};
  while (positions.size() < atoms) {
    const auto v = static_cast<long>(uniform_index(rng, 2 * grid + 1)) - grid;
    bool fresh = true;
    for (const auto& p : positions) fresh = fresh && p != v;
    if (fresh) positions.emplace_back(v);
  }
  std::vector<long> weights;
  long total = 0;
  for (std::size_t i = 0; i < atoms; ++i) {
    const long w = (i == 0 && !anchor_mass) ? 0 : 1 + static_cast<long>(uniform_index(rng, 9));
    weights.push_back(w);
    total += w;
  }
  std::vector<mpq_class> probs;
  for (long w : weights) probs.emplace_back(w, total);
  for (auto& p : probs) p.canonicalize();
  return FiniteAtomicSpace::on_line(probs, positions);
}

RestrictedAtomicSpace::RestrictedAtomicSpace(SpacePtr base, std::vector<Atom> atoms,
                                             std::string name)
    : AtomicSpace(std::move(atoms)), base_(std::move(base)), name_(std::move(name)) {}

Distance RestrictedAtomicSpace::distance(const Point& p, const Point& q) const {
  return base_->distance(p, q);
}

UniformIntervalSpace::UniformIntervalSpace(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("interval space needs finite lo < hi");
  }
}

std::string UniformIntervalSpace::name() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "unit_interval:lo=%.17g,hi=%.17g", lo_, hi_);
  return buf;
}

Distance UniformIntervalSpace::distance(const Point& p, const Point& q) const {
  return Distance::real(std::fabs(p.coord - q.coord));
}

Point UniformIntervalSpace::sample(Rng& rng) const {
  return Point{0, lo_ + (hi_ - lo_) * uniform01(rng)};
}

WideFloat UniformIntervalSpace::measure_open_ball(const Point& x, const Distance& r) const {
  if (r.is_infinite()) return WideFloat::one();
  const double rr = r.to_double();
  const double a = std::max(lo_, x.coord - rr);
  const double b = std::min(hi_, x.coord + rr);
  if (!(b > a)) return WideFloat();
  return WideFloat(std::min(1.0, (b - a) / (hi_ - lo_)));
}

WideFloat UniformIntervalSpace::measure_sphere(const Point&, const Distance&) const {
  return WideFloat();
}

DyadicIntervalSpace::DyadicIntervalSpace(int depth) : UniformIntervalSpace(0.0, 1.0), depth_(depth) {
  if (depth < 2 || depth > 4) throw std::invalid_argument("dyadic: D must be in 2..4");
}

std::string DyadicIntervalSpace::name() const { return "dyadic:D=" + std::to_string(depth_); }

std::vector<double> DyadicIntervalSpace::thresholds() const {
  std::vector<double> out;
  for (int n = 1; n <= 2 * depth_ + 2; ++n) out.push_back(dyadic_theta(n));
  return out;
}

}  // namespace lebnn
