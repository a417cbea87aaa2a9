#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

#include "lebnn/errors.hpp"
#include "lebnn/lebesgue.hpp"
#include "lebnn/rational.hpp"

namespace lebnn {

namespace {

// Beyond any representable m.
constexpr std::uint64_t kMaxM = std::uint64_t{1} << 62;

struct Fraction {
  unsigned p = 0;
  unsigned q = 0;
};

std::optional<Fraction> rational_alpha(double alpha) {
  for (unsigned q = 2; q <= 64; ++q) {
    const double p = alpha * q;
    if (p == std::floor(p)) return Fraction{static_cast<unsigned>(p), q};
  }
  return std::nullopt;
}

mpq_class power(const mpq_class& base, unsigned k) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), k);
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

// Closed-ball deviation and mass per table row, cumulative, in rationals.
struct ExactRows {
  std::vector<mpq_class> dev;
  std::vector<mpq_class> mass;
};

std::optional<ExactRows> exact_rows(const MetricMeasureSpace& space, const ScalarField& field,
                                    const SphereTable& table) {
  const auto* atomic = dynamic_cast<const AtomicSpace*>(&space);
  if (atomic == nullptr || !atomic->has_exact_probabilities()) return std::nullopt;
  const auto& atoms = space.atoms();
  const mpq_class anchor = mpq_from_double(field.anchor_value());
  ExactRows out;
  mpq_class dev = 0, mass = 0;
  for (const auto& row : table.rows()) {
    for (std::size_t i : row.members) {
      mass += *atoms[i].exact;
      dev += *atoms[i].exact * abs(mpq_from_double(field.evaluate(atoms[i].point)) - anchor);
    }
    out.dev.push_back(dev);
    out.mass.push_back(mass);
  }
  return out;
}

// m M >= 1 for the closed-ball values of row k.
class Predicate {
 public:
  Predicate(std::optional<ExactRows> exact, std::optional<Fraction> frac,
            std::vector<WideFloat> values)
      : exact_(std::move(exact)), frac_(frac), values_(std::move(values)) {}

  bool is_exact() const { return exact_.has_value() && frac_.has_value(); }
  const WideFloat& value(std::size_t k) const { return values_[k]; }

  bool reaches(std::uint64_t m, std::size_t k) const {
    if (is_exact()) return compare(m, k) >= 0;
    return WideFloat(static_cast<double>(m)) * values_[k] >= WideFloat::one();
  }
  bool at_most(std::uint64_t m, std::size_t k) const {
    if (is_exact()) return compare(m, k) <= 0;
    return WideFloat(static_cast<double>(m)) * values_[k] <= WideFloat::one();
  }

  // Smallest m >= 1 with reaches(m, k); kMaxM when there is none below it.
  std::uint64_t first(std::size_t k) const {
    if (values_[k].is_zero()) return kMaxM;
    const long double inv = (WideFloat::one() / values_[k]).to_long_double();
    if (!(inv < static_cast<long double>(kMaxM))) return kMaxM;
    std::uint64_t m = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(inv)));
    while (m > 1 && reaches(m - 1, k)) --m;
    while (!reaches(m, k)) {
      if (++m >= kMaxM) return kMaxM;
    }
    return m;
  }

 private:
  int compare(std::uint64_t m, std::size_t k) const {
    const auto [p, q] = *frac_;
    mpz_class mq;
    mpz_class mm;
    mpz_import(mm.get_mpz_t(), 1, 1, sizeof(m), 0, 0, &m);
    mpz_pow_ui(mq.get_mpz_t(), mm.get_mpz_t(), q);
    const mpq_class lhs = mpq_class(mq) * power(exact_->dev[k], p) * power(exact_->mass[k], q - p);
    return cmp(lhs, mpq_class(1));
  }

  std::optional<ExactRows> exact_;
  std::optional<Fraction> frac_;
  std::vector<WideFloat> values_;
};

Predicate make_predicate(const MetricMeasureSpace& space, const ScalarField& field,
                         const SphereTable& table, double alpha) {
  std::vector<WideFloat> values;
  WideFloat dev;
  for (std::size_t k = 0; k < table.rows().size(); ++k) {
    dev += table.row_deviation(k, field, field.anchor_value());
    values.push_back(pow(dev, alpha) * pow(table.rows()[k].closed, 1.0 - alpha));
  }
  return Predicate(exact_rows(space, field, table), rational_alpha(alpha), std::move(values));
}

std::vector<std::uint64_t> interval_grid(std::uint64_t m_start, std::uint64_t m_max) {
  std::vector<std::uint64_t> grid;
  if (m_start > m_max) return grid;
  grid.push_back(m_start);
  for (std::uint64_t decade = 1; decade <= m_max / 10 + 1 && decade < kMaxM / 10; decade *= 10) {
    for (std::uint64_t f : {1, 2, 5}) {
      const std::uint64_t m = f * decade;
      if (m > m_start && m < m_max) grid.push_back(m);
    }
  }
  if (m_max > m_start) grid.push_back(m_max);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

AlphaSequence atomic_sequence(const MetricMeasureSpace& space, const ScalarField& field,
                              const Point& x, double alpha, std::uint64_t m_max) {
  AlphaSequence seq;
  seq.alpha = alpha;
  seq.m_max = m_max;
  const SphereTable table = sphere_table(space, x);
  const auto& rows = table.rows();
  if (rows.front().radius == Distance::exact(0)) {
    seq.trivial = Triviality::atom_at_anchor;
    return seq;
  }
  if (table.row_deviation(0, field, field.anchor_value()).is_zero()) {
    seq.trivial = Triviality::vanishing_integral;
    return seq;
  }
  const Predicate pred = make_predicate(space, field, table, alpha);
  seq.exact = pred.is_exact();
  const std::size_t last = rows.size() - 1;
  seq.m_start = pred.first(last);
  for (std::size_t k = rows.size(); k-- > 0;) {
    const std::uint64_t lo = std::max(seq.m_start, pred.first(k));
    std::uint64_t hi = k > 0 ? pred.first(k - 1) - 1 : m_max;
    hi = std::min(hi, m_max);
    if (lo <= hi) {
      seq.segments.push_back(
          {lo, hi, rows[k].radius, pred.value(k), k > 0 ? pred.value(k - 1) : WideFloat::zero()});
    }
    if (hi >= m_max || lo > m_max) break;
  }
  return seq;
}

AlphaSequence interval_sequence(const MetricMeasureSpace& space, const ScalarField& field,
                                const Point& x, double alpha, std::uint64_t m_max) {
  AlphaSequence seq;
  seq.alpha = alpha;
  seq.m_max = m_max;
  const auto [lo_dom, hi_dom] = *space.interval();
  const double reach = std::max(x.coord - lo_dom, hi_dom - x.coord);
  auto M = [&](double r) { return m_alpha(space, field, x, alpha, Distance::real(r)); };
  const WideFloat full = M(reach);
  if (full.is_zero()) {
    seq.trivial = Triviality::vanishing_integral;
    return seq;
  }
  auto reaches = [](std::uint64_t m, const WideFloat& v) {
    return WideFloat(static_cast<double>(m)) * v >= WideFloat::one();
  };
  std::uint64_t m1 =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(
                                     std::ceil((WideFloat::one() / full).to_long_double())));
  while (m1 > 1 && reaches(m1 - 1, full)) --m1;
  while (!reaches(m1, full)) ++m1;
  seq.m_start = m1;
  for (std::uint64_t m : interval_grid(m1, m_max)) {
    double lo = 0.0, hi = reach;
    for (int it = 0; it < 400 && hi - lo > 1e-12 * std::min(hi, 1.0); ++it) {
      const double mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;
      (reaches(m, M(mid)) ? hi : lo) = mid;
    }
    seq.segments.push_back({m, m, Distance::real(hi), M(hi), M(lo)});
  }
  return seq;
}

}  // namespace

std::string to_string(Triviality t) {
  switch (t) {
    case Triviality::none:
      return "none";
    case Triviality::atom_at_anchor:
      return "atom_at_anchor";
    case Triviality::vanishing_integral:
      return "vanishing_integral";
  }
  return "none";
}

std::optional<AlphaSegment> AlphaSequence::at(std::uint64_t m) const {
  for (const auto& s : segments) {
    if (s.m_lo <= m && m <= s.m_hi) return s;
  }
  return std::nullopt;
}

std::vector<Distance> AlphaSequence::radii() const {
  std::vector<Distance> out;
  for (const auto& s : segments) {
    if (out.empty() || s.radius < out.back()) out.push_back(s.radius);
  }
  return out;
}

AlphaSequence alpha_sequence(const MetricMeasureSpace& space, const ScalarField& field,
                             const Point& x, double alpha, std::uint64_t m_max) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (m_max == 0 || m_max >= kMaxM) throw std::invalid_argument("m_max out of range");
  if (space.is_atomic()) return atomic_sequence(space, field, x, alpha, m_max);
  if (space.interval()) return interval_sequence(space, field, x, alpha, m_max);
  throw UnsupportedOperation("alpha_sequence needs an atomic or interval space");
}

AlphaInequalityReport check_alpha_inequalities(const MetricMeasureSpace& space,
                                               const ScalarField& field, const Point& x,
                                               const AlphaSequence& seq) {
  AlphaInequalityReport report;
  if (seq.trivial != Triviality::none) return report;
  if (!space.is_atomic()) {
    for (const auto& s : seq.segments) {
      report.checked += s.m_hi - s.m_lo + 1;
      if (WideFloat(static_cast<double>(s.m_lo)) * s.closed_value < WideFloat::one()) {
        ++report.m1_failures;
      }
      if (WideFloat(static_cast<double>(s.m_hi)) * s.open_value > WideFloat::one()) {
        ++report.m2_failures;
      }
    }
    return report;
  }
  const SphereTable table = sphere_table(space, x);
  const Predicate pred = make_predicate(space, field, table, seq.alpha);
  report.exact = pred.is_exact();
  for (const auto& s : seq.segments) {
    const auto k = table.find(s.radius);
    if (!k) throw std::logic_error("alpha sequence radius is not a table radius");
    report.checked += s.m_hi - s.m_lo + 1;
    // Both sides are monotone in m, so the segment ends are the binding cases.
    if (!pred.reaches(s.m_lo, *k)) ++report.m1_failures;
    if (*k > 0 && !pred.at_most(s.m_hi, *k - 1)) ++report.m2_failures;
  }
  return report;
}

}  // namespace lebnn
