#include "lebnn/distance.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lebnn/rational.hpp"

namespace lebnn {

Distance Distance::exact(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) {
    throw std::domain_error("exact distance needs num >= 0 and den > 0");
  }
  const std::int64_t g = std::gcd(num, den);
  Distance d;
  d.kind_ = Kind::exact;
  d.num_ = num / g;
  d.den_ = den / g;
  return d;
}

Distance Distance::real(double value) {
  if (!(value >= 0.0) || std::isinf(value)) {
    throw std::domain_error("real distance must be finite and non-negative");
  }
  Distance d;
  d.kind_ = Kind::real;
  d.real_ = value;
  return d;
}

Distance Distance::infinity() {
  Distance d;
  d.kind_ = Kind::infinite;
  return d;
}

double Distance::to_double() const {
  switch (kind_) {
    case Kind::exact:
      return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
    case Kind::real:
      return real_;
    case Kind::infinite:
      break;
  }
  return std::numeric_limits<double>::infinity();
}

mpq_class Distance::to_mpq() const {
  switch (kind_) {
    case Kind::exact: {
      mpq_class q;
      mpz_set_si(q.get_num_mpz_t(), num_);
      mpz_set_si(q.get_den_mpz_t(), den_);
      q.canonicalize();
      return q;
    }
    case Kind::real:
      return mpq_from_double(real_);
    case Kind::infinite:
      break;
  }
  throw std::domain_error("infinite distance has no rational value");
}

std::string Distance::to_string() const {
  switch (kind_) {
    case Kind::exact:
      return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    case Kind::real: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", real_);
      return buf;
    }
    case Kind::infinite:
      break;
  }
  return "inf";
}

std::partial_ordering operator<=>(const Distance& a, const Distance& b) {
  using K = Distance::Kind;
  if (a.kind_ == K::infinite || b.kind_ == K::infinite) {
    return (a.kind_ == K::infinite ? 1 : 0) <=> (b.kind_ == K::infinite ? 1 : 0);
  }
  if (a.kind_ == K::exact && b.kind_ == K::exact) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }
  if (a.kind_ == K::real && b.kind_ == K::real) {
    return a.real_ <=> b.real_;
  }
  const int c = cmp(a.to_mpq(), b.to_mpq());
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::string to_string(const Point& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%lld@%.17g", static_cast<long long>(p.label), p.coord);
  return buf;
}

}  // namespace lebnn
