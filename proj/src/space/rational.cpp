#include "lebnn/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "lebnn/errors.hpp"
#include "lebnn/widefloat.hpp"

namespace lebnn {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpq_class pow10_q(long exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  return exponent >= 0 ? mpq_class(p) : mpq_class(mpz_class(1), p);
}

mpq_class parse_decimal(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  long exponent = 0;
  const auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    std::string e = s.substr(epos + 1);
    s = s.substr(0, epos);
    bool eneg = false;
    if (!e.empty() && (e[0] == '-' || e[0] == '+')) {
      eneg = e[0] == '-';
      e = e.substr(1);
    }
    if (!all_digits(e) || e.size() > 6) throw ConfigError("", "bad exponent in '" + text + "'");
    exponent = std::stol(e) * (eneg ? -1 : 1);
  }
  const auto dot = s.find('.');
  std::string digits = s;
  if (dot != std::string::npos) {
    const std::string frac = s.substr(dot + 1);
    digits = s.substr(0, dot) + frac;
    exponent -= static_cast<long>(frac.size());
  }
  if (!all_digits(digits)) throw ConfigError("", "not a number: '" + text + "'");
  mpq_class q(mpz_class(digits, 10));
  q *= pow10_q(exponent);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

}  // namespace

mpq_class parse_rational(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw ConfigError("", "empty number");
  const auto caret = text.find('^');
  if (caret != std::string::npos) {
    const std::string base = trim(text.substr(0, caret));
    std::string e = trim(text.substr(caret + 1));
    if (base != "2") throw ConfigError("", "only powers of 2 are supported: '" + text + "'");
    bool eneg = false;
    if (!e.empty() && (e[0] == '-' || e[0] == '+')) {
      eneg = e[0] == '-';
      e = e.substr(1);
    }
    if (!all_digits(e) || e.size() > 6) throw ConfigError("", "bad power: '" + text + "'");
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, std::stoul(e));
    return eneg ? mpq_class(mpz_class(1), p) : mpq_class(p);
  }
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const mpq_class num = parse_decimal(trim(text.substr(0, slash)));
    const mpq_class den = parse_decimal(trim(text.substr(slash + 1)));
    if (den == 0) throw ConfigError("", "zero denominator in '" + text + "'");
    mpq_class q = num / den;
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

mpq_class mpq_from_double(double value) {
  if (!std::isfinite(value)) throw std::domain_error("mpq_from_double: non-finite value");
  mpq_class q(value);
  q.canonicalize();
  return q;
}

std::pair<std::int64_t, std::int64_t> to_int64_fraction(const mpq_class& q) {
  if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) {
    throw std::overflow_error("rational does not fit in 64 bits");
  }
  return {q.get_num().get_si(), q.get_den().get_si()};
}

double to_double(const mpq_class& q) {
  // mpq_get_d truncates; round through a long double quotient of the
  // leading bits instead.
  if (q == 0) return 0.0;
  long num_exp = 0;
  long den_exp = 0;
  const double nd = mpz_get_d_2exp(&num_exp, q.get_num_mpz_t());
  const double dd = mpz_get_d_2exp(&den_exp, q.get_den_mpz_t());
  if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p() &&
      std::labs(q.get_num().get_si()) < (1L << 53) && q.get_den().get_si() < (1L << 53)) {
    return static_cast<double>(q.get_num().get_si()) / static_cast<double>(q.get_den().get_si());
  }
  return std::ldexp(nd / dd, static_cast<int>(num_exp - den_exp));
}

WideFloat to_wide(const mpq_class& q) {
  if (q < 0) throw std::domain_error("to_wide: negative rational");
  if (q == 0) return WideFloat();
  long num_exp = 0;
  long den_exp = 0;
  const double nd = mpz_get_d_2exp(&num_exp, q.get_num_mpz_t());
  const double dd = mpz_get_d_2exp(&den_exp, q.get_den_mpz_t());
  return WideFloat(nd / dd) * WideFloat::pow2(num_exp - den_exp);
}

}  // namespace lebnn
