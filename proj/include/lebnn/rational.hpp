#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace lebnn {

class WideFloat;

// Parses "p/q", a decimal such as "0.2" or "-1.5e-3", or "2^-k" exactly.
mpq_class parse_rational(const std::string& text);

// Exact value of a finite double.
mpq_class mpq_from_double(double value);

// Numerator/denominator as int64, throwing std::overflow_error if either does
// not fit.
std::pair<std::int64_t, std::int64_t> to_int64_fraction(const mpq_class& q);

double to_double(const mpq_class& q);
WideFloat to_wide(const mpq_class& q);

}  // namespace lebnn
