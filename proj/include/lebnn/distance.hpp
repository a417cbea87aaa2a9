#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace lebnn {

// Distance value. Atomic spaces use exact rationals so that sphere and ball
// boundaries never depend on floating-point rounding; interval spaces use
// doubles. Infinity is the initial state of the online NN scan.
class Distance {
 public:
  enum class Kind { exact, real, infinite };

  Distance() = default;
  static Distance exact(std::int64_t num, std::int64_t den = 1);
  static Distance real(double value);
  static Distance infinity();

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ == Kind::exact; }
  bool is_infinite() const { return kind_ == Kind::infinite; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const;
  mpq_class to_mpq() const;
  // "1/3", "2", "0.125" or "inf".
  std::string to_string() const;

  friend bool operator==(const Distance& a, const Distance& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }
  friend std::partial_ordering operator<=>(const Distance& a, const Distance& b);

 private:
  Kind kind_ = Kind::exact;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double real_ = 0.0;
};

// Point of a space. Atomic spaces identify points by label and carry the
// coordinate for display and side tests; interval spaces use the coordinate.
struct Point {
  std::int64_t label = 0;
  double coord = 0.0;

  friend bool operator==(const Point& a, const Point& b) {
    return a.label == b.label && a.coord == b.coord;
  }
};

std::string to_string(const Point& p);

}  // namespace lebnn
