#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lebnn {

// Operation not available for this space, rule or mode.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Ratio or conditional with a zero-mass denominator.
class UndefinedRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed space/field/rule specification or config file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message, int line = 0);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_ = 0;
};

// Oracle enumeration would exceed its configuration budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(double required, std::uint64_t budget);
  double required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  double required_;
  std::uint64_t budget_;
};

}  // namespace lebnn
