#include "lebnn/errors.hpp"

#include <cstdio>

namespace lebnn {

namespace {

std::string config_message(const std::string& field, const std::string& message, int line) {
  std::string out;
  if (line > 0) {
    out += "line " + std::to_string(line) + ": ";
  }
  if (!field.empty()) {
    out += field + ": ";
  }
  return out + message;
}

std::string budget_message(double required, std::uint64_t budget) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "enumeration needs %.3g configurations, budget is %llu", required,
                static_cast<unsigned long long>(budget));
  return buf;
}

}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& message, int line)
    : std::runtime_error(config_message(field, message, line)), field_(field), line_(line) {}

BudgetExceeded::BudgetExceeded(double required, std::uint64_t budget)
    : std::runtime_error(budget_message(required, budget)), required_(required), budget_(budget) {}

}  // namespace lebnn
