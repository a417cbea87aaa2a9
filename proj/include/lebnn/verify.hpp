#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lebnn {

struct VerifyOptions {
  std::uint64_t seed = 42;
  unsigned workers = 1;
  // Trials for the sampling legs that have no fixed size of their own.
  std::size_t oracle_mc_trials = 1000000;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
};

// A1..A11; A11 compares in-process CSV renderings across worker counts.
std::vector<CriterionResult> run_acceptance_suite(const VerifyOptions& options);
std::vector<std::string> acceptance_criteria();
CriterionResult run_acceptance_criterion(const std::string& id, const VerifyOptions& options);

// Oracle/engine equivalence, sphere law and oracle/Monte Carlo agreement.
std::vector<CriterionResult> run_oracle_suite(const VerifyOptions& options);

}  // namespace lebnn
