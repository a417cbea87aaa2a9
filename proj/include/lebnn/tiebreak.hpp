#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lebnn/distance.hpp"
#include "lebnn/rng.hpp"

namespace lebnn {

// A sample at minimal distance: its 1-based position in the sample and value.
struct Candidate {
  std::size_t index;
  Point point;
};

// Rules that split a tie set into a preferred side and the rest. Within a
// side the smallest index wins; when both sides are present the preferred
// side wins with probability weight(r).
class SidePreference {
 public:
  virtual ~SidePreference() = default;
  virtual bool preferred(const Point& x, const Point& p) const = 0;
  virtual double weight(const Distance& r) const = 0;
  virtual mpq_class exact_weight(const Distance& r) const = 0;
};

class TieBreakRule {
 public:
  virtual ~TieBreakRule() = default;
  virtual std::string name() const = 0;
  // Independent selector of indices of minimum numbers: the choice depends
  // on the index set and the tie stream only.
  virtual bool is_isimin() const = 0;
  // Returns the index of one candidate. candidates is non-empty and all at
  // distance r from x.
  virtual std::size_t choose(const Point& x, const Distance& r,
                             const std::vector<Candidate>& candidates, Rng& ties) const = 0;
  // Exact law of choose: one probability per candidate, in input order.
  virtual std::vector<mpq_class> tie_distribution(const Point& x, const Distance& r,
                                                  const std::vector<Candidate>& candidates) const = 0;
  // Closed form used by the exact engine for non-ISIMIN rules; null if none.
  virtual const SidePreference* side_preference() const { return nullptr; }
};

using RulePtr = std::shared_ptr<const TieBreakRule>;

// Smallest index among the minimizers.
RulePtr lexicographic_rule();
// Uniform over the minimizers.
RulePtr uniform_random_rule();
// Always the atom with coordinate above x when both sides are present.
RulePtr positive_preference_rule();
// +side chosen with probability p_n = (C-1)/n on a tie at radius 1/n.
RulePtr biased_bernoulli_rule(double c);
// Always the atom with the given label when it is among the minimizers.
RulePtr prefer_label_rule(std::int64_t label);

// "lex", "uniform", "positive", "bernoulli:C=2.0", "prefer:label=2".
RulePtr parse_rule(const std::string& text);

// Largest probability used by biased_bernoulli_rule.
double bernoulli_clip();

}  // namespace lebnn
