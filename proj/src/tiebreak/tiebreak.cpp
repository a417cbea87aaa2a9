#include "lebnn/tiebreak.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lebnn/errors.hpp"
#include "lebnn/rational.hpp"

namespace lebnn {

namespace {

std::size_t min_position(const std::vector<Candidate>& c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].index < c[best].index) best = i;
  }
  return best;
}

void require_candidates(const std::vector<Candidate>& c) {
  if (c.empty()) throw std::invalid_argument("tie-break: empty candidate list");
}

class Lexicographic final : public TieBreakRule {
 public:
  std::string name() const override { return "lex"; }
  bool is_isimin() const override { return true; }
  std::size_t choose(const Point&, const Distance&, const std::vector<Candidate>& c,
                     Rng&) const override {
    require_candidates(c);
    return c[min_position(c)].index;
  }
  std::vector<mpq_class> tie_distribution(const Point&, const Distance&,
                                          const std::vector<Candidate>& c) const override {
    require_candidates(c);
    std::vector<mpq_class> out(c.size(), mpq_class(0));
    out[min_position(c)] = 1;
    return out;
  }
};

class UniformRandom final : public TieBreakRule {
 public:
  std::string name() const override { return "uniform"; }
  bool is_isimin() const override { return true; }
  std::size_t choose(const Point&, const Distance&, const std::vector<Candidate>& c,
                     Rng& ties) const override {
    require_candidates(c);
    if (c.size() == 1) return c.front().index;
    // Position in index order, so the draw never sees point values.
    std::vector<std::size_t> idx;
    idx.reserve(c.size());
    for (const auto& cand : c) idx.push_back(cand.index);
    std::sort(idx.begin(), idx.end());
    return idx[uniform_index(ties, idx.size())];
  }
  std::vector<mpq_class> tie_distribution(const Point&, const Distance&,
                                          const std::vector<Candidate>& c) const override {
    require_candidates(c);
    return std::vector<mpq_class>(c.size(), mpq_class(1, c.size()));
  }
};

class SideRule : public TieBreakRule, public SidePreference {
 public:
  bool is_isimin() const override { return false; }
  const SidePreference* side_preference() const override { return this; }

  std::size_t choose(const Point& x, const Distance& r, const std::vector<Candidate>& c,
                     Rng& ties) const override {
    require_candidates(c);
    const auto [pref, other] = split(x, c);
    if (pref.empty()) return other.front();
    if (other.empty()) return pref.front();
    return uniform01(ties) < weight(r) ? pref.front() : other.front();
  }

  std::vector<mpq_class> tie_distribution(const Point& x, const Distance& r,
                                          const std::vector<Candidate>& c) const override {
    require_candidates(c);
    const auto [pref, other] = split(x, c);
    std::vector<mpq_class> out(c.size(), mpq_class(0));
    const mpq_class w = pref.empty() ? mpq_class(0) : other.empty() ? mpq_class(1) : exact_weight(r);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!pref.empty() && c[i].index == pref.front()) out[i] += w;
      if (!other.empty() && c[i].index == other.front()) out[i] += 1 - w;
    }
    return out;
  }

 private:
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split(
      const Point& x, const std::vector<Candidate>& c) const {
    std::vector<std::size_t> pref;
    std::vector<std::size_t> other;
    for (const auto& cand : c) (preferred(x, cand.point) ? pref : other).push_back(cand.index);
    std::sort(pref.begin(), pref.end());
    std::sort(other.begin(), other.end());
    return {pref, other};
  }
};

class PositivePreference final : public SideRule {
 public:
  std::string name() const override { return "positive"; }
  bool preferred(const Point& x, const Point& p) const override { return p.coord > x.coord; }
  double weight(const Distance&) const override { return 1.0; }
  mpq_class exact_weight(const Distance&) const override { return 1; }
};

class PreferLabel final : public SideRule {
 public:
  explicit PreferLabel(std::int64_t label) : label_(label) {}
  std::string name() const override { return "prefer:label=" + std::to_string(label_); }
  bool preferred(const Point&, const Point& p) const override { return p.label == label_; }
  double weight(const Distance&) const override { return 1.0; }
  mpq_class exact_weight(const Distance&) const override { return 1; }

 private:
  std::int64_t label_;
};

class BiasedBernoulli final : public SideRule {
 public:
  explicit BiasedBernoulli(double c) : c_(c) {
    if (!(c > 1.0) || !std::isfinite(c)) throw std::invalid_argument("bernoulli: C must be > 1");
  }
  std::string name() const override {
    char buf[48];
    std::snprintf(buf, sizeof buf, "bernoulli:C=%.17g", c_);
    return buf;
  }
  bool preferred(const Point& x, const Point& p) const override { return p.coord > x.coord; }
  double weight(const Distance& r) const override {
    return std::min((c_ - 1.0) * r.to_double(), bernoulli_clip());
  }
  mpq_class exact_weight(const Distance& r) const override {
    const mpq_class w = mpq_from_double(c_ - 1.0) * r.to_mpq();
    const mpq_class clip = mpq_from_double(bernoulli_clip());
    return w < clip ? w : clip;
  }

 private:
  double c_;
};

}  // namespace

double bernoulli_clip() { return 1.0 - std::ldexp(1.0, -30); }

RulePtr lexicographic_rule() { return std::make_shared<Lexicographic>(); }
RulePtr uniform_random_rule() { return std::make_shared<UniformRandom>(); }
RulePtr positive_preference_rule() { return std::make_shared<PositivePreference>(); }
RulePtr biased_bernoulli_rule(double c) { return std::make_shared<BiasedBernoulli>(c); }
RulePtr prefer_label_rule(std::int64_t label) { return std::make_shared<PreferLabel>(label); }

RulePtr parse_rule(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto value_of = [&](const std::string& key) -> std::string {
    const std::string prefix = key + "=";
    if (args.rfind(prefix, 0) != 0) throw ConfigError("rule", "expected " + prefix + "<value>");
    return args.substr(prefix.size());
  };
  try {
    if (kind == "lex" && args.empty()) return lexicographic_rule();
    if (kind == "uniform" && args.empty()) return uniform_random_rule();
    if (kind == "positive" && args.empty()) return positive_preference_rule();
    if (kind == "bernoulli") return biased_bernoulli_rule(args.empty() ? 2.0 : std::stod(value_of("C")));
    if (kind == "prefer") return prefer_label_rule(std::stoll(value_of("label")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("rule", std::string("bad value in '") + text + "': " + e.what());
  } catch (const std::out_of_range&) {
    throw ConfigError("rule", "value out of range in '" + text + "'");
  }
  throw ConfigError("rule", "unknown rule '" + text + "'");
}

}  // namespace lebnn
