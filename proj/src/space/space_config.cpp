#include "lebnn/space_config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "lebnn/errors.hpp"
#include "lebnn/rational.hpp"
#include "lebnn/spaces.hpp"

namespace lebnn {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

int parse_int(const SpaceSpec& spec, const std::string& key, int fallback) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) return fallback;
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + it->second + "'");
  }
}

const std::string& required(const SpaceSpec& spec, const std::string& key) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) throw ConfigError(key, "missing for kind " + spec.kind);
  return it->second;
}

void check_known(const SpaceSpec& spec, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : spec.params) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw ConfigError(k, "unknown parameter for kind " + spec.kind);
  }
}

}  // namespace

SpaceSpec parse_space_spec(const std::string& text) {
  SpaceSpec spec;
  const auto colon = text.find(':');
  spec.kind = trim(text.substr(0, colon));
  if (spec.kind.empty()) throw ConfigError("space", "missing kind in '" + text + "'");
  if (colon == std::string::npos) return spec;
  std::string key;
  std::stringstream ss(text.substr(colon + 1));
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      if (key.empty()) throw ConfigError("space", "expected key=value, got '" + token + "'");
      spec.params[key] += "," + token;
      continue;
    }
    key = trim(token.substr(0, eq));
    if (key.empty()) throw ConfigError("space", "empty key in '" + text + "'");
    spec.params[key] = trim(token.substr(eq + 1));
  }
  return spec;
}

SpaceSpec parse_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  SpaceSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", "expected key = value", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", "empty key", lineno);
    if (key == "kind") {
      spec.kind = value;
    } else {
      spec.params[key] = value;
    }
  }
  if (spec.kind.empty()) throw ConfigError("kind", "missing in '" + path + "'");
  return spec;
}

std::string to_string(const SpaceSpec& spec) {
  std::string out = spec.kind;
  char sep = ':';
  for (const auto& [k, v] : spec.params) {
    out += sep + k + "=" + v;
    sep = ',';
  }
  return out;
}

std::vector<mpq_class> parse_rational_list(const std::string& text, const std::string& field) {
  std::vector<mpq_class> out;
  std::string token;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const char c = i < text.size() ? text[i] : ',';
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) {
        try {
          out.push_back(parse_rational(token));
        } catch (const ConfigError& e) {
          throw ConfigError(field, e.what());
        }
        token.clear();
      }
    } else {
      token += c;
    }
  }
  return out;
}

std::vector<std::vector<mpq_class>> parse_rational_matrix(const std::string& text,
                                                          const std::string& field) {
  std::vector<std::vector<mpq_class>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    if (!trim(row).empty()) rows.push_back(parse_rational_list(row, field));
  }
  return rows;
}

SpacePtr build_space(const SpaceSpec& spec) {
  try {
    if (spec.kind == "signed_harmonic") {
      check_known(spec, {"N"});
      return std::make_shared<SignedHarmonicSpace>(parse_int(spec, "N", 8));
    }
    if (spec.kind == "dyadic") {
      check_known(spec, {"D"});
      return std::make_shared<DyadicIntervalSpace>(parse_int(spec, "D", 3));
    }
    if (spec.kind == "unit_interval") {
      check_known(spec, {"lo", "hi"});
      const auto lo = spec.params.count("lo") ? parse_rational(spec.params.at("lo")) : mpq_class(0);
      const auto hi = spec.params.count("hi") ? parse_rational(spec.params.at("hi")) : mpq_class(1);
      return std::make_shared<UniformIntervalSpace>(to_double(lo), to_double(hi));
    }
    if (spec.kind == "finite_atomic") {
      check_known(spec, {"probs", "positions", "distances"});
      const auto probs = parse_rational_list(required(spec, "probs"), "probs");
      const bool has_pos = spec.params.count("positions") > 0;
      const bool has_table = spec.params.count("distances") > 0;
      if (has_pos == has_table) {
        throw ConfigError("positions", "give exactly one of positions or distances");
      }
      if (has_pos) {
        return FiniteAtomicSpace::on_line(probs,
                                          parse_rational_list(spec.params.at("positions"), "positions"));
      }
      return FiniteAtomicSpace::with_table(
          probs, parse_rational_matrix(spec.params.at("distances"), "distances"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(spec.kind, e.what());
  }
  throw ConfigError("kind", "unknown space kind '" + spec.kind + "'");
}

ScalarField build_field(const SpaceSpec& spec, const MetricMeasureSpace& space) {
  if (spec.kind == "positive") {
    check_known(spec, {});
    return ScalarField::positive_indicator();
  }
  if (spec.kind == "identity") {
    check_known(spec, {});
    return ScalarField::identity();
  }
  if (spec.kind == "constant") {
    check_known(spec, {"value"});
    return ScalarField::constant(to_double(parse_rational(required(spec, "value"))));
  }
  if (spec.kind == "dyadic") {
    check_known(spec, {"D"});
    const auto* dyadic = dynamic_cast<const DyadicIntervalSpace*>(&space);
    const int depth = parse_int(spec, "D", dyadic != nullptr ? dyadic->depth() : 3);
    if (depth < 1) throw ConfigError("D", "depth must be >= 1");
    return ScalarField::dyadic(depth);
  }
  if (spec.kind == "table") {
    check_known(spec, {"values"});
    std::vector<double> values;
    for (const auto& q : parse_rational_list(required(spec, "values"), "values")) {
      values.push_back(to_double(q));
    }
    if (space.is_atomic()) {
      for (const auto& a : space.atoms()) {
        if (a.point.label < 0 || static_cast<std::size_t>(a.point.label) >= values.size()) {
          throw ConfigError("values", "no value for atom label " + std::to_string(a.point.label));
        }
      }
    }
    return ScalarField::table(std::move(values));
  }
  throw ConfigError("field", "unknown field kind '" + spec.kind + "'");
}

Point parse_point(const std::string& text, const MetricMeasureSpace& space) {
  const std::string t = trim(text);
  if (space.is_atomic()) {
    std::int64_t label = 0;
    try {
      std::size_t used = 0;
      label = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw ConfigError("x", "expected an atom label, got '" + text + "'");
    }
    for (const auto& a : space.atoms()) {
      if (a.point.label == label) return a.point;
    }
    throw ConfigError("x", "no atom with label " + t + " in " + space.name());
  }
  const double c = to_double(parse_rational(t));
  if (const auto dom = space.interval()) {
    if (c < dom->first || c > dom->second) throw ConfigError("x", "point outside the domain");
  }
  return Point{0, c};
}

}  // namespace lebnn
