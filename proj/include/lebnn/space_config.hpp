#pragma once

#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lebnn/field.hpp"
#include "lebnn/space.hpp"

namespace lebnn {

// kind in {signed_harmonic, dyadic, finite_atomic, unit_interval} plus its
// parameters as text.
struct SpaceSpec {
  std::string kind;
  std::map<std::string, std::string> params;
};

// "kind:key=value,key=value". List values may contain commas:
// "finite_atomic:probs=1/5,3/10,1/2,positions=-1,1,2".
SpaceSpec parse_space_spec(const std::string& text);

// Key-value file: "key = value" per line, '#' comments, "kind" required.
SpaceSpec parse_space_file(const std::string& path);

std::string to_string(const SpaceSpec& spec);

SpacePtr build_space(const SpaceSpec& spec);

// Comma or whitespace separated rationals (each "p/q", decimal or "2^-k").
std::vector<mpq_class> parse_rational_list(const std::string& text, const std::string& field);

// Rows separated by ';'.
std::vector<std::vector<mpq_class>> parse_rational_matrix(const std::string& text,
                                                          const std::string& field);

// Field spec with the same syntax: "positive", "identity",
// "constant:value=c", "dyadic:D=3" (D defaults to the space's depth),
// "table:values=v0,v1,...".
ScalarField build_field(const SpaceSpec& spec, const MetricMeasureSpace& space);

// Atom label on atomic spaces, coordinate on interval spaces.
Point parse_point(const std::string& text, const MetricMeasureSpace& space);

}  // namespace lebnn
