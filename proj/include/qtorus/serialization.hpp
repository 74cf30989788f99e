#pragma once

// JSON wire formats. Rationals are written as "p/q" strings and reals as
// decimal strings, never as JSON numbers.
//
// QTorusElement: {"d": int, "phi": [[rat]], "terms": [{"n": [int], "re": str, "im": str}]}

#include "qtorus/algebra.hpp"

#include <json.hpp>

namespace qtorus {

using Json = nlohmann::ordered_json;

Json skew_to_json(const SkewForm &phi);
/// Accepts "p/q" strings, decimal strings, or JSON integers.
SkewForm skew_from_json(const Json &j);

Json element_to_json(const NumericElement &x, int digits = 21);
Json element_to_json(const ExactElement &x, int digits = 21);
NumericElement element_from_json(const Json &j);

Rational rational_from_json(const Json &j);
Real real_from_json(const Json &j);

} // namespace qtorus
