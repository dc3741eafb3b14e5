#pragma once

// Expression front-end. Grammar: variables z1, z2; conj(.), Re(.), Im(.);
// |expr|^k (even k expands to (e*conj(e))^{k/2}, odd k is rejected as
// non-polynomial); ^, *, /, +, -; rational literals like 15/7; parentheses.

#include <string>

#include "bumpforge/poly.hpp"

namespace bumpforge {

MixedPolynomial parse_expression(const std::string& text);

// Canonical grammar-compatible form; parse(print(p)) == p coefficient-exact.
// Requires a real-valued polynomial.
std::string print_polynomial(const MixedPolynomial& p);

}  // namespace bumpforge
