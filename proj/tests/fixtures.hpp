#pragma once

// Shared test fixtures.

#include "bumpforge/parse.hpp"
#include "bumpforge/poly.hpp"

namespace bft {

using namespace bumpforge;

inline MixedPolynomial mono(int a1, int b1, int a2, int b2, long num = 1, long den = 1) {
  return MixedPolynomial::monomial(Expo{a1, b1, a2, b2}, ExactComplex::real(make_rat(num, den)));
}

// |z1|^6 |z2|^2 + |z1|^8 + (15/7) |z1|^2 Re(z1^6); homogeneous of degree 8,
// plurisubharmonic, harmonic exactly along {z1 = 0}.
inline MixedPolynomial example11_P() {
  return parse_expression("|z1|^6*|z2|^2 + |z1|^8 + (15/7)*|z1|^2*Re(z1^6)");
}

inline MixedPolynomial example11_Q() { return parse_expression("|z2|^10"); }

inline MixedPolynomial example11_full() {
  return parse_expression("|z1|^6*|z2|^2 + |z1|^8 + (15/7)*|z1|^2*Re(z1^6) + |z2|^10");
}

// ||z||^4: strictly plurisubharmonic off 0, no exceptional curves.
inline MixedPolynomial hext_P() {
  return parse_expression("|z1|^4 + 2*|z1|^2*|z2|^2 + |z2|^4");
}

// Weighted fixture for weights (4, 8): curve {z2 = 0}, sigma = (2, 1).
inline MixedPolynomial weighted_P() { return parse_expression("|z2|^8 + |z2|^4*|z1|^2"); }
inline MixedPolynomial weighted_Q() { return parse_expression("|z1|^6"); }

}  // namespace bft
