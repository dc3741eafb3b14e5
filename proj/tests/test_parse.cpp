#include "bumpforge/parse.hpp"

#include "bumpforge/rng.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bumpforge;
using bft::mono;

TEST_CASE("parses Example 1.1") {
  const MixedPolynomial p =
      parse_expression("|z1|^6*|z2|^2 + |z1|^8 + (15/7)*|z1|^2*Re(z1^6) + |z2|^10");
  CHECK(p.coeff(Expo{3, 3, 1, 1}) == ExactComplex::integer(1));
  CHECK(p.coeff(Expo{4, 4, 0, 0}) == ExactComplex::integer(1));
  CHECK(p.coeff(Expo{7, 1, 0, 0}) == ExactComplex::real(make_rat(15, 14)));
  CHECK(p.coeff(Expo{1, 7, 0, 0}) == ExactComplex::real(make_rat(15, 14)));
  CHECK(p.coeff(Expo{0, 0, 5, 5}) == ExactComplex::integer(1));
  CHECK(p.term_count() == 5);
  CHECK(p.is_real_valued());
}

TEST_CASE("Re(z1^2) = (z1^2 + conj(z1)^2)/2") {
  const MixedPolynomial p = parse_expression("Re(z1^2)");
  CHECK(p == mono(2, 0, 0, 0, 1, 2) + mono(0, 2, 0, 0, 1, 2));
}

TEST_CASE("Im and conj") {
  const MixedPolynomial p = parse_expression("Im(z1*conj(z2))");
  // Im(w) = (w - conj w)/(2i)
  MixedPolynomial expect =
      MixedPolynomial::monomial(Expo{1, 0, 0, 1}, ExactComplex{Rat(0), make_rat(-1, 2)});
  expect.add_term(Expo{0, 1, 1, 0}, ExactComplex{Rat(0), make_rat(1, 2)});
  CHECK(p == expect);
  CHECK(p.is_real_valued());
}

TEST_CASE("odd modulus power is rejected") {
  CHECK_THROWS_AS(parse_expression("|z1|^3"), error);
  CHECK_THROWS_AS(parse_expression("|z1|"), error);
  try {
    parse_expression("|z1|^3");
  } catch (const error& e) {
    CHECK(e.code() == errc::non_polynomial_modulus);
  }
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_expression("z1 + ");
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::syntax_error);
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_expression("(z1"), error);
  CHECK_THROWS_AS(parse_expression("z3"), error);
  CHECK_THROWS_AS(parse_expression("z1 / z2"), error);
}

TEST_CASE("division by rational constants") {
  CHECK(parse_expression("15/7*|z1|^2") == mono(1, 1, 0, 0, 15, 7));
  CHECK(parse_expression("z1*conj(z1)/4") == mono(1, 1, 0, 0, 1, 4));
}

TEST_CASE("nested moduli") {
  // ||z1|^2*z2|^2 = |z1|^4 |z2|^2
  CHECK(parse_expression("||z1|^2*z2|^2") == mono(2, 2, 1, 1));
}

namespace {
MixedPolynomial random_real_poly(std::uint64_t seed) {
  MixedPolynomial p;
  const int nterms = 1 + static_cast<int>(rng_u01(seed, 1, 0) * 6);
  for (int t = 0; t < nterms; ++t) {
    auto ri = [&](std::uint64_t s, int lo, int hi) {
      return lo + static_cast<int>(rng_u01(seed, s, t) * (hi - lo + 1));
    };
    const Expo e{ri(10, 0, 4), ri(11, 0, 4), ri(12, 0, 3), ri(13, 0, 3)};
    const long num = ri(14, -40, 40);
    const long den = 1 + ri(15, 0, 11);
    if (num == 0) continue;
    const long inum = ri(16, -9, 9);
    const ExactComplex c{make_rat(num, den), make_rat(inum, den)};
    p.add_term(e, c);
    p.add_term(e.conj(), c.conj());  // force real-valuedness
  }
  return p;
}
}  // namespace

TEST_CASE("round-trip on a 200-expression corpus is coefficient-exact") {
  int nonzero = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const MixedPolynomial p = random_real_poly(k * 7919 + 13);
    REQUIRE(p.is_real_valued());
    const std::string text = print_polynomial(p);
    const MixedPolynomial q = parse_expression(text);
    CHECK(q == p);
    if (!p.is_zero()) ++nonzero;
  }
  CHECK(nonzero > 150);
  // and the named fixtures
  for (const MixedPolynomial& p :
       {bft::example11_full(), bft::hext_P(), bft::weighted_P() + bft::weighted_Q()}) {
    CHECK(parse_expression(print_polynomial(p)) == p);
  }
}
