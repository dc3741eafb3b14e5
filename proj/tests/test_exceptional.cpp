#include "bumpforge/exceptional.hpp"

#include "bumpforge/parse.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bumpforge;
using bft::mono;

namespace {
const WeightSignature w88 = WeightSignature::make(8, 8);
const WeightSignature w48 = WeightSignature::make(4, 8);
}  // namespace

TEST_CASE("Example 1.1 has exactly the curve z1 = 0") {
  const auto curves = find_exceptional(bft::example11_P(), w88);
  REQUIRE(curves.size() == 1);
  CHECK_FALSE(curves[0].xi_infinite);
  CHECK(curves[0].xi == ExactComplex::integer(0));
}

TEST_CASE("|z1|^4 |z2|^4 has both axes") {
  const auto curves = find_exceptional(mono(2, 2, 2, 2), w88);
  REQUIRE(curves.size() == 2);
  CHECK(curves[0].xi == ExactComplex::integer(0));
  CHECK(curves[1].xi_infinite);
}

TEST_CASE("weighted fixture has only the curve z2 = 0") {
  const auto curves = find_exceptional(bft::weighted_P(), w48);
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].xi_infinite);
}

TEST_CASE("every returned curve passes exact harmonicity re-verification") {
  const MixedPolynomial P = parse_expression("|z1 - z2|^2*|z1 + z2|^2");
  const auto curves = find_exceptional(P, WeightSignature::make(4, 4));
  REQUIRE(curves.size() == 2);
  for (const auto& c : curves) {
    REQUIRE_FALSE(c.xi_infinite);
    CHECK(is_harmonic_univariate(restrict_to_line(P, c.omega0)));
  }
  CHECK(curves[0].xi == ExactComplex::integer(-1));
  CHECK(curves[1].xi == ExactComplex::integer(1));
}

TEST_CASE("non-axis rational slope is found exactly") {
  // harmonic exactly along z1 = (1/2) z2
  const MixedPolynomial P = parse_expression("|z1 - z2/2|^2*(|z1|^2 + |z2|^2)");
  const auto curves = find_exceptional(P, WeightSignature::make(4, 4));
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].omega0 == ExactComplex{make_rat(1, 2), Rat(0)});
}

TEST_CASE("deck orbits recover irrational slope mates") {
  // |z1^2 - z2^3|^2 at weights (4,6): sigma = (3,2), curve xi = 1 whose
  // pullback is the six lines t1 = zeta t2, zeta^6 = 1; only +-1 are rational.
  const MixedPolynomial P = parse_expression("|z1^2 - z2^3|^2");
  const WeightSignature w = WeightSignature::make(4, 6);
  const auto curves = find_exceptional(P, w);
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].xi == ExactComplex::integer(1));
  CHECK(curves[0].pullback_lines.size() == 6);
  // all six lines are harmonic for the pullback (checked numerically)
  const MixedPolynomial Pi = pullback(P, w);
  for (const auto& om : curves[0].pullback_lines) {
    // restriction Pi(om t, t) ~ |om^6 - 1|^2 |t|^12
    const std::complex<double> r = std::pow(om, 6) - std::complex<double>(1.0, 0.0);
    CHECK(std::abs(r) < 1e-9);
  }
  CHECK(Pi.total_degree() == 12);
}

TEST_CASE("solver requires a pure weight-1 non-pluriharmonic input") {
  CHECK_THROWS_AS(find_exceptional(bft::example11_full(), w88), error);  // has weight > 1 part
  const MixedPolynomial plurih = mono(4, 4, 0, 0) + mono(8, 0, 0, 0, 1, 2) + mono(0, 8, 0, 0, 1, 2);
  CHECK_THROWS_AS(find_exceptional(plurih, w88), error);
}

TEST_CASE("solver agrees with the grid oracle") {
  struct Fixture {
    const char* text;
    int m1, m2;
  };
  const Fixture fixtures[] = {
      {"|z1|^6*|z2|^2 + |z1|^8 + (15/7)*|z1|^2*Re(z1^6)", 8, 8},
      {"|z1|^4*|z2|^4", 8, 8},
      {"|z1 - z2|^2*|z2|^2", 4, 4},
      {"|z1 - z2|^2*|z1 + z2|^2", 4, 4},
      {"|z1|^2*|z2|^4 + |z1|^4*|z2|^2", 6, 6},
      {"|z1|^4 + 2*|z1|^2*|z2|^2 + |z2|^4", 4, 4},
      {"|z1 - z2/2|^2*(|z1|^2 + |z2|^2)", 4, 4},
      {"|z1|^2*|z2|^2*(|z1|^2 + |z2|^2)", 6, 6},
      {"|z1^2 - z2^2|^2", 4, 4},
      {"|z1|^4*|z2|^2 + |z1|^2*|z2|^4 + |z1|^6", 6, 6},
  };
  for (const auto& f : fixtures) {
    CAPTURE(f.text);
    const MixedPolynomial P = parse_expression(f.text);
    const WeightSignature w = WeightSignature::make(f.m1, f.m2);
    const MixedPolynomial Pi = pullback(P, w);
    REQUIRE(Pi.total_degree() <= 12);
    const HarmonicLines solver = solve_harmonic_lines(Pi);
    const HarmonicLines oracle = harmonic_lines_grid_oracle(Pi, 1000, 1, 1);
    CHECK(solver.line_t1_zero == oracle.line_t1_zero);
    CHECK(solver.line_t2_zero == oracle.line_t2_zero);
    REQUIRE(solver.slopes.size() == oracle.slopes.size());
    for (std::size_t i = 0; i < solver.slopes.size(); ++i)
      CHECK(solver.slopes[i] == oracle.slopes[i]);
  }
}

TEST_CASE("classification") {
  SUBCASE("Example 1.1 is almost h-extendible") {
    const auto curves = find_exceptional(bft::example11_P(), w88);
    const auto cls = separation_check(bft::example11_P(), w88, curves);
    CHECK(cls.verdict == Classification::V::ALMOST_H_EXTENDIBLE);
    CHECK(cls.off_curve_degenerate == 0);
    CHECK(cls.degenerate_samples >= 0);
  }
  SUBCASE("||z||^4 is h-extendible") {
    const WeightSignature w44 = WeightSignature::make(4, 4);
    const auto curves = find_exceptional(bft::hext_P(), w44);
    CHECK(curves.empty());
    const auto cls = separation_check(bft::hext_P(), w44, curves);
    CHECK(cls.verdict == Classification::V::H_EXTENDIBLE);
  }
  SUBCASE("|z1^2 - z2^3|^2 is not applicable (degenerate everywhere)") {
    const MixedPolynomial P = parse_expression("|z1^2 - z2^3|^2");
    const WeightSignature w = WeightSignature::make(4, 6);
    const auto curves = find_exceptional(P, w);
    REQUIRE(curves.size() == 1);
    const auto cls = separation_check(P, w, curves);
    CHECK(cls.verdict == Classification::V::NOT_APPLICABLE);
    CHECK(cls.has_witness);
  }
  SUBCASE("weighted fixture is almost h-extendible") {
    const auto curves = find_exceptional(bft::weighted_P(), w48);
    const auto cls = separation_check(bft::weighted_P(), w48, curves);
    CHECK(cls.verdict == Classification::V::ALMOST_H_EXTENDIBLE);
  }
  SUBCASE("classification is invariant under the variable swap") {
    // swap z1 <-> z2 in the weighted fixture; weights stay (4,8) ordered, so
    // the swapped polynomial pairs with the same signature read the other way:
    // use the homogeneous Example 1.1 where the swap is weight-compatible.
    const MixedPolynomial Psw = swap_vars(bft::example11_P());
    const auto curves = find_exceptional(Psw, w88);
    REQUIRE(curves.size() == 1);
    CHECK(curves[0].xi_infinite);  // {z1=0} becomes {z2=0}
    const auto cls = separation_check(Psw, w88, curves);
    CHECK(cls.verdict == Classification::V::ALMOST_H_EXTENDIBLE);
  }
}

TEST_CASE("curve invariants") {
  SUBCASE("Example 1.1: mu = 6, twoM = 10, order condition passes") {
    auto curves = find_exceptional(bft::example11_P(), w88);
    REQUIRE(curves.size() == 1);
    curve_invariants(bft::example11_P(), bft::example11_Q(), w88, curves[0]);
    CHECK(curves[0].mu == 6);
    CHECK(curves[0].twoM == 10);
    CHECK(curves[0].star_ok);
  }
  SUBCASE("weighted fixture: twoM = 12 in the pullback") {
    auto curves = find_exceptional(bft::weighted_P(), w48);
    REQUIRE(curves.size() == 1);
    curve_invariants(bft::weighted_P(), bft::weighted_Q(), w48, curves[0]);
    // pullback of Q = |z1|^6 is |t1|^12, restricting to |t|^12 on {t2=0}
    CHECK(curves[0].twoM == 12);
    CHECK(curves[0].mu == 4);
    CHECK(curves[0].star_ok);
  }
  SUBCASE("Q = 0 gives InfiniteType") {
    auto curves = find_exceptional(bft::example11_P(), w88);
    REQUIRE(curves.size() == 1);
    CHECK_THROWS_AS(curve_invariants(bft::example11_P(), MixedPolynomial{}, w88, curves[0]),
                    error);
  }
}
