#include "bumpforge/conebump.hpp"

#include <cmath>

#include "bumpforge/parse.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bumpforge;
using bft::mono;

namespace {
// U(w) = |w|^4 + (4/3)|w|^2 Re(w^2): subharmonic with circle-Laplacian zeros.
// P = U(z1 z2) + |z1|^6|z2|^2 + |z1|^8: degree 8, harmonic along {z1 = 0},
// lowest block U(z1 z2) at mu = 4, strictly psh on punctured cones around
// the line (the higher blocks carry complementary kernels).
MixedPolynomial hbad_P() {
  const MixedPolynomial u_of_g = mono(2, 2, 2, 2) + mono(3, 1, 3, 1, 2, 3) + mono(1, 3, 1, 3, 2, 3);
  return u_of_g + mono(3, 3, 1, 1) + mono(4, 4, 0, 0);
}
}  // namespace

TEST_CASE("lowest block") {
  SUBCASE("Example 1.1: mu = 6, block |z1|^6 |z2|^2") {
    auto [mu, q] = lowest_block(bft::example11_P());
    CHECK(mu == 6);
    CHECK(q == mono(3, 3, 1, 1));
  }
  SUBCASE("swapped weighted pullback: mu = 4, block |s1|^4 |s2|^4") {
    // pullback of the weighted fixture swapped so the line is {s1 = 0}
    const WeightSignature w = WeightSignature::make(4, 8);
    const MixedPolynomial Pi = pullback(bft::weighted_P(), w);
    const MixedPolynomial Ps = swap_vars(Pi);
    auto [mu, q] = lowest_block(Ps);
    CHECK(mu == 4);
    CHECK(q == mono(2, 2, 2, 2));
  }
  SUBCASE("|z1|^4 |z2|^4 is its own block") {
    auto [mu, q] = lowest_block(mono(2, 2, 2, 2));
    CHECK(mu == 4);
    CHECK(q == mono(2, 2, 2, 2));
  }
  SUBCASE("zero polynomial") { CHECK_THROWS_AS(lowest_block(MixedPolynomial{}), error); }
}

TEST_CASE("bidegree factorization") {
  SUBCASE("|z1|^6 |z2|^2 = |z1^3 z2|^2") {
    const auto fac = factor_bidegree(mono(3, 3, 1, 1));
    CHECK(fac.a == 3);
    CHECK(fac.b == 1);
    CHECK(fac.two_m == 2);
    CHECK(fac.U == mono(1, 1, 0, 0));
  }
  SUBCASE("|z1|^2 |z2|^2") {
    const auto fac = factor_bidegree(mono(1, 1, 1, 1));
    CHECK(fac.a == 1);
    CHECK(fac.b == 1);
    CHECK(fac.U == mono(1, 1, 0, 0));
  }
  SUBCASE("non-lattice support is rejected") {
    // |z1|^2 Re(z1^2 conj(z2)^2): bihomogeneous but off the lattice
    const MixedPolynomial q = mono(3, 1, 0, 2, 1, 2) + mono(1, 3, 2, 0, 1, 2);
    CHECK_THROWS_AS(factor_bidegree(q), error);
    try {
      factor_bidegree(q);
    } catch (const error& e) {
      CHECK(e.code() == errc::not_factorable);
    }
  }
}

TEST_CASE("HGOOD bump for Example 1.1") {
  const ConeBump bump = build_cone_bump(bft::example11_P());
  CHECK(bump.mode == ConeBump::Mode::HGOOD);
  CHECK(bump.mu == 6);
  CHECK(bump.fac.a == 3);
  CHECK(bump.fac.b == 1);
  CHECK(bump.gamma_is_exact);
  CHECK(bump.gamma_rat == make_rat(1));
  // H = (1/2) |z1|^6 |z2|^2 exactly
  const C2 z{{0.3, 0.1}, {0.9, -0.4}};
  const double expect = 0.5 * std::pow(std::abs(z.z1), 6) * std::pow(std::abs(z.z2), 2);
  CHECK(bump.eval(z) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(bump.c == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(bump.sigma > 0.0);
  for (const auto& [t, B] : bump.shell_B) CHECK(B > 0.0);

  const ConeBumpReport rep =
      verify_cone_bump(bft::example11_P(), bump, {1.0, 0.5, 0.125}, SamplePlan{99, 1500, 1e-2, 1.0});
  CHECK(rep.decay_margin >= 0.0);
  CHECK(rep.worst_shell_B > 0.0);
}

TEST_CASE("HBAD bump engages the sector caps") {
  const MixedPolynomial P = hbad_P();
  REQUIRE(P.is_real_valued());
  REQUIRE(check_psh(P, Region::ball(), 3000, 3).verdict == Verdict::PASS);
  const ConeBump bump = build_cone_bump(P);
  CHECK(bump.mode == ConeBump::Mode::HBAD);
  CHECK(bump.mu == 4);
  CHECK(bump.fac.a == 1);
  CHECK(bump.fac.b == 1);
  CHECK(bump.fac.two_m == 4);
  CHECK(bump.radial.sector_centers.size() == 2);
  CHECK(bump.c > 0.0);
  const ConeBumpReport rep =
      verify_cone_bump(P, bump, {1.0, 0.5, 0.125}, SamplePlan{123, 1500, 1e-2, 1.0});
  CHECK(rep.decay_margin >= 0.0);
  CHECK(rep.worst_shell_B > 0.0);
}

TEST_CASE("tampered decay constant is caught") {
  ConeBump bump = build_cone_bump(bft::example11_P());
  bump.c *= 2.0;
  const ConeBumpReport rep =
      verify_cone_bump(bft::example11_P(), bump, {1.0}, SamplePlan{7, 1000, 1e-2, 1.0});
  CHECK(rep.decay_margin < 0.0);
}

TEST_CASE("rank-one input fails the strictness precondition") {
  // |z1 z2|^4 is plurisubharmonic but never strictly so
  try {
    build_cone_bump(mono(2, 2, 2, 2));
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::not_strictly_psh);
  }
}

TEST_CASE("translation covariance via shearing") {
  // the bump for the line {z1 = xi z2} is the sheared bump for {z1 = 0}
  const ExactComplex xi{make_rat(1, 4), make_rat(-1, 8)};
  const MixedPolynomial P = bft::example11_P();
  const MixedPolynomial Pshift = shear(P, -xi);  // harmonic along {z1 = xi z2}
  const MixedPolynomial Pback = shear(Pshift, xi);
  CHECK(Pback == P);
  const ConeBump bump = build_cone_bump(Pback);
  const ConeBump bump2 = build_cone_bump(P);
  for (int i = 0; i < 25; ++i) {
    const C2 z{{0.1 * i - 1.0, 0.05 * i}, {1.0, -0.02 * i}};
    CHECK(std::abs(bump.eval(z) - bump2.eval(z)) <= 1e-10 * (1.0 + std::abs(bump2.eval(z))));
  }
}

TEST_CASE("delta to zero limit reduces to strict psh of P") {
  const ConeBump bump = build_cone_bump(bft::example11_P());
  const ConeBumpReport rep =
      verify_cone_bump(bft::example11_P(), bump, {0.0}, SamplePlan{5, 1000, 1e-2, 1.0});
  CHECK(rep.worst_shell_B >= 0.0);
}
