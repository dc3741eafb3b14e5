#include "bumpforge/poly.hpp"

#include <cmath>

#include "bumpforge/rng.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bumpforge;
using bft::mono;

namespace {
C2 random_point(std::uint64_t seed, std::int64_t i, double scale = 1.0) {
  auto c = [&](std::uint64_t s) {
    return std::complex<double>(2 * rng_u01(seed, s, i) - 1, 2 * rng_u01(seed, s + 1, i) - 1) * scale;
  };
  return {c(100), c(200)};
}
}  // namespace

TEST_CASE("wirtinger on |z1|^8 gives 16|z1|^6") {
  const MixedPolynomial p = mono(4, 4, 0, 0);  // z1^4 conj(z1)^4
  const MixedPolynomial d = wirtinger(wirtinger(p, 1, WirtKind::holo), 1, WirtKind::anti);
  CHECK(d == mono(3, 3, 0, 0, 16));
}

TEST_CASE("wirtinger on |z1|^6|z2|^2 gives 9|z1|^4|z2|^2") {
  const MixedPolynomial p = mono(3, 3, 1, 1);
  const MixedPolynomial d = wirtinger(wirtinger(p, 1, WirtKind::holo), 1, WirtKind::anti);
  CHECK(d == mono(2, 2, 1, 1, 9));
}

TEST_CASE("anti-wirtinger of a holomorphic term vanishes") {
  const MixedPolynomial re_z16 = bft::example11_P();  // has Re(z1^6) pieces
  const MixedPolynomial hol = mono(6, 0, 0, 0);       // z1^6
  CHECK(wirtinger(hol, 2, WirtKind::anti).is_zero());
  CHECK(wirtinger(hol, 1, WirtKind::anti).is_zero());
  CHECK_FALSE(re_z16.is_zero());
}

TEST_CASE("mixed second derivatives commute and are linear") {
  const MixedPolynomial p = bft::example11_full();
  const MixedPolynomial a = wirtinger(wirtinger(p, 1, WirtKind::holo), 2, WirtKind::anti);
  const MixedPolynomial b = wirtinger(wirtinger(p, 2, WirtKind::anti), 1, WirtKind::holo);
  CHECK(a == b);
}

TEST_CASE("weighted decomposition of Example 1.1 with weights (8,8)") {
  const WeightSignature w = WeightSignature::make(8, 8);
  const auto comps = weighted_decompose(bft::example11_full(), w);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].eta == make_rat(1));
  CHECK(comps[1].eta == make_rat(10, 8));
  CHECK(comps[0].part == bft::example11_P());
  CHECK(comps[1].part == bft::example11_Q());
  // sum reproduces the input exactly
  CHECK(comps[0].part + comps[1].part == bft::example11_full());
}

TEST_CASE("weighted decomposition: single component cases") {
  const auto c1 = weighted_decompose(mono(2, 2, 0, 0), WeightSignature::make(4, 6));
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].eta == make_rat(1));

  // swapped fixture |z2|^8 + |z2|^4 |z1|^2 at weights (4,8)
  const auto c2 = weighted_decompose(bft::weighted_P(), WeightSignature::make(4, 8));
  REQUIRE(c2.size() == 1);
  CHECK(c2[0].eta == make_rat(1));
}

TEST_CASE("scaling law holds at random points") {
  const WeightSignature w = WeightSignature::make(8, 8);
  const auto comps = weighted_decompose(bft::example11_full(), w);
  for (const auto& comp : comps) {
    const double eta = comp.eta.get_d();
    for (int i = 0; i < 100; ++i) {
      const C2 z = random_point(42, i);
      const double t = 0.1 + 3.0 * rng_u01(42, 7, i);
      const C2 zs{z.z1 * std::pow(t, 1.0 / w.m1), z.z2 * std::pow(t, 1.0 / w.m2)};
      const double lhs = comp.part.eval_real(zs);
      const double rhs = std::pow(t, eta) * comp.part.eval_real(z);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("infer_weights") {
  SUBCASE("Example 1.1 gives (8,8), flagged") {
    const auto iw = infer_weights(bft::example11_full());
    CHECK(iw.w.m1 == 8);
    CHECK(iw.w.m2 == 8);
    CHECK(iw.non_authoritative);
  }
  SUBCASE("|z1|^4 + |z2|^6 gives (4,6)") {
    const auto iw = infer_weights(mono(2, 2, 0, 0) + mono(0, 0, 3, 3));
    CHECK(iw.w.m1 == 4);
    CHECK(iw.w.m2 == 6);
  }
  SUBCASE("pluriharmonic-only input has no candidate") {
    const MixedPolynomial p = mono(2, 0, 0, 0, 1, 2) + mono(0, 2, 0, 0, 1, 2);  // Re(z1^2)
    CHECK_THROWS_AS(infer_weights(p), error);
  }
}

TEST_CASE("pluriharmonic_strip") {
  SUBCASE("|t1|^4 + Re(t1^3 t2^3) at D=6") {
    const MixedPolynomial p = mono(2, 2, 0, 0) + mono(3, 0, 3, 0, 1, 2) + mono(0, 3, 0, 3, 1, 2);
    const auto r = pluriharmonic_strip(p, 6);
    CHECK(r.q == mono(3, 0, 3, 0));  // q = t1^3 t2^3
    CHECK(r.rho == mono(2, 2, 0, 0));
  }
  SUBCASE("Example 1.1 unchanged at D=10") {
    const auto r = pluriharmonic_strip(bft::example11_full(), 10);
    CHECK(r.q.is_zero());
    CHECK(r.rho == bft::example11_full());
  }
  SUBCASE("|z2|^10 + Re(z2^8) at D=8") {
    const MixedPolynomial p = mono(0, 0, 5, 5) + mono(0, 0, 8, 0, 1, 2) + mono(0, 0, 0, 8, 1, 2);
    const auto r = pluriharmonic_strip(p, 8);
    CHECK(r.q == mono(0, 0, 8, 0));
    CHECK(r.rho == mono(0, 0, 5, 5));
  }
  SUBCASE("idempotent and value-consistent") {
    const MixedPolynomial p =
        bft::example11_full() + mono(2, 0, 1, 0, 3, 7) + mono(0, 2, 0, 1, 3, 7);
    const auto r = pluriharmonic_strip(p, 12);
    const auto r2 = pluriharmonic_strip(r.rho, 12);
    CHECK(r2.q.is_zero());
    CHECK(r2.rho == r.rho);
    for (int i = 0; i < 50; ++i) {
      const C2 z = random_point(7, i);
      const double lhs = r.rho.eval_real(z) + r.q.eval(z).real();
      const double rhs = p.eval_real(z);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("restrict_to_line") {
  SUBCASE("|z1|^2|z2|^2 along z1 = 2 z2 gives 4|t|^4") {
    const MixedPolynomial p = mono(1, 1, 1, 1);
    const MixedPolynomial r = restrict_to_line(p, ExactComplex::integer(2));
    CHECK(r == mono(2, 2, 0, 0, 4));
  }
  SUBCASE("Example 1.1 P along z1 = 0 vanishes") {
    CHECK(restrict_to_line(bft::example11_P(), ExactComplex::integer(0)).is_zero());
  }
  SUBCASE("Example 1.1 P on the normal line (t, c)") {
    const ExactComplex c{make_rat(1, 2), make_rat(1, 3)};
    const MixedPolynomial r = restrict_affine(bft::example11_P(), ExactComplex::integer(0), c,
                                              ExactComplex::integer(1), ExactComplex::integer(0));
    // |c|^2 |t|^6 + |t|^8 + (15/7)|t|^2 Re(t^6); lowest order 6
    CHECK(vanishing_order(r) == 6);
    const Rat c2 = c.re * c.re + c.im * c.im;
    CHECK(r.coeff(Expo{3, 3, 0, 0}) == ExactComplex::real(c2));
    CHECK(r.coeff(Expo{4, 4, 0, 0}) == ExactComplex::integer(1));
    CHECK(r.coeff(Expo{7, 1, 0, 0}) == ExactComplex::real(make_rat(15, 14)));
  }
}

TEST_CASE("pullback") {
  SUBCASE("|z1|^2|z2|^2 with sigma=(3,2)") {
    const WeightSignature w = WeightSignature::make(4, 6);  // sigma = (3, 2)
    CHECK(w.sigma1 == 3);
    CHECK(w.sigma2 == 2);
    CHECK(pullback(mono(1, 1, 1, 1), w) == mono(3, 3, 2, 2));
  }
  SUBCASE("identity when sigma=(1,1)") {
    const WeightSignature w = WeightSignature::make(8, 8);
    CHECK(pullback(bft::example11_full(), w) == bft::example11_full());
  }
  SUBCASE("|z1|^6 with sigma=(2,1)") {
    const WeightSignature w = WeightSignature::make(4, 8);
    CHECK(w.sigma1 == 2);
    CHECK(pullback(mono(3, 3, 0, 0), w) == mono(6, 6, 0, 0));
  }
  SUBCASE("fact on weights: degree of pullback is nu * eta") {
    const WeightSignature w = WeightSignature::make(4, 6);
    const MixedPolynomial p = mono(1, 1, 1, 1) + mono(2, 2, 0, 0) + mono(0, 0, 2, 2, 5, 3);
    for (const auto& comp : weighted_decompose(p, w)) {
      const auto deg = pullback(comp.part, w).homogeneous_degree();
      REQUIRE(deg.has_value());
      CHECK(make_rat(*deg) == comp.eta * w.nu);
    }
  }
  SUBCASE("pushdown inverts pullback and rejects non-lattice support") {
    const WeightSignature w = WeightSignature::make(4, 6);
    const MixedPolynomial p = mono(1, 1, 1, 1) + mono(2, 2, 0, 0);
    CHECK(pushdown(pullback(p, w), w) == p);
    CHECK_THROWS_AS(pushdown(mono(1, 0, 0, 0), w), error);
  }
}

TEST_CASE("real-valuedness bookkeeping") {
  CHECK(bft::example11_full().is_real_valued());
  CHECK_FALSE(mono(1, 0, 0, 0).is_real_valued());
  CHECK(bft::example11_P().has_pluriharmonic_terms() == false);
  CHECK((mono(2, 0, 0, 0, 1, 2) + mono(0, 2, 0, 0, 1, 2)).has_pluriharmonic_terms());
}

TEST_CASE("shear and swap") {
  const MixedPolynomial p = mono(1, 1, 1, 1);
  // |z1 + z2|^2 |z2|^2 evaluated both ways
  const MixedPolynomial sh = shear(p, ExactComplex::integer(1));
  for (int i = 0; i < 20; ++i) {
    const C2 z = random_point(3, i);
    const C2 zs{z.z1 + z.z2, z.z2};
    CHECK(std::abs(sh.eval_real(z) - p.eval_real(zs)) <= 1e-12);
  }
  CHECK(swap_vars(bft::weighted_P()) == bft::mono(4, 4, 0, 0) + bft::mono(2, 2, 1, 1));
}
