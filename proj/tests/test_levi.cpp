#include "bumpforge/levi.hpp"

#include <cmath>

#include "bumpforge/rng.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bumpforge;
using bft::mono;

namespace {
C2 random_point(std::uint64_t seed, std::int64_t i, double lo = 0.3, double hi = 1.5) {
  const double r = rng_loguniform(seed, 31, i, lo, hi);
  C2 z = sample_sphere3(seed, i);
  return {z.z1 * r, z.z2 * r};
}

MixedPolynomial random_real_poly(std::uint64_t seed, int maxdeg) {
  MixedPolynomial p;
  for (int t = 0; t < 8; ++t) {
    auto ri = [&](std::uint64_t s, int lo, int hi) {
      return lo + static_cast<int>(rng_u01(seed, s, t) * (hi - lo + 1));
    };
    Expo e{ri(1, 0, maxdeg / 2), ri(2, 0, maxdeg / 2), ri(3, 0, maxdeg / 2), ri(4, 0, maxdeg / 2)};
    while (e.total() > maxdeg) {
      if (e.a1 > 0) --e.a1;
      else if (e.b1 > 0) --e.b1;
      else if (e.a2 > 0) --e.a2;
      else --e.b2;
    }
    const ExactComplex c{make_rat(ri(5, -20, 20), 7), make_rat(ri(6, -20, 20), 11)};
    p.add_term(e, c);
    p.add_term(e.conj(), c.conj());
  }
  return p;
}
}  // namespace

TEST_CASE("hessian of |z1|^2 is diag(1, 0)") {
  const HessianField h = hessian(mono(1, 1, 0, 0));
  CHECK(h.h11 == MixedPolynomial::constant(ExactComplex::integer(1)));
  CHECK(h.h12.is_zero());
  CHECK(h.h22.is_zero());
}

TEST_CASE("hessian of |z1|^2 + |z2|^2 is the identity") {
  const HessianField h = hessian(mono(1, 1, 0, 0) + mono(0, 0, 1, 1));
  const C2 z{{0.3, 0.7}, {-0.2, 0.1}};
  const C2 v{{1.0, 2.0}, {-0.5, 0.25}};
  CHECK(levi_value(h, z, v) == doctest::Approx(norm2(v)).epsilon(1e-14));
}

TEST_CASE("hessian of |z1|^8 + |z1|^4|z2|^2, det = 16|z1|^10") {
  const MixedPolynomial p = mono(4, 4, 0, 0) + mono(2, 2, 1, 1);
  const HessianField h = hessian(p);
  CHECK(h.h11 == mono(3, 3, 0, 0, 16) + mono(1, 1, 1, 1, 4));
  CHECK(h.h22 == mono(2, 2, 0, 0));
  CHECK(h.h12 == MixedPolynomial::monomial(Expo{1, 2, 1, 0}, ExactComplex::integer(2)));
  const MixedPolynomial det = h.h11 * h.h22 - h.h12 * h.h12.conj();
  CHECK(det == mono(5, 5, 0, 0, 16));
}

TEST_CASE("levi values are real for real-valued sources") {
  const HessianField h = hessian(bft::example11_full());
  for (int i = 0; i < 50; ++i) {
    const C2 z = random_point(11, i);
    const ComplexHessian ch = h.at(z);
    const C2 v = random_point(12, i);
    const std::complex<double> full =
        ch.h11 * std::norm(v.z1) + ch.h22 * std::norm(v.z2) +
        ch.h12 * v.z1 * std::conj(v.z2) + std::conj(ch.h12) * std::conj(v.z1) * v.z2;
    CHECK(std::abs(full.imag()) <= 1e-12 * (1.0 + std::abs(full.real())));
  }
}

TEST_CASE("analytic vs finite-difference hessians on random polynomials") {
  // 10 random real-valued polynomials of degree <= 10, 100 points each
  for (std::uint64_t k = 0; k < 10; ++k) {
    const MixedPolynomial p = random_real_poly(1000 + k, 10);
    const HessianField h = hessian(p);
    auto f = [&](const C2& z) { return p.eval_real(z); };
    for (int i = 0; i < 100; ++i) {
      const C2 z = random_point(500 + k, i);
      const double step = 1e-4 * (1.0 + cnorm(z));
      const ComplexHessian fd = fd_complex_hessian(f, z, step);
      const ComplexHessian an = h.at(z);
      const double scale = std::abs(an.h11) + std::abs(an.h22) + std::abs(an.h12) + 1.0;
      CHECK(std::abs(fd.h11 - an.h11) / scale <= 1e-6);
      CHECK(std::abs(fd.h22 - an.h22) / scale <= 1e-6);
      CHECK(std::abs(fd.h12 - an.h12) / scale <= 1e-6);
    }
  }
}

TEST_CASE("levi form homogeneity") {
  const MixedPolynomial p = bft::example11_P();  // homogeneous degree 8
  const HessianField h = hessian(p);
  for (int i = 0; i < 30; ++i) {
    const C2 z = random_point(21, i);
    const C2 v = random_point(22, i);
    const double t = 0.2 + 2.0 * rng_u01(23, 0, i);
    const C2 zt{z.z1 * t, z.z2 * t};
    const double lhs = levi_value(h, zt, v);
    const double rhs = std::pow(t, 6.0) * levi_value(h, z, v);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("check_psh verdicts") {
  SUBCASE("|z1|^2 + |z2|^2 passes with min eigenvalue 1") {
    const auto rep = check_psh(mono(1, 1, 0, 0) + mono(0, 0, 1, 1), Region::ball(), 2000, 3);
    CHECK(rep.verdict == Verdict::PASS);
    CHECK(rep.min_scaled_eig == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("-|z1|^2 fails with a witness") {
    const auto rep = check_psh(mono(1, 1, 0, 0, -1), Region::ball(), 2000, 3);
    CHECK(rep.verdict == Verdict::FAIL);
    REQUIRE(rep.has_witness);
    const HessianField h = hessian(mono(1, 1, 0, 0, -1));
    CHECK(h.at(rep.witness).eigmin() < -rep.tol);
  }
  SUBCASE("Example 1.1 weight-1 part passes on the ball") {
    const auto rep = check_psh(bft::example11_P(), Region::ball(), 5000, 7);
    CHECK(rep.verdict == Verdict::PASS);
  }
}

TEST_CASE("strict_psh_lower_bound") {
  SUBCASE("||z||^4 has a positive bound on the sphere") {
    const double b = strict_psh_lower_bound(bft::hext_P(), Region::ball(1.0, 0.5), 2000, 5);
    CHECK(b > 0.0);
  }
  SUBCASE("Example 1.1: zero at the line, positive on a shell") {
    const MixedPolynomial p = bft::example11_P();
    const double on_line =
        strict_psh_lower_bound(p, Region::cone_shell({0, 0}, false, 0.0, 0.1, true), 3000, 5);
    CHECK(on_line <= 1e-6);
    const double on_shell =
        strict_psh_lower_bound(p, Region::cone_shell({0, 0}, false, 0.05, 0.1), 3000, 5);
    CHECK(on_shell > 0.0);
  }
  SUBCASE("|z1|^4 is 0 on any region meeting {z1 = 0}") {
    const double b =
        strict_psh_lower_bound(mono(2, 2, 0, 0), Region::cone_shell({0, 0}, false, 0.0, 0.3, true),
                               2000, 5);
    CHECK(b == 0.0);
  }
}
