#include "bumpforge/fsbump.hpp"

#include <cmath>

#include "bumpforge/fd.hpp"
#include "bumpforge/parse.hpp"
#include "bumpforge/rng.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bumpforge;
using bft::mono;

namespace {
constexpr double kTwoPi = 6.283185307179586;

// |s|^6 + (9/8)|s|^4 Re(s^2): Laplacian on the circle is 36(1 + cos 2theta),
// zeros at pi/2 and 3pi/2.
MixedPolynomial fs_fixture() {
  return mono(3, 3, 0, 0) + mono(4, 2, 0, 0, 9, 16) + mono(2, 4, 0, 0, 9, 16);
}
}  // namespace

TEST_CASE("circle profile of |s|^2") {
  const auto prof = circle_profile(mono(1, 1, 0, 0));
  CHECK(prof.degree2m == 2);
  CHECK(prof.zeros.empty());
  CHECK(prof.laplacian_on_circle.is_constant());
  CHECK(prof.laplacian_on_circle.constant_term() == ExactComplex::integer(4));
  CHECK(prof.min_laplacian == doctest::Approx(4.0));
}

TEST_CASE("circle profile of the cap fixture has zeros at pi/2, 3pi/2") {
  const auto prof = circle_profile(fs_fixture());
  CHECK(prof.degree2m == 6);
  REQUIRE(prof.zeros.size() == 2);
  CHECK(std::abs(prof.zeros[0] - kTwoPi / 4) < 1e-6);
  CHECK(std::abs(prof.zeros[1] - 3 * kTwoPi / 4) < 1e-6);
  // Laplacian = 36 + 36 cos 2theta
  CHECK(prof.laplacian_on_circle.eval(0.0) == doctest::Approx(72.0).epsilon(1e-12));
  CHECK(prof.laplacian_on_circle.eval(kTwoPi / 8) == doctest::Approx(36.0).epsilon(1e-12));
  // derivative is exact too
  const TrigPoly d = prof.laplacian_on_circle.derivative();
  CHECK(d.eval(kTwoPi / 8) == doctest::Approx(-72.0).epsilon(1e-12));
}

TEST_CASE("harmonic input is rejected") {
  const MixedPolynomial re_s4 = mono(4, 0, 0, 0, 1, 2) + mono(0, 4, 0, 0, 1, 2);
  CHECK_THROWS_AS(circle_profile(re_s4), error);
  try {
    circle_profile(re_s4);
  } catch (const error& e) {
    CHECK(e.code() == errc::harmonic);
  }
}

TEST_CASE("non-subharmonic input is rejected with a witness angle") {
  try {
    circle_profile(mono(1, 1, 0, 0, -1));
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::not_subharmonic);
    CHECK(std::string(e.what()).find("theta") != std::string::npos);
  }
}

TEST_CASE("quintic B-spline basics") {
  // interpolation weights at integer offsets: (1, 26, 66, 26, 1)/120
  CHECK(PeriodicSpline::basis(3.0, 0) == doctest::Approx(66.0 / 120).epsilon(1e-14));
  CHECK(PeriodicSpline::basis(2.0, 0) == doctest::Approx(26.0 / 120).epsilon(1e-14));
  CHECK(PeriodicSpline::basis(1.0, 0) == doctest::Approx(1.0 / 120).epsilon(1e-14));
  CHECK(PeriodicSpline::basis(0.0, 0) == 0.0);

  // interpolates smooth periodic data with small error, C2 derivatives
  const int n = 256;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i)
    vals[static_cast<std::size_t>(i)] = std::sin(kTwoPi * i / n) + 0.3 * std::cos(3 * kTwoPi * i / n);
  const PeriodicSpline s = PeriodicSpline::interpolate(vals);
  for (int i = 0; i < n; ++i)
    CHECK(std::abs(s.eval(kTwoPi * i / n, 0) - vals[static_cast<std::size_t>(i)]) < 1e-12);
  for (double th : {0.1, 1.7, 4.2}) {
    const double exact = std::sin(th) + 0.3 * std::cos(3 * th);
    const double exact2 = -std::sin(th) - 2.7 * std::cos(3 * th);
    CHECK(std::abs(s.eval(th, 0) - exact) < 1e-8);
    CHECK(std::abs(s.eval(th, 2) - exact2) < 1e-4);
  }
}

TEST_CASE("constant-profile bump for |s|^2") {
  const auto prof = circle_profile(mono(1, 1, 0, 0));
  const RadialBump b = construct_radial_bump(prof, 0.2);
  CHECK(b.constant_profile);
  CHECK(b.C1 > 0.0);
  CHECK(b.floor > 0.0);
  CHECK(b.floor <= 1.0);
  const auto rep = verify_radial_bump(mono(1, 1, 0, 0), b, {1.0, 0.5, 0.125}, 8192);
  CHECK(rep.worst_margin >= 0.0);
  CHECK(rep.h_min > 0.0);
  CHECK(rep.h_max <= 1.0 + 1e-12);
}

TEST_CASE("cap-profile bump for the acceptance fixture") {
  const MixedPolynomial u = fs_fixture();
  const auto prof = circle_profile(u);
  const RadialBump b = construct_radial_bump(prof, 0.2);
  CHECK_FALSE(b.constant_profile);
  CHECK(b.C1 > 0.0);
  CHECK(b.C2 > 0.0);
  CHECK(b.floor > 0.0);

  const auto rep = verify_radial_bump(u, b, {1.0, 0.5, 0.125}, 8192);
  CHECK(rep.worst_margin >= 0.0);
  CHECK(rep.c2_margin >= 0.0);
  CHECK(rep.h_min > 0.0);
  CHECK(rep.h_max <= 1.0);

  // delta = 0 margin equals min of the circle Laplacian (= 0 here)
  const auto rep0 = verify_radial_bump(u, b, {0.0}, 4096);
  CHECK(rep0.per_delta[0].second == doctest::Approx(0.0).epsilon(1e-6));

  // composite Laplacian really is positive: FD cross-check on the circle
  for (int i = 0; i < 40; ++i) {
    const double th = kTwoPi * (i + 0.25) / 40;
    const std::complex<double> s = std::polar(1.0, th);
    auto composite = [&](const std::complex<double>& w) {
      return u.eval_real(C2{w, {0.0, 0.0}}) - b.F(w);
    };
    const double lap = fd_laplacian(composite, s, 1e-5);
    CHECK(lap >= b.C1 - 1e-3);
  }
}

TEST_CASE("tampered bump reports a negative margin") {
  const MixedPolynomial u = fs_fixture();
  const auto prof = circle_profile(u);
  RadialBump b = construct_radial_bump(prof, 0.2);
  b.amp = std::min(0.99, b.amp * 10.0);
  for (std::size_t i = 0; i < b.grid.size(); ++i)
    b.grid[i] = b.h(kTwoPi * static_cast<double>(i) / static_cast<double>(b.grid.size()));
  const auto rep = verify_radial_bump(u, b, {1.0}, 8192);
  CHECK(rep.worst_margin < 0.0);
}

TEST_CASE("margins are affine in delta") {
  const MixedPolynomial u = fs_fixture();
  const auto prof = circle_profile(u);
  const RadialBump b = construct_radial_bump(prof, 0.2);
  for (double th : {0.3, 1.1, 2.9, 4.4}) {
    const double L = prof.laplacian_on_circle.eval(th);
    auto g = [&](double d) { return L - d * b.Q(th) - d * b.C1; };
    const double lhs = g(0.5) - 0.5 * (g(0.0) + g(1.0));
    CHECK(std::abs(lhs) <= 1e-9 * (1.0 + std::abs(g(1.0))));
  }
}

TEST_CASE("homogeneity: scaling by r^{2m-2}") {
  const MixedPolynomial u = fs_fixture();
  const auto prof = circle_profile(u);
  const RadialBump b = construct_radial_bump(prof, 0.2);
  auto composite = [&](const std::complex<double>& w) {
    return u.eval_real(C2{w, {0.0, 0.0}}) - 0.5 * b.F(w);
  };
  for (double r : {0.1, 10.0}) {
    for (double th : {0.4, 2.0, 5.1}) {
      const std::complex<double> s1 = std::polar(1.0, th);
      const std::complex<double> sr = std::polar(r, th);
      const double base = fd_laplacian(composite, s1, 1e-5);
      const double scaled = fd_laplacian(composite, sr, 1e-5 * r);
      CHECK(std::abs(scaled - std::pow(r, b.degree2m - 2) * base) <=
            1e-5 * (1.0 + std::abs(scaled)));
    }
  }
}

TEST_CASE("boundary zero triggers the frame rotation") {
  // flip the sign of the Re(s^2) part: zeros move to 0 and pi
  const MixedPolynomial u = mono(3, 3, 0, 0) + mono(4, 2, 0, 0, -9, 16) + mono(2, 4, 0, 0, -9, 16);
  const auto prof = circle_profile(u);
  REQUIRE(prof.zeros.size() == 2);
  CHECK(std::abs(prof.zeros[0]) < 1e-6);
  const RadialBump b = construct_radial_bump(prof, 0.2);
  CHECK(b.rot != 0.0);
  CHECK(b.C1 > 0.0);
  const auto rep = verify_radial_bump(u, b, {1.0, 0.5, 0.125}, 8192);
  CHECK(rep.worst_margin >= 0.0);
}
