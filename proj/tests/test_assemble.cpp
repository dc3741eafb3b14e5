#include "bumpforge/assemble.hpp"

#include <cmath>

#include "bumpforge/parse.hpp"
#include "bumpforge/rng.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bumpforge;
using bft::mono;

namespace {
AssembledG assemble_fixture(const MixedPolynomial& P, const MixedPolynomial& Q, int m1, int m2) {
  const WeightSignature w = WeightSignature::make(m1, m2);
  auto curves = find_exceptional(P, w);
  for (auto& c : curves) curve_invariants(P, Q, w, c);
  return assemble_G(P, Q, w, curves);
}
}  // namespace

TEST_CASE("line terms for Example 1.1") {
  const WeightSignature w = WeightSignature::make(8, 8);
  auto curves = find_exceptional(bft::example11_P(), w);
  REQUIRE(curves.size() == 1);
  curve_invariants(bft::example11_P(), bft::example11_Q(), w, curves[0]);
  const MixedPolynomial R = bft::example11_full();
  const auto lt = line_terms(R, curves[0], curves[0].twoM);
  CHECK(lt.twoM == 10);
  CHECK(lt.u0 == mono(5, 5, 0, 0));  // u(s) = |s|^10
  CHECK(lt.h.constant_profile);
  CHECK(lt.h.floor > 0.0);
  CHECK(lt.h.C1 > 0.0);
}

TEST_CASE("line terms reject a pluriharmonic-only restriction") {
  // plant Re(z2^10) as the only degree-10 piece on the line z1 = 0
  const MixedPolynomial rho =
      bft::example11_P() + mono(0, 0, 10, 0, 1, 2) + mono(0, 0, 0, 10, 1, 2);
  const WeightSignature w = WeightSignature::make(8, 8);
  auto curves = find_exceptional(bft::example11_P(), w);
  try {
    line_terms(rho, curves[0], 10);
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::harmonic);
  }
}

TEST_CASE("assembled G for Example 1.1") {
  const AssembledG G = assemble_fixture(bft::example11_P(), bft::example11_Q(), 8, 8);
  REQUIRE(G.curves.size() == 1);
  CHECK(G.delta0 > 0.0);
  CHECK(G.r0 > 0.0);
  CHECK(G.delta == doctest::Approx(G.delta0 / 2));

  // piecewise identities: on the wedge Gamma = Pi - delta H + (u - delta h)(t2),
  // off the wedges Gamma = Pi - delta H; 1000 points each at 1e-10 relative
  const auto& b = G.curves[0];
  int on = 0, off = 0;
  const SamplePlan plan{5, 4000, 1e-3 * G.r0, 0.9 * G.r0};
  for (int i = 0; i < 1000; ++i) {
    const C2 t = sample_cone({0, 0}, false, 0.0, b.alpha, true, plan, i);
    ++on;
    const double g = G.eval(t);
    const double expect =
        G.Pi_fast.eval_real(t) - G.delta * G.eval_H(t) + b.u(0, t.z2) - G.delta * b.h(0, t.z2);
    CHECK(std::abs(g - expect) <= 1e-10 * std::abs(expect) + 1e-300);
  }
  for (int i = 0; i < 4000 && off < 1000; ++i) {
    const C2 t = sample_ball(plan, i);
    if (b.lines[0].aperture(t) < 2.05 * b.alpha) continue;
    ++off;
    const double g = G.eval(t);
    const double expect = G.Pi_fast.eval_real(t) - G.delta * G.eval_H(t);
    CHECK(std::abs(g - expect) <= 1e-10 * std::abs(expect) + 1e-300);
  }
  CHECK(on == 1000);
  CHECK(off == 1000);

  // H vanishes exactly on the line, and is positive elsewhere
  CHECK(G.eval_H(C2{{0.0, 0.0}, {0.7, 0.2}}) == 0.0);
  CHECK(G.eval_H(C2{{0.5, 0.1}, {0.7, 0.2}}) > 0.0);
  CHECK(G.eval_H(C2{{0.01, 0.0}, {1.0, 0.0}}) > 0.0);

  // strict plurisubharmonicity margin on a mid-aperture shell
  double worst = 1e300;
  for (int i = 0; i < 2000; ++i) {
    SamplePlan plan{11, 2000, 0.05 * G.r0, 0.5 * G.r0};
    const C2 t = sample_cone({0, 0}, false, 0.05, 0.3, false, plan, i);
    worst = std::min(worst, G.levi(t).eigmin() / std::pow(cnorm(t), G.w.nu - 2.0));
  }
  CHECK(worst > 0.0);
}

TEST_CASE("empty curve set degenerates to Pi - delta H0") {
  const AssembledG G = assemble_fixture(bft::hext_P(), MixedPolynomial{}, 4, 4);
  CHECK(G.curves.empty());
  CHECK(G.ambient.delta_max > 0.0);
  for (int i = 0; i < 500; ++i) {
    SamplePlan plan{3, 500, 1e-2, 0.9};
    const C2 t = sample_ball(plan, i);
    const double expect = G.Pi_fast.eval_real(t) - G.delta * G.ambient.eval_H0(t);
    CHECK(std::abs(G.eval(t) - expect) <= 1e-12 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("weighted fixture: the degenerate pullback axis gets a cluster line") {
  const AssembledG G = assemble_fixture(bft::weighted_P(), bft::weighted_Q(), 4, 8);
  REQUIRE(G.curves.size() == 1);
  CHECK(G.curves[0].axis2);
  // pullback Pi = |t2|^8 + |t1|^4 |t2|^4 degenerates along {t1 = 0}, which is
  // not exceptional; the ambient bump must carry a concave cluster there
  REQUIRE(G.ambient.clusters.size() == 1);
  CHECK_FALSE(G.ambient.clusters[0].frame.axis2);
  CHECK(std::abs(G.ambient.clusters[0].frame.omega) < 1e-12);
  CHECK(G.ambient.delta_max > 0.0);
  CHECK(G.delta0 > 0.0);
}

TEST_CASE("planted degeneracy off any admissible line fails with NoPositiveDelta") {
  // rank-one pullback degenerate everywhere: |t1^2 - t2^2|^2 with fake curve
  // data carrying only the two exceptional lines +-1
  const MixedPolynomial Pi = parse_expression("|z1^2 - z2^2|^2");
  std::vector<CurveBundle> curves;  // pretend no curves: degeneracy everywhere off lines
  try {
    build_ambient_bump(Pi, curves);
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::no_positive_delta);
  }
}

TEST_CASE("delta override beyond delta0 is rejected") {
  const WeightSignature w = WeightSignature::make(8, 8);
  auto curves = find_exceptional(bft::example11_P(), w);
  for (auto& c : curves) curve_invariants(bft::example11_P(), bft::example11_Q(), w, c);
  AssembleOptions opts;
  opts.delta_override = 1.0;
  try {
    assemble_G(bft::example11_P(), bft::example11_Q(), w, curves, opts);
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::delta_too_large);
  }
}

TEST_CASE("decay constants for Example 1.1") {
  const AssembledG G = assemble_fixture(bft::example11_P(), bft::example11_Q(), 8, 8);
  const DecayConstants dc = fit_decay_constants(G, 1, 4000);
  REQUIRE(dc.per_curve.size() == 1);
  CHECK(dc.per_curve[0].C > 0.0);
  CHECK(dc.per_curve[0].r_delta > 0.0);
  CHECK(dc.global_C > 0.0);

  // monotonicity: the fitted constant does not increase when delta decreases
  AssembledG Ghalf = G;
  Ghalf.delta = 0.5 * G.delta;
  const DecayConstants dc2 = fit_decay_constants(Ghalf, 1, 4000);
  CHECK(dc2.per_curve[0].C <= dc.per_curve[0].C * 1.001);

  // inflating the wedge term kills the decay: no positive radius
  AssembledG bad = G;
  bad.curves[0].Pi2M_fast = FastPoly(bad.curves[0].Pi2M.scaled(ExactComplex::integer(3)));
  CHECK_THROWS_AS(fit_decay_constants(bad, 1, 2000), error);
}

TEST_CASE("continuity across the cutoff collar") {
  const AssembledG G = assemble_fixture(bft::example11_P(), bft::example11_Q(), 8, 8);
  const auto& b = G.curves[0];
  // finite-difference gradient jumps across sampled collar points stay small
  for (int i = 0; i < 200; ++i) {
    SamplePlan plan{21, 200, 0.1, 0.4};
    const C2 t = sample_cone({0, 0}, false, 0.95 * b.alpha, 1.05 * b.alpha, false, plan, i);
    const double h = 1e-6 * cnorm(t);
    const double gx1 = (G.eval(C2{t.z1 + h, t.z2}) - G.eval(C2{t.z1 - h, t.z2})) / (2 * h);
    const double gx2 = (G.eval(C2{t.z1 + 2 * h, t.z2}) - G.eval(C2{t.z1 - 2 * h, t.z2})) / (4 * h);
    CHECK(std::abs(gx1 - gx2) <= 1e-6 * (1.0 + std::abs(gx1)));
  }
}
