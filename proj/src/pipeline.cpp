#include "bumpforge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bumpforge/errors.hpp"
#include "bumpforge/parse.hpp"
#include "bumpforge/sample.hpp"
#include "bumpforge/verify.hpp"

namespace bumpforge {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

ModelDomain validate_domain(const MixedPolynomial& full, const WeightSignature& w,
                            std::string name, std::string source, std::uint64_t seed) {
  if (full.is_zero()) fail(errc::q_weight_too_low, "empty defining polynomial");
  if (!full.is_real_valued()) fail(errc::not_psh, "defining polynomial must be real-valued");
  if (w.nu % 2 != 0 || w.nu < 4)
    fail(errc::not_applicable, "lcm(m1, m2) must be even and >= 4 for the bumping theorem");

  ModelDomain dom;
  dom.w = w;
  dom.name = std::move(name);
  dom.source_text = std::move(source);
  for (const auto& comp : weighted_decompose(full, w)) {
    if (comp.eta < 1)
      fail(errc::q_weight_too_low,
           "terms of weighted degree " + std::to_string(comp.eta.get_d()) + " < 1");
    if (comp.eta == 1) dom.P = comp.part;
    else dom.Q = dom.Q + comp.part;
  }
  if (dom.P.is_zero()) fail(errc::q_weight_too_low, "no weight-1 component");
  if (dom.P.has_pluriharmonic_terms())
    fail(errc::pluriharmonic_in_p, "weight-1 part carries pluriharmonic terms");
  const PshReport rep = check_psh(dom.P, Region::weighted_sphere(w), 4000, seed);
  if (rep.verdict == Verdict::FAIL) {
    std::ostringstream os;
    os << "weight-1 part is not plurisubharmonic; witness z = (" << rep.witness.z1 << ", "
       << rep.witness.z2 << ")";
    fail(errc::not_psh, os.str());
  }
  return dom;
}

double branch_average(const std::function<double(const C2&)>& F, const WeightSignature& w,
                      const C2& z) {
  double acc = 0.0;
  const auto pre = branch_preimages(z, w);
  for (const C2& t : pre) acc += F(t);
  return acc / static_cast<double>(pre.size());
}

bool deck_invariant(const std::function<double(const C2&)>& F, const WeightSignature& w,
                    std::int64_t samples, std::uint64_t seed, double tol, C2* witness) {
  for (std::int64_t i = 0; i < samples; ++i) {
    const C2 t = sample_ball(SamplePlan{seed, samples, 0.05, 1.0}, i);
    const double base = F(t);
    for (int l = 0; l < w.sigma1; ++l)
      for (int m = 0; m < w.sigma2; ++m) {
        const C2 rt{t.z1 * std::polar(1.0, kTwoPi * l / w.sigma1),
                    t.z2 * std::polar(1.0, kTwoPi * m / w.sigma2)};
        if (std::abs(F(rt) - base) > tol * (1.0 + std::abs(base))) {
          if (witness) *witness = rt;
          return false;
        }
      }
  }
  return true;
}

MixedPolynomial pushdown_coordinate_change(const MixedPolynomial& q, const WeightSignature& w) {
  for (const auto& [e, c] : q.terms())
    if (e.b1 != 0 || e.b2 != 0)
      fail(errc::non_lattice_monomial, "coordinate change must be holomorphic");
  return pushdown(q, w);
}

double eval_G_z(const AssembledG& G, const C2& z) {
  return branch_average([&](const C2& t) { return G.eval(t); }, G.w, z);
}

double eval_H0cal_z(const AssembledG& G, const C2& z) {
  return 0.5 * G.delta0 *
         branch_average([&](const C2& t) { return G.eval_H(t); }, G.w, z);
}

double wedge_aperture(const AssembledG& G, std::size_t curve, const C2& z) {
  const auto& b = G.curves[curve];
  double best = std::numeric_limits<double>::infinity();
  for (const C2& t : branch_preimages(z, G.w))
    for (const auto& f : b.lines) best = std::min(best, f.aperture(t));
  return best;
}

double eval_v(const AssembledG& G, std::size_t curve, const std::complex<double>& x) {
  const auto& b = G.curves[curve];
  // core point of the curve over x, then the branch enumeration assigns each
  // preimage to its line; the value is the wedge identity at the core
  C2 zstar;
  std::complex<double> s0;
  if (b.axis2) {
    s0 = std::polar(std::pow(std::abs(x), 1.0 / G.w.sigma1), std::arg(x) / G.w.sigma1);
    zstar = {x, {0.0, 0.0}};
  } else {
    s0 = std::polar(std::pow(std::abs(x), 1.0 / G.w.sigma2), std::arg(x) / G.w.sigma2);
    const std::complex<double> t1 = b.lines[0].omega * s0;
    zstar = {std::pow(t1, G.w.sigma1), x};
  }
  const auto pre = branch_preimages(zstar, G.w);
  double acc = 0.0;
  for (const C2& t : pre) {
    // nearest line of the bundle
    std::size_t kbest = 0;
    double abest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < b.lines.size(); ++k) {
      const double ap = b.lines[k].aperture(t);
      if (ap < abest) {
        abest = ap;
        kbest = k;
      }
    }
    const std::complex<double> s = b.axis2 ? t.z1 : t.z2;
    acc += b.u(kbest, s) - G.delta * b.h(kbest, s);
  }
  return acc / static_cast<double>(pre.size());
}

AssembledG reassemble(const BumpCertificate& cert) {
  AssembledG G;
  G.w = cert.w;
  G.Pi = pullback(cert.P, cert.w);
  const MixedPolynomial R = pullback(cert.P + cert.Q, cert.w);
  int D = G.Pi.total_degree();
  for (const auto& c : cert.curves) D = std::max(D, c.twoM);
  G.rho = pluriharmonic_strip(R, D).rho;
  G.Pi_fast = FastPoly(G.Pi);
  G.rho_fast = FastPoly(G.rho);
  G.Pi_hess = FastHessian(G.Pi);
  G.ambient = cert.ambient;
  G.delta0 = cert.delta0;
  G.r0 = cert.r0;
  G.delta = 0.5 * cert.delta0;
  const long N = static_cast<long>(cert.w.sigma1) * cert.w.sigma2;
  for (const auto& c : cert.curves) {
    CurveBundle b;
    b.axis2 = c.xi_infinite;
    b.omega0 = c.omega0;
    b.mu = c.mu;
    b.twoM = c.twoM;
    b.alpha = c.alpha;
    b.cone = c.cone;
    b.hline = c.hline;
    b.urot = c.urot;
    b.hshift = c.hshift;
    if (b.axis2 || c.xi.is_zero()) {
      LineFrame f;
      f.axis2 = b.axis2;
      b.lines.push_back(f);
      if (b.urot.empty()) b.urot.push_back(0.0);
      if (b.hshift.empty()) b.hshift.push_back(0.0);
    } else {
      const std::complex<double> w0 = c.omega0.to_complex();
      for (long k = 0; k < N; ++k) {
        LineFrame f;
        f.omega = w0 * std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(N));
        b.lines.push_back(f);
      }
    }
    b.Pi2M = homogeneous_part(G.rho, c.twoM);
    b.Pi2M_fast = FastPoly(b.Pi2M);
    G.curves.push_back(std::move(b));
  }
  return G;
}

MixedPolynomial defining_function_z(const BumpCertificate& cert) {
  const MixedPolynomial re_f =
      (cert.f + cert.f.conj()).scaled(ExactComplex{make_rat(1, 2), Rat(0)});
  return cert.P + cert.Q - re_f;
}

AnalyzeResult analyze(const MixedPolynomial& full, const WeightSignature& w,
                      const BumpOptions& opts, ExecPolicy exec) {
  AnalyzeResult res;
  res.domain = validate_domain(full, w, {}, {}, opts.seed);
  res.curves = find_exceptional(res.domain.P, w);
  SeparationOptions sopts;
  sopts.seed = opts.seed;
  sopts.samples = std::max<std::int64_t>(opts.samples, 2048);
  res.classification = separation_check(res.domain.P, w, res.curves, sopts, exec);
  if (res.classification.verdict != Classification::V::NOT_APPLICABLE)
    for (auto& c : res.curves) curve_invariants(res.domain.P, res.domain.Q, w, c);
  return res;
}

KChoice choose_K(const BumpCertificate& cert, const AssembledG& G, std::uint64_t seed,
                 std::int64_t samples, ExecPolicy exec) {
  const MixedPolynomial rho_z = defining_function_z(cert);
  const FastPoly rho_fast(rho_z);
  const double expo = (static_cast<double>(cert.Delta) + 1.0) / cert.w.nu;
  // z-ball radius comparable to the pullback-side ball r0
  const double R_top =
      0.5 * std::min(std::pow(G.r0, cert.w.sigma1), std::pow(G.r0, cert.w.sigma2));

  for (double K = 1.0; K <= double(1 << 20); K *= 2.0) {
    double R = std::min(R_top, 1.0 / (4.0 * K));
    for (int halve = 0; halve < 30; ++halve, R *= 0.5) {
      SamplePlan plan{seed + static_cast<std::uint64_t>(halve), samples, 1e-4, 1.0};
      const double Rc = R;
      const MinSweepResult m = min_sweep(
          samples,
          [&](std::int64_t i) -> double {
            // weighted-ball point scaled into B(0, R); every 5th sample sits
            // on the z = 0 slab where only -K beta^2 provides negativity
            C2 z{};
            if (i % 5 != 0) {
              const C2 s = sample_weighted_ball(cert.w, plan, i);
              z = {s.z1 * Rc, s.z2 * Rc};
            }
            const double sigma = std::pow(std::abs(z.z1), cert.w.m1) +
                                 std::pow(std::abs(z.z2), cert.w.m2);
            double beta = 0.0;
            if (i % 4 != 1)
              beta = (rng_u01(plan.seed, 71, i) < 0.5 ? 1.0 : -1.0) *
                     rng_loguniform(plan.seed, 72, i, 1e-6 * Rc, Rc);
            double slack = 0.0;  // interior depth: alpha = -rho - slack
            if (i % 7 == 3) slack = rng_loguniform(plan.seed, 73, i, 1e-6 * Rc, Rc);
            if (z.z1 == std::complex<double>(0.0, 0.0) && z.z2 == z.z1 && beta == 0.0)
              return std::numeric_limits<double>::quiet_NaN();
            const double rho_v = rho_fast.eval_real(z);
            const double alpha = -rho_v - slack;
            const double lhs = alpha + K * (alpha * alpha - beta * beta) + eval_G_z(G, z);
            const double den = beta * beta + std::pow(sigma, expo);
            if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
            return -lhs / den;
          },
          exec);
      if (!m.empty() && m.value > 0.0) {
        KChoice kc;
        kc.K = K;
        kc.R = R;
        kc.margin = m.value;
        return kc;
      }
    }
  }
  fail(errc::no_admissible_k, "no (K, R) achieved strict negativity on the hypersurface samples");
}

BumpCertificate bump(const MixedPolynomial& full, const WeightSignature& w,
                     const BumpOptions& opts, ExecPolicy exec) {
  const AnalyzeResult an = analyze(full, w, opts, exec);
  if (an.classification.verdict == Classification::V::NOT_APPLICABLE)
    fail(errc::not_applicable, "domain is not (almost) h-extendible at the sampled resolution");
  for (const auto& c : an.curves)
    if (!c.star_ok)
      fail(errc::not_applicable, "normal-line order condition fails along a curve");

  AssembleOptions aopts;
  aopts.seed = opts.seed;
  aopts.samples = opts.samples;
  const AssembledG G = assemble_G(an.domain.P, an.domain.Q, w, an.curves, aopts, exec);
  const DecayConstants decay = fit_decay_constants(G, opts.seed, 4 * opts.samples, exec);

  BumpCertificate cert;
  cert.name = an.domain.name;
  cert.w = w;
  cert.P = an.domain.P;
  cert.Q = an.domain.Q;
  cert.domain_text = print_polynomial(full);
  cert.classification = an.classification.verdict == Classification::V::H_EXTENDIBLE
                            ? "H_EXTENDIBLE"
                            : "ALMOST_H_EXTENDIBLE";
  cert.alpha1 = an.classification.alpha1;
  cert.alpha2 = an.classification.alpha2;
  cert.ambient = G.ambient;
  cert.delta0 = G.delta0;
  cert.r0 = G.r0;
  cert.global_r = decay.global_r;
  cert.global_C = decay.global_C;
  cert.seed = opts.seed;

  int D = G.Pi.total_degree();
  cert.Delta = w.nu;
  for (std::size_t j = 0; j < an.curves.size(); ++j) {
    const auto& c = an.curves[j];
    const auto& b = G.curves[j];
    CurvePayload cp;
    cp.xi_infinite = c.xi_infinite;
    cp.xi = c.xi;
    cp.omega0 = c.omega0;
    cp.mu = c.mu;
    cp.twoM = c.twoM;
    cp.star_ok = c.star_ok;
    cp.alpha = b.alpha;
    cp.urot = b.urot;
    cp.hshift = b.hshift;
    cp.cone = b.cone;
    cp.hline = b.hline;
    cp.r_delta = decay.per_curve[j].r_delta;
    cp.C = decay.per_curve[j].C;
    cert.curves.push_back(std::move(cp));
    cert.Delta = std::max(cert.Delta, c.twoM);
    D = std::max(D, c.twoM);
  }

  // pluriharmonic coordinate change pushed down through the covering
  const MixedPolynomial R = pullback(cert.P + cert.Q, w);
  const MixedPolynomial q = pluriharmonic_strip(R, D).q;
  cert.f = pushdown_coordinate_change(q, w);
  {
    // commuting-diagram spot check: q = f o Psi
    const MixedPolynomial back = pullback(cert.f, w);
    if (!(back == q)) fail(errc::non_lattice_monomial, "coordinate change failed to commute");
  }

  // deck invariance of the assembled data (branch averages must be single-valued)
  {
    C2 witness;
    if (!deck_invariant([&](const C2& t) { return G.eval(t); }, w, 24, opts.seed, 1e-10,
                        &witness))
      fail(errc::grouping_mismatch, "assembled G is not deck-invariant");
  }

  const KChoice kc = choose_K(cert, G, opts.seed, std::max<std::int64_t>(opts.samples, 2000), exec);
  cert.K = kc.K;
  cert.R = kc.R;
  cert.margin = kc.margin;

  if (opts.run_summary) {
    VerifyOptions vopts;
    vopts.samples = 2000;
    vopts.seed = opts.seed + 999;
    const VerificationReport rep = verify_certificate(cert, vopts, exec);
    cert.summary_pass = rep.pass;
    for (const auto& chk : rep.checks) cert.summary.emplace_back(chk.name, chk.margin);
  }
  return cert;
}

}  // namespace bumpforge
