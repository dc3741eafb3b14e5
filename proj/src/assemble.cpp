#include "bumpforge/assemble.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bumpforge/errors.hpp"
#include "bumpforge/sample.hpp"

namespace bumpforge {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// smooth transition: 0 for x <= 0, 1 for x >= 1
double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

long modinv(long a, long n) {
  long t = 0, newt = 1, r = n, newr = ((a % n) + n) % n;
  while (newr != 0) {
    const long q = r / newr;
    t -= q * newt;
    std::swap(t, newt);
    r -= q * newr;
    std::swap(r, newr);
  }
  return ((t % n) + n) % n;
}

ComplexHessian frame_pullback(const ComplexHessian& m, const LineFrame& f) {
  ComplexHessian out;
  if (f.axis2) {
    out.h11 = m.h22;
    out.h22 = m.h11;
    out.h12 = std::conj(m.h12);
    return out;
  }
  const std::complex<double> w = f.omega;
  out.h11 = m.h11;
  out.h22 = m.h11 * std::norm(w) + m.h22 - 2.0 * (m.h12 * w).real();
  out.h12 = m.h12 - m.h11 * std::conj(w);
  return out;
}

}  // namespace

double SphereCutoff::eval(const C2& t) const {
  const double ap = frame.aperture(t);
  if (ap != ap) return 0.0;  // 0/0 at the origin
  const double u = (ap * ap) / (alpha * alpha);
  if (u <= 1.0) return 1.0;
  if (u >= 4.0) return 0.0;
  return 1.0 - smoothstep((u - 1.0) / 3.0);
}

FastPoly::FastPoly(const MixedPolynomial& p) {
  for (const auto& [e, c] : p.terms()) {
    terms.push_back({e.a1, e.b1, e.a2, e.b2, c.to_complex()});
    d1 = std::max(d1, e.deg1());
    d2 = std::max(d2, e.deg2());
  }
}

std::complex<double> FastPoly::eval(const C2& z) const {
  std::complex<double> p1[32], q1[32], p2[32], q2[32];
  p1[0] = q1[0] = p2[0] = q2[0] = 1.0;
  for (int i = 1; i <= d1; ++i) {
    p1[i] = p1[i - 1] * z.z1;
    q1[i] = q1[i - 1] * std::conj(z.z1);
  }
  for (int i = 1; i <= d2; ++i) {
    p2[i] = p2[i - 1] * z.z2;
    q2[i] = q2[i - 1] * std::conj(z.z2);
  }
  std::complex<double> acc = 0.0;
  for (const auto& t : terms) acc += t.c * p1[t.a1] * q1[t.b1] * p2[t.a2] * q2[t.b2];
  return acc;
}

FastHessian::FastHessian(const MixedPolynomial& p) {
  const HessianField h = hessian(p);
  h11 = FastPoly(h.h11);
  h12 = FastPoly(h.h12);
  h22 = FastPoly(h.h22);
}

ComplexHessian FastHessian::at(const C2& z) const {
  ComplexHessian ch;
  ch.h11 = h11.eval(z).real();
  ch.h22 = h22.eval(z).real();
  ch.h12 = h12.eval(z);
  return ch;
}

double CurveBundle::u(std::size_t k, const std::complex<double>& s) const {
  if (axis2) return Pi2M_fast.eval(C2{s, {0.0, 0.0}}).real();
  const std::complex<double> om = lines[k].omega;
  return Pi2M_fast.eval(C2{om * s, s}).real();
}

double CurveBundle::h(std::size_t k, const std::complex<double>& s) const {
  const double phi = axis2 ? 0.0 : urot[k];
  return hline.F(std::polar(std::abs(s), std::arg(s) + phi));
}

double CurveBundle::Hjk(std::size_t k, const C2& t) const {
  const C2 zeta = lines[k].to_frame(t);
  // HBAD profiles pick up the deck-rotation phase in the argument
  if (cone.mode == ConeBump::Mode::HBAD) {
    const std::complex<double> g =
        std::pow(zeta.z1, cone.fac.a) * std::pow(zeta.z2, cone.fac.b);
    return hline.degree2m == 0 && false
               ? 0.0
               : cone.radial.F(std::polar(std::abs(g), std::arg(g) + hshift[k]));
  }
  return cone.eval(zeta);
}

ComplexHessian CurveBundle::Hjk_levi(std::size_t k, const C2& t) const {
  const C2 zeta = lines[k].to_frame(t);
  const std::complex<double> g = std::pow(zeta.z1, cone.fac.a) * std::pow(zeta.z2, cone.fac.b);
  double fpp;
  if (cone.mode == ConeBump::Mode::HGOOD) {
    const double m = cone.fac.two_m / 2.0;
    fpp = cone.gamma / 2.0 * std::pow(std::abs(g), cone.fac.two_m - 2);
    (void)m;
  } else {
    const double r = std::abs(g);
    fpp = r == 0.0 ? 0.0
                   : 0.25 * std::pow(r, cone.fac.two_m - 2) *
                         cone.radial.Q(std::arg(g) + hshift[k]);
  }
  const std::complex<double> v1 = static_cast<double>(cone.fac.a) *
                                  std::pow(zeta.z1, cone.fac.a - 1) *
                                  std::pow(zeta.z2, cone.fac.b);
  const std::complex<double> v2 =
      cone.fac.b >= 1 ? static_cast<double>(cone.fac.b) * std::pow(zeta.z1, cone.fac.a) *
                            std::pow(zeta.z2, cone.fac.b - 1)
                      : std::complex<double>(0.0, 0.0);
  ComplexHessian ch;
  ch.h11 = fpp * std::norm(v1);
  ch.h22 = fpp * std::norm(v2);
  ch.h12 = fpp * v1 * std::conj(v2);
  return frame_pullback(ch, lines[k]);
}

double AmbientBump::S_lines(const C2& t) const {
  double s = 1.0;
  for (const auto& f : exc_lines) {
    const double ap = f.aperture(t);
    if (ap != ap) return 0.0;
    const double u = (ap * ap) / (line_clear * line_clear);
    s *= smoothstep((u - 1.0) / 1.25);  // 0 below line_clear, 1 above 1.5 line_clear
    if (s == 0.0) return 0.0;
  }
  return s;
}

double AmbientBump::eval_H0(const C2& t) const {
  const double n2 = norm2(t);
  if (n2 == 0.0) return 0.0;
  double v = c0 * std::pow(n2, two_k / 2.0);
  for (const auto& cl : clusters) {
    const double ap = cl.frame.aperture(t);
    if (ap != ap || ap >= 2.0 * cl.aperture) continue;
    const double u = (ap * ap) / (cl.aperture * cl.aperture);
    const double psi = u <= 1.0 ? 1.0 : 1.0 - smoothstep((u - 1.0) / 3.0);
    const C2 zeta = cl.frame.to_frame(t);
    v -= psi * cl.s_quad * std::norm(zeta.z1) * std::pow(n2, (two_k - 2) / 2.0);
  }
  return S_lines(t) * v;
}

double AmbientBump::eval_E(const C2& t) const {
  const double n2 = norm2(t);
  if (n2 == 0.0) return 0.0;
  double v = std::pow(n2, two_k / 2.0);
  for (std::size_t l = 0; l < exc_lines.size(); ++l) {
    const C2 zeta = exc_lines[l].to_frame(t);
    v *= std::pow(std::norm(zeta.z1) / n2, p_exp[l]);
  }
  return v;
}

LineTermsResult line_terms(const MixedPolynomial& rho, const ExceptionalCurve& curve,
                           int twoM) {
  LineTermsResult r;
  r.twoM = twoM;
  const MixedPolynomial piece = homogeneous_part(rho, twoM);
  if (piece.is_zero()) fail(errc::infinite_type, "no degree-2M piece available");
  if (curve.xi_infinite) r.u0 = restrict_to_axis1(piece);
  else if (curve.xi.is_zero()) r.u0 = restrict_to_axis2(piece);
  else r.u0 = restrict_to_line(piece, curve.omega0);
  // subharmonic and non-harmonic by construction; the profile asserts both
  const CircleProfile prof = circle_profile(r.u0);
  double gap = kTwoPi;
  for (std::size_t k = 0; k < prof.zeros.size(); ++k) {
    const double next = (k + 1 < prof.zeros.size()) ? prof.zeros[k + 1] : prof.zeros[0] + kTwoPi;
    gap = std::min(gap, next - prof.zeros[k]);
  }
  r.h = construct_radial_bump(prof, prof.zeros.empty() ? 0.2 : std::min(0.2, 0.4 * gap));
  return r;
}

namespace {

CurveBundle build_curve_bundle(const MixedPolynomial& Pi, const MixedPolynomial& rho,
                               const WeightSignature& w, const ExceptionalCurve& curve,
                               const AssembleOptions& opts, ExecPolicy exec) {
  CurveBundle b;
  b.axis2 = curve.xi_infinite;
  b.omega0 = curve.omega0;
  b.mu = curve.mu;
  b.twoM = curve.twoM;
  const long N = static_cast<long>(w.sigma1) * w.sigma2;
  if (b.axis2 || curve.xi.is_zero()) {
    LineFrame f;
    f.axis2 = b.axis2;
    f.omega = {0.0, 0.0};
    b.lines.push_back(f);
    b.urot.push_back(0.0);
    b.hshift.push_back(0.0);
  } else {
    const std::complex<double> w0 = curve.omega0.to_complex();
    for (long k = 0; k < N; ++k) {
      LineFrame f;
      f.omega = w0 * std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(N));
      b.lines.push_back(f);
    }
  }

  // cone bump in the frame of the base line
  MixedPolynomial sheared;
  if (b.axis2) sheared = swap_vars(Pi);
  else if (curve.xi.is_zero()) sheared = Pi;
  else sheared = shear(Pi, curve.omega0);
  ConeBumpOptions copts;
  copts.seed = opts.seed;
  b.cone = build_cone_bump(sheared, copts, exec);
  if (b.cone.mu != b.mu) {
    // the lowest-block order must match the generic normal-line order
    std::ostringstream os;
    os << "lowest block order " << b.cone.mu << " disagrees with normal-line order " << b.mu;
    fail(errc::grouping_mismatch, os.str());
  }

  // deck rotations for the k-th line: solve sigma2 l - sigma1 m == k (mod N)
  if (!b.axis2 && !curve.xi.is_zero()) {
    for (long k = 0; k < N; ++k) {
      const long l = w.sigma1 == 1 ? 0 : (k % w.sigma1) * modinv(w.sigma2, w.sigma1) % w.sigma1;
      const long m =
          w.sigma2 == 1 ? 0 : ((w.sigma2 - (k % w.sigma2)) % w.sigma2) * modinv(w.sigma1, w.sigma2) % w.sigma2;
      b.urot.push_back(-kTwoPi * static_cast<double>(m) / w.sigma2);
      b.hshift.push_back(-kTwoPi * (static_cast<double>(l) * b.cone.fac.a / w.sigma1 +
                                    static_cast<double>(m) * b.cone.fac.b / w.sigma2));
    }
  }

  const LineTermsResult lt = line_terms(rho, curve, curve.twoM);
  b.Pi2M = homogeneous_part(rho, curve.twoM);
  b.Pi2M_fast = FastPoly(b.Pi2M);
  b.hline = lt.h;

  // sanity: the rotation identity u_jk(x) = u_j0(e^{i urot_k} x)
  if (!b.axis2 && !curve.xi.is_zero()) {
    const FastPoly u0(lt.u0);
    for (std::size_t k = 0; k < b.lines.size(); ++k) {
      for (int probe = 1; probe <= 3; ++probe) {
        const std::complex<double> s = std::polar(0.7, 0.9 * probe);
        const double lhs = b.u(k, s);
        const double rhs =
            u0.eval(C2{std::polar(std::abs(s), std::arg(s) + b.urot[k]), {0.0, 0.0}}).real();
        if (std::abs(lhs - rhs) > 1e-8 * (1.0 + std::abs(rhs)))
          fail(errc::grouping_mismatch, "deck rotation identity failed for the line terms");
      }
    }
  }
  return b;
}

}  // namespace

AmbientBump build_ambient_bump(const MixedPolynomial& Pi, const std::vector<CurveBundle>& curves,
                               const AssembleOptions& opts, ExecPolicy exec) {
  AmbientBump amb;
  const auto deg = Pi.homogeneous_degree();
  if (!deg) fail(errc::not_weighted_homogeneous, "ambient bump needs homogeneous input");
  amb.two_k = *deg;
  amb.c0 = 1.0;
  double alpha = 0.15;
  for (const auto& c : curves) {
    alpha = std::min(alpha, c.alpha);
    for (const auto& f : c.lines) {
      amb.exc_lines.push_back(f);
      amb.p_exp.push_back(std::max(1, c.mu / 2));
    }
  }
  amb.line_clear = curves.empty() ? 0.0 : 2.5 * alpha;

  const FastHessian hess(Pi);
  const double scale = std::max(coeff_scale(Pi), 1e-30);
  const double degen_tol = 1e-9 * scale;

  auto min_exc_aperture = [&](const C2& t) {
    double ap = std::numeric_limits<double>::infinity();
    for (const auto& f : amb.exc_lines) ap = std::min(ap, f.aperture(t));
    return ap;
  };

  const MixedPolynomial det_poly = [&] {
    const HessianField h = hessian(Pi);
    return h.h11 * h.h22 - h.h12 * h.h12.conj();
  }();

  auto is_exceptional_direction = [&](bool axis2, std::complex<double> om) {
    for (const auto& f : amb.exc_lines) {
      if (f.axis2 && axis2) return true;
      if (!f.axis2 && !axis2 && std::abs(f.omega - om) < 1e-9 * (1.0 + std::abs(om))) return true;
    }
    return false;
  };

  // Degeneracy detection off the exceptional lines. Sampling alone misses
  // degeneracy of quadratic order (the hit probability vanishes with the
  // threshold), so candidate lines are gathered from soft minima and from the
  // axes (where pullback Jacobians degenerate), then verified exactly against
  // the restricted Hessian determinant.
  const std::int64_t n = opts.samples;
  const double soft_tol = 1e-3 * scale;
  bool unexplained = false;
  C2 unexplained_witness{};
  struct SlopeCluster {
    std::complex<double> center;
    int soft = 0, hard = 0;
  };
  std::vector<SlopeCluster> clusters;
  int hard_axis1 = 0, hard_axis2 = 0;
  bool soft_axis1 = false, soft_axis2 = false;
  for (std::int64_t i = 0; i < n; ++i) {
    const C2 t = sample_sphere3(opts.seed ^ 0x5eedull, i);
    const double e = hess.at(t).eigmin();
    if (e > soft_tol) continue;
    if (min_exc_aperture(t) <= 4.0 * alpha) continue;
    const bool hard = e <= degen_tol;
    if (std::abs(t.z2) < 0.3 * std::abs(t.z1)) {
      soft_axis2 = true;
      hard_axis2 += hard;
      continue;
    }
    if (std::abs(t.z1) < 0.3 * std::abs(t.z2)) {
      soft_axis1 = true;
      hard_axis1 += hard;
      continue;
    }
    const std::complex<double> s = t.z1 / t.z2;
    bool placed = false;
    for (auto& cl : clusters) {
      if (std::abs(cl.center - s) < 0.08 * (1.0 + std::abs(cl.center))) {
        cl.center = (cl.center * static_cast<double>(cl.soft) + s) / static_cast<double>(cl.soft + 1);
        ++cl.soft;
        cl.hard += hard;
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({s, 1, hard ? 1 : 0});
  }
  (void)soft_axis1;
  (void)soft_axis2;

  auto try_cluster_line = [&](bool axis2, const ExactComplex& om) -> bool {
    MixedPolynomial det_r, pi_r;
    if (axis2) {
      det_r = restrict_to_axis1(det_poly);
      pi_r = restrict_to_axis1(Pi);
    } else if (om.is_zero()) {
      det_r = restrict_to_axis2(det_poly);
      pi_r = restrict_to_axis2(Pi);
    } else {
      det_r = restrict_to_line(det_poly, om);
      pi_r = restrict_to_line(Pi, om);
    }
    if (!det_r.is_zero()) return false;
    if (is_harmonic_univariate(pi_r))
      fail(errc::no_positive_delta,
           "degeneracy outside the declared wedge: cluster line t1/t2 = " +
               std::to_string(om.to_complex().real()) + (axis2 ? std::string(" (axis)") : "") +
               " is harmonic but was not declared exceptional");
    ClusterLine cl;
    cl.frame.axis2 = axis2;
    cl.frame.omega = om.to_complex();
    cl.s_quad = 4.0 * amb.two_k * amb.c0;
    cl.aperture = 0.45 * std::sqrt(amb.c0 / (2.0 * cl.s_quad));
    amb.clusters.push_back(cl);
    return true;
  };

  // the axes are always candidates (pullbacks degenerate there generically)
  if (!is_exceptional_direction(true, {0, 0})) {
    const bool exact_axis2 = restrict_to_axis1(det_poly).is_zero();
    if (exact_axis2) try_cluster_line(true, ExactComplex::integer(0));
    else if (hard_axis2 > 0) {
      unexplained = true;
      unexplained_witness = C2{{1.0, 0.0}, {0.0, 0.0}};
    }
  }
  if (!is_exceptional_direction(false, {0, 0})) {
    const bool exact_axis1 = restrict_to_axis2(det_poly).is_zero();
    if (exact_axis1) try_cluster_line(false, ExactComplex::integer(0));
    else if (hard_axis1 > 0) {
      unexplained = true;
      unexplained_witness = C2{{0.0, 0.0}, {1.0, 0.0}};
    }
  }
  for (const auto& cl : clusters) {
    if (cl.soft < 3) continue;  // isolated tolerance-level soft hits
    if (is_exceptional_direction(false, cl.center) || std::abs(cl.center) < 1e-6) continue;
    bool ok = false;
    // snap the cluster slope to a small rational and verify exactly
    for (long den = 1; den <= 16 && !ok; den *= 2) {
      const ExactComplex om{make_rat(std::lround(cl.center.real() * den), den),
                            make_rat(std::lround(cl.center.imag() * den), den)};
      if (std::abs(om.to_complex() - cl.center) > 0.1) continue;
      ok = try_cluster_line(false, om);
    }
    if (!ok && cl.hard > 0) {
      unexplained = true;
      unexplained_witness = C2{cl.center, {1.0, 0.0}};
    }
  }
  if (unexplained) {
    std::ostringstream os;
    os << "degeneracy outside the declared wedge near t1/t2 = " << unexplained_witness.z1;
    fail(errc::no_positive_delta, os.str());
  }

  // Push the support boundary of H0 as far from the exceptional lines as the
  // cluster geometry allows: near the lines the strict margin of Pi decays
  // like a high power of the aperture and would defeat the cutoff curvature.
  if (!amb.exc_lines.empty()) {
    double clearance = std::numeric_limits<double>::infinity();
    for (const auto& cl : amb.clusters) {
      for (int j = 0; j < 64; ++j) {
        const double phi = kTwoPi * j / 64.0;
        C2 dir;
        if (cl.frame.axis2) dir = {{1.0, 0.0}, std::polar(2.0 * cl.aperture, phi)};
        else dir = {cl.frame.omega + std::polar(2.0 * cl.aperture, phi), {1.0, 0.0}};
        clearance = std::min(clearance, min_exc_aperture(dir));
      }
    }
    amb.line_clear = std::min(0.7, 0.45 * clearance);
    if (amb.line_clear < 2.5 * alpha)
      fail(errc::no_positive_delta, "degeneracy wedge cannot be separated from the curve cones");
  }

  // bisection for delta_max on the complement of the line cones
  auto H0 = [&](const C2& t) { return amb.eval_H0(t); };
  auto margin_at = [&](double delta) {
    const MinSweepResult r = min_sweep(
        n,
        [&](std::int64_t i) -> double {
          C2 t;
          if (!amb.clusters.empty() && i % 3 == 0) {
            const auto& cl = amb.clusters[static_cast<std::size_t>(i) % amb.clusters.size()];
            SamplePlan plan{opts.seed + 7, n, 0.5, 1.0};
            t = sample_cone(cl.frame.omega, cl.frame.axis2, 0.0, 2.0 * cl.aperture, true, plan, i);
            const double nn = cnorm(t);
            t = {t.z1 / nn, t.z2 / nn};
          } else {
            t = sample_sphere3(opts.seed ^ 0xa11ull, i);
          }
          if (!amb.exc_lines.empty() && min_exc_aperture(t) <= amb.line_clear * 1.02)
            return std::numeric_limits<double>::quiet_NaN();
          ComplexHessian ch = hess.at(t);
          const ComplexHessian hb = fd_complex_hessian(H0, t, 1e-4);
          ch.h11 -= delta * hb.h11;
          ch.h22 -= delta * hb.h22;
          ch.h12 -= delta * hb.h12;
          return ch.eigmin();
        },
        exec);
    return r;
  };

  double delta = opts.delta_cap;
  for (int it = 0; it < 16; ++it, delta *= 0.5) {
    const MinSweepResult r = margin_at(delta);
    if (r.value > 1e-10 * scale * delta) {
      amb.delta_max = delta;
      amb.fitted_B3 = r.value / delta;
      return amb;
    }
  }
  fail(errc::no_positive_delta, "no positive delta certifies the ambient bump");
}

double AssembledG::eval_H(const C2& t) const {
  double v = ambient.eval_H0(t) + ambient.eps_E * ambient.eval_E(t);
  for (const auto& c : curves)
    for (std::size_t k = 0; k < c.lines.size(); ++k) {
      SphereCutoff psi{c.lines[k], c.alpha};
      const double pv = psi.eval(t);
      if (pv > 0.0) v += pv * c.Hjk(k, t);
    }
  return v;
}

double AssembledG::eval_at(const C2& t, double d) const {
  double v = Pi_fast.eval_real(t) - d * eval_H(t);
  for (const auto& c : curves)
    for (std::size_t k = 0; k < c.lines.size(); ++k) {
      SphereCutoff psi{c.lines[k], c.alpha};
      const double pv = psi.eval(t);
      if (pv == 0.0) continue;
      const std::complex<double> s = c.axis2 ? t.z1 : t.z2;
      v += pv * (c.u(k, s) - d * c.h(k, s));
    }
  return v;
}

ComplexHessian AssembledG::levi_at(const C2& t, double d, double fd_step_rel) const {
  ComplexHessian ch = Pi_hess.at(t);
  auto bumps = [&](const C2& z) { return eval_at(z, d) - Pi_fast.eval_real(z); };
  const ComplexHessian hb = fd_complex_hessian(bumps, t, fd_step_rel * cnorm(t));
  ch.h11 += hb.h11;
  ch.h22 += hb.h22;
  ch.h12 += hb.h12;
  return ch;
}

AssembledG assemble_G(const MixedPolynomial& P, const MixedPolynomial& Q,
                      const WeightSignature& w, const std::vector<ExceptionalCurve>& curves,
                      const AssembleOptions& opts, ExecPolicy exec) {
  AssembledG G;
  G.w = w;
  if (w.nu % 2 != 0 || w.nu < 4)
    fail(errc::not_applicable, "homogenized degree nu must be even and >= 4");
  G.Pi = pullback(P, w);
  const MixedPolynomial R = pullback(P + Q, w);
  int D = G.Pi.total_degree();
  for (const auto& c : curves) {
    if (c.twoM <= 0) fail(errc::infinite_type, "curve invariants missing (run curve_invariants)");
    D = std::max(D, c.twoM);
  }
  const StripResult strip = pluriharmonic_strip(R, D);
  G.rho = strip.rho;
  G.Pi_fast = FastPoly(G.Pi);
  G.rho_fast = FastPoly(G.rho);
  G.Pi_hess = FastHessian(G.Pi);

  // per-curve bundles with a shared cutoff aperture
  for (const auto& c : curves) G.curves.push_back(build_curve_bundle(G.Pi, G.rho, w, c, opts, exec));
  double sep = 1.0;
  {
    std::vector<std::pair<std::complex<double>, bool>> all;
    for (const auto& b : G.curves)
      for (const auto& f : b.lines) all.emplace_back(f.omega, f.axis2);
    auto chord = [](const std::pair<std::complex<double>, bool>& a,
                    const std::pair<std::complex<double>, bool>& b) {
      if (a.second && b.second) return 0.0;
      if (a.second || b.second) {
        const auto& fin = a.second ? b : a;
        return 1.0 / std::sqrt(1.0 + std::norm(fin.first));
      }
      return std::abs(a.first - b.first) /
             std::sqrt((1.0 + std::norm(a.first)) * (1.0 + std::norm(b.first)));
    };
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j) sep = std::min(sep, chord(all[i], all[j]));
  }
  double alpha = 0.15;
  for (auto& b : G.curves) alpha = std::min({alpha, b.cone.sigma / 2.0, sep / 6.0});
  for (auto& b : G.curves) b.alpha = alpha;

  G.ambient = build_ambient_bump(G.Pi, G.curves, opts, exec);
  G.ambient.eps_E = G.curves.empty() ? 0.0 : 0.01;

  // (delta0, r0) search with sampled strict plurisubharmonicity of Gamma
  double delta0 = std::min(G.ambient.delta_max, opts.delta_cap);
  double r0 = 0.5;
  const double scaleP = std::max(coeff_scale(G.Pi), 1.0);
  const double expo = static_cast<double>(w.nu - 2);
  bool ok = false;
  for (int it = 0; it < opts.max_iters && !ok; ++it) {
    G.delta0 = delta0;
    G.r0 = r0;
    G.delta = 0.5 * delta0;
    const std::int64_t n = opts.samples;
    SamplePlan plan{opts.seed + 31 * static_cast<std::uint64_t>(it), n, 1e-3 * r0, 2.0 * r0};
    auto point_at = [&](std::int64_t i) {
      const int kind = static_cast<int>(i % 3);
      if (kind == 0 || G.curves.empty()) return sample_ball(plan, i);
      const auto& b = G.curves[static_cast<std::size_t>(i) % G.curves.size()];
      const auto& f = b.lines[static_cast<std::size_t>(i / 3) % b.lines.size()];
      return kind == 1 ? sample_cone(f.omega, f.axis2, 0.0, b.alpha, true, plan, i)
                       : sample_cone(f.omega, f.axis2, b.alpha, 3.0 * b.alpha, false, plan, i);
    };
    const MinSweepResult r = min_sweep(
        n,
        [&](std::int64_t i) {
          const C2 t = point_at(i);
          const double nn = cnorm(t);
          if (nn == 0.0 || nn > 2.0 * r0) return std::numeric_limits<double>::quiet_NaN();
          return G.levi_at(t, G.delta).eigmin() / std::pow(nn, expo);
        },
        exec);
    if (r.value > -opts.fd_tol * scaleP) {
      ok = true;
      break;
    }
    // witness-guided ladder: violations in the cutoff collar are the
    // delta-independent u-term cross derivatives and shrink with the radius;
    // violations elsewhere shrink with the bump size.
    bool in_collar = false;
    if (!r.empty()) {
      const C2 tw = point_at(r.index);
      for (const auto& b : G.curves)
        for (const auto& f : b.lines) {
          const double ap = f.aperture(tw);
          if (ap > 0.8 * b.alpha && ap < 2.6 * b.alpha) in_collar = true;
        }
    }
    if (in_collar) {
      r0 *= 0.5;
    } else {
      delta0 *= 0.5;
      G.ambient.eps_E *= 0.5;
    }
    if (r0 < 1.0 / (1 << 24) || delta0 < 1e-8) {
      std::ostringstream os;
      os << "no (delta0, r0) certified strict plurisubharmonicity; worst scaled eigenvalue "
         << r.value;
      fail(errc::strict_psh_failed, os.str());
    }
  }
  if (!ok) fail(errc::strict_psh_failed, "assembly iteration budget exhausted");

  if (opts.delta_override > 0.0) {
    if (opts.delta_override > G.delta0)
      fail(errc::delta_too_large, "requested delta exceeds the certified delta0");
    G.delta = opts.delta_override;
  }
  return G;
}

DecayConstants fit_decay_constants(const AssembledG& G, std::uint64_t seed, std::int64_t samples,
                                   ExecPolicy exec) {
  DecayConstants out;
  const int nu = G.w.nu;
  for (const auto& b : G.curves) {
    double r = G.r0;
    DecayConstants::PerCurve pc;
    bool found = false;
    for (int halving = 0; halving < 25 && !found; ++halving, r *= 0.5) {
      double cmin = 1e300;
      for (std::size_t k = 0; k < b.lines.size(); ++k) {
        SamplePlan plan{seed + 13 * k, samples, 1e-3 * r, r};
        const auto& f = b.lines[k];
        const MinSweepResult m = min_sweep(
            samples,
            [&](std::int64_t i) {
              const C2 t = sample_cone(f.omega, f.axis2, 0.0, b.alpha, true, plan, i);
              const C2 zeta = f.to_frame(t);
              const double den = std::pow(std::abs(zeta.z1), b.mu) *
                                     std::pow(std::abs(zeta.z2), nu - b.mu) +
                                 std::pow(std::abs(zeta.z2), b.twoM);
              if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
              return (G.rho_fast.eval_real(t) - G.eval(t)) / den;
            },
            exec);
        cmin = std::min(cmin, m.value);
      }
      if (cmin > 0.0) {
        pc.r_delta = r;
        pc.C = cmin;
        found = true;
      }
    }
    if (!found) fail(errc::no_positive_radius, "no radius gives a positive decay constant");
    out.per_curve.push_back(pc);
  }

  // global bound off the curve cones
  double r = G.r0;
  bool found = false;
  for (int halving = 0; halving < 25 && !found; ++halving, r *= 0.5) {
    SamplePlan plan{seed + 101, samples, 1e-3 * r, r};
    const MinSweepResult m = min_sweep(
        samples,
        [&](std::int64_t i) {
          const C2 t = sample_ball(plan, i);
          for (const auto& b : G.curves)
            for (const auto& f : b.lines)
              if (f.aperture(t) < b.alpha) return std::numeric_limits<double>::quiet_NaN();
          return (G.rho_fast.eval_real(t) - G.eval(t)) / std::pow(cnorm(t), nu);
        },
        exec);
    if (m.value > 0.0) {
      out.global_r = r;
      out.global_C = m.value;
      found = true;
    }
  }
  if (!found) fail(errc::no_positive_radius, "no radius gives a positive global decay constant");
  return out;
}

}  // namespace bumpforge
