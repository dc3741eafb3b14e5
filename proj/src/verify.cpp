#include "bumpforge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bumpforge/errors.hpp"
#include "bumpforge/sample.hpp"

namespace bumpforge {

namespace {

void push(VerificationReport& rep, std::string name, bool pass, double margin,
          std::string detail = {}) {
  rep.checks.push_back({std::move(name), pass, margin, std::move(detail)});
}

std::string point_str(const C2& z) {
  std::ostringstream os;
  os << "(" << z.z1 << ", " << z.z2 << ")";
  return os.str();
}

}  // namespace

double fd_cross_check(const std::function<double(const C2&)>& F,
                      const std::function<ComplexHessian(const C2&)>& declared,
                      const std::vector<C2>& points, double step) {
  double worst = 0.0;
  for (const C2& z : points) {
    const ComplexHessian fd = fd_complex_hessian(F, z, step * (1.0 + cnorm(z)));
    const ComplexHessian an = declared(z);
    const double scale =
        std::abs(an.h11) + std::abs(an.h22) + 2.0 * std::abs(an.h12) + 1e-12;
    const double dev = (std::abs(fd.h11 - an.h11) + std::abs(fd.h22 - an.h22) +
                        2.0 * std::abs(fd.h12 - an.h12)) /
                       scale;
    worst = std::max(worst, dev);
  }
  return worst;
}

VerificationReport verify_certificate(const BumpCertificate& cert, const VerifyOptions& opts,
                                      ExecPolicy exec) {
  VerificationReport rep;
  if (cert.schema != "bumpforge-cert/1")
    fail(errc::schema_error, "unsupported schema '" + cert.schema + "'");

  // (i) domain validation from the stored split, which must reproduce exactly
  try {
    const ModelDomain dom =
        validate_domain(cert.P + cert.Q, cert.w, cert.name, cert.domain_text, opts.seed);
    const bool split_ok = dom.P == cert.P && dom.Q == cert.Q;
    push(rep, "domain", split_ok, 0.0, split_ok ? "" : "stored P/Q split mismatch");
  } catch (const error& e) {
    push(rep, "domain", false, -1.0, e.what());
  }

  AssembledG G = reassemble(cert);
  const MixedPolynomial rho_z = defining_function_z(cert);
  const FastPoly rho_z_fast(rho_z);

  // (ii) exact harmonicity of every stored curve
  {
    bool ok = true;
    std::string detail;
    for (const auto& c : cert.curves) {
      MixedPolynomial r;
      if (c.xi_infinite) r = restrict_to_axis1(G.Pi);
      else if (c.xi.is_zero()) r = restrict_to_axis2(G.Pi);
      else r = restrict_to_line(G.Pi, c.omega0);
      if (!is_harmonic_univariate(r)) {
        ok = false;
        detail = "restriction along a stored curve is not harmonic";
      }
    }
    push(rep, "curve-harmonicity", ok, ok ? 0.0 : -1.0, detail);
  }

  // profile ranges and constants
  {
    bool ok = true;
    double floor_margin = 1.0;
    std::string detail;
    auto check_profile = [&](const RadialBump& b, const char* what) {
      if (b.grid.empty()) return;
      double lo = 1e300, hi = -1e300;
      for (double v : b.grid) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (!(lo > 0.0) || hi > 1.0 + 1e-12) {
        ok = false;
        detail = std::string(what) + " profile leaves (0, 1]";
      }
      floor_margin = std::min(floor_margin, lo);
      if (b.C1 <= 0.0) {
        ok = false;
        detail = std::string(what) + " has a nonpositive C1";
      }
    };
    for (const auto& c : cert.curves) {
      check_profile(c.hline, "line bump");
      if (c.cone.mode == ConeBump::Mode::HBAD) check_profile(c.cone.radial, "cone bump");
      if (!(c.C > 0.0) || !(c.r_delta > 0.0)) {
        ok = false;
        detail = "nonpositive decay constants";
      }
    }
    if (!(cert.K > 0.0) || !(cert.R > 0.0) || cert.R > 1.0 / (4.0 * cert.K) + 1e-12) {
      ok = false;
      detail = "inadmissible (K, R)";
    }
    if (!cert.curves.empty() && !(cert.alpha1 < cert.alpha2)) {
      ok = false;
      detail = "wedge apertures not nested";
    }
    push(rep, "payload-sanity", ok, floor_margin, detail);
  }

  // spline-path margins of the serialized one-variable bumps
  {
    bool ok = true;
    double worst = 1e300;
    for (const auto& c : cert.curves) {
      MixedPolynomial u0;
      const MixedPolynomial piece = homogeneous_part(G.rho, c.twoM);
      if (c.xi_infinite) u0 = restrict_to_axis1(piece);
      else if (c.xi.is_zero()) u0 = restrict_to_axis2(piece);
      else u0 = restrict_to_line(piece, c.omega0);
      const auto r = verify_radial_bump(u0, c.hline, {1.0, 0.5, 0.125}, 8192);
      worst = std::min(worst, r.worst_margin);
      if (r.worst_margin < 0.0 || r.h_min <= 0.0) ok = false;
      if (c.cone.mode == ConeBump::Mode::HBAD) {
        const auto rc = verify_radial_bump(c.cone.fac.U, c.cone.radial, {1.0, 0.5, 0.125}, 8192);
        worst = std::min(worst, rc.worst_margin);
        if (rc.worst_margin < 0.0) ok = false;
      }
    }
    if (cert.curves.empty()) worst = 0.0;
    push(rep, "radial-margins", ok, worst);
  }

  const double expo = static_cast<double>(cert.w.nu - 2);
  const double scaleP = std::max(coeff_scale(G.Pi), 1.0);

  // re-verification of the cone bumps on fresh shells and cone samples
  {
    bool ok = true;
    double worst = 1e300;
    for (const auto& c : cert.curves) {
      MixedPolynomial sheared;
      if (c.xi_infinite) sheared = swap_vars(G.Pi);
      else if (c.xi.is_zero()) sheared = G.Pi;
      else sheared = shear(G.Pi, c.omega0);
      const ConeBumpReport r = verify_cone_bump(sheared, c.cone, {1.0, 0.5, 0.125},
                                                SamplePlan{opts.seed + 3, 1500, 1e-2, 1.0}, exec);
      worst = std::min({worst, r.decay_margin, r.worst_shell_B});
      if (r.decay_margin < 0.0 || !(r.worst_shell_B > 0.0)) ok = false;
    }
    if (cert.curves.empty()) worst = 0.0;
    push(rep, "cone-decay", ok, worst);
  }

  // (iii) plurisubharmonicity sweep of Gamma on the pullback ball
  {
    const std::int64_t n = std::max<std::int64_t>(opts.samples / 2, 2000);
    SamplePlan plan{opts.seed, n, 1e-3 * G.r0, G.r0};
    auto point_at = [&](std::int64_t i) {
      if (!G.ambient.clusters.empty() && i % 6 == 5) {
        const auto& cl = G.ambient.clusters[static_cast<std::size_t>(i) % G.ambient.clusters.size()];
        return sample_cone(cl.frame.omega, cl.frame.axis2, 0.0, 2.0 * cl.aperture, true, plan, i);
      }
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
          if (nn == 0.0 || nn > G.r0) return std::numeric_limits<double>::quiet_NaN();
          return G.levi(t).eigmin() / std::pow(nn, expo);
        },
        exec);
    const bool ok = r.value > -1e-6 * scaleP;
    push(rep, "psh-sweep", ok, r.value,
         ok ? std::string{} : "Levi-negative sample at " + point_str(point_at(r.index)));
  }

  // (iv) piecewise identities on the z side
  {
    bool ok_on = true, ok_off = true;
    double worst_on = 0.0, worst_off = 0.0;
    const std::int64_t n = 1000;
    for (std::size_t j = 0; j < G.curves.size(); ++j) {
      const auto& b = G.curves[j];
      SamplePlan plan{opts.seed + 5 + j, n, 1e-3 * G.r0, 0.8 * G.r0};
      for (std::int64_t i = 0; i < n; ++i) {
        const auto& f = b.lines[static_cast<std::size_t>(i) % b.lines.size()];
        const C2 t = sample_cone(f.omega, f.axis2, 0.0, 0.9 * b.alpha, true, plan, i);
        const C2 z{std::pow(t.z1, cert.w.sigma1), std::pow(t.z2, cert.w.sigma2)};
        const double g = eval_G_z(G, z);
        const std::complex<double> x = b.axis2 ? z.z1 : z.z2;
        const double expect = cert.P.eval_real(z) - eval_H0cal_z(G, z) + eval_v(G, j, x);
        const double err = std::abs(g - expect) / (std::abs(expect) + 1e-300);
        worst_on = std::max(worst_on, err);
        if (err > 1e-9) ok_on = false;
      }
    }
    // off the wedges: G = P - H0cal
    SamplePlan plan{opts.seed + 17, 4 * n, 1e-3 * G.r0, 0.8 * G.r0};
    std::int64_t taken = 0;
    for (std::int64_t i = 0; i < 16 * n && taken < n; ++i) {
      const C2 t = sample_ball(plan, i);
      bool inside = false;
      for (const auto& b : G.curves)
        for (const auto& f : b.lines)
          if (f.aperture(t) < 2.1 * b.alpha) inside = true;
      if (inside) continue;
      ++taken;
      const C2 z{std::pow(t.z1, cert.w.sigma1), std::pow(t.z2, cert.w.sigma2)};
      const double g = eval_G_z(G, z);
      const double expect = cert.P.eval_real(z) - eval_H0cal_z(G, z);
      const double err = std::abs(g - expect) / (std::abs(expect) + 1e-300);
      worst_off = std::max(worst_off, err);
      if (err > 1e-9) ok_off = false;
    }
    push(rep, "wedge-identity", ok_on, worst_on);
    push(rep, "offwedge-identity", ok_off, worst_off);
  }

  // zero set of the symmetrized ambient bump: vanishes on the curves only
  {
    bool ok = true;
    double on_curve = 0.0, off_floor = 1e300;
    SamplePlan plan{opts.seed + 23, 512, 0.2 * G.r0, 0.8 * G.r0};
    for (std::size_t j = 0; j < G.curves.size(); ++j) {
      const auto& b = G.curves[j];
      for (std::int64_t i = 0; i < 256; ++i) {
        const auto& f = b.lines[static_cast<std::size_t>(i) % b.lines.size()];
        const C2 t = sample_cone(f.omega, f.axis2, 0.0, 1e-14, true, plan, i);
        const C2 z{std::pow(t.z1, cert.w.sigma1), std::pow(t.z2, cert.w.sigma2)};
        on_curve = std::max(on_curve, std::abs(eval_H0cal_z(G, z)));
      }
    }
    for (std::int64_t i = 0; i < 512; ++i) {
      const C2 t = sample_ball(plan, i);
      bool near = false;
      for (const auto& b : G.curves)
        for (const auto& f : b.lines)
          if (f.aperture(t) < 0.05) near = true;
      if (near) continue;
      const C2 z{std::pow(t.z1, cert.w.sigma1), std::pow(t.z2, cert.w.sigma2)};
      off_floor = std::min(off_floor, eval_H0cal_z(G, z) / std::pow(norm2(t), cert.w.nu / 2.0));
    }
    const double scaleH = std::max(1e-300, 0.5 * cert.delta0);
    if (on_curve > 1e-10 * scaleH || !(off_floor > 0.0)) ok = false;
    push(rep, "hcal-zero-set", ok, off_floor,
         ok ? std::string{} : "symmetrized bump zero set mismatch");
  }

  // subharmonicity of the per-curve v functions (strict off 0)
  {
    bool ok = true;
    double worst = 1e300;
    for (std::size_t j = 0; j < G.curves.size(); ++j) {
      SamplePlan plan{opts.seed + 31 + j, 512, 1e-2, 1.0};
      const double rmax = std::pow(G.r0, G.curves[j].axis2 ? cert.w.sigma1 : cert.w.sigma2);
      for (std::int64_t i = 0; i < 512; ++i) {
        const std::complex<double> x = sample_annulus(plan, i) * rmax;
        auto v = [&](const std::complex<double>& s) { return eval_v(G, j, s); };
        const double lap = fd_laplacian(v, x, 1e-5 * std::abs(x));
        const double scale_x =
            std::pow(std::abs(x), (2.0 * G.curves[j].twoM) /
                                          (G.curves[j].axis2 ? cert.w.sigma1 : cert.w.sigma2) -
                                      2.0);
        worst = std::min(worst, lap / scale_x);
      }
    }
    if (G.curves.empty()) worst = 0.0;
    if (worst < 0.0) ok = false;
    push(rep, "v-subharmonic", ok, worst);
  }

  // (v) strict negativity of Re W + G on fresh hypersurface samples
  {
    const std::int64_t n = std::max<std::int64_t>(opts.samples / 2, 2000);
    SamplePlan plan{opts.seed + 41, n, 1e-4, 1.0};
    const double exponent = (static_cast<double>(cert.Delta) + 1.0) / cert.w.nu;
    const MinSweepResult m = min_sweep(
        n,
        [&](std::int64_t i) -> double {
          C2 z{};
          if (i % 5 != 0) {
            const C2 s = sample_weighted_ball(cert.w, plan, i);
            z = {s.z1 * cert.R, s.z2 * cert.R};
          }
          const double sigma =
              std::pow(std::abs(z.z1), cert.w.m1) + std::pow(std::abs(z.z2), cert.w.m2);
          double beta = 0.0;
          if (i % 4 != 1)
            beta = (rng_u01(plan.seed, 71, i) < 0.5 ? 1.0 : -1.0) *
                   rng_loguniform(plan.seed, 72, i, 1e-6 * cert.R, cert.R);
          double slack = 0.0;
          if (i % 7 == 3) slack = rng_loguniform(plan.seed, 73, i, 1e-6 * cert.R, cert.R);
          if (sigma == 0.0 && beta == 0.0) return std::numeric_limits<double>::quiet_NaN();
          const double rho_v = rho_z_fast.eval_real(z);
          const double alpha = -rho_v - slack;
          const double lhs = alpha + cert.K * (alpha * alpha - beta * beta) + eval_G_z(G, z);
          return -lhs / (beta * beta + std::pow(sigma, exponent));
        },
        exec);
    const bool ok = m.value > 0.0;
    push(rep, "negativity", ok, m.value,
         ok ? std::string{} : "Re W + G >= 0 at a hypersurface sample");
  }

  // (vi) decay bounds with the certificate constants
  {
    bool ok = true;
    double worst = 1e300;
    const std::int64_t n = std::max<std::int64_t>(opts.samples / 10, 2000);
    for (std::size_t j = 0; j < G.curves.size(); ++j) {
      const auto& b = G.curves[j];
      const auto& cp = cert.curves[j];
      double cmin = 1e300;
      for (std::size_t k = 0; k < b.lines.size(); ++k) {
        SamplePlan plan{opts.seed + 53 + 7 * k, n, 1e-3 * cp.r_delta, cp.r_delta};
        const auto& f = b.lines[k];
        const MinSweepResult m = min_sweep(
            n,
            [&](std::int64_t i) {
              const C2 t = sample_cone(f.omega, f.axis2, 0.0, b.alpha, true, plan, i);
              const C2 zeta = f.to_frame(t);
              const double den = std::pow(std::abs(zeta.z1), b.mu) *
                                     std::pow(std::abs(zeta.z2), cert.w.nu - b.mu) +
                                 std::pow(std::abs(zeta.z2), b.twoM);
              if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
              return (G.rho_fast.eval_real(t) - G.eval(t)) / den;
            },
            exec);
        cmin = std::min(cmin, m.value);
      }
      worst = std::min(worst, cmin - 0.8 * cp.C);
      if (!(cmin > 0.0) || cmin < 0.8 * cp.C) ok = false;
    }
    {
      SamplePlan plan{opts.seed + 101, n, 1e-3 * cert.global_r, cert.global_r};
      const MinSweepResult m = min_sweep(
          n,
          [&](std::int64_t i) {
            const C2 t = sample_ball(plan, i);
            for (const auto& b : G.curves)
              for (const auto& f : b.lines)
                if (f.aperture(t) < b.alpha) return std::numeric_limits<double>::quiet_NaN();
            return (G.rho_fast.eval_real(t) - G.eval(t)) / std::pow(cnorm(t), cert.w.nu);
          },
          exec);
      worst = std::min(worst, m.value - 0.8 * cert.global_C);
      if (!(m.value > 0.0) || m.value < 0.8 * cert.global_C) ok = false;
    }
    push(rep, "decay", ok, worst);
  }

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace bumpforge
