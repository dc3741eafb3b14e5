#include "bumpforge/conebump.hpp"

#include <algorithm>
#include <cassert>
#include <climits>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bumpforge/errors.hpp"
#include "bumpforge/sample.hpp"

namespace bumpforge {

std::pair<int, MixedPolynomial> lowest_block(const MixedPolynomial& P) {
  if (P.is_zero()) fail(errc::empty_block, "zero polynomial has no lowest block");
  int mu = INT_MAX;
  for (const auto& [e, c] : P.terms()) mu = std::min(mu, e.deg1());
  return {mu, block_by_degree1(P, mu)};
}

BidegreeFactorization factor_bidegree(const MixedPolynomial& Q) {
  if (Q.is_zero()) fail(errc::not_factorable, "zero polynomial");
  // bidegrees (2p, 2q)
  int p2 = -1, q2 = -1;
  for (const auto& [e, c] : Q.terms()) {
    if (p2 < 0) {
      p2 = e.deg1();
      q2 = e.deg2();
    } else if (e.deg1() != p2 || e.deg2() != q2) {
      fail(errc::not_factorable, "input is not bihomogeneous");
    }
  }
  if (p2 <= 0 || q2 < 0) fail(errc::not_factorable, "needs positive z1-bidegree");
  const int p = p2 / 2, q = q2 / 2;
  if (2 * p != p2 || 2 * q != q2) fail(errc::not_factorable, "odd bidegree");
  const int g = q == 0 ? p : std::gcd(p, q);
  BidegreeFactorization fac;
  fac.a = p / g;
  fac.b = q / g;
  fac.two_m = 2 * g;
  // each term (a1,b1,a2,b2) must be (a alpha, a beta, b alpha, b beta)
  for (const auto& [e, c] : Q.terms()) {
    if (e.a1 % fac.a) fail(errc::not_factorable, "support off the lattice");
    const int alpha = e.a1 / fac.a;
    const int beta = e.b1 / fac.a;
    if (e.b1 != fac.a * beta || e.a2 != fac.b * alpha || e.b2 != fac.b * beta)
      fail(errc::not_factorable, "support off the lattice");
    fac.U.add_term(Expo{alpha, beta, 0, 0}, c);
  }
  // exact reconstruction check
  MixedPolynomial recon;
  for (const auto& [e, c] : fac.U.terms())
    recon.add_term(Expo{fac.a * e.a1, fac.a * e.b1, fac.b * e.a1, fac.b * e.b1}, c);
  if (!(recon == Q)) fail(errc::not_factorable, "reconstruction mismatch");
  return fac;
}

double ConeBump::eval(const C2& zeta) const {
  const std::complex<double> g = std::pow(zeta.z1, fac.a) * std::pow(zeta.z2, fac.b);
  if (mode == Mode::HGOOD) {
    const double m = fac.two_m / 2.0;
    return gamma / (2.0 * m * m) * std::pow(std::abs(g), fac.two_m);
  }
  return radial.F(g);
}

ComplexHessian ConeBump::levi(const C2& zeta) const {
  const std::complex<double> g = std::pow(zeta.z1, fac.a) * std::pow(zeta.z2, fac.b);
  double fpp;  // F_{w wbar}(g)
  if (mode == Mode::HGOOD) {
    const double m = fac.two_m / 2.0;
    fpp = gamma / (2.0 * m * m) * m * m * std::pow(std::abs(g), fac.two_m - 2);
  } else {
    fpp = radial.F_lap_over4(g);
  }
  const std::complex<double> v1 =
      static_cast<double>(fac.a) * std::pow(zeta.z1, fac.a - 1) * std::pow(zeta.z2, fac.b);
  const std::complex<double> v2 =
      static_cast<double>(fac.b) * std::pow(zeta.z1, fac.a) *
      (fac.b >= 1 ? std::pow(zeta.z2, fac.b - 1) : std::complex<double>(0.0, 0.0));
  ComplexHessian ch;
  ch.h11 = fpp * std::norm(v1);
  ch.h22 = fpp * std::norm(v2);
  ch.h12 = fpp * v1 * std::conj(v2);
  return ch;
}

namespace {

struct ShellFit {
  double worstB = 0.0;
  bool ok = false;
};

ShellFit fit_shells(const HessianField& hp, const ConeBump& bump, double sigma,
                    const ConeBumpOptions& opts, std::vector<std::pair<double, double>>* record,
                    ExecPolicy exec) {
  ShellFit fit;
  fit.ok = true;
  fit.worstB = 1e300;
  const double expo = static_cast<double>(bump.two_k - 2);
  if (record) record->clear();
  for (double t : opts.ts) {
    double worst_t = 1e300;
    for (double d : opts.deltas) {
      SamplePlan plan{opts.seed, opts.samples, 1e-2, 1.0};
      const MinSweepResult r = min_sweep(
          opts.samples,
          [&](std::int64_t i) {
            const C2 z = sample_cone({0, 0}, false, t * sigma, sigma, false, plan, i);
            ComplexHessian ch = hp.at(z);
            const ComplexHessian hb = bump.levi(z);
            ch.h11 -= d * hb.h11;
            ch.h22 -= d * hb.h22;
            ch.h12 -= d * hb.h12;
            return ch.eigmin() / std::pow(cnorm(z), expo);
          },
          exec);
      worst_t = std::min(worst_t, r.value);
    }
    if (record) record->emplace_back(t, worst_t);
    fit.worstB = std::min(fit.worstB, worst_t);
    if (!(worst_t > 0.0)) fit.ok = false;
  }
  return fit;
}

double fit_decay(const ConeBump& bump, double sigma, const ConeBumpOptions& opts,
                 ExecPolicy exec) {
  // H / (|z1|^mu |z2|^{2k-mu}) equals gamma/(2m^2) for HGOOD and the profile
  // height h(arg g) for HBAD; sample anyway and fold in the known floor.
  SamplePlan plan{opts.seed + 1, opts.samples, 1e-2, 1.0};
  const MinSweepResult r = min_sweep(
      opts.samples,
      [&](std::int64_t i) {
        const C2 z = sample_cone({0, 0}, false, 0.0, sigma, true, plan, i);
        const double den =
            std::pow(std::abs(z.z1), bump.mu) * std::pow(std::abs(z.z2), bump.two_k - bump.mu);
        if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return bump.eval(z) / den;
      },
      exec);
  double floor_v = r.value;
  if (bump.mode == ConeBump::Mode::HBAD) floor_v = std::min(floor_v, bump.radial.floor);
  return floor_v;
}

}  // namespace

ConeBump build_cone_bump(const MixedPolynomial& P_sheared, const ConeBumpOptions& opts,
                         ExecPolicy exec) {
  if (!P_sheared.is_real_valued())
    fail(errc::not_weighted_homogeneous, "cone bump needs a real-valued polynomial");
  const auto deg = P_sheared.homogeneous_degree();
  if (!deg || *deg % 2 != 0 || *deg < 4)
    fail(errc::not_weighted_homogeneous, "cone bump needs even homogeneous degree >= 4");
  if (!restrict_to_axis2(P_sheared).is_zero())
    fail(errc::not_weighted_homogeneous, "input must vanish on the line {z1 = 0}");

  ConeBump bump;
  bump.two_k = *deg;
  auto [mu, qmu] = lowest_block(P_sheared);
  bump.mu = mu;
  // Q_mu is plurisubharmonic whenever P is (lowest-block extraction); checked.
  const PshReport qrep = check_psh(qmu, Region::ball(), 2000, opts.seed);
  if (qrep.verdict == Verdict::FAIL)
    fail(errc::not_psh, "lowest block failed plurisubharmonicity sampling");
  bump.fac = factor_bidegree(qmu);
  if (bump.fac.two_m * bump.fac.a != bump.mu ||
      bump.fac.two_m * (bump.fac.a + bump.fac.b) != bump.two_k)
    fail(errc::not_factorable, "exponent bookkeeping violated");

  const CircleProfile prof = circle_profile(bump.fac.U);
  if (prof.zeros.empty()) {
    bump.mode = ConeBump::Mode::HGOOD;
    // gamma = inf of U_{w wbar} on the circle = (min circle Laplacian) / 4
    const TrigPoly& L = prof.laplacian_on_circle;
    if (L.is_constant()) {
      bump.gamma_is_exact = true;
      bump.gamma_rat = L.constant_term().re / 4;
      bump.gamma = bump.gamma_rat.get_d();
    } else {
      bump.gamma = prof.min_laplacian / 4.0;
    }
  } else {
    bump.mode = ConeBump::Mode::HBAD;
    double gap = 6.283185307179586;
    for (std::size_t k = 0; k < prof.zeros.size(); ++k) {
      const double next =
          (k + 1 < prof.zeros.size()) ? prof.zeros[k + 1] : prof.zeros[0] + 6.283185307179586;
      gap = std::min(gap, next - prof.zeros[k]);
    }
    bump.radial = construct_radial_bump(prof, std::min(opts.fs_sector, 0.4 * gap));
  }

  const HessianField hp = hessian(P_sheared);
  const double scale = coeff_scale(P_sheared);
  double sigma = opts.sigma_start;
  double bestB = -1e300;
  for (int halving = 0; halving < opts.max_halvings; ++halving, sigma *= 0.5) {
    // precondition: P strictly plurisubharmonic on the punctured cone
    const double bp = strict_psh_lower_bound(
        P_sheared, Region::cone_shell({0, 0}, false, opts.ts.back() * sigma, sigma), 1500,
        opts.seed, exec);
    if (!(bp > 1e-12 * scale)) {
      if (halving >= 2)
        fail(errc::not_strictly_psh,
             "P is not strictly plurisubharmonic on the punctured cone");
      continue;  // maybe the cone is still too wide
    }
    const ShellFit fit = fit_shells(hp, bump, sigma, opts, &bump.shell_B, exec);
    bestB = std::max(bestB, fit.worstB);
    if (fit.ok) {
      bump.sigma = sigma;
      const double floor_v = fit_decay(bump, sigma, opts, exec);
      bump.c = floor_v * (1.0 - 1e-6);
      if (bump.c > 0.0) return bump;
    }
  }
  std::ostringstream os;
  os << "no aperture verified; best shell constant " << bestB;
  fail(errc::shell_verification_failed, os.str());
}

ConeBumpReport verify_cone_bump(const MixedPolynomial& P_sheared, const ConeBump& bump,
                                const std::vector<double>& deltas, const SamplePlan& plan,
                                ExecPolicy exec) {
  ConeBumpReport rep;
  const HessianField hp = hessian(P_sheared);
  const double expo = static_cast<double>(bump.two_k - 2);

  const MinSweepResult decay = min_sweep(
      plan.count,
      [&](std::int64_t i) {
        const C2 z = sample_cone({0, 0}, false, 0.0, bump.sigma, true, plan, i);
        const double den =
            std::pow(std::abs(z.z1), bump.mu) * std::pow(std::abs(z.z2), bump.two_k - bump.mu);
        if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return bump.eval(z) / den - bump.c;
      },
      exec);
  rep.decay_margin = decay.value;

  rep.worst_shell_B = 1e300;
  for (const auto& [t, storedB] : bump.shell_B) {
    double worst_t = 1e300;
    for (double d : deltas) {
      const MinSweepResult r = min_sweep(
          plan.count,
          [&](std::int64_t i) {
            const C2 z = sample_cone({0, 0}, false, t * bump.sigma, bump.sigma, false, plan, i);
            ComplexHessian ch = hp.at(z);
            const ComplexHessian hb = bump.levi(z);
            ch.h11 -= d * hb.h11;
            ch.h22 -= d * hb.h22;
            ch.h12 -= d * hb.h12;
            return ch.eigmin() / std::pow(cnorm(z), expo);
          },
          exec);
      worst_t = std::min(worst_t, r.value);
    }
    rep.shell_B.emplace_back(t, worst_t);
    rep.worst_shell_B = std::min(rep.worst_shell_B, worst_t);
  }
  return rep;
}

}  // namespace bumpforge
