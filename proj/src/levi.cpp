#include "bumpforge/levi.hpp"

#include <cassert>
#include <cmath>

#include "bumpforge/errors.hpp"

namespace bumpforge {

ComplexHessian HessianField::at(const C2& z) const {
  ComplexHessian ch;
  ch.h11 = h11.eval(z).real();
  ch.h22 = h22.eval(z).real();
  ch.h12 = h12.eval(z);
  return ch;
}

HessianField hessian(const MixedPolynomial& p) {
  HessianField h;
  h.h11 = wirtinger(wirtinger(p, 1, WirtKind::holo), 1, WirtKind::anti);
  h.h12 = wirtinger(wirtinger(p, 1, WirtKind::holo), 2, WirtKind::anti);
  h.h22 = wirtinger(wirtinger(p, 2, WirtKind::holo), 2, WirtKind::anti);
  return h;
}

double levi_value(const HessianField& h, const C2& z, const C2& v) {
  return h.at(z).levi(v.z1, v.z2);
}

Region Region::ball(double rmax, double rmin) {
  Region r;
  r.kind = Kind::Ball;
  r.rmin = rmin;
  r.rmax = rmax;
  return r;
}

Region Region::weighted_ball(const WeightSignature& w, double rmax, double rmin) {
  Region r;
  r.kind = Kind::WeightedBall;
  r.w = w;
  r.rmin = rmin;
  r.rmax = rmax;
  return r;
}

Region Region::weighted_sphere(const WeightSignature& w) {
  Region r;
  r.kind = Kind::WeightedSphere;
  r.w = w;
  return r;
}

Region Region::cone_shell(std::complex<double> omega, bool axis, double ap_lo, double ap_hi,
                          bool log_aperture, double rmax, double rmin) {
  Region r;
  r.kind = Kind::ConeShell;
  r.omega = omega;
  r.axis = axis;
  r.ap_lo = ap_lo;
  r.ap_hi = ap_hi;
  r.log_aperture = log_aperture;
  r.rmin = rmin;
  r.rmax = rmax;
  return r;
}

C2 Region::point(const SamplePlan& plan, std::int64_t i) const {
  switch (kind) {
    case Kind::WeightedBall: return sample_weighted_ball(w, plan, i);
    case Kind::WeightedSphere: return sample_weighted_sphere(w, plan.seed, i);
    case Kind::Ball: return sample_ball(plan, i);
    case Kind::ConeShell: return sample_cone(omega, axis, ap_lo, ap_hi, log_aperture, plan, i);
  }
  return {};
}

namespace {
SamplePlan plan_for(const Region& region, std::int64_t n, std::uint64_t seed) {
  SamplePlan plan;
  plan.seed = seed;
  plan.count = n;
  plan.rmin = region.rmin;
  plan.rmax = region.rmax;
  return plan;
}
}  // namespace

PshReport check_psh(const MixedPolynomial& p, const Region& region, std::int64_t n,
                    std::uint64_t seed, double tol, ExecPolicy exec) {
  if (n < 1) fail(errc::region_empty, "sample count must be positive");
  if (region.kind == Region::Kind::ConeShell && !(region.ap_hi > region.ap_lo))
    fail(errc::region_empty, "empty cone shell");
  const HessianField h = hessian(p);
  const auto homo = p.homogeneous_degree();
  const bool scaled = homo.has_value() && *homo >= 2;
  const double expo = scaled ? static_cast<double>(*homo - 2) : 0.0;
  const SamplePlan plan = plan_for(region, n, seed);

  auto scaled_eig = [&](std::int64_t i) {
    const C2 z = region.point(plan, i);
    const double scale = scaled ? std::pow(cnorm(z), expo) : 1.0;
    if (scale == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return h.at(z).eigmin() / scale;
  };
  const MinSweepResult r = min_sweep(n, scaled_eig, exec);

  PshReport rep;
  rep.samples = n;
  rep.seed = seed;
  rep.tol = tol;
  if (r.empty()) {
    rep.verdict = Verdict::INCONCLUSIVE;
    return rep;
  }
  rep.min_scaled_eig = r.value;
  if (r.value >= -tol) {
    rep.verdict = Verdict::PASS;
  } else {
    rep.verdict = Verdict::FAIL;
    rep.witness = region.point(plan, r.index);
    rep.has_witness = true;
  }
  return rep;
}

double strict_psh_lower_bound(const MixedPolynomial& p, const Region& region, std::int64_t n,
                              std::uint64_t seed, ExecPolicy exec) {
  const auto homo = p.homogeneous_degree();
  if (!homo || *homo % 2 != 0)
    fail(errc::not_weighted_homogeneous, "strict_psh_lower_bound needs even-homogeneous input");
  if (region.kind == Region::Kind::ConeShell && !(region.ap_hi > region.ap_lo))
    fail(errc::region_empty, "empty cone shell");
  const HessianField h = hessian(p);
  const double expo = static_cast<double>(*homo - 2);
  const SamplePlan plan = plan_for(region, n, seed);
  const MinSweepResult r = min_sweep(
      n,
      [&](std::int64_t i) {
        const C2 z = region.point(plan, i);
        return h.at(z).eigmin() / std::pow(cnorm(z), expo);
      },
      exec);
  if (r.empty()) fail(errc::region_empty, "no valid samples");
  return std::max(0.0, r.value);
}

}  // namespace bumpforge
