#include "bumpforge/sample.hpp"

#include <cmath>
#include <limits>

namespace bumpforge {

namespace {
// Distinct stream ids per drawn quantity.
enum : std::uint64_t { S_MASS = 11, S_PHI1 = 12, S_PHI2 = 13, S_RAD = 14, S_AP = 15, S_PSI = 16, S_G = 17 };
}  // namespace

C2 sample_weighted_sphere(const WeightSignature& w, std::uint64_t seed, std::int64_t i) {
  const auto u = rng_u01(seed, S_MASS, static_cast<std::uint64_t>(i));
  const double phi1 = rng_angle(seed, S_PHI1, static_cast<std::uint64_t>(i));
  const double phi2 = rng_angle(seed, S_PHI2, static_cast<std::uint64_t>(i));
  const double r1 = std::pow(u, 1.0 / w.m1);
  const double r2 = std::pow(1.0 - u, 1.0 / w.m2);
  return {std::polar(r1, phi1), std::polar(r2, phi2)};
}

C2 weighted_dilate(const WeightSignature& w, const C2& z, double t) {
  return {z.z1 * std::pow(t, 1.0 / w.m1), z.z2 * std::pow(t, 1.0 / w.m2)};
}

C2 sample_weighted_ball(const WeightSignature& w, const SamplePlan& plan, std::int64_t i) {
  const C2 s = sample_weighted_sphere(w, plan.seed, i);
  const double t = rng_loguniform(plan.seed, S_RAD, static_cast<std::uint64_t>(i), plan.rmin, plan.rmax);
  return weighted_dilate(w, s, t);
}

C2 sample_sphere3(std::uint64_t seed, std::int64_t i) {
  // Box-Muller from four uniforms.
  const double u1 = rng_u01(seed, S_G, static_cast<std::uint64_t>(i) * 4 + 0);
  const double u2 = rng_u01(seed, S_G, static_cast<std::uint64_t>(i) * 4 + 1);
  const double u3 = rng_u01(seed, S_G, static_cast<std::uint64_t>(i) * 4 + 2);
  const double u4 = rng_u01(seed, S_G, static_cast<std::uint64_t>(i) * 4 + 3);
  const double m1 = std::sqrt(-2.0 * std::log(u1)), m2 = std::sqrt(-2.0 * std::log(u3));
  const double a1 = 6.283185307179586 * u2, a2 = 6.283185307179586 * u4;
  C2 z{{m1 * std::cos(a1), m1 * std::sin(a1)}, {m2 * std::cos(a2), m2 * std::sin(a2)}};
  const double n = cnorm(z);
  if (n == 0.0) return {{1.0, 0.0}, {0.0, 0.0}};
  return {z.z1 / n, z.z2 / n};
}

C2 sample_ball(const SamplePlan& plan, std::int64_t i) {
  C2 z = sample_sphere3(plan.seed, i);
  const double r = rng_loguniform(plan.seed, S_RAD, static_cast<std::uint64_t>(i), plan.rmin, plan.rmax);
  return {z.z1 * r, z.z2 * r};
}

C2 sample_cone(std::complex<double> omega, bool axis, double ap_lo, double ap_hi,
               bool log_aperture, const SamplePlan& plan, std::int64_t i) {
  const double phi = rng_angle(plan.seed, S_PHI2, static_cast<std::uint64_t>(i));
  const double psi = rng_angle(plan.seed, S_PSI, static_cast<std::uint64_t>(i));
  const double r = rng_loguniform(plan.seed, S_RAD, static_cast<std::uint64_t>(i), plan.rmin, plan.rmax);
  double ap;
  if (log_aperture) {
    const double lo = std::max(ap_lo, ap_hi * 1e-4);
    ap = rng_loguniform(plan.seed, S_AP, static_cast<std::uint64_t>(i), lo, ap_hi);
  } else {
    const double u = rng_u01(plan.seed, S_AP, static_cast<std::uint64_t>(i));
    ap = ap_lo + (ap_hi - ap_lo) * u;
  }
  const std::complex<double> base = std::polar(r, phi);
  const std::complex<double> off = std::polar(ap * r, psi);
  if (axis) return {base, off};                    // |t2| = ap |t1|
  return {omega * base + off, base};               // |t1 - omega t2| = ap |t2|
}

std::complex<double> sample_annulus(const SamplePlan& plan, std::int64_t i) {
  const double phi = rng_angle(plan.seed, S_PHI1, static_cast<std::uint64_t>(i));
  const double r = rng_loguniform(plan.seed, S_RAD, static_cast<std::uint64_t>(i), plan.rmin, plan.rmax);
  return std::polar(r, phi);
}

double cone_aperture(std::complex<double> omega, bool axis, const C2& t) {
  const double num = axis ? std::abs(t.z2) : std::abs(t.z1 - omega * t.z2);
  const double den = axis ? std::abs(t.z1) : std::abs(t.z2);
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace bumpforge
