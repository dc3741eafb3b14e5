#pragma once

// Deterministic samplers. A point is a pure function of (plan, index); the
// same plan always reproduces the same point set bit-for-bit.

#include <complex>
#include <cstdint>

#include "bumpforge/poly.hpp"
#include "bumpforge/rng.hpp"

namespace bumpforge {

struct SamplePlan {
  std::uint64_t seed = 1;
  std::int64_t count = 4096;
  double rmin = 1e-3, rmax = 1.0;  // log-uniform radial range
};

// Point on the weighted sphere |z1|^m1 + |z2|^m2 = 1.
C2 sample_weighted_sphere(const WeightSignature& w, std::uint64_t seed, std::int64_t i);

// Weighted dilation z -> (t^{1/m1} z1, t^{1/m2} z2).
C2 weighted_dilate(const WeightSignature& w, const C2& z, double t);

// Weighted sphere point dilated by a log-uniform t in [rmin, rmax].
C2 sample_weighted_ball(const WeightSignature& w, const SamplePlan& plan, std::int64_t i);

// Euclidean sphere S^3 point (uniform via normalized Gaussians).
C2 sample_sphere3(std::uint64_t seed, std::int64_t i);
// S^3 point scaled by log-uniform radius in [rmin, rmax].
C2 sample_ball(const SamplePlan& plan, std::int64_t i);

// Point of the cone collar {ap_lo |t2| <= |t1 - omega t2| <= ap_hi |t2|}
// at log-uniform radius. With log_aperture the aperture fraction is
// log-uniform in [ap_lo, ap_hi] (concentrates points near the core line);
// otherwise it is uniform.
C2 sample_cone(std::complex<double> omega, bool axis, double ap_lo, double ap_hi,
               bool log_aperture, const SamplePlan& plan, std::int64_t i);

// Annulus sample in C, radius log-uniform in [rmin, rmax].
std::complex<double> sample_annulus(const SamplePlan& plan, std::int64_t i);

// Aperture coordinate of z relative to the line {t1 = omega t2}
// (or {t2 = 0} when axis): |zeta1| / |zeta2| with infinity when zeta2 = 0.
double cone_aperture(std::complex<double> omega, bool axis, const C2& t);

}  // namespace bumpforge
