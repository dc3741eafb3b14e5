#pragma once

// Complex Hessians, Levi forms, and sampled (strict) plurisubharmonicity
// verification on balls, cones, and shells.

#include <complex>
#include <cstdint>
#include <optional>

#include "bumpforge/fd.hpp"
#include "bumpforge/kernels.hpp"
#include "bumpforge/poly.hpp"
#include "bumpforge/sample.hpp"

namespace bumpforge {

struct HessianField {
  MixedPolynomial h11, h12, h22;  // h21 = conj(h12) pointwise
  ComplexHessian at(const C2& z) const;
};

HessianField hessian(const MixedPolynomial& p);

// V * H(z) * conj(V); real for real-valued sources.
double levi_value(const HessianField& h, const C2& z, const C2& v);

enum class Verdict { PASS, FAIL, INCONCLUSIVE };

struct PshReport {
  Verdict verdict = Verdict::INCONCLUSIVE;
  double min_scaled_eig = 0.0;
  C2 witness{};
  bool has_witness = false;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
};

struct Region {
  enum class Kind { WeightedBall, WeightedSphere, Ball, ConeShell } kind = Kind::Ball;
  WeightSignature w = WeightSignature::make(1, 1);
  double rmin = 1e-2, rmax = 1.0;
  // cone shell parameters
  std::complex<double> omega{0.0, 0.0};
  bool axis = false;
  double ap_lo = 0.0, ap_hi = 0.0;
  bool log_aperture = false;

  static Region ball(double rmax = 1.0, double rmin = 1e-2);
  static Region weighted_ball(const WeightSignature& w, double rmax = 1.0, double rmin = 1e-2);
  static Region weighted_sphere(const WeightSignature& w);
  static Region cone_shell(std::complex<double> omega, bool axis, double ap_lo, double ap_hi,
                           bool log_aperture = false, double rmax = 1.0, double rmin = 1e-2);
  C2 point(const SamplePlan& plan, std::int64_t i) const;
};

// PASS iff min eigenvalue of the Levi form >= -tol * scale(z) at all samples,
// with scale(z) = ||z||^{2(k-1)} for Euclidean-homogeneous p of degree 2k and
// 1 otherwise. Deterministic given (seed, n).
PshReport check_psh(const MixedPolynomial& p, const Region& region, std::int64_t n,
                    std::uint64_t seed, double tol = 1e-9, ExecPolicy exec = {});

// min over samples of eigmin(H(z)) / ||z||^{2(k-1)}, clamped at 0.
// Requires p homogeneous of even degree.
double strict_psh_lower_bound(const MixedPolynomial& p, const Region& region, std::int64_t n,
                              std::uint64_t seed, ExecPolicy exec = {});

}  // namespace bumpforge
