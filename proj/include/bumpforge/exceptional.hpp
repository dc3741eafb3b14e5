#pragma once

// Enumeration of the exceptional curves z1^{sigma2} = xi z2^{sigma1} along
// which the weight-1 polynomial is harmonic, classification of the domain,
// and the per-curve invariants mu_j / 2M_j with the normal-line order check.

#include <complex>
#include <cstdint>
#include <vector>

#include "bumpforge/kernels.hpp"
#include "bumpforge/poly.hpp"

namespace bumpforge {

struct ExceptionalCurve {
  bool xi_infinite = false;  // curve {z2 = 0}; pullback line {t2 = 0}
  ExactComplex xi;           // valid when !xi_infinite; xi = 0 means {z1 = 0}
  ExactComplex omega0;       // base pullback slope (finite xi; 0 for xi = 0)
  std::vector<std::complex<double>> pullback_lines;  // sigma1*sigma2 slopes, or empty for axes
  int mu = 0;
  int twoM = 0;
  bool star_ok = false;         // first part of the normal-line order condition
  bool mu_disagreement = false; // generic order needed a widened sample
};

// Raw harmonic-line solver on a homogeneous polynomial Pi: exact slopes of
// all lines {t1 = omega t2} with exactly harmonic restriction, plus axis
// flags. Slopes are found by subdivision with exact interval exclusion and
// kept only after exact re-verification; candidates that fail the exact gate
// (non-rational slopes) are dropped and recovered through deck orbits by the
// caller when applicable.
struct HarmonicLines {
  std::vector<ExactComplex> slopes;  // finite nonzero, exact, deduplicated
  bool line_t1_zero = false;         // {t1 = 0} (slope 0)
  bool line_t2_zero = false;         // {t2 = 0}
};
HarmonicLines solve_harmonic_lines(const MixedPolynomial& Pi);

// Brute-force oracle: (2N+1)^2 rational grid over [-half, half]^2 for the
// slope, plus the axes; grid points whose residual zeroes out numerically are
// re-verified exactly.
HarmonicLines harmonic_lines_grid_oracle(const MixedPolynomial& Pi, int gridN = 1000,
                                         long half_num = 1, long half_den = 1,
                                         ExecPolicy exec = {});

// Preconditions: P real-valued, every term of weighted degree exactly 1,
// no pluriharmonic terms.
std::vector<ExceptionalCurve> find_exceptional(const MixedPolynomial& P,
                                               const WeightSignature& w);

struct Classification {
  enum class V { H_EXTENDIBLE, ALMOST_H_EXTENDIBLE, NOT_APPLICABLE };
  V verdict = V::NOT_APPLICABLE;
  double alpha1 = 0.0, alpha2 = 0.0;  // pullback-side wedge apertures per curve
  std::int64_t samples = 0;
  std::int64_t degenerate_samples = 0;
  std::int64_t off_curve_degenerate = 0;
  bool has_witness = false;
  C2 witness{};
};

struct SeparationOptions {
  std::int64_t samples = 4096;
  std::uint64_t seed = 1;
  double det_tol = 1e-9;  // on the scaled Hessian determinant
};

Classification separation_check(const MixedPolynomial& P, const WeightSignature& w,
                                const std::vector<ExceptionalCurve>& curves,
                                const SeparationOptions& opts = {}, ExecPolicy exec = {});

// Fills mu, twoM, star_ok on the curve; Q is the strictly-higher-weight part.
// Throws errc::infinite_type when no homogeneous piece of (P+Q) o Psi
// restricts non-harmonically to the curve's pullback line.
void curve_invariants(const MixedPolynomial& P, const MixedPolynomial& Q,
                      const WeightSignature& w, ExceptionalCurve& curve);

// Aperture coordinate of a z-side point relative to a curve: the smallest
// cone aperture |t1 - omega t2| / |t2| over the Psi-preimages of z and the
// curve's pullback lines.
double curve_aperture(const C2& z, const ExceptionalCurve& curve, const WeightSignature& w);

// Psi-preimages of z (sigma1 * sigma2 branch points).
std::vector<C2> branch_preimages(const C2& z, const WeightSignature& w);

}  // namespace bumpforge
