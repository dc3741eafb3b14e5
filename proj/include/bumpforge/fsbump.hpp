#pragma once

// One-variable radial bumping: given a homogeneous subharmonic non-harmonic
// U on C, build a 2pi-periodic profile h with 0 < h <= 1 such that
//   Laplacian(U - delta |.|^{2m} h(arg .)) >= delta C1 |.|^{2m-2}   (all delta in (0,1])
// and >= C2 |.|^{2m-2} off the sectors around the zeros of Laplacian(U) on
// the unit circle, independent of delta.

#include <cstdint>
#include <map>
#include <vector>

#include "bumpforge/poly.hpp"

namespace bumpforge {

// Real-valued trigonometric polynomial sum_k c_k e^{ik theta} with exact
// coefficients (c_{-k} = conj c_k).
struct TrigPoly {
  std::map<int, ExactComplex> c;

  static TrigPoly from_circle_restriction(const MixedPolynomial& univariate);
  bool is_zero() const { return c.empty(); }
  double eval(double theta) const;
  TrigPoly derivative() const;
  double coeff_scale() const;
  bool is_constant() const;
  ExactComplex constant_term() const;
};

struct CircleProfile {
  int degree2m = 2;
  TrigPoly laplacian_on_circle;  // Laplacian(U)(e^{i theta}), exact coefficients
  std::vector<double> zeros;     // sorted angles in [0, 2pi)
  double min_laplacian = 0.0;    // min over the circle
  double max_abs_u = 0.0;        // max |U| on the circle
};

// Errors: not_subharmonic (negative Laplacian on the circle, witness angle in
// the message), harmonic (identically zero Laplacian).
CircleProfile circle_profile(const MixedPolynomial& U);

// C^2 periodic interpolation of a uniform grid by quintic B-splines; the
// verification path of serialized bumps evaluates h and h'' through this.
class PeriodicSpline {
 public:
  static PeriodicSpline interpolate(const std::vector<double>& values);
  double eval(double theta, int deriv = 0) const;  // theta in radians, 2pi-periodic
  static double basis(double t, int deriv);        // uniform quintic B-spline on [0,6]

 private:
  std::vector<double> ctrl_;
};

struct RadialBump {
  int degree2m = 2;
  double sigma = 0.0;                  // sector half-width for the C2 margin
  std::vector<double> sector_centers;  // zeros of the circle Laplacian
  double rot = 0.0;                    // internal frame rotation (zeros kept inside (0, 2pi))

  bool constant_profile = true;
  double c0 = 1.0, amp = 0.0, width = 1.0;

  std::vector<double> grid;  // h sampled at theta_i = 2 pi i / grid.size()
  double C1 = 0.0, C2 = 0.0;
  double floor = 0.0;  // min h on the circle; the c2 constant of line bumps

  // Analytic profile (construction path).
  double h(double theta) const;
  double hpp(double theta) const;
  double Q(double theta) const;  // (2m)^2 h + h''
  // F(re^{i theta}) = r^{2m} h(theta) and Laplacian F / 4 at w != 0.
  double F(const std::complex<double>& w) const;
  double F_lap_over4(const std::complex<double>& w) const;
};

struct FsSearchParams {
  int verify_grid = 8192;
  double margin_tol = 1e-12;
};

RadialBump construct_radial_bump(const CircleProfile& prof, double sigma,
                                 const FsSearchParams& params = {});

struct RadialBumpReport {
  // margin(delta) = min over grid of (L - delta Q_spline - delta C1); for
  // delta = 0 the margin is min L.
  std::vector<std::pair<double, double>> per_delta;  // (delta, margin)
  double worst_margin = 0.0;
  double h_min = 0.0, h_max = 0.0;
  double c2_margin = 0.0;  // min off-sector (L - max(Q,0)) - C2
};

// Spline-based a-posteriori verification from the serialized grid payload.
RadialBumpReport verify_radial_bump(const MixedPolynomial& U, const RadialBump& bump,
                                    const std::vector<double>& deltas, int gridSize);

}  // namespace bumpforge
