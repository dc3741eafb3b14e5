#pragma once

// Assembly on the homogeneous (pullback) side: ambient bump H0 over the
// degeneracy wedge, sphere cutoffs around the exceptional lines, per-line
// subharmonic terms u - delta h, the composite
//   Gamma_delta = Pi - delta H + sum_jk (u_jk - delta h_jk) Psi_jk,
//   H = H0 + sum_jk Psi_jk H_jk + eps_E E,
// and the fitted decay constants.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "bumpforge/conebump.hpp"
#include "bumpforge/exceptional.hpp"
#include "bumpforge/fsbump.hpp"
#include "bumpforge/levi.hpp"
#include "bumpforge/poly.hpp"

namespace bumpforge {

struct LineFrame {
  bool axis2 = false;  // the line {t2 = 0}; otherwise {t1 = omega t2}
  std::complex<double> omega{0.0, 0.0};
  // sheared coordinates with the line at {zeta1 = 0}
  C2 to_frame(const C2& t) const {
    if (axis2) return {t.z2, t.z1};
    return {t.z1 - omega * t.z2, t.z2};
  }
  double aperture(const C2& t) const { return cone_aperture(omega, axis2, t); }
};

// Psi: smooth, == 1 at aperture <= alpha, == 0 at aperture >= 2 alpha,
// homogeneous of degree 0.
struct SphereCutoff {
  LineFrame frame;
  double alpha = 0.1;
  double eval(const C2& t) const;
};

// Compiled double-precision copy of a MixedPolynomial for hot loops.
struct FastPoly {
  struct Term {
    int a1, b1, a2, b2;
    std::complex<double> c;
  };
  std::vector<Term> terms;
  int d1 = 0, d2 = 0;
  FastPoly() = default;
  explicit FastPoly(const MixedPolynomial& p);
  std::complex<double> eval(const C2& z) const;
  double eval_real(const C2& z) const { return eval(z).real(); }
};

struct FastHessian {
  FastPoly h11, h12, h22;
  FastHessian() = default;
  explicit FastHessian(const MixedPolynomial& p);
  ComplexHessian at(const C2& z) const;
};

struct CurveBundle {
  bool axis2 = false;
  ExactComplex omega0;            // exact base slope (non-axis curves)
  std::vector<LineFrame> lines;   // deck orbit; single frame for axes
  std::vector<double> urot;       // u_jk(x) = u_j0(e^{i urot[k]} x)
  std::vector<double> hshift;     // H_jk argument shift for the HBAD profile
  int mu = 0, twoM = 0;
  ConeBump cone;                  // built in the frame of lines[0]
  MixedPolynomial Pi2M;           // exact homogeneous piece of R of degree twoM
  FastPoly Pi2M_fast;
  RadialBump hline;               // FS bump of u_j0; floor > 0 is the c2 constant
  double alpha = 0.1;             // cutoff aperture

  double u(std::size_t k, const std::complex<double>& s) const;
  double h(std::size_t k, const std::complex<double>& s) const;
  double Hjk(std::size_t k, const C2& t) const;
  ComplexHessian Hjk_levi(std::size_t k, const C2& t) const;
};

struct ClusterLine {
  LineFrame frame;
  double aperture = 0.05;
  double s_quad = 0.0;  // concave coefficient of -|zeta1|^2 ||t||^{2k-2}
};

struct AmbientBump {
  int two_k = 4;
  double c0 = 1.0;
  double line_clear = 0.25;           // S_lines vanishes at aperture <= line_clear
  std::vector<LineFrame> exc_lines;   // all exceptional lines
  std::vector<int> p_exp;             // per line: mu_j / 2 for the E-term
  std::vector<ClusterLine> clusters;  // degeneracy clusters off the lines
  double eps_E = 0.0;
  double delta_max = 0.0;
  double fitted_B3 = 0.0;

  double S_lines(const C2& t) const;
  double eval_H0(const C2& t) const;
  double eval_E(const C2& t) const;
};

struct LineTermsResult {
  MixedPolynomial u0;  // exact restriction of the degree-2M piece to the base line
  RadialBump h;
  int twoM = 0;
};

// u_j = degree-2M part of rho restricted to the line; asserted subharmonic and
// non-harmonic (errors from the circle profile propagate); h built with the
// floor normalization h >= floor |s|^{2M}.
LineTermsResult line_terms(const MixedPolynomial& rho, const ExceptionalCurve& curve,
                           int twoM);

struct AssembleOptions {
  std::uint64_t seed = 1;
  std::int64_t samples = 3000;
  double delta_cap = 0.5;
  double delta_override = 0.0;  // > 0 forces the working delta (error if too large)
  int max_iters = 48;
  double fd_tol = 1e-6;  // tolerance on scaled Levi minima through FD
};

struct AssembledG {
  MixedPolynomial Pi;
  MixedPolynomial rho;
  WeightSignature w;
  FastPoly Pi_fast, rho_fast;
  FastHessian Pi_hess;
  AmbientBump ambient;
  std::vector<CurveBundle> curves;
  double delta0 = 0.0, r0 = 0.5;
  double delta = 0.0;  // working value, delta0 / 2

  double eval_H(const C2& t) const;
  double eval_at(const C2& t, double d) const;
  double eval(const C2& t) const { return eval_at(t, delta); }
  // Levi of Gamma_delta: analytic for Pi, finite differences for the bumps.
  ComplexHessian levi_at(const C2& t, double d, double fd_step_rel = 1e-4) const;
  ComplexHessian levi(const C2& t) const { return levi_at(t, delta); }
};

// Builds the ambient bump against the degeneracy of Pi off the exceptional
// lines. Throws errc::no_positive_delta with a witness in the message when
// the bisection cannot certify any delta.
AmbientBump build_ambient_bump(const MixedPolynomial& Pi,
                               const std::vector<CurveBundle>& curves,
                               const AssembleOptions& opts = {}, ExecPolicy exec = {});

// Full assembly: cone bumps and line terms per curve, ambient bump,
// perturbation, (delta0, r0) search with sampled strict plurisubharmonicity.
AssembledG assemble_G(const MixedPolynomial& P, const MixedPolynomial& Q,
                      const WeightSignature& w, const std::vector<ExceptionalCurve>& curves,
                      const AssembleOptions& opts = {}, ExecPolicy exec = {});

struct DecayConstants {
  struct PerCurve {
    double r_delta = 0.0;
    double C = 0.0;
  };
  std::vector<PerCurve> per_curve;
  double global_r = 0.0;
  double global_C = 0.0;
};

// Prop-style decay fits: on each curve cone (rho - Gamma)/(|zeta1|^mu
// |zeta2|^{2k-mu} + |zeta2|^{2M}) and globally (rho - Gamma)/||t||^{2k} off
// the cones, halving the radius until the infimum is positive.
DecayConstants fit_decay_constants(const AssembledG& G, std::uint64_t seed = 1,
                                   std::int64_t samples = 10000, ExecPolicy exec = {});

}  // namespace bumpforge
