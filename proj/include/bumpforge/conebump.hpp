#pragma once

// Cone bumping around an exceptional line, worked in sheared coordinates
// where the line is {zeta1 = 0}: extract the lowest zeta1-block Q_mu, factor
// it as U(zeta1^a zeta2^b), build H with the explicit decay rate, and verify
// strict plurisubharmonicity of P - delta H on cone shells.

#include <complex>
#include <cstdint>
#include <vector>

#include "bumpforge/fd.hpp"
#include "bumpforge/fsbump.hpp"
#include "bumpforge/kernels.hpp"
#include "bumpforge/levi.hpp"
#include "bumpforge/poly.hpp"

namespace bumpforge {

struct BidegreeFactorization {
  MixedPolynomial U;  // univariate, homogeneous of degree two_m
  int a = 0, b = 0;
  int two_m = 0;
};

// (mu, Q_mu): mu is the smallest z1-degree in the support, Q_mu the block.
// Requires P(0, .) == 0 so that mu >= 1; throws errc::empty_block on zero input.
std::pair<int, MixedPolynomial> lowest_block(const MixedPolynomial& P);

// Q = U(z1^a z2^b) exactly, with 2m a and 2m b matching the bidegrees.
// Throws errc::not_factorable when the support leaves the required lattice.
BidegreeFactorization factor_bidegree(const MixedPolynomial& Q);

struct ConeBump {
  enum class Mode { HGOOD, HBAD };
  Mode mode = Mode::HGOOD;
  BidegreeFactorization fac;
  int mu = 0, two_k = 0;
  bool gamma_is_exact = false;
  Rat gamma_rat;        // exact inf of U_{w wbar} on the circle when constant
  double gamma = 0.0;   // numeric value of the same inf
  RadialBump radial;    // HBAD payload
  double sigma = 0.0;   // verified cone aperture
  double c = 0.0;       // decay constant: H > c |z1|^mu |z2|^{2k-mu} on the cone
  std::vector<std::pair<double, double>> shell_B;  // (t, worst fitted B(t) over deltas)

  double eval(const C2& zeta) const;
  ComplexHessian levi(const C2& zeta) const;  // rank-one F''(g) v v*
};

struct ConeBumpOptions {
  std::uint64_t seed = 1;
  std::int64_t samples = 1500;
  std::vector<double> ts{0.5, 0.25, 0.125};
  std::vector<double> deltas{1.0, 0.5, 0.125};
  double sigma_start = 0.5;
  int max_halvings = 20;
  double fs_sector = 0.2;
};

// Throws errc::not_strictly_psh when P fails strictness on the punctured
// cone (precondition), errc::shell_verification_failed when no aperture
// verifies, and propagates factorization/profile errors.
ConeBump build_cone_bump(const MixedPolynomial& P_sheared, const ConeBumpOptions& opts = {},
                         ExecPolicy exec = {});

struct ConeBumpReport {
  double decay_margin = 0.0;                       // min(H/den - c) over fresh cone samples
  std::vector<std::pair<double, double>> shell_B;  // fresh (t, worst B) per shell
  double worst_shell_B = 0.0;
};

ConeBumpReport verify_cone_bump(const MixedPolynomial& P_sheared, const ConeBump& bump,
                                const std::vector<double>& deltas, const SamplePlan& plan,
                                ExecPolicy exec = {});

}  // namespace bumpforge
