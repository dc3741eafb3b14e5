#pragma once

// End-to-end bumping: validate the model domain, detect and classify the
// exceptional curves, assemble on the pullback side, symmetrize back through
// the branch average, push the pluriharmonic coordinate change down, choose
// the final W = w + K w^2 change, and emit a re-verifiable certificate.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bumpforge/assemble.hpp"
#include "bumpforge/exceptional.hpp"
#include "bumpforge/poly.hpp"

namespace bumpforge {

struct ModelDomain {
  WeightSignature w = WeightSignature::make(2, 2);
  MixedPolynomial P, Q;
  std::string name;
  std::string source_text;
};

// Splits a full defining polynomial into the weight-1 part P and the higher
// part Q and checks the normal-form invariants. Errors: q_weight_too_low
// (terms of weighted degree < 1, or an empty weight-1 part),
// pluriharmonic_in_p, not_psh (witness), not_applicable (nu odd or < 4).
ModelDomain validate_domain(const MixedPolynomial& full, const WeightSignature& w,
                            std::string name = {}, std::string source = {},
                            std::uint64_t seed = 1);

// Branch average over the sigma1 x sigma2 Psi-preimages of z.
double branch_average(const std::function<double(const C2&)>& F, const WeightSignature& w,
                      const C2& z);

// Sampled deck-rotation invariance F o R^{lm} = F; witness written on failure.
bool deck_invariant(const std::function<double(const C2&)>& F, const WeightSignature& w,
                    std::int64_t samples, std::uint64_t seed, double tol, C2* witness = nullptr);

// Exponent division of a holomorphic lattice polynomial q in t into f in z
// with q = f o Psi; throws errc::non_lattice_monomial otherwise.
MixedPolynomial pushdown_coordinate_change(const MixedPolynomial& q, const WeightSignature& w);

// z-side evaluators over an assembled pullback-side G.
double eval_G_z(const AssembledG& G, const C2& z);
double eval_H0cal_z(const AssembledG& G, const C2& z);  // (delta0/2) branch-avg of H
double eval_v(const AssembledG& G, std::size_t curve, const std::complex<double>& x);
// smallest pullback cone aperture of z relative to the curve's lines
double wedge_aperture(const AssembledG& G, std::size_t curve, const C2& z);

struct KChoice {
  double K = 0.0;
  double R = 0.0;
  double margin = 0.0;  // min of -(Re W + G) / (beta^2 + Sigma^{(Delta+1)/nu})
};

struct CurvePayload {
  bool xi_infinite = false;
  ExactComplex xi, omega0;
  int mu = 0, twoM = 0;
  bool star_ok = true;
  double alpha = 0.1;
  std::vector<double> urot, hshift;
  ConeBump cone;
  RadialBump hline;
  double r_delta = 0.0, C = 0.0;
};

struct BumpCertificate {
  std::string schema = "bumpforge-cert/1";
  std::string name;
  std::string domain_text;  // canonical form of P + Q
  WeightSignature w = WeightSignature::make(2, 2);
  MixedPolynomial P, Q;
  std::string classification;
  double alpha1 = 0.0, alpha2 = 0.0;
  std::vector<CurvePayload> curves;
  AmbientBump ambient;
  double delta0 = 0.0, r0 = 0.0;
  double global_r = 0.0, global_C = 0.0;
  MixedPolynomial f;  // holomorphic coordinate-change polynomial in z
  double K = 0.0, R = 0.0, margin = 0.0;
  int Delta = 0;
  std::uint64_t seed = 1;
  std::vector<std::pair<std::string, double>> summary;  // check -> margin
  bool summary_pass = false;
};

// Rebuilds the assembled pullback-side object from certificate payloads
// alone (no construction searches re-run).
AssembledG reassemble(const BumpCertificate& cert);

// rho-tilde on the z-side: (P + Q) - Re f.
MixedPolynomial defining_function_z(const BumpCertificate& cert);

struct BumpOptions {
  std::uint64_t seed = 1;
  std::int64_t samples = 3000;
  bool run_summary = true;
};

struct AnalyzeResult {
  ModelDomain domain;
  std::vector<ExceptionalCurve> curves;
  Classification classification;
};

AnalyzeResult analyze(const MixedPolynomial& full, const WeightSignature& w,
                      const BumpOptions& opts = {}, ExecPolicy exec = {});

KChoice choose_K(const BumpCertificate& cert, const AssembledG& G, std::uint64_t seed,
                 std::int64_t samples, ExecPolicy exec = {});

// Full pipeline; throws errc::not_applicable when the classification or the
// normal-line order condition refuses the domain, and propagates stage
// errors otherwise.
BumpCertificate bump(const MixedPolynomial& full, const WeightSignature& w,
                     const BumpOptions& opts = {}, ExecPolicy exec = {});

}  // namespace bumpforge
