#pragma once

// Independent certificate re-verification: deterministic samplers,
// finite-difference oracles, inequality sweeps over the serialized payloads
// alone. Must be able to fail a tampered certificate.

#include <functional>
#include <string>
#include <vector>

#include "bumpforge/pipeline.hpp"

namespace bumpforge {

struct VerifyOptions {
  std::int64_t samples = 100000;
  std::uint64_t seed = 2;
  double tol = 1e-10;  // floor for strict-inequality margins, times the local scale
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

struct VerificationReport {
  bool pass = false;
  std::vector<CheckResult> checks;
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

// Re-runs, from the payloads plus the domain data: domain validation, exact
// curve harmonicity, the plurisubharmonicity sweep, the piecewise identities,
// strict negativity of Re W + G on hypersurface samples, the decay bounds
// with the stored constants, profile ranges, and consistency of the stored
// schema and constants. Deterministic given (certificate, options).
VerificationReport verify_certificate(const BumpCertificate& cert, const VerifyOptions& opts = {},
                                      ExecPolicy exec = {});

// Max relative deviation between a declared complex Hessian and the central
// finite-difference Hessian of F over the given points.
double fd_cross_check(const std::function<double(const C2&)>& F,
                      const std::function<ComplexHessian(const C2&)>& declared,
                      const std::vector<C2>& points, double step);

}  // namespace bumpforge
