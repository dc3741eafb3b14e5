#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bumpforge {

enum class errc {
  // parsing / io
  syntax_error,
  non_polynomial_modulus,
  schema_error,
  slice_outside_ball,
  // polynomial algebra
  no_candidate,
  not_weighted_homogeneous,
  non_lattice_monomial,
  invalid_weights,
  // regions / sampling
  region_empty,
  // one-variable bumping
  not_subharmonic,
  harmonic,
  search_failed,
  // cone bumping
  empty_block,
  not_factorable,
  not_strictly_psh,
  shell_verification_failed,
  // assembly
  no_positive_delta,
  infinite_type,
  delta_too_large,
  strict_psh_failed,
  no_positive_radius,
  grouping_mismatch,
  // pipeline
  pluriharmonic_in_p,
  q_weight_too_low,
  not_psh,
  not_applicable,
  no_admissible_k,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, std::string msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + std::move(msg)), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

}  // namespace bumpforge
