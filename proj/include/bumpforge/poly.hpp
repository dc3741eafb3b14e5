#pragma once

// Exact algebra for real-valued polynomials in z1, conj(z1), z2, conj(z2).
// All construction-phase algebra is exact rational; doubles appear only when
// evaluating at numeric points.

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "bumpforge/errors.hpp"
#include "bumpforge/rational.hpp"

namespace bumpforge {

// Exponent quadruple of z1^a1 conj(z1)^b1 z2^a2 conj(z2)^b2.
struct Expo {
  int a1 = 0, b1 = 0, a2 = 0, b2 = 0;
  auto operator<=>(const Expo&) const = default;
  int total() const { return a1 + b1 + a2 + b2; }
  int deg1() const { return a1 + b1; }
  int deg2() const { return a2 + b2; }
  Expo conj() const { return {b1, a1, b2, a2}; }
};

class MixedPolynomial {
 public:
  using TermMap = std::map<Expo, ExactComplex>;

  MixedPolynomial() = default;
  static MixedPolynomial constant(ExactComplex c);
  static MixedPolynomial monomial(Expo e, ExactComplex c);
  static MixedPolynomial variable(int var, bool conjugated = false);  // var in {1,2}

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Expo& e, const ExactComplex& c);
  ExactComplex coeff(const Expo& e) const;

  MixedPolynomial operator+(const MixedPolynomial& o) const;
  MixedPolynomial operator-(const MixedPolynomial& o) const;
  MixedPolynomial operator*(const MixedPolynomial& o) const;
  MixedPolynomial operator-() const;
  MixedPolynomial scaled(const ExactComplex& s) const;
  MixedPolynomial conj() const;
  MixedPolynomial pow(unsigned k) const;
  bool operator==(const MixedPolynomial& o) const { return terms_ == o.terms_; }

  bool is_real_valued() const;
  // True if some nonconstant term is purely holomorphic or antiholomorphic
  // (contributes a pluriharmonic summand), up to total degree maxDegree.
  bool has_pluriharmonic_terms(int maxDegree = 1 << 20) const;
  bool is_univariate1() const;  // only z1/conj(z1) present
  int total_degree() const;     // 0 for the zero polynomial
  int degree1() const;
  int degree2() const;
  // Total degree if Euclidean-homogeneous, otherwise nullopt.
  std::optional<int> homogeneous_degree() const;

  std::complex<double> eval(const C2& z) const;
  double eval_real(const C2& z) const;  // asserts small imaginary part
  ExactComplex eval_exact(const ExactComplex& z1, const ExactComplex& z2) const;

  // Substitute z1 <- A, z2 <- B (conjugate slots follow by conjugation).
  MixedPolynomial substitute(const MixedPolynomial& A, const MixedPolynomial& B) const;

  std::string str() const;  // debug form, not the parser grammar

 private:
  TermMap terms_;  // no zero coefficients stored
};

// Wirtinger derivative: d/dz_var (kind=holo) or d/dconj(z_var) (kind=anti).
enum class WirtKind { holo, anti };
MixedPolynomial wirtinger(const MixedPolynomial& p, int var, WirtKind kind);

// ---------------------------------------------------------------------------
// Weight bookkeeping

struct WeightSignature {
  int m1 = 0, m2 = 0;  // multitype tail, ordered m1 <= m2
  int nu = 0;          // lcm(m1, m2)
  int sigma1 = 0, sigma2 = 0;  // nu/m1, nu/m2 (coprime)

  static WeightSignature make(int m1, int m2);
  // nu * weighted-degree of a term; an integer.
  long scaled_weight(const Expo& e) const {
    return static_cast<long>(e.deg1()) * sigma1 + static_cast<long>(e.deg2()) * sigma2;
  }
  Rat weighted_degree(const Expo& e) const { return make_rat(scaled_weight(e), nu); }
};

struct WeightedComponent {
  Rat eta;  // weighted degree
  MixedPolynomial part;
};

// Components sorted by eta ascending; their sum reproduces p exactly.
std::vector<WeightedComponent> weighted_decompose(const MixedPolynomial& p,
                                                  const WeightSignature& w);

struct InferredWeights {
  WeightSignature w;
  bool non_authoritative = true;  // heuristic, always flagged
  int weight_one_terms = 0;
};

// Newton-envelope heuristic; throws errc::no_candidate when no integer pair
// makes the minimal-weight component non-pluriharmonic.
InferredWeights infer_weights(const MixedPolynomial& p);

// rho = p - Re(q); q holomorphic; rho has no pluriharmonic terms of total
// degree <= maxDegree (the constant term stays in rho).
struct StripResult {
  MixedPolynomial q;    // holomorphic polynomial
  MixedPolynomial rho;  // remainder
};
StripResult pluriharmonic_strip(const MixedPolynomial& p, int maxDegree);

// ---------------------------------------------------------------------------
// Restrictions and pullbacks

// p(xi*t, t) as a polynomial in (t, conj t), stored in the z1 slots.
MixedPolynomial restrict_to_line(const MixedPolynomial& p, const ExactComplex& xi);
// p(t, 0) — the line {z2 = 0}.
MixedPolynomial restrict_to_axis1(const MixedPolynomial& p);
// p(0, t) — the line {z1 = 0}.
MixedPolynomial restrict_to_axis2(const MixedPolynomial& p);
// p(x + tau*d) as a polynomial in (tau, conj tau).
MixedPolynomial restrict_affine(const MixedPolynomial& p, const ExactComplex& x1,
                                const ExactComplex& x2, const ExactComplex& d1,
                                const ExactComplex& d2);

// p(z1 + xi*z2, z2) — shear moving {z1 = xi z2} to {z1 = 0}.
MixedPolynomial shear(const MixedPolynomial& p, const ExactComplex& xi);
// p(z2, z1).
MixedPolynomial swap_vars(const MixedPolynomial& p);

// p o Psi with Psi(t1, t2) = (t1^sigma1, t2^sigma2).
MixedPolynomial pullback(const MixedPolynomial& p, const WeightSignature& w);
// Inverse exponent division; throws errc::non_lattice_monomial if support is
// not on the (sigma1, sigma2) lattice.
MixedPolynomial pushdown(const MixedPolynomial& p, const WeightSignature& w);

// Sum of terms of p with z1-degree exactly d (or z2-degree when by_z2).
MixedPolynomial block_by_degree1(const MixedPolynomial& p, int d);
MixedPolynomial block_by_degree2(const MixedPolynomial& p, int d);
// Sum of terms with total degree exactly n.
MixedPolynomial homogeneous_part(const MixedPolynomial& p, int n);

// Lowest total degree among nonzero terms after dropping the constant;
// INT_MAX when nothing remains. Used for contact orders.
int vanishing_order(const MixedPolynomial& p);

// Restriction of a real-valued univariate polynomial is harmonic iff all
// mixed terms (a >= 1 and b >= 1) vanish; exact test.
bool is_harmonic_univariate(const MixedPolynomial& p);

// Coefficient magnitude scale: sum of |re| + |im| over all terms (double).
double coeff_scale(const MixedPolynomial& p);

}  // namespace bumpforge
