#include "bumpforge/poly.hpp"

#include <algorithm>
#include <cassert>
#include <climits>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bumpforge {

const char* errc_name(errc c) {
  switch (c) {
    case errc::syntax_error: return "SyntaxError";
    case errc::non_polynomial_modulus: return "NonPolynomialModulus";
    case errc::schema_error: return "SchemaError";
    case errc::slice_outside_ball: return "SliceOutsideBall";
    case errc::no_candidate: return "NoCandidate";
    case errc::not_weighted_homogeneous: return "NotWeightedHomogeneous";
    case errc::non_lattice_monomial: return "NonLatticeMonomial";
    case errc::invalid_weights: return "InvalidWeights";
    case errc::region_empty: return "RegionEmpty";
    case errc::not_subharmonic: return "NotSubharmonic";
    case errc::harmonic: return "Harmonic";
    case errc::search_failed: return "SearchFailed";
    case errc::empty_block: return "EmptyBlock";
    case errc::not_factorable: return "NotFactorable";
    case errc::not_strictly_psh: return "NotStrictlyPsh";
    case errc::shell_verification_failed: return "ShellVerificationFailed";
    case errc::no_positive_delta: return "NoPositiveDelta";
    case errc::infinite_type: return "InfiniteType";
    case errc::delta_too_large: return "DeltaTooLarge";
    case errc::strict_psh_failed: return "StrictPshFailed";
    case errc::no_positive_radius: return "NoPositiveRadius";
    case errc::grouping_mismatch: return "GroupingMismatch";
    case errc::pluriharmonic_in_p: return "PluriharmonicInP";
    case errc::q_weight_too_low: return "QWeightTooLow";
    case errc::not_psh: return "NotPsh";
    case errc::not_applicable: return "NotApplicable";
    case errc::no_admissible_k: return "NoAdmissibleK";
  }
  return "Error";
}

MixedPolynomial MixedPolynomial::constant(ExactComplex c) {
  MixedPolynomial p;
  p.add_term(Expo{}, c);
  return p;
}

MixedPolynomial MixedPolynomial::monomial(Expo e, ExactComplex c) {
  MixedPolynomial p;
  p.add_term(e, c);
  return p;
}

MixedPolynomial MixedPolynomial::variable(int var, bool conjugated) {
  Expo e;
  if (var == 1) (conjugated ? e.b1 : e.a1) = 1;
  else (conjugated ? e.b2 : e.a2) = 1;
  return monomial(e, ExactComplex::integer(1));
}

void MixedPolynomial::add_term(const Expo& e, const ExactComplex& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ExactComplex MixedPolynomial::coeff(const Expo& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? ExactComplex{} : it->second;
}

MixedPolynomial MixedPolynomial::operator+(const MixedPolynomial& o) const {
  MixedPolynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MixedPolynomial MixedPolynomial::operator-(const MixedPolynomial& o) const {
  MixedPolynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

MixedPolynomial MixedPolynomial::operator*(const MixedPolynomial& o) const {
  MixedPolynomial r;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_)
      r.add_term(Expo{e1.a1 + e2.a1, e1.b1 + e2.b1, e1.a2 + e2.a2, e1.b2 + e2.b2}, c1 * c2);
  return r;
}

MixedPolynomial MixedPolynomial::operator-() const {
  MixedPolynomial r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

MixedPolynomial MixedPolynomial::scaled(const ExactComplex& s) const {
  MixedPolynomial r;
  if (s.is_zero()) return r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
  return r;
}

MixedPolynomial MixedPolynomial::conj() const {
  MixedPolynomial r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e.conj(), c.conj());
  return r;
}

MixedPolynomial MixedPolynomial::pow(unsigned k) const {
  MixedPolynomial acc = constant(ExactComplex::integer(1));
  MixedPolynomial base = *this;
  while (k) {
    if (k & 1u) acc = acc * base;
    if (k >>= 1u) base = base * base;
  }
  return acc;
}

bool MixedPolynomial::is_real_valued() const {
  for (const auto& [e, c] : terms_)
    if (coeff(e.conj()) != c.conj()) return false;
  return true;
}

bool MixedPolynomial::has_pluriharmonic_terms(int maxDegree) const {
  for (const auto& [e, c] : terms_) {
    if (e.total() == 0 || e.total() > maxDegree) continue;
    if ((e.b1 == 0 && e.b2 == 0) || (e.a1 == 0 && e.a2 == 0)) return true;
  }
  return false;
}

bool MixedPolynomial::is_univariate1() const {
  for (const auto& [e, c] : terms_)
    if (e.a2 != 0 || e.b2 != 0) return false;
  return true;
}

int MixedPolynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.total());
  return d;
}

int MixedPolynomial::degree1() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.deg1());
  return d;
}

int MixedPolynomial::degree2() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.deg2());
  return d;
}

std::optional<int> MixedPolynomial::homogeneous_degree() const {
  if (terms_.empty()) return std::nullopt;
  int d = terms_.begin()->first.total();
  for (const auto& [e, c] : terms_)
    if (e.total() != d) return std::nullopt;
  return d;
}

std::complex<double> MixedPolynomial::eval(const C2& z) const {
  // Cached powers up to the needed degree.
  auto powers = [](std::complex<double> v, int n) {
    std::vector<std::complex<double>> p(static_cast<std::size_t>(n) + 1);
    p[0] = 1.0;
    for (int i = 1; i <= n; ++i) p[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i - 1)] * v;
    return p;
  };
  const auto p1 = powers(z.z1, degree1());
  const auto q1 = powers(std::conj(z.z1), degree1());
  const auto p2 = powers(z.z2, degree2());
  const auto q2 = powers(std::conj(z.z2), degree2());
  std::complex<double> acc = 0.0;
  for (const auto& [e, c] : terms_)
    acc += c.to_complex() * p1[static_cast<std::size_t>(e.a1)] * q1[static_cast<std::size_t>(e.b1)] *
           p2[static_cast<std::size_t>(e.a2)] * q2[static_cast<std::size_t>(e.b2)];
  return acc;
}

double MixedPolynomial::eval_real(const C2& z) const { return eval(z).real(); }

ExactComplex MixedPolynomial::eval_exact(const ExactComplex& z1, const ExactComplex& z2) const {
  ExactComplex acc;
  const ExactComplex c1 = z1.conj(), c2 = z2.conj();
  for (const auto& [e, c] : terms_) {
    ExactComplex t = c;
    t = t * z1.pow(static_cast<unsigned>(e.a1));
    t = t * c1.pow(static_cast<unsigned>(e.b1));
    t = t * z2.pow(static_cast<unsigned>(e.a2));
    t = t * c2.pow(static_cast<unsigned>(e.b2));
    acc += t;
  }
  return acc;
}

MixedPolynomial MixedPolynomial::substitute(const MixedPolynomial& A,
                                            const MixedPolynomial& B) const {
  const MixedPolynomial Ac = A.conj(), Bc = B.conj();
  auto powers = [](const MixedPolynomial& v, int n) {
    std::vector<MixedPolynomial> p;
    p.reserve(static_cast<std::size_t>(n) + 1);
    p.push_back(constant(ExactComplex::integer(1)));
    for (int i = 1; i <= n; ++i) p.push_back(p.back() * v);
    return p;
  };
  const auto pa = powers(A, degree1());
  const auto pac = powers(Ac, degree1());
  const auto pb = powers(B, degree2());
  const auto pbc = powers(Bc, degree2());
  MixedPolynomial r;
  for (const auto& [e, c] : terms_) {
    MixedPolynomial t = pa[static_cast<std::size_t>(e.a1)] * pac[static_cast<std::size_t>(e.b1)] *
                        pb[static_cast<std::size_t>(e.a2)] * pbc[static_cast<std::size_t>(e.b2)];
    r = r + t.scaled(c);
  }
  return r;
}

std::string MixedPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    if (e.a1) os << "*z1^" << e.a1;
    if (e.b1) os << "*~z1^" << e.b1;
    if (e.a2) os << "*z2^" << e.a2;
    if (e.b2) os << "*~z2^" << e.b2;
  }
  return os.str();
}

MixedPolynomial wirtinger(const MixedPolynomial& p, int var, WirtKind kind) {
  MixedPolynomial r;
  for (const auto& [e, c] : p.terms()) {
    Expo d = e;
    int* slot = nullptr;
    if (var == 1) slot = (kind == WirtKind::holo) ? &d.a1 : &d.b1;
    else slot = (kind == WirtKind::holo) ? &d.a2 : &d.b2;
    if (*slot == 0) continue;
    const int k = (*slot)--;
    r.add_term(d, c * make_rat(k));
  }
  return r;
}

WeightSignature WeightSignature::make(int m1, int m2) {
  if (m1 < 1 || m2 < 1 || m1 > m2)
    fail(errc::invalid_weights, "weights must satisfy 1 <= m1 <= m2");
  WeightSignature w;
  w.m1 = m1;
  w.m2 = m2;
  w.nu = std::lcm(m1, m2);
  w.sigma1 = w.nu / m1;
  w.sigma2 = w.nu / m2;
  assert(std::gcd(w.sigma1, w.sigma2) == 1);
  return w;
}

std::vector<WeightedComponent> weighted_decompose(const MixedPolynomial& p,
                                                  const WeightSignature& w) {
  std::map<long, MixedPolynomial> buckets;
  for (const auto& [e, c] : p.terms()) buckets[w.scaled_weight(e)].add_term(e, c);
  std::vector<WeightedComponent> out;
  out.reserve(buckets.size());
  for (auto& [sw, part] : buckets) out.push_back({make_rat(sw, w.nu), std::move(part)});
  return out;
}

InferredWeights infer_weights(const MixedPolynomial& p) {
  if (p.is_zero() || !p.coeff(Expo{}).is_zero())
    fail(errc::no_candidate, "polynomial must be nonzero and vanish at 0");
  const int maxd = p.total_degree();
  auto pluriharmonic = [](const Expo& e) {
    return (e.b1 == 0 && e.b2 == 0) || (e.a1 == 0 && e.a2 == 0);
  };
  InferredWeights best;
  bool found = false;
  for (int m1 = 1; m1 <= maxd; ++m1) {
    for (int m2 = m1; m2 <= maxd; ++m2) {
      const WeightSignature w = WeightSignature::make(m1, m2);
      long minw = LONG_MAX;
      for (const auto& [e, c] : p.terms()) minw = std::min(minw, w.scaled_weight(e));
      if (minw != w.nu) continue;  // minimal weight must be exactly 1
      int ones = 0;
      bool non_plurih = false;
      for (const auto& [e, c] : p.terms()) {
        if (w.scaled_weight(e) != w.nu) continue;
        ++ones;
        if (!pluriharmonic(e)) non_plurih = true;
      }
      if (!non_plurih) continue;
      const bool better =
          !found || ones > best.weight_one_terms ||
          (ones == best.weight_one_terms &&
           (w.nu < best.w.nu || (w.nu == best.w.nu && w.m1 < best.w.m1)));
      if (better) {
        best.w = w;
        best.weight_one_terms = ones;
        found = true;
      }
    }
  }
  if (!found) fail(errc::no_candidate, "no integer weight pair gives a non-pluriharmonic minimal component");
  return best;
}

StripResult pluriharmonic_strip(const MixedPolynomial& p, int maxDegree) {
  StripResult r;
  for (const auto& [e, c] : p.terms()) {
    if (e.b1 != 0 || e.b2 != 0) continue;
    if (e.total() == 0 || e.total() > maxDegree) continue;
    r.q.add_term(e, c * make_rat(2));
  }
  const MixedPolynomial re_q = (r.q + r.q.conj()).scaled(ExactComplex{make_rat(1, 2), Rat(0)});
  r.rho = p - re_q;
  return r;
}

MixedPolynomial restrict_to_line(const MixedPolynomial& p, const ExactComplex& xi) {
  const MixedPolynomial t = MixedPolynomial::variable(1);
  return p.substitute(t.scaled(xi), t);
}

MixedPolynomial restrict_to_axis1(const MixedPolynomial& p) {
  return p.substitute(MixedPolynomial::variable(1), MixedPolynomial{});
}

MixedPolynomial restrict_to_axis2(const MixedPolynomial& p) {
  return p.substitute(MixedPolynomial{}, MixedPolynomial::variable(1));
}

MixedPolynomial restrict_affine(const MixedPolynomial& p, const ExactComplex& x1,
                                const ExactComplex& x2, const ExactComplex& d1,
                                const ExactComplex& d2) {
  const MixedPolynomial t = MixedPolynomial::variable(1);
  const MixedPolynomial A = MixedPolynomial::constant(x1) + t.scaled(d1);
  const MixedPolynomial B = MixedPolynomial::constant(x2) + t.scaled(d2);
  return p.substitute(A, B);
}

MixedPolynomial shear(const MixedPolynomial& p, const ExactComplex& xi) {
  const MixedPolynomial z1 = MixedPolynomial::variable(1);
  const MixedPolynomial z2 = MixedPolynomial::variable(2);
  return p.substitute(z1 + z2.scaled(xi), z2);
}

MixedPolynomial swap_vars(const MixedPolynomial& p) {
  MixedPolynomial r;
  for (const auto& [e, c] : p.terms()) r.add_term(Expo{e.a2, e.b2, e.a1, e.b1}, c);
  return r;
}

MixedPolynomial pullback(const MixedPolynomial& p, const WeightSignature& w) {
  MixedPolynomial r;
  for (const auto& [e, c] : p.terms())
    r.add_term(Expo{e.a1 * w.sigma1, e.b1 * w.sigma1, e.a2 * w.sigma2, e.b2 * w.sigma2}, c);
  return r;
}

MixedPolynomial pushdown(const MixedPolynomial& p, const WeightSignature& w) {
  MixedPolynomial r;
  for (const auto& [e, c] : p.terms()) {
    if (e.a1 % w.sigma1 || e.b1 % w.sigma1 || e.a2 % w.sigma2 || e.b2 % w.sigma2)
      fail(errc::non_lattice_monomial, "support not on the (sigma1, sigma2) lattice");
    r.add_term(Expo{e.a1 / w.sigma1, e.b1 / w.sigma1, e.a2 / w.sigma2, e.b2 / w.sigma2}, c);
  }
  return r;
}

MixedPolynomial block_by_degree1(const MixedPolynomial& p, int d) {
  MixedPolynomial r;
  for (const auto& [e, c] : p.terms())
    if (e.deg1() == d) r.add_term(e, c);
  return r;
}

MixedPolynomial block_by_degree2(const MixedPolynomial& p, int d) {
  MixedPolynomial r;
  for (const auto& [e, c] : p.terms())
    if (e.deg2() == d) r.add_term(e, c);
  return r;
}

MixedPolynomial homogeneous_part(const MixedPolynomial& p, int n) {
  MixedPolynomial r;
  for (const auto& [e, c] : p.terms())
    if (e.total() == n) r.add_term(e, c);
  return r;
}

int vanishing_order(const MixedPolynomial& p) {
  int ord = INT_MAX;
  for (const auto& [e, c] : p.terms())
    if (e.total() > 0) ord = std::min(ord, e.total());
  return ord;
}

bool is_harmonic_univariate(const MixedPolynomial& p) {
  assert(p.is_univariate1());
  for (const auto& [e, c] : p.terms())
    if (e.a1 >= 1 && e.b1 >= 1) return false;
  return true;
}

double coeff_scale(const MixedPolynomial& p) {
  double s = 0.0;
  for (const auto& [e, c] : p.terms())
    s += std::abs(c.re.get_d()) + std::abs(c.im.get_d());
  return s;
}

}  // namespace bumpforge
