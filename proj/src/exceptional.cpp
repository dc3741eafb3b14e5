#include "bumpforge/exceptional.hpp"
#include <array>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <iostream>
#include <map>
#include <sstream>

#include "bumpforge/errors.hpp"
#include "bumpforge/levi.hpp"
#include "bumpforge/sample.hpp"

namespace bumpforge {

namespace {

// ---------------------------------------------------------------------------
// Realified slope equations: the restriction Pi(omega t, t) is harmonic iff
// for every mixed bidegree (A, B), A, B >= 1,
//   g_{AB}(omega) = sum_{a1+a2=A, b1+b2=B} c omega^{a1} conj(omega)^{b1} = 0.
// Realify omega = x + iy and keep one representative per conjugate pair.

using Mono2 = std::pair<int, int>;  // (i, j) -> x^i y^j

struct RealPoly2 {
  std::map<Mono2, Rat> c;
  bool is_zero() const { return c.empty(); }
  void add(const Mono2& m, const Rat& v) {
    if (v == 0) return;
    auto it = c.find(m);
    if (it == c.end()) c.emplace(m, v);
    else {
      it->second += v;
      if (it->second == 0) c.erase(it);
    }
  }
  // dense coefficient table for fast repeated evaluation
  mutable std::vector<std::pair<Mono2, double>> flat;
  mutable int maxx = 0, maxy = 0;
  void freeze() const {
    flat.clear();
    maxx = maxy = 0;
    for (const auto& [m, v] : c) {
      flat.emplace_back(m, v.get_d());
      maxx = std::max(maxx, m.first);
      maxy = std::max(maxy, m.second);
    }
  }
  double eval(double x, double y) const {
    if (flat.size() != c.size()) freeze();
    double xp[64], yp[64];
    xp[0] = yp[0] = 1.0;
    for (int i = 1; i <= maxx; ++i) xp[i] = xp[i - 1] * x;
    for (int j = 1; j <= maxy; ++j) yp[j] = yp[j - 1] * y;
    double acc = 0.0;
    for (const auto& [m, v] : flat) acc += v * xp[m.first] * yp[m.second];
    return acc;
  }
  RealPoly2 dx() const {
    RealPoly2 d;
    for (const auto& [m, v] : c)
      if (m.first > 0) d.add({m.first - 1, m.second}, v * make_rat(m.first));
    return d;
  }
  RealPoly2 dy() const {
    RealPoly2 d;
    for (const auto& [m, v] : c)
      if (m.second > 0) d.add({m.first, m.second - 1}, v * make_rat(m.second));
    return d;
  }
  double scale() const {
    double s = 0.0;
    for (const auto& [m, v] : c) s += std::abs(v.get_d());
    return s;
  }
};

using CPoly2 = std::map<Mono2, ExactComplex>;

void cadd(CPoly2& p, const Mono2& m, const ExactComplex& v) {
  if (v.is_zero()) return;
  auto it = p.find(m);
  if (it == p.end()) p.emplace(m, v);
  else {
    it->second += v;
    if (it->second.is_zero()) p.erase(it);
  }
}

CPoly2 cmul(const CPoly2& a, const CPoly2& b) {
  CPoly2 r;
  for (const auto& [ma, va] : a)
    for (const auto& [mb, vb] : b)
      cadd(r, {ma.first + mb.first, ma.second + mb.second}, va * vb);
  return r;
}

// powers of (x + iy) and (x - iy)
std::vector<CPoly2> omega_powers(int n, bool conjugated) {
  std::vector<CPoly2> p(static_cast<std::size_t>(n) + 1);
  p[0] = CPoly2{{{0, 0}, ExactComplex::integer(1)}};
  CPoly2 w;
  cadd(w, {1, 0}, ExactComplex::integer(1));
  cadd(w, {0, 1}, ExactComplex{Rat(0), make_rat(conjugated ? -1 : 1)});
  for (int k = 1; k <= n; ++k)
    p[static_cast<std::size_t>(k)] = cmul(p[static_cast<std::size_t>(k - 1)], w);
  return p;
}

std::vector<RealPoly2> realified_equations(const MixedPolynomial& Pi) {
  const int d1 = Pi.degree1();
  const auto wp = omega_powers(d1, false);
  const auto wc = omega_powers(d1, true);
  std::map<std::pair<int, int>, CPoly2> eqs;  // keyed by (A, B), A >= B >= 1
  for (const auto& [e, c] : Pi.terms()) {
    const int A = e.a1 + e.a2, B = e.b1 + e.b2;
    if (A < 1 || B < 1) continue;
    if (A < B) continue;  // conjugate of (B, A)
    CPoly2 term = cmul(wp[static_cast<std::size_t>(e.a1)], wc[static_cast<std::size_t>(e.b1)]);
    for (auto& [m, v] : term) cadd(eqs[{A, B}], m, v * c);
  }
  std::vector<RealPoly2> out;
  for (const auto& [key, cp] : eqs) {
    RealPoly2 re, im;
    for (const auto& [m, v] : cp) {
      re.add(m, v.re);
      im.add(m, v.im);
    }
    if (!re.is_zero()) out.push_back(std::move(re));
    if (!im.is_zero()) out.push_back(std::move(im));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact interval arithmetic over Q

struct QI {
  Rat lo, hi;
};

QI qi_add(const QI& a, const QI& b) { return {a.lo + b.lo, a.hi + b.hi}; }

QI qi_mul(const QI& a, const QI& b) {
  const Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

QI qi_scale(const QI& a, const Rat& s) {
  if (s >= 0) return {a.lo * s, a.hi * s};
  return {a.hi * s, a.lo * s};
}

// even powers of a straddling interval stay nonnegative
QI qi_pow(const QI& a, int n) {
  if (n == 0) return {Rat(1), Rat(1)};
  QI r = a;
  for (int k = 1; k < n; ++k) r = qi_mul(r, a);
  if (n % 2 == 0 && a.lo < 0 && a.hi > 0) r.lo = Rat(0);
  return r;
}

QI qi_eval(const RealPoly2& p, const QI& x, const QI& y, int dx, int dy) {
  std::vector<QI> xp(static_cast<std::size_t>(dx) + 1), yp(static_cast<std::size_t>(dy) + 1);
  for (int i = 0; i <= dx; ++i) xp[static_cast<std::size_t>(i)] = qi_pow(x, i);
  for (int j = 0; j <= dy; ++j) yp[static_cast<std::size_t>(j)] = qi_pow(y, j);
  QI acc{Rat(0), Rat(0)};
  for (const auto& [m, v] : p.c)
    acc = qi_add(acc, qi_scale(qi_mul(xp[static_cast<std::size_t>(m.first)],
                                      yp[static_cast<std::size_t>(m.second)]),
                               v));
  return acc;
}

Rat rat_eval(const RealPoly2& p, const Rat& x, const Rat& y, int dx, int dy) {
  std::vector<Rat> xp(static_cast<std::size_t>(dx) + 1), yp(static_cast<std::size_t>(dy) + 1);
  xp[0] = Rat(1);
  yp[0] = Rat(1);
  for (int i = 1; i <= dx; ++i) xp[static_cast<std::size_t>(i)] = xp[static_cast<std::size_t>(i - 1)] * x;
  for (int j = 1; j <= dy; ++j) yp[static_cast<std::size_t>(j)] = yp[static_cast<std::size_t>(j - 1)] * y;
  Rat acc(0);
  for (const auto& [m, v] : p.c)
    acc += v * xp[static_cast<std::size_t>(m.first)] * yp[static_cast<std::size_t>(m.second)];
  return acc;
}

// ---------------------------------------------------------------------------
// Subdivision with exact exclusion, Gauss-Newton polish, rational snap,
// exact re-verification.

struct SlopeSolver {
  std::vector<RealPoly2> eqs;
  // first and second partials per equation, for the Taylor-form exclusion
  std::vector<std::array<RealPoly2, 2>> grad;
  std::vector<std::array<RealPoly2, 3>> hess;  // xx, xy, yy
  int dx = 0, dy = 0;

  explicit SlopeSolver(const MixedPolynomial& Pi) {
    eqs = realified_equations(Pi);
    for (const auto& e : eqs) {
      grad.push_back({e.dx(), e.dy()});
      hess.push_back({e.dx().dx(), e.dx().dy(), e.dy().dy()});
      for (const auto& [m, v] : e.c) {
        dx = std::max(dx, m.first);
        dy = std::max(dy, m.second);
      }
    }
  }

  // Zeros of second order defeat plain interval exclusion (the surviving
  // band around them grows like 2^depth); the second-order Taylor form
  //   f(c) + grad f(c).D + D^T H(box) D / 2
  // keeps the band at O(1) boxes per level.
  bool excluded(const QI& x, const QI& y) const {
    for (std::size_t k = 0; k < eqs.size(); ++k) {
      const QI v = qi_eval(eqs[k], x, y, dx, dy);
      if (v.lo > 0 || v.hi < 0) return true;
      const Rat cx = (x.lo + x.hi) / 2, cy = (y.lo + y.hi) / 2;
      const QI dxi{x.lo - cx, x.hi - cx}, dyi{y.lo - cy, y.hi - cy};
      const Rat f0 = rat_eval(eqs[k], cx, cy, dx, dy);
      const Rat gx = rat_eval(grad[k][0], cx, cy, dx, dy);
      const Rat gy = rat_eval(grad[k][1], cx, cy, dx, dy);
      QI t{f0, f0};
      t = qi_add(t, qi_scale(dxi, gx));
      t = qi_add(t, qi_scale(dyi, gy));
      const QI hxx = qi_eval(hess[k][0], x, y, dx, dy);
      const QI hxy = qi_eval(hess[k][1], x, y, dx, dy);
      const QI hyy = qi_eval(hess[k][2], x, y, dx, dy);
      QI q = qi_mul(hxx, qi_pow(dxi, 2));
      q = qi_add(q, qi_scale(qi_mul(hxy, qi_mul(dxi, dyi)), Rat(2)));
      q = qi_add(q, qi_mul(hyy, qi_pow(dyi, 2)));
      t = qi_add(t, qi_scale(q, make_rat(1, 2)));
      if (t.lo > 0 || t.hi < 0) return true;
    }
    return false;
  }

  std::vector<std::complex<double>> candidates() const {
    struct Box {
      Rat x0, x1, y0, y1;
      int depth;
    };
    std::deque<Box> work;
    const Rat b = make_rat(17, 16);
    work.push_back({-b, b, -b, b, 0});
    std::vector<std::complex<double>> cands;
    const int max_depth = 22;
    long processed = 0;
    while (!work.empty() && processed < 400000) {
      ++processed;
      Box bx = work.front();
      work.pop_front();
      if (excluded({bx.x0, bx.x1}, {bx.y0, bx.y1})) continue;
      if (bx.depth >= max_depth) {
        cands.emplace_back((bx.x0.get_d() + bx.x1.get_d()) / 2,
                           (bx.y0.get_d() + bx.y1.get_d()) / 2);
        continue;
      }
      const Rat xm = (bx.x0 + bx.x1) / 2, ym = (bx.y0 + bx.y1) / 2;
      work.push_back({bx.x0, xm, bx.y0, ym, bx.depth + 1});
      work.push_back({xm, bx.x1, bx.y0, ym, bx.depth + 1});
      work.push_back({bx.x0, xm, ym, bx.y1, bx.depth + 1});
      work.push_back({xm, bx.x1, ym, bx.y1, bx.depth + 1});
    }
    // anything still queued at budget exhaustion stays a candidate
    for (const auto& bx : work)
      cands.emplace_back((bx.x0.get_d() + bx.x1.get_d()) / 2,
                         (bx.y0.get_d() + bx.y1.get_d()) / 2);
    // cluster adjacent survivors: one representative per 1e-5 cell
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    std::vector<std::complex<double>> out;
    for (const auto& c : cands) {
      bool close = false;
      for (auto it = out.rbegin(); it != out.rend(); ++it) {
        if (c.real() - it->real() > 1e-5) break;
        if (std::abs(c - *it) < 1e-5) close = true;
      }
      if (!close) out.push_back(c);
    }
    return out;
  }

  std::complex<double> polish(std::complex<double> w0) const {
    std::vector<RealPoly2> jx, jy;
    jx.reserve(eqs.size());
    jy.reserve(eqs.size());
    for (const auto& e : eqs) {
      jx.push_back(e.dx());
      jy.push_back(e.dy());
    }
    double x = w0.real(), y = w0.imag();
    for (int it = 0; it < 60; ++it) {
      double jtj11 = 0, jtj12 = 0, jtj22 = 0, jtr1 = 0, jtr2 = 0;
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        const double r = eqs[i].eval(x, y);
        const double gx = jx[i].eval(x, y), gy = jy[i].eval(x, y);
        jtj11 += gx * gx;
        jtj12 += gx * gy;
        jtj22 += gy * gy;
        jtr1 += gx * r;
        jtr2 += gy * r;
      }
      // Levenberg damping keeps the step defined when a single equation
      // leaves the normal matrix rank-deficient.
      const double lam = 1e-10 * (jtj11 + jtj22) + 1e-300;
      jtj11 += lam;
      jtj22 += lam;
      const double det = jtj11 * jtj22 - jtj12 * jtj12;
      if (std::abs(det) < 1e-300) break;
      const double dxs = (-jtr1 * jtj22 + jtr2 * jtj12) / det;
      const double dys = (-jtr2 * jtj11 + jtr1 * jtj12) / det;
      x += dxs;
      y += dys;
      if (std::abs(dxs) + std::abs(dys) < 1e-15 * (1.0 + std::abs(x) + std::abs(y))) break;
    }
    return {x, y};
  }
};

// best rational approximations by continued fractions, denominators ascending
std::vector<Rat> cf_approximations(double x, long max_den) {
  std::vector<Rat> out;
  if (std::abs(x) < 1e-13) {
    out.push_back(Rat(0));
    return out;
  }
  double v = x;
  long h0 = 1, h1 = static_cast<long>(std::floor(v));
  long k0 = 0, k1 = 1;
  out.push_back(make_rat(h1));
  for (int it = 0; it < 40; ++it) {
    const double frac = v - std::floor(v);
    if (frac < 1e-14) break;
    v = 1.0 / frac;
    const long a = static_cast<long>(std::floor(v));
    const long h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > max_den || k2 <= 0) break;
    out.push_back(make_rat(h2, k2));
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
  }
  return out;
}

bool slope_exactly_harmonic(const MixedPolynomial& Pi, const ExactComplex& omega) {
  return is_harmonic_univariate(restrict_to_line(Pi, omega));
}

}  // namespace

HarmonicLines solve_harmonic_lines(const MixedPolynomial& Pi) {
  HarmonicLines out;
  out.line_t1_zero = is_harmonic_univariate(restrict_to_axis2(Pi));
  out.line_t2_zero = is_harmonic_univariate(restrict_to_axis1(Pi));

  auto snap_and_verify = [&](const MixedPolynomial& target, std::complex<double> w,
                             std::vector<ExactComplex>& sink) {
    // The gate below is deliberately loose: a wrong snap cannot slip through
    // because the exact harmonicity re-verification is the acceptance test.
    const auto xs = cf_approximations(w.real(), 1 << 24);
    const auto ys = cf_approximations(w.imag(), 1 << 24);
    for (const Rat& rx : xs) {
      if (std::abs(rx.get_d() - w.real()) > 1e-4) continue;
      for (const Rat& ry : ys) {
        if (std::abs(ry.get_d() - w.imag()) > 1e-4) continue;
        const ExactComplex omega{rx, ry};
        if (omega.is_zero()) continue;  // axis, handled separately
        if (slope_exactly_harmonic(target, omega)) {
          for (const auto& s : sink)
            if (s == omega) return;
          sink.push_back(omega);
          return;
        }
      }
    }
  };

  // chart 1: |omega| <= 1 for lines {t1 = omega t2}
  {
    SlopeSolver solver(Pi);
    std::vector<ExactComplex> found;
    for (const auto& cand : solver.candidates()) snap_and_verify(Pi, solver.polish(cand), found);
    for (auto& s : found) out.slopes.push_back(std::move(s));
  }
  // chart 2: swapped variables cover |omega| > 1
  {
    const MixedPolynomial Pis = swap_vars(Pi);
    SlopeSolver solver(Pis);
    std::vector<ExactComplex> found;
    for (const auto& cand : solver.candidates()) snap_and_verify(Pis, solver.polish(cand), found);
    for (const auto& s : found) {
      // {t2 = s t1} = {t1 = (1/s) t2}
      const Rat n2 = s.re * s.re + s.im * s.im;
      const ExactComplex omega{s.re / n2, -s.im / n2};
      bool dup = false;
      for (const auto& o : out.slopes)
        if (o == omega) dup = true;
      if (!dup && slope_exactly_harmonic(Pi, omega)) out.slopes.push_back(omega);
    }
  }
  std::sort(out.slopes.begin(), out.slopes.end(),
            [](const ExactComplex& a, const ExactComplex& b) {
              if (a.re != b.re) return a.re < b.re;
              return a.im < b.im;
            });
  return out;
}

HarmonicLines harmonic_lines_grid_oracle(const MixedPolynomial& Pi, int gridN, long half_num,
                                         long half_den, ExecPolicy exec) {
  (void)exec;
  HarmonicLines out;
  out.line_t1_zero = is_harmonic_univariate(restrict_to_axis2(Pi));
  out.line_t2_zero = is_harmonic_univariate(restrict_to_axis1(Pi));

  const auto eqs = realified_equations(Pi);
  double scale = 0.0;
  for (const auto& e : eqs) {
    e.freeze();  // before the parallel sweep
    scale += e.scale();
  }
  scale = std::max(scale, 1.0);
  const double thresh = 1e-12 * scale * scale;

  const Rat half = make_rat(half_num, half_den);
  const Rat step = half / gridN;
  const double step_d = step.get_d();
  const long side = 2L * gridN + 1;

  std::vector<std::pair<long, long>> hits;
#ifdef _OPENMP
#pragma omp parallel
  {
    std::vector<std::pair<long, long>> local;
#pragma omp for schedule(static) nowait
    for (long idx = 0; idx < side * side; ++idx) {
      const long i = idx / side, j = idx % side;
      const double x = (static_cast<double>(i) - gridN) * step_d;
      const double y = (static_cast<double>(j) - gridN) * step_d;
      double res = 0.0;
      for (const auto& e : eqs) {
        const double v = e.eval(x, y);
        res += v * v;
      }
      if (res <= thresh) local.emplace_back(i, j);
    }
#pragma omp critical(bumpforge_oracle)
    hits.insert(hits.end(), local.begin(), local.end());
  }
#else
  for (long idx = 0; idx < side * side; ++idx) {
    const long i = idx / side, j = idx % side;
    const double x = (static_cast<double>(i) - gridN) * step_d;
    const double y = (static_cast<double>(j) - gridN) * step_d;
    double res = 0.0;
    for (const auto& e : eqs) {
      const double v = e.eval(x, y);
      res += v * v;
    }
    if (res <= thresh) hits.emplace_back(i, j);
  }
#endif
  std::sort(hits.begin(), hits.end());
  for (const auto& [i, j] : hits) {
    const ExactComplex omega{(make_rat(i) - gridN) * step, (make_rat(j) - gridN) * step};
    if (omega.is_zero()) continue;
    if (!slope_exactly_harmonic(Pi, omega)) continue;
    bool dup = false;
    for (const auto& o : out.slopes)
      if (o == omega) dup = true;
    if (!dup) out.slopes.push_back(omega);
  }
  std::sort(out.slopes.begin(), out.slopes.end(),
            [](const ExactComplex& a, const ExactComplex& b) {
              if (a.re != b.re) return a.re < b.re;
              return a.im < b.im;
            });
  return out;
}

namespace {

bool lattice_support(const MixedPolynomial& Pi, const WeightSignature& w) {
  for (const auto& [e, c] : Pi.terms())
    if (e.a1 % w.sigma1 || e.b1 % w.sigma1 || e.a2 % w.sigma2 || e.b2 % w.sigma2) return false;
  return true;
}

}  // namespace

std::vector<ExceptionalCurve> find_exceptional(const MixedPolynomial& P,
                                               const WeightSignature& w) {
  if (!P.is_real_valued())
    fail(errc::not_weighted_homogeneous, "weight-1 part must be real-valued");
  if (P.is_zero()) fail(errc::not_weighted_homogeneous, "weight-1 part is zero");
  for (const auto& [e, c] : P.terms())
    if (w.scaled_weight(e) != w.nu)
      fail(errc::not_weighted_homogeneous, "input is not purely of weighted degree 1");
  if (P.has_pluriharmonic_terms())
    fail(errc::pluriharmonic_in_p, "weight-1 part carries pluriharmonic terms");

  const MixedPolynomial Pi = pullback(P, w);
  const long N = static_cast<long>(w.sigma1) * w.sigma2;
  const HarmonicLines lines = solve_harmonic_lines(Pi);

  std::vector<ExceptionalCurve> curves;
  if (lines.line_t1_zero) {
    ExceptionalCurve c;
    c.xi = ExactComplex::integer(0);
    c.omega0 = ExactComplex::integer(0);
    c.pullback_lines = {std::complex<double>(0.0, 0.0)};
    curves.push_back(std::move(c));
  }

  // group finite nonzero slopes by xi = omega^{sigma1 sigma2}
  std::vector<std::pair<ExactComplex, std::vector<ExactComplex>>> groups;
  for (const auto& omega : lines.slopes) {
    const ExactComplex xi = omega.pow(static_cast<unsigned>(N));
    bool placed = false;
    for (auto& [gxi, members] : groups)
      if (gxi == xi) {
        members.push_back(omega);
        placed = true;
      }
    if (!placed) groups.push_back({xi, {omega}});
  }
  if (!groups.empty() && N > 1 && !lattice_support(Pi, w))
    fail(errc::grouping_mismatch, "pullback support is off the deck lattice");
  for (auto& [xi, members] : groups) {
    ExceptionalCurve c;
    c.xi = xi;
    c.omega0 = members.front();
    const std::complex<double> w0 = c.omega0.to_complex();
    for (long k = 0; k < N; ++k) {
      const double phi =
          2.0 * 3.14159265358979323846 * static_cast<double>(k) / static_cast<double>(N);
      c.pullback_lines.push_back(w0 * std::polar(1.0, phi));
    }
    // every exactly-found slope must lie on the deck orbit of the base slope
    for (const auto& m : members)
      if (m.pow(static_cast<unsigned>(N)) != xi)
        fail(errc::grouping_mismatch, "slope escapes its deck orbit");
    if (static_cast<long>(members.size()) > N)
      fail(errc::grouping_mismatch, "more slopes than deck-orbit size");
    curves.push_back(std::move(c));
  }

  if (lines.line_t2_zero) {
    ExceptionalCurve c;
    c.xi_infinite = true;
    curves.push_back(std::move(c));
  }
  return curves;
}

std::vector<C2> branch_preimages(const C2& z, const WeightSignature& w) {
  std::vector<C2> out;
  const double r1 = std::abs(z.z1), r2 = std::abs(z.z2);
  const double a1 = std::arg(z.z1), a2 = std::arg(z.z2);
  const double p1 = std::pow(r1, 1.0 / w.sigma1), p2 = std::pow(r2, 1.0 / w.sigma2);
  for (int a = 0; a < w.sigma1; ++a)
    for (int b = 0; b < w.sigma2; ++b) {
      const double th1 = (a1 + 2 * 3.14159265358979323846 * a) / w.sigma1;
      const double th2 = (a2 + 2 * 3.14159265358979323846 * b) / w.sigma2;
      out.push_back({std::polar(p1, th1), std::polar(p2, th2)});
    }
  return out;
}

double curve_aperture(const C2& z, const ExceptionalCurve& curve, const WeightSignature& w) {
  double best = std::numeric_limits<double>::infinity();
  for (const C2& t : branch_preimages(z, w)) {
    if (curve.xi_infinite) {
      best = std::min(best, cone_aperture({0, 0}, true, t));
    } else if (curve.xi.is_zero()) {
      best = std::min(best, cone_aperture({0, 0}, false, t));
    } else {
      for (const auto& omega : curve.pullback_lines)
        best = std::min(best, cone_aperture(omega, false, t));
    }
  }
  return best;
}

namespace {

double min_line_separation(const std::vector<ExceptionalCurve>& curves) {
  // chordal distance between the pullback lines, with the axes included
  std::vector<std::complex<double>> slopes;
  bool axis2 = false;
  for (const auto& c : curves) {
    if (c.xi_infinite) axis2 = true;
    else
      for (const auto& o : c.pullback_lines) slopes.push_back(o);
  }
  double best = 1.0;
  auto chord = [](std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
  };
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    for (std::size_t j = i + 1; j < slopes.size(); ++j)
      best = std::min(best, chord(slopes[i], slopes[j]));
    if (axis2) best = std::min(best, 1.0 / std::sqrt(1.0 + std::norm(slopes[i])));
  }
  return best;
}

}  // namespace

Classification separation_check(const MixedPolynomial& P, const WeightSignature& w,
                                const std::vector<ExceptionalCurve>& curves,
                                const SeparationOptions& opts, ExecPolicy exec) {
  Classification cls;
  cls.samples = opts.samples;
  const double sep = min_line_separation(curves);
  cls.alpha1 = std::min(0.15, sep / 6.0);
  cls.alpha2 = 2.0 * cls.alpha1;

  const HessianField h = hessian(P);
  // coefficient bound on the entries over the weighted sphere (|z_i| <= 1)
  const double det_scale = std::max(
      coeff_scale(h.h11) * coeff_scale(h.h22) + coeff_scale(h.h12) * coeff_scale(h.h12), 1e-30);
  const double tol = opts.det_tol * det_scale;

  auto det_at = [&](const C2& z) {
    const ComplexHessian ch = h.at(z);
    return ch.h11 * ch.h22 - std::norm(ch.h12);
  };

  const CountSweepResult degen = count_sweep(
      opts.samples,
      [&](std::int64_t i) {
        const C2 z = sample_weighted_sphere(w, opts.seed, i);
        return det_at(z) <= tol;
      },
      exec);
  cls.degenerate_samples = degen.hits;

  const CountSweepResult off = count_sweep(
      opts.samples,
      [&](std::int64_t i) {
        const C2 z = sample_weighted_sphere(w, opts.seed, i);
        if (det_at(z) > tol) return false;
        for (const auto& c : curves)
          if (curve_aperture(z, c, w) <= cls.alpha1) return false;
        return true;
      },
      exec);
  cls.off_curve_degenerate = off.hits;
  if (off.first_hit >= 0) {
    cls.has_witness = true;
    cls.witness = sample_weighted_sphere(w, opts.seed, off.first_hit);
  }

  if (curves.empty()) {
    cls.verdict = Classification::V::H_EXTENDIBLE;
    return cls;
  }
  if (cls.off_curve_degenerate == 0) {
    cls.verdict = Classification::V::ALMOST_H_EXTENDIBLE;
    return cls;
  }
  // Degeneracy off the curves is tolerable only when it stays wedge-separated,
  // i.e. every such sample sits well outside the curve cones.
  const double guard = 4.0 * cls.alpha2;
  const CountSweepResult bad = count_sweep(
      opts.samples,
      [&](std::int64_t i) {
        const C2 z = sample_weighted_sphere(w, opts.seed, i);
        if (det_at(z) > tol) return false;
        double ap = std::numeric_limits<double>::infinity();
        for (const auto& c : curves) ap = std::min(ap, curve_aperture(z, c, w));
        return ap > cls.alpha1 && ap < guard;
      },
      exec);
  const double off_fraction =
      static_cast<double>(cls.off_curve_degenerate) / static_cast<double>(cls.samples);
  if (bad.hits == 0 && off_fraction < 0.25) {
    cls.verdict = Classification::V::ALMOST_H_EXTENDIBLE;
  } else {
    cls.verdict = Classification::V::NOT_APPLICABLE;
    if (bad.first_hit >= 0) {
      cls.has_witness = true;
      cls.witness = sample_weighted_sphere(w, opts.seed, bad.first_hit);
    }
  }
  return cls;
}

namespace {

struct LineRestriction {
  ExactComplex x1, x2, d1, d2;  // base point of the normal line and its direction
};

MixedPolynomial restrict_to_curve_line(const MixedPolynomial& p, const ExceptionalCurve& c) {
  if (c.xi_infinite) return restrict_to_axis1(p);
  if (c.xi.is_zero()) return restrict_to_axis2(p);
  return restrict_to_line(p, c.omega0);
}

LineRestriction normal_line(const ExceptionalCurve& c, const ExactComplex& s) {
  if (c.xi_infinite)
    return {s, ExactComplex::integer(0), ExactComplex::integer(0), ExactComplex::integer(1)};
  if (c.xi.is_zero())
    return {ExactComplex::integer(0), s, ExactComplex::integer(1), ExactComplex::integer(0)};
  return {c.omega0 * s, s, ExactComplex::integer(1), -c.omega0.conj()};
}

int restriction_order(const MixedPolynomial& p, const LineRestriction& lr) {
  const MixedPolynomial r = restrict_affine(p, lr.x1, lr.x2, lr.d1, lr.d2);
  return vanishing_order(r);
}

}  // namespace

void curve_invariants(const MixedPolynomial& P, const MixedPolynomial& Q,
                      const WeightSignature& w, ExceptionalCurve& curve) {
  const MixedPolynomial Pi = pullback(P, w);
  const MixedPolynomial R = pullback(P + Q, w);

  // deterministic exact base parameters on the curve
  auto base_param = [](int k) {
    const long re = 2 + (k * 7) % 13;
    const long im = (k * 5) % 11 - 5;
    return ExactComplex{make_rat(re, 8), make_rat(im, 8)};
  };

  auto collect_mu = [&](int count) {
    std::map<int, int> votes;
    for (int k = 0; k < count; ++k) {
      const LineRestriction lr = normal_line(curve, base_param(k));
      votes[restriction_order(Pi, lr)]++;
    }
    int best = 0, best_count = -1;
    for (const auto& [v, n] : votes)
      if (n > best_count) {
        best = v;
        best_count = n;
      }
    return std::pair{best, votes.size() > 1};
  };

  auto [mu, disagree] = collect_mu(17);
  if (disagree) {
    const auto widened = collect_mu(33);
    mu = widened.first;
    curve.mu_disagreement = true;
    std::cerr << "warning: generic normal-line order disagreed across base points; widened sample\n";
  }
  curve.mu = mu;

  // first part of the order condition: Ord(Pi|_N - Pi(x)) <= Ord(R|_N - R(x))
  bool star = true;
  for (int k = 0; k < 17; ++k) {
    const LineRestriction lr = normal_line(curve, base_param(k));
    const int op = restriction_order(Pi, lr);
    if (op != curve.mu) continue;  // off-generic base point
    const int oq = restriction_order(R, lr);
    if (oq < op) star = false;
  }
  curve.star_ok = star;

  // 2M: lowest homogeneous piece of R with non-harmonic restriction
  const int maxdeg = R.total_degree();
  curve.twoM = 0;
  for (int n = w.nu; n <= maxdeg; ++n) {
    const MixedPolynomial part = homogeneous_part(R, n);
    if (part.is_zero()) continue;
    const MixedPolynomial restricted = restrict_to_curve_line(part, curve);
    if (!is_harmonic_univariate(restricted)) {
      curve.twoM = n;
      break;
    }
  }
  if (curve.twoM == 0)
    fail(errc::infinite_type, "no homogeneous piece restricts non-harmonically to the curve");
}

}  // namespace bumpforge
