#include "bumpforge/fsbump.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "bumpforge/errors.hpp"

namespace bumpforge {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_pi(double x) {
  x = std::fmod(x, kTwoPi);
  if (x > kTwoPi / 2) x -= kTwoPi;
  if (x < -kTwoPi / 2) x += kTwoPi;
  return x;
}

double wrap_2pi(double x) {
  x = std::fmod(x, kTwoPi);
  if (x < 0) x += kTwoPi;
  return x;
}

// Smooth cap exp(1 - 1/(1-x^2)) on |x|<1, 0 outside; value 1 at x = 0.
double cap(double x) {
  const double x2 = x * x;
  if (x2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x2));
}

double cap_pp(double x) {
  const double x2 = x * x;
  if (x2 >= 1.0) return 0.0;
  const double psi = 1.0 / (1.0 - x2);
  const double psi1 = 2.0 * x * psi * psi;
  const double psi2 = 2.0 * psi * psi + 8.0 * x2 * psi * psi * psi;
  return cap(x) * (psi1 * psi1 - psi2);
}
}  // namespace

TrigPoly TrigPoly::from_circle_restriction(const MixedPolynomial& p) {
  if (!p.is_univariate1())
    fail(errc::not_weighted_homogeneous, "circle restriction needs a univariate polynomial");
  TrigPoly t;
  for (const auto& [e, c] : p.terms()) {
    const int k = e.a1 - e.b1;
    auto it = t.c.find(k);
    if (it == t.c.end()) t.c.emplace(k, c);
    else {
      it->second += c;
      if (it->second.is_zero()) t.c.erase(it);
    }
  }
  return t;
}

double TrigPoly::eval(double theta) const {
  double acc = 0.0;
  for (const auto& [k, coeff] : c) {
    // Re(c_k e^{ik theta}); conjugate pairs are both stored, so the sum is real.
    acc += coeff.re.get_d() * std::cos(k * theta) - coeff.im.get_d() * std::sin(k * theta);
  }
  return acc;
}

TrigPoly TrigPoly::derivative() const {
  TrigPoly d;
  for (const auto& [k, coeff] : c) {
    if (k == 0) continue;
    d.c.emplace(k, ExactComplex{-coeff.im * make_rat(k), coeff.re * make_rat(k)});
  }
  return d;
}

double TrigPoly::coeff_scale() const {
  double s = 0.0;
  for (const auto& [k, coeff] : c) s += std::abs(coeff.re.get_d()) + std::abs(coeff.im.get_d());
  return s;
}

bool TrigPoly::is_constant() const {
  return c.empty() || (c.size() == 1 && c.begin()->first == 0);
}

ExactComplex TrigPoly::constant_term() const {
  auto it = c.find(0);
  return it == c.end() ? ExactComplex{} : it->second;
}

CircleProfile circle_profile(const MixedPolynomial& U) {
  if (!U.is_univariate1() || !U.is_real_valued())
    fail(errc::not_weighted_homogeneous, "profile needs a real-valued univariate polynomial");
  const auto deg = U.homogeneous_degree();
  if (!deg || *deg < 2 || *deg % 2 != 0)
    fail(errc::not_weighted_homogeneous, "profile needs even homogeneous degree >= 2");
  const MixedPolynomial lap =
      wirtinger(wirtinger(U, 1, WirtKind::holo), 1, WirtKind::anti).scaled(ExactComplex::integer(4));
  if (lap.is_zero()) fail(errc::harmonic, "Laplacian vanishes identically");

  CircleProfile prof;
  prof.degree2m = *deg;
  prof.laplacian_on_circle = TrigPoly::from_circle_restriction(lap);
  const TrigPoly& L = prof.laplacian_on_circle;
  const double scale = std::max(L.coeff_scale(), 1e-300);

  const int n = 8192;
  std::vector<double> vals(static_cast<std::size_t>(n));
  double vmin = 1e300, umax = 0.0;
  int argmin = 0;
  for (int i = 0; i < n; ++i) {
    const double th = kTwoPi * i / n;
    vals[static_cast<std::size_t>(i)] = L.eval(th);
    if (vals[static_cast<std::size_t>(i)] < vmin) {
      vmin = vals[static_cast<std::size_t>(i)];
      argmin = i;
    }
    umax = std::max(umax, std::abs(U.eval_real(C2{std::polar(1.0, th), {0.0, 0.0}})));
  }
  prof.max_abs_u = umax;

  auto refine_min = [&](double lo, double hi) {
    const double g = 0.61803398874989484820458683436564;
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = L.eval(x1), f2 = L.eval(x2);
    for (int it = 0; it < 120; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = L.eval(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = L.eval(x2);
      }
    }
    return 0.5 * (a + b);
  };

  if (vmin < -1e-10 * scale) {
    const double th = refine_min(kTwoPi * (argmin - 1) / n, kTwoPi * (argmin + 1) / n);
    std::ostringstream os;
    os << "Laplacian negative on the circle near theta = " << th << " (value " << L.eval(th) << ")";
    fail(errc::not_subharmonic, os.str());
  }
  prof.min_laplacian = std::max(vmin, 0.0);

  // zeros: local minima that refine to ~0 under exact trig evaluation
  for (int i = 0; i < n; ++i) {
    const double v = vals[static_cast<std::size_t>(i)];
    const double vl = vals[static_cast<std::size_t>((i + n - 1) % n)];
    const double vr = vals[static_cast<std::size_t>((i + 1) % n)];
    if (v > vl || v > vr) continue;
    if (v > 1e-6 * scale) continue;
    double th = wrap_2pi(refine_min(kTwoPi * (i - 1) / n, kTwoPi * (i + 1) / n));
    if (th > kTwoPi - 1e-6) th = 0.0;
    if (std::abs(L.eval(th)) > 1e-10 * scale) continue;
    bool dup = false;
    for (double z : prof.zeros)
      if (std::abs(wrap_pi(z - th)) < 1e-6) dup = true;
    if (!dup) prof.zeros.push_back(th);
  }
  std::sort(prof.zeros.begin(), prof.zeros.end());
  if (!prof.zeros.empty()) prof.min_laplacian = 0.0;
  return prof;
}

// ---------------------------------------------------------------------------
// Periodic quintic B-spline

double PeriodicSpline::basis(double t, int deriv) {
  // N_{0,p} on uniform integer knots, support [0, p+1]; derivatives via
  // N'_{0,p}(t) = N_{0,p-1}(t) - N_{0,p-1}(t-1) for unit spacing.
  auto n0p = [](double u, int p) {
    if (u <= 0.0 || u >= p + 1.0) return 0.0;
    double v[7] = {0, 0, 0, 0, 0, 0, 0};
    const int cell = static_cast<int>(std::floor(u));
    if (cell < 0 || cell > p) return 0.0;
    v[cell] = 1.0;
    for (int d = 1; d <= p; ++d)
      for (int i = 0; i + d <= p; ++i)
        v[i] = ((u - i) / d) * v[i] + ((i + d + 1 - u) / d) * v[i + 1];
    return v[0];
  };
  switch (deriv) {
    case 0: return n0p(t, 5);
    case 1: return n0p(t, 4) - n0p(t - 1.0, 4);
    default: return n0p(t, 3) - 2.0 * n0p(t - 1.0, 3) + n0p(t - 2.0, 3);
  }
}

PeriodicSpline PeriodicSpline::interpolate(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  assert(n >= 8);
  // Cyclic stencil (1, 26, 66, 26, 1)/120; SPD, solved by conjugate gradients.
  auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
    for (int j = 0; j < n; ++j) {
      const double v =
          66.0 * x[static_cast<std::size_t>(j)] +
          26.0 * (x[static_cast<std::size_t>((j + 1) % n)] + x[static_cast<std::size_t>((j + n - 1) % n)]) +
          (x[static_cast<std::size_t>((j + 2) % n)] + x[static_cast<std::size_t>((j + n - 2) % n)]);
      out[static_cast<std::size_t>(j)] = v / 120.0;
    }
  };
  std::vector<double> x = values, r(values.size()), p(values.size()), Ap(values.size());
  apply(x, Ap);
  double rr = 0.0;
  for (int j = 0; j < n; ++j) {
    r[static_cast<std::size_t>(j)] = values[static_cast<std::size_t>(j)] - Ap[static_cast<std::size_t>(j)];
    rr += r[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(j)];
  }
  p = r;
  double norm_y = 0.0;
  for (double y : values) norm_y += y * y;
  const double tol2 = 1e-30 * std::max(norm_y, 1e-300);
  for (int it = 0; it < 400 && rr > tol2; ++it) {
    apply(p, Ap);
    double pAp = 0.0;
    for (int j = 0; j < n; ++j) pAp += p[static_cast<std::size_t>(j)] * Ap[static_cast<std::size_t>(j)];
    if (pAp == 0.0) break;
    const double alpha = rr / pAp;
    double rr_new = 0.0;
    for (int j = 0; j < n; ++j) {
      x[static_cast<std::size_t>(j)] += alpha * p[static_cast<std::size_t>(j)];
      r[static_cast<std::size_t>(j)] -= alpha * Ap[static_cast<std::size_t>(j)];
      rr_new += r[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(j)];
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int j = 0; j < n; ++j)
      p[static_cast<std::size_t>(j)] = r[static_cast<std::size_t>(j)] + beta * p[static_cast<std::size_t>(j)];
  }
  PeriodicSpline s;
  s.ctrl_ = std::move(x);
  return s;
}

double PeriodicSpline::eval(double theta, int deriv) const {
  const int n = static_cast<int>(ctrl_.size());
  const double x = wrap_2pi(theta) * n / kTwoPi;
  const int j0 = static_cast<int>(std::floor(x));
  double acc = 0.0;
  for (int j = j0 - 2; j <= j0 + 3; ++j) {
    const double b = basis(x - j + 3.0, deriv);
    if (b == 0.0) continue;
    acc += ctrl_[static_cast<std::size_t>(((j % n) + n) % n)] * b;
  }
  const double chain = n / kTwoPi;
  if (deriv == 1) acc *= chain;
  if (deriv == 2) acc *= chain * chain;
  return acc;
}

// ---------------------------------------------------------------------------
// RadialBump

double RadialBump::h(double theta) const {
  if (constant_profile) return c0;
  double caps = 0.0;
  for (double zk : sector_centers) caps += cap(wrap_pi(theta - zk) / width);
  return c0 * (1.0 - amp) + c0 * amp * caps;
}

double RadialBump::hpp(double theta) const {
  if (constant_profile) return 0.0;
  double acc = 0.0;
  for (double zk : sector_centers) acc += cap_pp(wrap_pi(theta - zk) / width);
  return c0 * amp * acc / (width * width);
}

double RadialBump::Q(double theta) const {
  const double m2 = static_cast<double>(degree2m) * degree2m;
  return m2 * h(theta) + hpp(theta);
}

double RadialBump::F(const std::complex<double>& w) const {
  const double r = std::abs(w);
  if (r == 0.0) return 0.0;
  return std::pow(r, degree2m) * h(std::arg(w));
}

double RadialBump::F_lap_over4(const std::complex<double>& w) const {
  const double r = std::abs(w);
  if (r == 0.0) return 0.0;
  return 0.25 * std::pow(r, degree2m - 2) * Q(std::arg(w));
}

namespace {

struct Margins {
  double C1 = -1e300;
  double C2 = -1e300;
  bool range_ok = false;
};

// (b) for every delta in (0,1] is equivalent (affinely in delta) to
// Q(theta) <= L(theta) - C1 everywhere; (c) off the sectors needs
// L - max(Q, 0) >= C2.
Margins measure(const TrigPoly& L, const RadialBump& b, double sigma, int grid) {
  Margins m;
  double c1 = 1e300, c2 = 1e300, hmin = 1e300, hmax = -1e300;
  for (int i = 0; i < grid; ++i) {
    const double th = kTwoPi * i / grid;
    const double Lv = L.eval(th);
    const double Qv = b.Q(th);
    const double hv = b.h(th);
    hmin = std::min(hmin, hv);
    hmax = std::max(hmax, hv);
    c1 = std::min(c1, Lv - Qv);
    bool in_sector = false;
    for (double zk : b.sector_centers)
      if (std::abs(wrap_pi(th - zk)) <= sigma) in_sector = true;
    if (!in_sector) c2 = std::min(c2, Lv - std::max(Qv, 0.0));
  }
  m.C1 = c1;
  m.C2 = c2;
  m.range_ok = hmin > 0.0 && hmax <= 1.0;
  return m;
}

}  // namespace

RadialBump construct_radial_bump(const CircleProfile& prof, double sigma,
                                 const FsSearchParams& params) {
  RadialBump b;
  b.degree2m = prof.degree2m;
  b.sigma = sigma;
  b.sector_centers = prof.zeros;
  const TrigPoly& L = prof.laplacian_on_circle;
  const double scale = std::max(L.coeff_scale(), 1e-300);
  const double tol = params.margin_tol * scale;

  if (prof.zeros.empty()) {
    b.constant_profile = true;
    const double m2 = static_cast<double>(prof.degree2m) * prof.degree2m;
    const double gamma = prof.min_laplacian;
    double c0 = std::min(1.0, gamma / (2.0 * m2 * prof.max_abs_u + 1.0));
    bool ok = false;
    for (int halving = 0; halving < 200 && !ok; ++halving) {
      b.c0 = c0;
      const Margins m = measure(L, b, sigma, params.verify_grid);
      if (m.range_ok && m.C1 > tol && m.C2 > tol) {
        b.C1 = m.C1;
        b.C2 = m.C2;
        ok = true;
      }
      c0 *= 0.5;
    }
    if (!ok) fail(errc::search_failed, "no admissible constant profile");
  } else {
    double min_gap = kTwoPi;
    const auto& zs = prof.zeros;
    for (std::size_t k = 0; k < zs.size(); ++k) {
      const double next = (k + 1 < zs.size()) ? zs[k + 1] : zs[0] + kTwoPi;
      min_gap = std::min(min_gap, next - zs[k]);
    }
    const double sigma0 = 0.5 * min_gap;
    if (!(sigma > 0.0) || sigma >= sigma0)
      fail(errc::search_failed, "sector half-width must lie in (0, sigma0)");

    // keep the zero set inside (0, 2pi): rotate the working frame if a zero
    // sits at the boundary (the caps themselves are periodic, so this only
    // renames angles)
    b.rot = 0.0;
    for (double z : zs)
      if (std::min(z, kTwoPi - z) < 1e-3) b.rot = 0.45 * min_gap;

    b.constant_profile = false;
    const double widths[] = {sigma / 2, sigma / 4, sigma / 8};
    const double amps[] = {0.9, 0.5, 0.1};
    // Leading nine values form the primary grid; the tail extends the search
    // geometrically (narrow caps force c0*amp down to ~width^4 against the
    // quadratic valley of L around each zero).
    const double c0s[] = {1.0,  0.5,  0.1,  3e-2, 1e-2, 3e-3, 1e-3,
                          3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6};
    bool found = false;
    Margins best;
    for (double w : widths) {
      for (double a : amps) {
        for (double c0 : c0s) {
          b.width = std::min(w, 0.95 * sigma0);
          b.amp = a;
          b.c0 = c0;
          const Margins m = measure(L, b, sigma, params.verify_grid);
          if (m.C1 > best.C1) best = m;
          if (m.range_ok && m.C1 > tol && m.C2 > tol) {
            b.C1 = m.C1;
            b.C2 = m.C2;
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) {
      std::ostringstream os;
      os << "parameter grid exhausted; best margins C1 = " << best.C1 << ", C2 = " << best.C2;
      fail(errc::search_failed, os.str());
    }
  }

  // payload grid; finer when caps are narrow so the spline resolves h''
  int n = 4096;
  if (!b.constant_profile)
    while (n < (1 << 16) && kTwoPi / n > b.width / 48.0) n *= 2;
  b.grid.resize(static_cast<std::size_t>(n));
  double floor_v = 1e300;
  for (int i = 0; i < n; ++i) {
    b.grid[static_cast<std::size_t>(i)] = b.h(kTwoPi * i / n);
    floor_v = std::min(floor_v, b.grid[static_cast<std::size_t>(i)]);
  }
  b.floor = floor_v;

  // The stored constants must survive re-verification through the serialized
  // grid + spline path, so fold the spline margins in before freezing them.
  {
    const PeriodicSpline spline = PeriodicSpline::interpolate(b.grid);
    const int nfine = 2 * std::max<int>(n, params.verify_grid);
    const double m2 = static_cast<double>(b.degree2m) * b.degree2m;
    double c1s = 1e300, c2s = 1e300;
    for (int i = 0; i < nfine; ++i) {
      const double th = kTwoPi * i / nfine;
      const double Lv = L.eval(th);
      const double Qv = m2 * spline.eval(th, 0) + spline.eval(th, 2);
      c1s = std::min(c1s, Lv - Qv);
      bool in_sector = false;
      for (double zk : b.sector_centers)
        if (std::abs(wrap_pi(th - zk)) <= sigma) in_sector = true;
      if (!in_sector) c2s = std::min(c2s, Lv - std::max(Qv, 0.0));
    }
    b.C1 = 0.999 * std::min(b.C1, c1s);
    b.C2 = 0.999 * std::min(b.C2, c2s);
    if (b.C1 <= tol || b.C2 <= tol)
      fail(errc::search_failed, "spline-path margins collapsed; payload grid too coarse");
  }
  return b;
}

RadialBumpReport verify_radial_bump(const MixedPolynomial& U, const RadialBump& bump,
                                    const std::vector<double>& deltas, int gridSize) {
  const MixedPolynomial lap =
      wirtinger(wirtinger(U, 1, WirtKind::holo), 1, WirtKind::anti).scaled(ExactComplex::integer(4));
  const TrigPoly L = TrigPoly::from_circle_restriction(lap);
  const PeriodicSpline spline = PeriodicSpline::interpolate(bump.grid);
  const double m2 = static_cast<double>(bump.degree2m) * bump.degree2m;

  RadialBumpReport rep;
  rep.worst_margin = 1e300;
  rep.h_min = 1e300;
  rep.h_max = -1e300;
  rep.c2_margin = 1e300;
  bool first = true;
  for (double d : deltas) {
    double margin = 1e300;
    for (int i = 0; i < gridSize; ++i) {
      const double th = kTwoPi * i / gridSize;
      const double hv = spline.eval(th, 0);
      const double Qv = m2 * hv + spline.eval(th, 2);
      const double Lv = L.eval(th);
      margin = std::min(margin, d == 0.0 ? Lv : Lv - d * Qv - d * bump.C1);
      if (first) {
        rep.h_min = std::min(rep.h_min, hv);
        rep.h_max = std::max(rep.h_max, hv);
        bool in_sector = false;
        for (double zk : bump.sector_centers)
          if (std::abs(wrap_pi(th - zk)) <= bump.sigma) in_sector = true;
        if (!in_sector) rep.c2_margin = std::min(rep.c2_margin, Lv - std::max(Qv, 0.0) - bump.C2);
      }
    }
    first = false;
    rep.per_delta.emplace_back(d, margin);
    rep.worst_margin = std::min(rep.worst_margin, margin);
  }
  return rep;
}

}  // namespace bumpforge
