#pragma once

// Central finite-difference oracles for real-valued functions on C^2 and C.
// Used to cross-check analytic Hessians and to evaluate the Levi form of
// assembled (non-polynomial) evaluators.

#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include "bumpforge/rational.hpp"

namespace bumpforge {

using RealField2 = std::function<double(const C2&)>;
using RealField1 = std::function<double(const std::complex<double>&)>;

struct ComplexHessian {
  double h11 = 0, h22 = 0;            // real diagonal
  std::complex<double> h12{0.0, 0.0};  // h21 = conj(h12)
  double eigmin() const {
    const double tr2 = 0.5 * (h11 + h22);
    const double d = 0.5 * (h11 - h22);
    return tr2 - std::sqrt(d * d + std::norm(h12));
  }
  double eigmax() const {
    const double tr2 = 0.5 * (h11 + h22);
    const double d = 0.5 * (h11 - h22);
    return tr2 + std::sqrt(d * d + std::norm(h12));
  }
  double levi(const std::complex<double>& v1, const std::complex<double>& v2) const {
    return h11 * std::norm(v1) + h22 * std::norm(v2) + 2.0 * (h12 * v1 * std::conj(v2)).real();
  }
};

// 4 real coordinates (x1, y1, x2, y2); complex Hessian from the real one via
// d^2/dz_j dconj(z_k) = ((d_{x_j x_k} + d_{y_j y_k}) + i (d_{x_j y_k} - d_{y_j x_k})) / 4.
template <typename F>
ComplexHessian fd_complex_hessian(const F& f, const C2& z, double step) {
  auto at = [&](int j, double s) {
    C2 p = z;
    switch (j) {
      case 0: p.z1 += s; break;
      case 1: p.z1 += std::complex<double>(0, s); break;
      case 2: p.z2 += s; break;
      default: p.z2 += std::complex<double>(0, s); break;
    }
    return p;
  };
  const double f0 = f(z);
  std::array<std::array<double, 4>, 4> H{};
  for (int j = 0; j < 4; ++j) {
    H[j][j] = (f(at(j, step)) - 2.0 * f0 + f(at(j, -step))) / (step * step);
  }
  auto at2 = [&](int j, double sj, int k, double sk) {
    C2 p = at(j, sj);
    switch (k) {
      case 0: p.z1 += sk; break;
      case 1: p.z1 += std::complex<double>(0, sk); break;
      case 2: p.z2 += sk; break;
      default: p.z2 += std::complex<double>(0, sk); break;
    }
    return p;
  };
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k) {
      const double v = (f(at2(j, step, k, step)) - f(at2(j, step, k, -step)) -
                        f(at2(j, -step, k, step)) + f(at2(j, -step, k, -step))) /
                       (4.0 * step * step);
      H[j][k] = H[k][j] = v;
    }
  ComplexHessian ch;
  ch.h11 = 0.25 * (H[0][0] + H[1][1]);
  ch.h22 = 0.25 * (H[2][2] + H[3][3]);
  ch.h12 = 0.25 * std::complex<double>(H[0][2] + H[1][3], H[0][3] - H[1][2]);
  return ch;
}

// Laplacian in one complex variable.
template <typename F>
double fd_laplacian(const F& f, const std::complex<double>& s, double step) {
  const double f0 = f(s);
  const double dxx = (f(s + step) - 2 * f0 + f(s - step)) / (step * step);
  const std::complex<double> is(0, step);
  const double dyy = (f(s + is) - 2 * f0 + f(s - is)) / (step * step);
  return dxx + dyy;
}

}  // namespace bumpforge
