#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>

namespace bumpforge {

using Rat = mpq_class;

// mpq_class(n, d) does not canonicalize on its own.
inline Rat make_rat(long n, long d = 1) {
  Rat q(n, d);
  q.canonicalize();
  return q;
}

inline Rat rat_from_strings(const std::string& num, const std::string& den) {
  Rat q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

inline double to_double(const Rat& q) { return q.get_d(); }

// Complex number with exact rational real/imaginary parts.
struct ExactComplex {
  Rat re{0}, im{0};

  ExactComplex() = default;
  ExactComplex(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  static ExactComplex real(Rat r) { return {std::move(r), Rat(0)}; }
  static ExactComplex integer(long n) { return {make_rat(n), Rat(0)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  ExactComplex conj() const { return {re, -im}; }

  ExactComplex operator-() const { return {-re, -im}; }
  ExactComplex operator+(const ExactComplex& o) const { return {re + o.re, im + o.im}; }
  ExactComplex operator-(const ExactComplex& o) const { return {re - o.re, im - o.im}; }
  ExactComplex operator*(const ExactComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  ExactComplex operator*(const Rat& s) const { return {re * s, im * s}; }
  ExactComplex& operator+=(const ExactComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  bool operator==(const ExactComplex& o) const { return re == o.re && im == o.im; }
  bool operator!=(const ExactComplex& o) const { return !(*this == o); }

  ExactComplex pow(unsigned k) const {
    ExactComplex acc = integer(1);
    ExactComplex base = *this;
    while (k) {
      if (k & 1u) acc = acc * base;
      base = base * base;
      k >>= 1u;
    }
    return acc;
  }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string str() const {
    return "(" + re.get_str() + (im >= 0 ? "+" : "") + im.get_str() + "i)";
  }
};

inline ExactComplex operator*(const Rat& s, const ExactComplex& c) { return c * s; }

using C1 = std::complex<double>;
struct C2 {
  std::complex<double> z1{0.0, 0.0}, z2{0.0, 0.0};
};

inline double norm2(const C2& z) { return std::norm(z.z1) + std::norm(z.z2); }
inline double cnorm(const C2& z) { return std::sqrt(norm2(z)); }

}  // namespace bumpforge
