#include "bumpforge/parse.hpp"

#include <cctype>
#include <sstream>

#include "bumpforge/errors.hpp"

namespace bumpforge {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  MixedPolynomial parse() {
    MixedPolynomial p = expr();
    skip_ws();
    if (pos_ != s_.size()) die("trailing input");
    return p;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void die(const std::string& what) const {
    std::ostringstream os;
    os << what << " at position " << pos_;
    fail(errc::syntax_error, os.str());
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) die(std::string("expected '") + c + "'");
  }
  bool eat_word(const char* w) {
    skip_ws();
    std::size_t i = 0;
    while (w[i]) {
      if (pos_ + i >= s_.size() || s_[pos_ + i] != w[i]) return false;
      ++i;
    }
    pos_ += i;
    return true;
  }

  MixedPolynomial expr() {
    MixedPolynomial acc = term();
    for (;;) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }

  MixedPolynomial term() {
    MixedPolynomial acc = factor();
    for (;;) {
      if (eat('*')) {
        acc = acc * factor();
      } else if (eat('/')) {
        const MixedPolynomial den = factor();
        const auto& t = den.terms();
        if (t.size() != 1 || t.begin()->first != Expo{})
          die("division requires a constant denominator");
        const ExactComplex d = t.begin()->second;
        if (d.is_zero()) die("division by zero");
        // 1/(a+bi) = conj / |.|^2
        const Rat n2 = d.re * d.re + d.im * d.im;
        acc = acc.scaled(ExactComplex{d.re / n2, -d.im / n2});
      } else {
        return acc;
      }
    }
  }

  long small_exponent() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) die("expected integer exponent");
    const std::string digits = s_.substr(start, pos_ - start);
    if (digits.size() > 4) die("exponent too large");
    return std::stol(digits);
  }

  MixedPolynomial factor() {
    MixedPolynomial base = primary();
    if (eat('^')) {
      const long k = small_exponent();
      base = base.pow(static_cast<unsigned>(k));
    }
    return base;
  }

  MixedPolynomial primary() {
    skip_ws();
    if (pos_ >= s_.size()) die("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MixedPolynomial p = expr();
      expect(')');
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == '+') {
      ++pos_;
      return factor();
    }
    if (c == '|') {
      ++pos_;
      MixedPolynomial inner = expr();
      expect('|');
      long k = 1;
      if (eat('^')) k = small_exponent();
      if (k % 2 != 0)
        fail(errc::non_polynomial_modulus, "odd modulus power |e|^" + std::to_string(k));
      return (inner * inner.conj()).pow(static_cast<unsigned>(k / 2));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (eat_word("conj")) {
      expect('(');
      MixedPolynomial p = expr();
      expect(')');
      return p.conj();
    }
    if (eat_word("Re")) {
      expect('(');
      MixedPolynomial p = expr();
      expect(')');
      return (p + p.conj()).scaled(ExactComplex{make_rat(1, 2), Rat(0)});
    }
    if (eat_word("Im")) {
      expect('(');
      MixedPolynomial p = expr();
      expect(')');
      // (p - conj p) / (2i)
      return (p - p.conj()).scaled(ExactComplex{Rat(0), make_rat(-1, 2)});
    }
    if (eat_word("z1")) return MixedPolynomial::variable(1);
    if (eat_word("z2")) return MixedPolynomial::variable(2);
    die("unexpected character");
  }

  MixedPolynomial number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string digits = s_.substr(start, pos_ - start);
    Rat q{mpz_class(digits)};
    return MixedPolynomial::constant(ExactComplex::real(std::move(q)));
  }
};

std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

void append_monomial(std::ostringstream& os, const Expo& e) {
  bool any = false;
  auto piece = [&](const char* name, int k) {
    if (k == 0) return;
    if (any) os << "*";
    any = true;
    os << name;
    if (k > 1) os << "^" << k;
  };
  piece("z1", e.a1);
  piece("conj(z1)", e.b1);
  piece("z2", e.a2);
  piece("conj(z2)", e.b2);
  if (!any) os << "1";
}

}  // namespace

MixedPolynomial parse_expression(const std::string& text) { return Parser(text).parse(); }

std::string print_polynomial(const MixedPolynomial& p) {
  if (!p.is_real_valued())
    fail(errc::syntax_error, "printer requires a real-valued polynomial");
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rat& coeff, const std::string& body) {
    if (coeff == 0) return;
    const bool neg = coeff < 0;
    const Rat mag = neg ? Rat(-coeff) : coeff;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    os << "(" << rat_str(mag) << ")*" << body;
  };
  for (const auto& [e, c] : p.terms()) {
    const Expo ec = e.conj();
    if (e == ec) {
      // self-conjugate monomial, real coefficient
      std::ostringstream body;
      append_monomial(body, e);
      emit(c.re, body.str());
      continue;
    }
    if (ec < e) continue;  // handled from the partner
    // c*M + conj(c)*conj(M) = 2 Re(c) Re(M) - 2 Im(c) Im(M)
    std::ostringstream mono;
    append_monomial(mono, e);
    emit(c.re * 2, "Re(" + mono.str() + ")");
    emit(c.im * -2, "Im(" + mono.str() + ")");
  }
  if (first) return "0";
  return os.str();
}

}  // namespace bumpforge
