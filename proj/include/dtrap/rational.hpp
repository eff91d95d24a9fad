#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "dtrap/polynomial.hpp"

namespace dtrap {

/// An element of F_p(X) in canonical form: gcd(num, den) = 1, den monic under
/// graded-lex, zero is 0/1. Structural equality is field equality.
class Rational {
 public:
  explicit Rational(PrimeField f) : num_(f), den_(Poly::constant(f, 1)) {}

  Rational(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  explicit Rational(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.field(), 1)) {}

  static Rational constant(PrimeField f, std::int64_t c) { return Rational(Poly::constant(f, c)); }
  static Rational variable(PrimeField f, Symbol s) { return Rational(Poly::variable(f, s)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  PrimeField field() const { return num_.field(); }
  std::uint32_t prime() const { return num_.prime(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  /// The value in F_p when the element is a scalar.
  std::optional<std::uint32_t> scalar() const {
    if (!den_.is_one() || !num_.is_constant()) return std::nullopt;
    return num_.constant_value();
  }

  std::set<Symbol> variables() const {
    auto v = num_.variables();
    auto d = den_.variables();
    v.insert(d.begin(), d.end());
    return v;
  }

  Rational operator-() const { return trusted(-num_, den_); }

  friend Rational operator+(const Rational& a, const Rational& b) { return add(a, b, false); }
  friend Rational operator-(const Rational& a, const Rational& b) { return add(a, b, true); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_zero() || b.is_zero()) return Rational(a.field());
    if (a.den_.is_one() && b.den_.is_one()) return Rational(a.num_ * b.num_);
    Poly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
    Poly n = exact(a.num_, g1) * exact(b.num_, g2);
    Poly d = exact(a.den_, g2) * exact(b.den_, g1);
    return trusted(std::move(n), std::move(d));
  }

  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

  Rational inverse() const {
    if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    return trusted(den_, num_);
  }

  Rational pow(std::int64_t e) const {
    if (e < 0) {
      if (is_zero()) throw Error(ErrorCode::DivisionByZero, "negative power of zero");
      return inverse().pow(-e);
    }
    // reduced fractions stay reduced under powers and monic stays monic
    return trusted(num_.pow(e), den_.pow(e));
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// Text that the expression parser reads back to the same element.
  std::string str() const {
    if (den_.is_one()) return num_.str();
    std::string n = num_.size() > 1 ? "(" + num_.str() + ")" : num_.str();
    bool bare = den_.size() == 1 && den_.leading().coef == 1 &&
                den_.leading().mono.factors().size() == 1;
    return n + "/" + (bare ? den_.str() : "(" + den_.str() + ")");
  }

 private:
  struct Trusted {};
  Rational(Poly num, Poly den, Trusted) : num_(std::move(num)), den_(std::move(den)) {
    make_monic();
  }
  static Rational trusted(Poly num, Poly den) {
    if (den.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
    return Rational(std::move(num), std::move(den), Trusted{});
  }

  static Poly exact(const Poly& a, const Poly& b) {
    if (b.is_one()) return a;
    auto q = a.divide_exact(b);
    if (!q) throw Error(ErrorCode::Internal, "gcd does not divide operand");
    return std::move(*q);
  }

  static Rational add(const Rational& a, const Rational& b, bool subtract) {
    if (a.den_ == b.den_) {
      Poly n = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
      if (a.den_.is_one()) return Rational(std::move(n));
      return Rational(std::move(n), a.den_);
    }
    Poly g = gcd(a.den_, b.den_);
    Poly bd = exact(b.den_, g), ad = exact(a.den_, g);
    Poly n = subtract ? a.num_ * bd - b.num_ * ad : a.num_ * bd + b.num_ * ad;
    return Rational(std::move(n), a.den_ * bd);
  }

  void make_monic() {
    if (num_.is_zero()) {
      den_ = Poly::constant(num_.field(), 1);
      return;
    }
    std::uint32_t lc = den_.leading_coefficient();
    if (lc != 1) {
      std::uint32_t inv = den_.field().inv(lc);
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  void normalize() {
    if (num_.prime() != den_.prime())
      throw Error(ErrorCode::Precondition, "numerator and denominator over different fields");
    if (den_.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
    if (num_.is_zero()) {
      den_ = Poly::constant(num_.field(), 1);
      return;
    }
    if (!den_.is_constant()) {
      Poly g = gcd(num_, den_);
      if (!g.is_one()) {
        num_ = exact(num_, g);
        den_ = exact(den_, g);
      }
    }
    make_monic();
  }

  Poly num_;
  Poly den_;
};

/// Simultaneous substitution of variables; unmapped variables stay put.
inline Rational substitute(const Rational& f, const std::map<Symbol, Rational>& values) {
  auto eval = [&](const Poly& p) {
    Rational acc(f.field());
    std::map<std::pair<Symbol, std::int32_t>, Rational> cache;
    for (auto& t : p.terms()) {
      Rational term = Rational::constant(f.field(), t.coef);
      for (auto& [s, e] : t.mono.factors()) {
        auto it = values.find(s);
        if (it == values.end()) {
          term = term * Rational(Poly::term(f.field(), Monomial::var(s, e), 1));
          continue;
        }
        auto key = std::make_pair(s, e);
        auto c = cache.find(key);
        if (c == cache.end()) c = cache.emplace(key, it->second.pow(e)).first;
        term = term * c->second;
      }
      acc = acc + term;
    }
    return acc;
  };
  Rational d = eval(f.den());
  if (d.is_zero()) throw Error(ErrorCode::DivisionByZero, "substitution makes denominator vanish");
  return eval(f.num()) / d;
}

/// Formal partial derivative d/ds of a rational function.
inline Rational partial(const Rational& f, Symbol s) {
  Poly dn = f.num().partial(s), dd = f.den().partial(s);
  if (dd.is_zero()) return Rational(dn, f.den());
  return Rational(dn * f.den() - f.num() * dd, f.den() * f.den());
}

}  // namespace dtrap
