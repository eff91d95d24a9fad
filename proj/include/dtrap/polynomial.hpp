#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dtrap/error.hpp"
#include "dtrap/monomial.hpp"
#include "dtrap/prime_field.hpp"

namespace dtrap {

struct Term {
  Monomial mono;
  std::uint32_t coef;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse multivariate polynomial over F_p. Terms are kept sorted in
/// decreasing graded-lex order with nonzero coefficients, so the
/// representation is canonical and equality is structural.
class Poly {
 public:
  explicit Poly(PrimeField field) : field_(field) {}

  static Poly constant(PrimeField f, std::int64_t c) {
    Poly r(f);
    std::uint32_t v = f.reduce(c);
    if (v) r.terms_.push_back({Monomial(), v});
    return r;
  }
  static Poly variable(PrimeField f, Symbol s) { return term(f, Monomial::var(s), 1); }
  static Poly term(PrimeField f, Monomial m, std::uint32_t c) {
    Poly r(f);
    c %= f.p();
    if (c) r.terms_.push_back({std::move(m), c});
    return r;
  }

  /// Builds from arbitrary terms: sorts, merges duplicates, drops zeros.
  static Poly from_terms(PrimeField f, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
      return Monomial::compare(a.mono, b.mono) > 0;
    });
    Poly r(f);
    for (auto& t : terms) {
      std::uint32_t c = t.coef % f.p();
      if (!r.terms_.empty() && r.terms_.back().mono == t.mono) {
        r.terms_.back().coef = f.add(r.terms_.back().coef, c);
      } else {
        r.terms_.push_back({std::move(t.mono), c});
      }
      if (r.terms_.back().coef == 0) r.terms_.pop_back();
    }
    return r;
  }

  PrimeField field() const { return field_; }
  std::uint32_t prime() const { return field_.p(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || terms_.front().mono.is_one(); }
  bool is_one() const { return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coef == 1; }
  bool is_monomial() const { return terms_.size() == 1; }
  std::uint32_t constant_value() const {
    if (terms_.empty()) return 0;
    return terms_.back().mono.is_one() ? terms_.back().coef : 0;
  }

  const Term& leading() const { return terms_.front(); }
  std::uint32_t leading_coefficient() const { return terms_.empty() ? 0 : terms_.front().coef; }
  std::int64_t total_degree() const { return terms_.empty() ? -1 : terms_.front().mono.degree(); }

  std::int32_t degree_in(Symbol s) const {
    std::int32_t d = terms_.empty() ? -1 : 0;
    for (auto& t : terms_) d = std::max(d, t.mono.exponent(s));
    return d;
  }

  std::set<Symbol> variables() const {
    std::set<Symbol> out;
    for (auto& t : terms_)
      for (auto& f : t.mono.factors()) out.insert(f.first);
    return out;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coef = field_.neg(t.coef);
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    check_same(a, b);
    if (a.is_zero() || b.is_zero()) return Poly(a.field_);
    if (a.terms_.size() == 1) return b.times_term(a.terms_[0]);
    if (b.terms_.size() == 1) return a.times_term(b.terms_[0]);
    std::map<Monomial, std::uint32_t, GrlexGreater> acc;
    for (auto& s : a.terms_)
      for (auto& t : b.terms_) {
        auto [it, inserted] = acc.try_emplace(s.mono * t.mono, 0u);
        it->second = a.field_.add(it->second, a.field_.mul(s.coef, t.coef));
      }
    Poly r(a.field_);
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (c) r.terms_.push_back({m, c});
    return r;
  }

  Poly scaled(std::uint32_t c) const {
    c %= field_.p();
    if (c == 0) return Poly(field_);
    Poly r = *this;
    for (auto& t : r.terms_) t.coef = field_.mul(t.coef, c);
    return r;
  }

  Poly times_term(const Term& t) const {
    Poly r(field_);
    if (t.coef % field_.p() == 0) return r;
    r.terms_.reserve(terms_.size());
    // multiplying by a monomial preserves the order of terms
    for (auto& s : terms_) r.terms_.push_back({s.mono * t.mono, field_.mul(s.coef, t.coef)});
    return r;
  }

  /// x -> x^p on every term; the p-th power map on F_p[X] since F_p is fixed
  /// by Frobenius.
  Poly frobenius() const {
    Poly r(field_);
    r.terms_.reserve(terms_.size());
    for (auto& t : terms_) r.terms_.push_back({t.mono.pow(field_.p()), t.coef});
    return r;
  }

  Poly pow(std::int64_t e) const {
    if (e < 0) throw Error(ErrorCode::Internal, "negative polynomial power");
    if (e == 0) return constant(field_, 1);
    if (e == 1) return *this;
    if (terms_.size() == 1) {
      return term(field_, terms_[0].mono.pow(e), field_.pow(terms_[0].coef, e));
    }
    if (e % field_.p() == 0) return pow(e / field_.p()).frobenius();
    Poly half = pow(e / 2);
    Poly r = half * half;
    return (e % 2) ? r * *this : r;
  }

  /// Exponents all divisible by p; then returns the p-th root.
  std::optional<Poly> frobenius_root() const {
    Poly r(field_);
    std::int32_t p = static_cast<std::int32_t>(field_.p());
    for (auto& t : terms_) {
      std::vector<Monomial::Factor> f;
      for (auto& [s, e] : t.mono.factors()) {
        if (e % p) return std::nullopt;
        f.emplace_back(s, e / p);
      }
      r.terms_.push_back({Monomial(std::move(f)), t.coef});
    }
    return r;
  }

  Poly partial(Symbol s) const {
    std::vector<Term> out;
    for (auto& t : terms_) {
      std::int32_t e = t.mono.exponent(s);
      std::uint32_t c = field_.mul(t.coef, field_.reduce(e));
      if (e == 0 || c == 0) continue;
      out.push_back({t.mono.without(s) * Monomial::var(s, e - 1), c});
    }
    return from_terms(field_, std::move(out));
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(field_.inv(leading_coefficient()));
  }

  /// Exact multivariate division; nullopt when b does not divide *this.
  std::optional<Poly> divide_exact(const Poly& b) const {
    check_same(*this, b);
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
    if (is_zero()) return Poly(field_);
    if (b.terms_.size() == 1) {
      Poly r(field_);
      std::uint32_t ic = field_.inv(b.terms_[0].coef);
      for (auto& t : terms_) {
        auto q = t.mono.divide(b.terms_[0].mono);
        if (!q) return std::nullopt;
        r.terms_.push_back({std::move(*q), field_.mul(t.coef, ic)});
      }
      return r;
    }
    std::map<Monomial, std::uint32_t, GrlexGreater> rem;
    for (auto& t : terms_) rem.emplace(t.mono, t.coef);
    const Term& lead = b.terms_.front();
    std::uint32_t ilc = field_.inv(lead.coef);
    std::vector<Term> quotient;
    while (!rem.empty()) {
      auto top = rem.begin();
      if (Monomial::compare(top->first, lead.mono) < 0) return std::nullopt;
      auto qm = top->first.divide(lead.mono);
      if (!qm) return std::nullopt;
      std::uint32_t qc = field_.mul(top->second, ilc);
      for (auto& t : b.terms_) {
        Monomial m = t.mono * *qm;
        auto [it, inserted] = rem.try_emplace(std::move(m), 0u);
        it->second = field_.sub(it->second, field_.mul(qc, t.coef));
        if (it->second == 0) rem.erase(it);
      }
      quotient.push_back({std::move(*qm), qc});
    }
    return from_terms(field_, std::move(quotient));
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.field_.p() == b.field_.p() && a.terms_ == b.terms_;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto& t : terms_) {
      if (!out.empty()) out += " + ";
      if (t.mono.is_one()) {
        out += std::to_string(t.coef);
      } else {
        if (t.coef != 1) out += std::to_string(t.coef) + "*";
        out += t.mono.str();
      }
    }
    return out;
  }

 private:
  static void check_same(const Poly& a, const Poly& b) {
    if (a.field_.p() != b.field_.p())
      throw Error(ErrorCode::Precondition, "mixing characteristics " +
                                               std::to_string(a.prime()) + " and " +
                                               std::to_string(b.prime()));
  }

  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    check_same(a, b);
    const PrimeField f = a.field_;
    Poly r(f);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      int c = i == a.terms_.end()   ? -1
              : j == b.terms_.end() ? 1
                                    : Monomial::compare(i->mono, j->mono);
      if (c > 0) {
        r.terms_.push_back(*i++);
      } else if (c < 0) {
        r.terms_.push_back({j->mono, subtract ? f.neg(j->coef) : j->coef});
        ++j;
      } else {
        std::uint32_t v = subtract ? f.sub(i->coef, j->coef) : f.add(i->coef, j->coef);
        if (v) r.terms_.push_back({i->mono, v});
        ++i, ++j;
      }
    }
    return r;
  }

  PrimeField field_;
  std::vector<Term> terms_;
};

namespace detail {

// Polynomial viewed in F_p[others][x]; index is the degree in x.
using Univariate = std::vector<Poly>;

inline Univariate to_univariate(const Poly& a, Symbol x) {
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(std::max(a.degree_in(x), 0)) + 1);
  for (auto& t : a.terms()) {
    std::int32_t e = t.mono.exponent(x);
    buckets[static_cast<std::size_t>(e)].push_back({t.mono.without(x), t.coef});
  }
  Univariate out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(Poly::from_terms(a.field(), std::move(b)));
  return out;
}

inline Poly from_univariate(const Univariate& u, Symbol x, PrimeField f) {
  std::vector<Term> terms;
  for (std::size_t e = 0; e < u.size(); ++e) {
    Monomial xe = Monomial::var(x, static_cast<std::int32_t>(e));
    for (auto& t : u[e].terms()) terms.push_back({t.mono * xe, t.coef});
  }
  return Poly::from_terms(f, std::move(terms));
}

inline void trim(Univariate& u) {
  while (u.size() > 1 && u.back().is_zero()) u.pop_back();
}

}  // namespace detail

Poly gcd(const Poly& a, const Poly& b);

namespace detail {

inline Poly monomial_gcd(const Monomial& m, const Poly& b) {
  std::vector<Monomial::Factor> f;
  for (auto& [s, e] : m.factors()) {
    std::int32_t lo = e;
    for (auto& t : b.terms()) lo = std::min(lo, t.mono.exponent(s));
    if (lo > 0) f.emplace_back(s, lo);
  }
  return Poly::term(b.field(), Monomial(std::move(f)), 1);
}

inline Poly content(const Univariate& u) {
  Poly g(u.front().field());
  for (auto& c : u) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_one()) break;
  }
  return g;
}

inline Univariate divide_coefficients(const Univariate& u, const Poly& d) {
  Univariate out;
  out.reserve(u.size());
  for (auto& c : u) {
    auto q = c.divide_exact(d);
    if (!q) throw Error(ErrorCode::Internal, "content does not divide coefficient");
    out.push_back(std::move(*q));
  }
  return out;
}

inline Univariate primitive_part(const Univariate& u) {
  Poly c = content(u);
  if (c.is_one()) return u;
  return divide_coefficients(u, c);
}

// Pseudo-remainder of a by b in F_p[others][x].
inline Univariate pseudo_remainder(Univariate a, const Univariate& b) {
  const std::size_t db = b.size() - 1;
  const Poly& lcb = b.back();
  trim(a);
  while (!(a.size() == 1 && a[0].is_zero()) && a.size() - 1 >= db) {
    std::size_t shift = a.size() - 1 - db;
    Poly lca = a.back();
    for (auto& c : a) c = c * lcb;
    for (std::size_t i = 0; i <= db; ++i) a[i + shift] = a[i + shift] - lca * b[i];
    a.pop_back();
    trim(a);
    if (a.empty()) a.push_back(Poly(lcb.field()));
  }
  return a;
}

}  // namespace detail

/// Monic gcd in F_p[X] (zero only when both inputs are zero). Recursive
/// primitive PRS on the variable of least degree; contents are handled by
/// recursion on the remaining variables.
inline Poly gcd(const Poly& a, const Poly& b) {
  const PrimeField f = a.field();
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly::constant(f, 1);
  if (a.is_monomial()) return detail::monomial_gcd(a.leading().mono, b);
  if (b.is_monomial()) return detail::monomial_gcd(b.leading().mono, a);
  if (a.monic() == b.monic()) return a.monic();

  std::set<Symbol> va = a.variables(), vb = b.variables();
  Symbol x;
  std::int32_t best = -1;
  for (Symbol s : va) {
    if (!vb.count(s)) continue;
    std::int32_t d = std::max(a.degree_in(s), b.degree_in(s));
    if (best < 0 || d < best) best = d, x = s;
  }
  // a common factor only involves shared variables
  if (best < 0) return Poly::constant(f, 1);

  auto ua = detail::to_univariate(a, x);
  auto ub = detail::to_univariate(b, x);
  Poly ca = detail::content(ua), cb = detail::content(ub);
  Poly g = gcd(ca, cb);
  auto pa = detail::divide_coefficients(ua, ca);
  auto pb = detail::divide_coefficients(ub, cb);
  if (pa.size() < pb.size()) std::swap(pa, pb);
  for (;;) {
    if (pb.size() == 1) {
      pb = detail::Univariate{Poly::constant(f, 1)};
      break;
    }
    auto r = detail::pseudo_remainder(pa, pb);
    if (r.size() == 1 && r[0].is_zero()) break;
    if (r.size() == 1) {
      pb = detail::Univariate{Poly::constant(f, 1)};
      break;
    }
    pa = std::move(pb);
    pb = detail::primitive_part(r);
  }
  return (g * detail::from_univariate(pb, x, f)).monic();
}

}  // namespace dtrap
