#pragma once

// Arithmetic in GF(p^k) = F_p[t]/(g), used only by tests to specialize
// rational-function matrices at random points and compare ranks.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "dtrap/linalg.hpp"

namespace dtrap::testing {

using UPoly = std::vector<std::uint32_t>;  // coefficient of t^i at index i

inline void utrim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline UPoly umod(UPoly a, const UPoly& m, const PrimeField& f) {
  utrim(a);
  const std::uint32_t inv = f.inv(m.back());
  while (a.size() >= m.size()) {
    std::uint32_t c = f.mul(a.back(), inv);
    std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = f.sub(a[shift + i], f.mul(c, m[i]));
    utrim(a);
  }
  return a;
}

inline UPoly umul(const UPoly& a, const UPoly& b, const PrimeField& f) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  utrim(r);
  return r;
}

inline UPoly ugcd(UPoly a, UPoly b, const PrimeField& f) {
  utrim(a);
  utrim(b);
  while (!b.empty()) {
    UPoly r = umod(a, b, f);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Ben-Or: g of degree k is irreducible iff gcd(t^{p^i} - t mod g, g) = 1 for i <= k/2.
inline bool irreducible(const UPoly& g, const PrimeField& f) {
  const std::size_t k = g.size() - 1;
  UPoly power{0, 1};  // t
  for (std::size_t i = 1; i <= k / 2; ++i) {
    UPoly acc{1};
    UPoly base = power;
    for (std::uint32_t e = f.p(); e; e >>= 1) {
      if (e & 1) acc = umod(umul(acc, base, f), g, f);
      base = umod(umul(base, base, f), g, f);
    }
    power = acc;
    UPoly diff = power;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = f.sub(diff[1], 1);
    utrim(diff);
    if (diff.empty()) return false;
    UPoly d = ugcd(g, diff, f);
    if (d.size() > 1) return false;
  }
  return true;
}

class ExtField {
 public:
  using Elem = UPoly;

  ExtField(std::uint32_t p, std::mt19937_64& rng) : f_(p) {
    k_ = 1;
    std::uint64_t q = p;
    while (q < (1u << 20)) q *= p, ++k_;
    std::uniform_int_distribution<std::uint32_t> coef(0, p - 1);
    do {
      modulus_.assign(k_ + 1, 0);
      for (std::size_t i = 0; i < k_; ++i) modulus_[i] = coef(rng);
      modulus_[k_] = 1;
    } while (!irreducible(modulus_, f_));
    order_ = q;
  }

  std::uint64_t order() const { return order_; }
  std::size_t degree() const { return k_; }

  Elem random(std::mt19937_64& rng) const {
    std::uniform_int_distribution<std::uint32_t> coef(0, f_.p() - 1);
    Elem e(k_);
    for (auto& c : e) c = coef(rng);
    utrim(e);
    return e;
  }
  Elem scalar(std::uint32_t c) const { return c % f_.p() ? Elem{c % f_.p()} : Elem{}; }
  Elem add(const Elem& a, const Elem& b) const {
    Elem r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = f_.add(r[i], b[i]);
    utrim(r);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem nb = b;
    for (auto& c : nb) c = f_.neg(c);
    return add(a, nb);
  }
  Elem mul(const Elem& a, const Elem& b) const { return umod(umul(a, b, f_), modulus_, f_); }
  Elem pow(Elem a, std::uint64_t e) const {
    Elem r{1};
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  Elem inv(const Elem& a) const { return pow(a, order_ - 2); }

  Elem eval(const Poly& poly, const std::map<Symbol, Elem>& point) const {
    Elem acc;
    for (auto& t : poly.terms()) {
      Elem term = scalar(t.coef);
      for (auto& [s, e] : t.mono.factors()) term = mul(term, pow(point.at(s), static_cast<std::uint64_t>(e)));
      acc = add(acc, term);
    }
    return acc;
  }

  /// Value of a rational function, or nullopt when the denominator vanishes.
  std::optional<Elem> eval(const Rational& r, const std::map<Symbol, Elem>& point) const {
    Elem d = eval(r.den(), point);
    if (d.empty()) return std::nullopt;
    return mul(eval(r.num(), point), inv(d));
  }

  std::size_t rank(std::vector<std::vector<Elem>> a) const {
    std::size_t r = 0;
    const std::size_t cols = a.empty() ? 0 : a.front().size();
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
      std::size_t piv = r;
      while (piv < a.size() && a[piv][c].empty()) ++piv;
      if (piv == a.size()) continue;
      std::swap(a[piv], a[r]);
      Elem ip = inv(a[r][c]);
      for (std::size_t i = r + 1; i < a.size(); ++i) {
        if (a[i][c].empty()) continue;
        Elem factor = mul(a[i][c], ip);
        for (std::size_t j = c; j < cols; ++j) a[i][j] = sub(a[i][j], mul(factor, a[r][j]));
      }
      ++r;
    }
    return r;
  }

  /// Rank of M specialized at a random point; nullopt if a denominator vanished.
  std::optional<std::size_t> specialized_rank(const FFMatrix& m, const std::vector<Symbol>& vars,
                                              std::mt19937_64& rng) const {
    std::map<Symbol, Elem> point;
    for (Symbol v : vars) point[v] = random(rng);
    std::vector<std::vector<Elem>> a(m.rows(), std::vector<Elem>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        auto v = eval(m.at(i, j), point);
        if (!v) return std::nullopt;
        a[i][j] = std::move(*v);
      }
    return rank(std::move(a));
  }

 private:
  PrimeField f_;
  std::size_t k_ = 0;
  UPoly modulus_;
  std::uint64_t order_ = 0;
};

}  // namespace dtrap::testing
