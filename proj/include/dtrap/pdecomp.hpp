#pragma once

#include <map>
#include <span>
#include <vector>

#include "dtrap/rational.hpp"

namespace dtrap {

/// Coordinates of f in the p-monomial basis over F^p:
///   f = sum_w coords[w]^p * w,  w ranging over monomials with exponents < p.
/// Zero coordinates are omitted; the empty monomial is the trivial p-monomial 1.
using PDecomposition = std::map<Monomial, Rational, GrlexLess>;

/// All p-monomials in the given variables, in mixed-radix order with the
/// first variable varying fastest: 1, x, y, xy for p = 2 and (x, y).
inline std::vector<Monomial> pmonomial_basis(std::span<const Symbol> vars, std::uint32_t p) {
  std::vector<Monomial> out{Monomial()};
  for (Symbol v : vars) {
    std::vector<Monomial> next;
    next.reserve(out.size() * p);
    for (std::uint32_t e = 0; e < p; ++e)
      for (auto& m : out) next.push_back(m * Monomial::var(v, static_cast<std::int32_t>(e)));
    out = std::move(next);
  }
  return out;
}

/// Products prod g_i^{a_i} with a_i in [0, p-1], same ordering as
/// pmonomial_basis. `exponents` receives the multi-index of each product.
inline std::vector<Rational> pmonomials_of(std::span<const Rational> gens, PrimeField field,
                                           std::vector<std::vector<std::uint32_t>>* exponents = nullptr) {
  std::vector<Rational> out{Rational::constant(field, 1)};
  std::vector<std::vector<std::uint32_t>> idx{{}};
  for (auto& g : gens) {
    std::vector<Rational> next;
    std::vector<std::vector<std::uint32_t>> next_idx;
    Rational power = Rational::constant(field, 1);
    for (std::uint32_t e = 0; e < field.p(); ++e) {
      for (std::size_t k = 0; k < out.size(); ++k) {
        next.push_back(out[k] * power);
        auto ix = idx[k];
        ix.push_back(e);
        next_idx.push_back(std::move(ix));
      }
      power = power * g;
    }
    out = std::move(next);
    idx = std::move(next_idx);
  }
  if (exponents) *exponents = std::move(idx);
  return out;
}

/// Decomposes f = g/h via f = (g h^{p-1}) / h^p: numerator terms are grouped by
/// exponent residues mod p, the quotient exponents divided by p, and each
/// group divided by h.
inline PDecomposition p_decompose(const Rational& f) {
  const PrimeField field = f.field();
  const std::int32_t p = static_cast<std::int32_t>(field.p());
  PDecomposition out;
  if (f.is_zero()) return out;
  Poly numer = f.den().is_one() ? f.num() : f.num() * f.den().pow(p - 1);
  std::map<Monomial, std::vector<Term>, GrlexLess> groups;
  for (auto& t : numer.terms()) {
    std::vector<Monomial::Factor> residue, quotient;
    for (auto& [s, e] : t.mono.factors()) {
      if (e % p) residue.emplace_back(s, e % p);
      if (e / p) quotient.emplace_back(s, e / p);
    }
    // coefficients are their own p-th roots in F_p
    groups[Monomial(std::move(residue))].push_back({Monomial(std::move(quotient)), t.coef});
  }
  for (auto& [w, terms] : groups)
    out.emplace(w, Rational(Poly::from_terms(field, std::move(terms)), f.den()));
  return out;
}

/// Same as p_decompose, rejecting variables outside `vars`.
inline PDecomposition p_decompose(const Rational& f, std::span<const Symbol> vars) {
  for (Symbol s : f.variables())
    if (std::find(vars.begin(), vars.end(), s) == vars.end())
      throw Error(ErrorCode::UnknownVariable, "variable " + s.name() + " is not a generator");
  return p_decompose(f);
}

/// sum_w coords[w]^p * w.
inline Rational reconstruct(const PDecomposition& d, PrimeField field) {
  Rational acc(field);
  for (auto& [w, c] : d) acc = acc + c.pow(field.p()) * Rational(Poly::term(field, w, 1));
  return acc;
}

/// Exact check of sum_w d[w]^p * w == f without building canonical sums:
/// every coordinate denominator divides h = den(f), so both sides are
/// compared after multiplying through by h^p.
inline bool reconstructs(const PDecomposition& d, const Rational& f) {
  const PrimeField field = f.field();
  const Poly& h = f.den();
  Poly lhs(field);
  for (auto& [w, c] : d) {
    auto cofactor = h.divide_exact(c.den());
    if (!cofactor) return false;
    lhs = lhs + (c.num() * *cofactor).pow(field.p()) * Poly::term(field, w, 1);
  }
  return lhs == f.num() * h.pow(field.p() - 1);
}

inline bool is_pth_power(const Rational& f) {
  return f.num().frobenius_root().has_value() && f.den().frobenius_root().has_value();
}

/// The unique r with r^p = f, by dividing exponents by p.
inline Rational frobenius_inverse(const Rational& f) {
  auto n = f.num().frobenius_root();
  auto d = f.den().frobenius_root();
  if (!n || !d) throw Error(ErrorCode::NotAPthPower, f.str() + " is not a p-th power");
  return Rational(std::move(*n), std::move(*d));
}

}  // namespace dtrap
