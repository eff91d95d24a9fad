#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dtrap/linalg.hpp"

namespace dtrap {

enum class Status { True, False, Inconclusive };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::True: return "TRUE";
    case Status::False: return "FALSE";
    case Status::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

/// sum_i lambda_i * elements[i] = 0 where lambda_i = sum_k parts[i][k].first^p * parts[i][k].second
/// and every .second is a p-monomial in the base.
struct LinearDependence {
  std::vector<Rational> elements;
  std::vector<std::vector<std::pair<Rational, Rational>>> parts;

  Rational coefficient(std::size_t i) const {
    Rational acc(elements[i].field());
    for (auto& [c, u] : parts[i]) acc = acc + c.pow(c.prime()) * u;
    return acc;
  }

  bool verify() const {
    if (elements.empty() || parts.size() != elements.size()) return false;
    Rational total(elements.front().field());
    bool nontrivial = false;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      Rational c = coefficient(i);
      nontrivial = nontrivial || !c.is_zero();
      total = total + c * elements[i];
    }
    return nontrivial && total.is_zero();
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (parts[i].empty()) continue;
      std::string coef;
      for (auto& [c, u] : parts[i]) {
        if (!coef.empty()) coef += " + ";
        coef += "(" + c.str() + ")^" + std::to_string(c.prime());
        if (!u.is_one()) coef += "*(" + u.str() + ")";
      }
      if (!out.empty()) out += " + ";
      out += "[" + coef + "]*(" + elements[i].str() + ")";
    }
    return out + " = 0";
  }
};

/// A nonzero polynomial P with P(values) = 0. The indeterminates from
/// `first_free` on belong to the tested family; the earlier ones to the base.
/// P must have a coefficient of positive family-degree that survives
/// evaluation at the base, otherwise the relation says nothing about the family.
struct Annihilator {
  Poly polynomial{PrimeField::trusted(2)};
  std::vector<Symbol> indeterminates;
  std::vector<Rational> values;
  std::size_t first_free = 0;
  std::string note;

  bool verify() const {
    if (polynomial.is_zero() || values.size() != indeterminates.size()) return false;
    std::map<Symbol, Rational> all, base;
    for (std::size_t i = 0; i < values.size(); ++i) {
      all.emplace(indeterminates[i], values[i]);
      if (i < first_free) base.emplace(indeterminates[i], values[i]);
    }
    if (!substitute(Rational(polynomial), all).is_zero()) return false;
    // group terms by their family part and evaluate each coefficient on the base
    std::map<Monomial, std::vector<Term>, GrlexLess> by_family;
    for (auto& t : polynomial.terms()) {
      std::vector<Monomial::Factor> fam, rest;
      for (auto& [s, e] : t.mono.factors()) {
        bool in_family = false;
        for (std::size_t i = first_free; i < indeterminates.size(); ++i) in_family |= indeterminates[i] == s;
        (in_family ? fam : rest).emplace_back(s, e);
      }
      by_family[Monomial(std::move(fam))].push_back({Monomial(std::move(rest)), t.coef});
    }
    for (auto& [fam, terms] : by_family) {
      if (fam.is_one()) continue;
      Poly q = Poly::from_terms(polynomial.field(), terms);
      if (!substitute(Rational(q), base).is_zero()) return true;
    }
    return false;
  }

  std::string str() const {
    std::string out = "P(";
    for (std::size_t i = 0; i < indeterminates.size(); ++i)
      out += (i ? ", " : "") + indeterminates[i].name();
    out += ") = " + polynomial.str();
    if (!note.empty()) out += "  [" + note + "]";
    return out;
  }
};

struct CommutationFailure {
  std::string var;
  int i = 0, j = 0;  // 0-based derivation indices
  Rational ij{PrimeField::trusted(2)};  // d_i(d_j x)
  Rational ji{PrimeField::trusted(2)};  // d_j(d_i x)

  bool verify() const { return !(ij == ji); }
  std::string str() const {
    return "d" + std::to_string(i + 1) + "(d" + std::to_string(j + 1) + " " + var + ") = " + ij.str() +
           " but d" + std::to_string(j + 1) + "(d" + std::to_string(i + 1) + " " + var + ") = " + ji.str();
  }
};

struct DerivationMismatch {
  std::string var;
  int derivation = 0;
  Rational expected{PrimeField::trusted(2)};  // embedded image of the own derivative
  Rational actual{PrimeField::trusted(2)};    // ambient derivative of the embedded generator

  bool verify() const { return !(expected == actual); }
  std::string str() const {
    return "d" + std::to_string(derivation + 1) + "(" + var + "): embedding gives " + expected.str() +
           ", ambient gives " + actual.str();
  }
};

/// Full-rank Jacobian: rows are the differentials of the listed elements.
struct JacobianCertificate {
  std::vector<std::string> elements;
  std::vector<std::string> columns;
  std::vector<Vector> rows;
  std::size_t claimed_rank = 0;

  bool verify() const {
    if (rows.empty()) return claimed_rank == 0;
    PrimeField f = rows.front().empty() ? PrimeField::trusted(2) : rows.front().front().field();
    return rank(FFMatrix::from_rows(f, rows, columns.size())) == claimed_rank &&
           claimed_rank == rows.size();
  }
  std::string str() const {
    std::string out = "rank J(";
    for (std::size_t i = 0; i < elements.size(); ++i) out += (i ? ", " : "") + elements[i];
    return out + ") = " + std::to_string(claimed_rank);
  }
};

/// A constants kernel whose dimension differs from the expected one; the
/// basis is listed so the count can be checked by hand.
struct KernelDimension {
  std::string field;
  std::vector<std::string> basis;
  std::size_t expected = 1;

  bool verify() const { return basis.size() != expected; }
  std::string str() const {
    std::string out = "constants of " + field + " have dimension " + std::to_string(basis.size()) + ", expected " +
                      std::to_string(expected) + ": {";
    for (std::size_t i = 0; i < basis.size(); ++i) out += (i ? ", " : "") + basis[i];
    return out + "}";
  }
};

/// The tested family is empty, so independence holds vacuously.
struct EmptyFamily {
  std::string why;
  bool verify() const { return true; }
  std::string str() const { return why; }
};

using Witness = std::variant<LinearDependence, Annihilator, CommutationFailure, DerivationMismatch,
                             JacobianCertificate, KernelDimension, EmptyFamily>;

inline bool verify(const Witness& w) {
  return std::visit([](const auto& x) { return x.verify(); }, w);
}
inline std::string describe(const Witness& w) {
  return std::visit([](const auto& x) { return x.str(); }, w);
}
inline std::string_view witness_kind(const Witness& w) {
  static constexpr std::string_view names[] = {"linear-dependence", "annihilator", "commutation-failure",
                                               "derivation-mismatch", "jacobian", "kernel-dimension",
                                               "empty-family"};
  return names[w.index()];
}

/// Three-valued answer. `bound` is the search bound behind an INCONCLUSIVE
/// verdict (annihilator degree, or derivative order for truncated checks).
struct Verdict {
  Status status = Status::Inconclusive;
  std::optional<int> bound;
  std::string reason;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;

  static Verdict yes(std::string reason = {}) { return {Status::True, std::nullopt, std::move(reason), {}, {}}; }
  static Verdict no(std::string reason = {}) { return {Status::False, std::nullopt, std::move(reason), {}, {}}; }
  static Verdict unknown(std::optional<int> bound, std::string reason) {
    return {Status::Inconclusive, bound, std::move(reason), {}, {}};
  }

  bool is_true() const { return status == Status::True; }
  bool is_false() const { return status == Status::False; }

  /// FALSE needs a witness and every attached witness must re-verify.
  bool verify() const {
    if (status == Status::False && witnesses.empty()) return false;
    for (auto& w : witnesses)
      if (!dtrap::verify(w)) return false;
    return true;
  }

  std::string label() const {
    std::string s(to_string(status));
    if (status == Status::Inconclusive && bound) s += "_UP_TO(" + std::to_string(*bound) + ")";
    return s;
  }
};

}  // namespace dtrap
