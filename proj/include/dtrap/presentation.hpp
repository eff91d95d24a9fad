#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dtrap/expr.hpp"
#include "dtrap/pdecomp.hpp"
#include "dtrap/verdict.hpp"

namespace dtrap {

/// Image of a generator under a derivation; nullopt marks OPAQUE, a fresh
/// derivative beyond the modelled horizon.
using Image = std::optional<Rational>;

/// A purely transcendental field F_p(vars) with m commuting derivations given
/// on generators. Derivation indices are 0-based in the API and printed as
/// d1, d2, ...
class DiffPresentation {
 public:
  DiffPresentation(std::string name, std::uint32_t p, int m, std::vector<Symbol> vars)
      : name_(std::move(name)), field_(p), m_(m), vars_(std::move(vars)), images_(static_cast<std::size_t>(m)) {
    if (m < 1) throw Error(ErrorCode::Precondition, "at least one derivation is required");
    std::set<Symbol> seen;
    for (Symbol v : vars_)
      if (!seen.insert(v).second) throw Error(ErrorCode::DuplicateName, "variable " + v.name() + " declared twice");
  }

  DiffPresentation(std::string name, std::uint32_t p, int m, const std::vector<std::string>& vars)
      : DiffPresentation(std::move(name), p, m, intern_all(vars)) {}

  void set_image(int i, Symbol v, Image img) {
    check_index(i);
    if (!has_var(v)) throw Error(ErrorCode::UnknownVariable, v.name() + " is not a generator of " + name_);
    if (img) {
      if (img->prime() != field_.p()) throw Error(ErrorCode::Precondition, "image over the wrong prime");
      for (Symbol s : img->variables())
        if (!has_var(s))
          throw Error(ErrorCode::UnknownVariable, "image of " + v.name() + " uses " + s.name() + ", not a generator of " + name_);
    }
    images_[static_cast<std::size_t>(i)].insert_or_assign(v, std::move(img));
  }
  void set_image(int i, const std::string& v, const std::string& expr) {
    Symbol s = Symbol::intern(v);
    if (expr == "?") return set_image(i, s, std::nullopt);
    std::vector<std::string> names;
    for (Symbol x : vars_) names.push_back(x.name());
    set_image(i, s, parse_rational(expr, field_.p(), names));
  }

  /// Every generator must have an image (possibly OPAQUE) under every derivation.
  void check_complete() const {
    for (int i = 0; i < m_; ++i)
      for (Symbol v : vars_)
        if (!images_[static_cast<std::size_t>(i)].count(v))
          throw Error(ErrorCode::Precondition,
                      name_ + ": no image given for d" + std::to_string(i + 1) + " " + v.name());
  }

  const std::string& name() const { return name_; }
  PrimeField field() const { return field_; }
  std::uint32_t p() const { return field_.p(); }
  int m() const { return m_; }
  const std::vector<Symbol>& vars() const { return vars_; }
  bool has_var(Symbol s) const { return std::find(vars_.begin(), vars_.end(), s) != vars_.end(); }

  const Image& image(int i, Symbol v) const {
    check_index(i);
    auto& map = images_[static_cast<std::size_t>(i)];
    auto it = map.find(v);
    if (it == map.end()) throw Error(ErrorCode::UnknownVariable, v.name() + " has no d" + std::to_string(i + 1) + " image in " + name_);
    return it->second;
  }
  bool opaque(int i, Symbol v) const { return !image(i, v).has_value(); }
  bool fully_defined() const {
    for (auto& map : images_)
      for (auto& [v, img] : map)
        if (!img) return false;
    return true;
  }

  Rational element(Symbol v) const { return Rational::variable(field_, v); }
  Rational element(const std::string& text) const {
    std::vector<std::string> names;
    for (Symbol x : vars_) names.push_back(x.name());
    return parse_rational(text, field_.p(), names);
  }

  friend bool operator==(const DiffPresentation& a, const DiffPresentation& b) {
    return a.field_ == b.field_ && a.m_ == b.m_ && a.vars_ == b.vars_ && a.images_ == b.images_;
  }

 private:
  static std::vector<Symbol> intern_all(const std::vector<std::string>& names) {
    std::vector<Symbol> out;
    for (auto& n : names) out.push_back(Symbol::intern(n));
    return out;
  }
  void check_index(int i) const {
    if (i < 0 || i >= m_) throw Error(ErrorCode::Precondition, "derivation index out of range");
  }

  std::string name_;
  PrimeField field_;
  int m_;
  std::vector<Symbol> vars_;
  std::vector<std::map<Symbol, Image>> images_;
};

namespace detail {

inline Rational derive_poly(const Poly& g, int i, const DiffPresentation& pres) {
  Rational acc(pres.field());
  for (Symbol s : g.variables()) {
    Poly gs = g.partial(s);
    if (gs.is_zero()) continue;
    if (!pres.has_var(s)) throw Error(ErrorCode::UnknownVariable, s.name() + " is not a generator of " + pres.name());
    const Image& img = pres.image(i, s);
    if (!img)
      throw Error(ErrorCode::DepthExceeded,
                  "d" + std::to_string(i + 1) + " " + s.name() + " is opaque in " + pres.name());
    if (!img->is_zero()) acc = acc + Rational(gs) * *img;
  }
  return acc;
}

}  // namespace detail

/// d_i f by additivity, Leibniz and quotient rules. Only generators with a
/// nonzero formal partial derivative need a defined image.
inline Rational derive(const Rational& f, int i, const DiffPresentation& pres) {
  Rational dn = detail::derive_poly(f.num(), i, pres);
  if (f.den().is_constant()) return dn / Rational(f.den());
  Rational dd = detail::derive_poly(f.den(), i, pres);
  Rational h(f.den());
  return (dn * h - Rational(f.num()) * dd) / (h * h);
}

inline Rational derive_iter(Rational f, int i, int order, const DiffPresentation& pres) {
  for (int k = 0; k < order; ++k) f = derive(f, i, pres);
  return f;
}

/// Per generator, the largest order n such that every derivative monomial of
/// order <= n of the generator is defined; kUnbounded when no OPAQUE image is
/// ever reached.
class DepthBudget {
 public:
  static constexpr int kUnbounded = std::numeric_limits<int>::max();

  explicit DepthBudget(const DiffPresentation& pres) {
    for (Symbol v : pres.vars()) depth_[v] = kUnbounded;
    // greatest fixed point of b(x) = min_i (opaque ? 0 : 1 + min over image variables)
    for (bool changed = true; changed;) {
      changed = false;
      for (Symbol v : pres.vars()) {
        int b = kUnbounded;
        for (int i = 0; i < pres.m(); ++i) {
          const Image& img = pres.image(i, v);
          if (!img) {
            b = 0;
            break;
          }
          for (Symbol s : img->variables()) {
            int d = depth_.at(s);
            if (d != kUnbounded) b = std::min(b, d + 1);
          }
        }
        if (b < depth_[v]) depth_[v] = b, changed = true;
      }
    }
  }

  int of(Symbol v) const { return depth_.at(v); }
  /// Budget of an element: the minimum over the generators it involves.
  int of(const Rational& f) const {
    int b = kUnbounded;
    for (Symbol s : f.variables()) b = std::min(b, depth_.at(s));
    return b;
  }

 private:
  std::map<Symbol, int> depth_;
};

/// TRUE iff d_i d_j x = d_j d_i x on every generator where both sides are defined.
inline Verdict check_commutation(const DiffPresentation& pres) {
  if (pres.m() == 1) return Verdict::yes("a single derivation");
  Verdict v = Verdict::yes("derivations commute on all generators");
  for (Symbol x : pres.vars())
    for (int i = 0; i < pres.m(); ++i)
      for (int j = i + 1; j < pres.m(); ++j) {
        const Image &di = pres.image(i, x), &dj = pres.image(j, x);
        if (!di || !dj) {
          v.notes.push_back("UNCHECKED " + x.name() + " d" + std::to_string(i + 1) + "/d" + std::to_string(j + 1));
          continue;
        }
        try {
          Rational ij = derive(*dj, i, pres), ji = derive(*di, j, pres);
          if (!(ij == ji)) {
            Verdict no = Verdict::no("derivations d" + std::to_string(i + 1) + " and d" + std::to_string(j + 1) +
                                     " do not commute on " + x.name());
            no.witnesses.push_back(CommutationFailure{x.name(), i, j, ij, ji});
            return no;
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::DepthExceeded) throw;
          v.notes.push_back("UNCHECKED " + x.name() + " d" + std::to_string(i + 1) + "/d" + std::to_string(j + 1));
        }
      }
  return v;
}

}  // namespace dtrap
