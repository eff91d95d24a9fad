#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dtrap/subfield.hpp"

namespace dtrap {

/// d_i w = sum_v delta[r][c]^p * cols[c] for w = rows[r].
struct DerivationMatrix {
  int derivation = 0;
  std::vector<Monomial> rows;
  std::vector<Monomial> cols;
  std::vector<Vector> delta;
};

/// Derivation matrix of a fully defined presentation, square over its p-monomials.
inline DerivationMatrix derivation_matrix(const DiffPresentation& M, int i) {
  DerivationMatrix d;
  d.derivation = i;
  d.rows = pmonomial_basis(M.vars(), M.p());
  d.cols = d.rows;
  std::map<Monomial, std::size_t, GrlexLess> col_index;
  for (std::size_t c = 0; c < d.cols.size(); ++c) col_index.emplace(d.cols[c], c);
  for (auto& w : d.rows) {
    Vector r(d.cols.size(), Rational(M.field()));
    for (auto& [v, c] : p_decompose(derive(Rational(Poly::term(M.field(), w, 1)), i, M), M.vars()))
      r[col_index.at(v)] = c;
    d.delta.push_back(std::move(r));
  }
  return d;
}

struct ConstantsResult {
  std::vector<Symbol> stage;
  std::vector<Monomial> pmonomials;    // unknowns, in pmonomial_basis order
  std::vector<Vector> coordinates;     // kernel basis over F_p(stage)
  std::vector<Rational> kernel_basis;  // sum_w c_w^p * w for each coordinate vector
  std::size_t dim = 0;
  bool perfect = false;
  std::vector<std::string> notes;
};

namespace detail {

// The ambient presentation with every OPAQUE image replaced by a fresh
// symbol, itself opaque. Fresh names cannot be typed in the DSL.
inline DiffPresentation with_fresh_opaques(const DiffPresentation& E, std::vector<std::string>* notes) {
  std::vector<Symbol> vars = E.vars();
  std::vector<std::vector<std::pair<Symbol, Symbol>>> fresh(static_cast<std::size_t>(E.m()));
  for (int i = 0; i < E.m(); ++i)
    for (Symbol v : E.vars())
      if (E.opaque(i, v)) {
        Symbol s = Symbol::intern("d" + std::to_string(i + 1) + "?" + v.name());
        vars.push_back(s);
        fresh[static_cast<std::size_t>(i)].emplace_back(v, s);
      }
  DiffPresentation out(E.name(), E.p(), E.m(), vars);
  for (int i = 0; i < E.m(); ++i) {
    for (Symbol v : E.vars())
      if (!E.opaque(i, v)) out.set_image(i, v, E.image(i, v));
    for (auto& [v, s] : fresh[static_cast<std::size_t>(i)]) {
      out.set_image(i, v, Rational::variable(E.field(), s));
      if (notes) notes->push_back("d" + std::to_string(i + 1) + " " + v.name() + " is opaque, treated as a fresh transcendental");
    }
    for (auto& fr : fresh)
      for (auto& [v, s] : fr) out.set_image(i, s, std::nullopt);
  }
  return out;
}

}  // namespace detail

/// Constants of F_p(stage) inside the ambient presentation. Derivatives may
/// leave the stage; opaque images count as fresh transcendentals. A vector
/// (c_w) over F_p(stage) is constant iff sum_w c_w delta_{w,v} = 0 for every
/// derivation and every target p-monomial v. Equations are cleared of
/// denominators and split along monomials in the non-stage variables, which
/// are algebraically independent over F_p(stage).
inline ConstantsResult constants_at_stage(const DiffPresentation& E, const std::vector<Symbol>& stage,
                                          const EngineConfig& cfg = {}) {
  ConstantsResult res;
  res.stage = stage;
  std::set<Symbol> in_stage;
  for (Symbol s : stage) {
    if (!E.has_var(s)) throw Error(ErrorCode::UnknownVariable, s.name() + " is not a generator of " + E.name());
    if (!in_stage.insert(s).second) throw Error(ErrorCode::DuplicateName, s.name() + " listed twice in a stage");
  }
  if (stage.size() > static_cast<std::size_t>(cfg.max_pmonomial_vars))
    throw Error(ErrorCode::SizeCap, "constants of a stage with " + std::to_string(stage.size()) + " generators exceed the p-monomial cap");
  const PrimeField f = E.field();
  DiffPresentation aug = detail::with_fresh_opaques(E, &res.notes);
  res.pmonomials = pmonomial_basis(stage, E.p());
  const std::size_t n = res.pmonomials.size();

  std::vector<Vector> equations;
  for (int i = 0; i < E.m(); ++i) {
    std::map<Monomial, std::map<std::size_t, Rational>, GrlexLess> by_target;
    for (std::size_t r = 0; r < n; ++r) {
      Rational dw = derive(Rational(Poly::term(f, res.pmonomials[r], 1)), i, aug);
      for (auto& [v, c] : p_decompose(dw, aug.vars())) by_target[v].emplace(r, c);
    }
    for (auto& [v, entries] : by_target) {
      Poly l = Poly::constant(f, 1);
      for (auto& [r, c] : entries) l = detail::lcm(l, c.den());
      // split each cleared entry by its non-stage monomial
      std::map<Monomial, Vector, GrlexLess> split;
      for (auto& [r, c] : entries) {
        Poly e = c.num() * *l.divide_exact(c.den());
        std::map<Monomial, std::vector<Term>, GrlexLess> parts;
        for (auto& t : e.terms()) {
          std::vector<Monomial::Factor> inside, outside;
          for (auto& [s, x] : t.mono.factors()) (in_stage.count(s) ? inside : outside).emplace_back(s, x);
          parts[Monomial(std::move(outside))].push_back({Monomial(std::move(inside)), t.coef});
        }
        for (auto& [out, terms] : parts) {
          auto it = split.try_emplace(out, Vector(n, Rational(f))).first;
          it->second[r] = Rational(Poly::from_terms(f, std::move(terms)));
        }
      }
      for (auto& [out, row] : split) equations.push_back(std::move(row));
    }
  }

  if (equations.empty()) {
    for (std::size_t r = 0; r < n; ++r) {
      Vector e(n, Rational(f));
      e[r] = Rational::constant(f, 1);
      res.coordinates.push_back(std::move(e));
    }
  } else {
    res.coordinates = kernel(FFMatrix::from_rows(f, equations, n));
  }
  for (auto& c : res.coordinates) {
    Rational el(f);
    for (std::size_t r = 0; r < n; ++r)
      if (!c[r].is_zero()) el = el + c[r].pow(E.p()) * Rational(Poly::term(f, res.pmonomials[r], 1));
    for (int i = 0; i < E.m(); ++i)
      if (!derive(el, i, aug).is_zero()) throw Error(ErrorCode::Internal, "kernel element " + el.str() + " is not a constant");
    res.kernel_basis.push_back(std::move(el));
  }
  res.dim = res.kernel_basis.size();
  res.perfect = res.dim == 1;
  return res;
}

/// Constants of a fully defined presentation.
inline ConstantsResult constants(const DiffPresentation& M, const EngineConfig& cfg = {}) {
  for (int i = 0; i < M.m(); ++i)
    for (Symbol v : M.vars())
      if (M.opaque(i, v))
        throw Error(ErrorCode::DepthExceeded,
                    "constants of " + M.name() + " need d" + std::to_string(i + 1) + " " + v.name() + ", which is opaque");
  return constants_at_stage(M, M.vars(), cfg);
}

struct TrapCertificate {
  std::vector<std::pair<Rational, Rational>> p_basis_A;  // (b in M, a in E) with a^p = embed(b)
  std::vector<std::string> extraction;                   // greedy trace over the kernel basis
  int order = 0;
  std::vector<Rational> family;
  std::vector<std::string> family_labels;
  Verdict independence;
  ConstantsResult constants;

  std::vector<Rational> roots() const {
    std::vector<Rational> out;
    for (auto& [b, a] : p_basis_A) out.push_back(a);
    return out;
  }
};

/// Greedy p-basis B of C_M over M^p taken from the kernel basis, and the
/// p-th roots in the ambient of the embedded elements of B.
inline TrapCertificate p_basis_of_constants_root(const SubfieldDecl& M, const DiffPresentation& E,
                                                 const EngineConfig& cfg = {}) {
  TrapCertificate cert;
  cert.constants = constants(M.own, cfg);
  std::vector<Rational> B;
  std::size_t span = 1;
  for (auto& c : cert.constants.kernel_basis) {
    if (span == cert.constants.dim) break;
    auto trial = B;
    trial.push_back(c);
    if (p_independent(trial, {}, M.own, cfg).is_true()) {
      B = std::move(trial);
      span *= M.own.p();
      cert.extraction.push_back("keep " + c.str());
    } else {
      cert.extraction.push_back("skip " + c.str());
    }
  }
  if (span != cert.constants.dim)
    throw Error(ErrorCode::Internal, "p-basis of the constants spans " + std::to_string(span) + " of " +
                                         std::to_string(cert.constants.dim) + " dimensions");
  for (auto& b : B) {
    Rational e = M.embed(b);
    if (!is_pth_power(e))
      throw Error(ErrorCode::AmbientTooSmall, "constant " + b.str() + " of " + M.name + " embeds as " + e.str() +
                                                  ", which is not a p-th power in " + E.name());
    cert.p_basis_A.emplace_back(b, frobenius_inverse(e));
  }
  return cert;
}

/// Exponent vectors of derivative monomials of total order 1..order, by
/// order and then with d1 first. Pure iterates only when `pure`.
inline std::vector<std::vector<int>> derivative_monomials(int m, int order, bool pure) {
  std::vector<std::vector<int>> out;
  for (int k = 1; k <= order; ++k) {
    std::vector<int> e(static_cast<std::size_t>(m), 0);
    auto rec = [&](auto& self, std::size_t i, int left) -> void {
      if (i + 1 == e.size()) {
        e[i] = left;
        out.push_back(e);
        return;
      }
      for (int x = left; x >= 0; --x) {
        e[i] = x;
        self(self, i + 1, left - x);
      }
    };
    rec(rec, 0, k);
  }
  if (pure)
    std::erase_if(out, [](const std::vector<int>& e) {
      return std::count_if(e.begin(), e.end(), [](int x) { return x > 0; }) > 1;
    });
  return out;
}

inline Rational apply_derivative(Rational f, const std::vector<int>& e, const DiffPresentation& pres) {
  for (std::size_t i = 0; i < e.size(); ++i) f = derive_iter(f, static_cast<int>(i), e[i], pres);
  return f;
}

inline std::string derivative_label(const std::vector<int>& e, const std::string& of) {
  std::string op;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i]) continue;
    op += "d" + std::to_string(i + 1);
    if (e[i] > 1) op += "^" + std::to_string(e[i]);
  }
  return op + "(" + of + ")";
}

struct TrapResult {
  Verdict verdict;
  TrapCertificate certificate;
};

/// M is differentially trap up to order ell: the derivatives of order 1..ell
/// of the roots A are algebraically independent over the embedded generators
/// of M. `depth` is the derivative order the ambient must model for each root.
inline TrapResult trap_up_to(const SubfieldDecl& M, const DiffPresentation& E, int ell, const EngineConfig& cfg = {},
                             int depth = -1) {
  if (ell < 1) throw Error(ErrorCode::BadParameter, "trap order must be at least 1");
  if (depth < 0) depth = ell;
  TrapResult out;
  auto& cert = out.certificate;
  cert = p_basis_of_constants_root(M, E, cfg);
  cert.order = ell;
  const std::string tag = " (up to order " + std::to_string(ell) + ")";
  if (cert.p_basis_A.empty()) {
    out.verdict = Verdict::yes(M.name + " is differentially perfect, so A is empty" + tag);
    out.verdict.witnesses.push_back(EmptyFamily{"A is empty"});
    cert.independence = out.verdict;
    return out;
  }
  DepthBudget budget(E);
  for (auto& a : cert.roots())
    if (budget.of(a) < depth)
      throw Error(ErrorCode::DepthExceeded, "root " + a.str() + " is modelled to order " + std::to_string(budget.of(a)) +
                                                " in " + E.name() + ", order " + std::to_string(depth) + " is needed");
  auto monos = derivative_monomials(E.m(), ell, cfg.pure_iterates);
  for (auto& a : cert.roots())
    for (auto& e : monos) {
      cert.family.push_back(apply_derivative(a, e, E));
      cert.family_labels.push_back(derivative_label(e, a.str()));
    }

  for (std::size_t k = 0; k < cert.family.size(); ++k) {
    auto c = cert.family[k].scalar();
    if (!c) continue;
    Annihilator w;
    w.polynomial = Poly::variable(E.field(), Symbol::intern("y")) - Poly::constant(E.field(), *c);
    w.indeterminates = {Symbol::intern("y")};
    w.values = {cert.family[k]};
    w.note = cert.family_labels[k] + " = " + cert.family[k].str();
    out.verdict = Verdict::no(cert.family_labels[k] + " lies in the prime field" + tag);
    out.verdict.witnesses.push_back(std::move(w));
    cert.independence = out.verdict;
    return out;
  }

  TrdegOptions opt;
  opt.degree = cfg.oracle_degree;
  opt.labels = cert.family_labels;
  opt.always_run_oracle = cfg.always_run_oracle;
  auto t = trdeg(cert.family, {M.embedded_generators()}, E, cfg, opt);
  out.verdict = t.verdict;
  out.verdict.reason = "derivatives of A over " + M.name + ": " + t.verdict.reason + tag;
  cert.independence = out.verdict;
  return out;
}

struct FreeTower {
  std::string root;
  int depth = 1;  // root, root1, ..., root<depth>; the last one's derivative is opaque
};

/// No new constants after adjoining free derivative towers: the constants
/// of the extended stage have the dimension of the constants of the base.
inline Verdict kolchin_crosscheck(const DiffPresentation& base, const std::vector<FreeTower>& towers,
                                  const EngineConfig& cfg = {}) {
  if (towers.empty()) return Verdict::yes("nothing adjoined");
  auto c0 = constants(base, cfg);
  std::vector<Symbol> vars = base.vars();
  std::vector<std::vector<Symbol>> chains;
  for (auto& t : towers) {
    if (t.depth < 1) throw Error(ErrorCode::BadParameter, "tower depth must be at least 1");
    std::vector<Symbol> chain{Symbol::intern(t.root)};
    for (int k = 1; k <= t.depth; ++k) chain.push_back(Symbol::intern(t.root + std::to_string(k)));
    vars.insert(vars.end(), chain.begin(), chain.end());
    chains.push_back(std::move(chain));
  }
  DiffPresentation ext(base.name() + "+towers", base.p(), base.m(), vars);
  for (int i = 0; i < base.m(); ++i) {
    for (Symbol v : base.vars()) ext.set_image(i, v, base.image(i, v));
    for (auto& chain : chains)
      for (std::size_t k = 0; k < chain.size(); ++k) {
        Image img;
        if (i == 0 && k + 1 < chain.size()) img = Rational::variable(base.field(), chain[k + 1]);
        ext.set_image(i, chain[k], img);
      }
  }
  auto c1 = constants_at_stage(ext, ext.vars(), cfg);
  std::string dims = std::to_string(c0.dim) + " before, " + std::to_string(c1.dim) + " after";
  if (c0.dim == c1.dim) {
    Verdict v = Verdict::yes("constants dimension " + dims);
    v.notes = c1.notes;
    return v;
  }
  Verdict v = Verdict::no("new constants appear: dimension " + dims);
  KernelDimension w{ext.name(), {}, c0.dim};
  for (auto& c : c1.kernel_basis) w.basis.push_back(c.str());
  v.witnesses.push_back(std::move(w));
  return v;
}

/// Sufficient test that F_p(gens) = F_p(vars occurring in gens): a variable
/// becomes known once some generator is affine in it over the known ones.
inline bool stage_presentable(const std::vector<Rational>& gens, const std::vector<Symbol>& stage) {
  std::set<Symbol> known;
  auto inside = [&](const Rational& g) {
    for (Symbol s : g.variables())
      if (!known.count(s)) return false;
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& g : gens) {
      std::vector<Symbol> unknown;
      for (Symbol s : g.variables())
        if (!known.count(s)) unknown.push_back(s);
      if (unknown.size() != 1) continue;
      Symbol x = unknown.front();
      Rational alpha = partial(g, x);
      if (alpha.is_zero() || !inside(alpha) || !inside(g - alpha * Rational::variable(g.field(), x))) continue;
      known.insert(x);
      changed = true;
    }
  }
  return known == std::set<Symbol>(stage.begin(), stage.end());
}

/// Perfectness of M(A, dA, ..., d^(ell-1) A) at its presented stage inside E.
inline Verdict adjoined_stage_perfect(const SubfieldDecl& M, const std::vector<Rational>& A, int ell,
                                      const DiffPresentation& E, const EngineConfig& cfg = {}) {
  std::vector<Rational> gens = M.embedded_generators();
  for (auto& a : A) {
    gens.push_back(a);
    if (ell > 1)
      for (auto& e : derivative_monomials(E.m(), ell - 1, cfg.pure_iterates)) gens.push_back(apply_derivative(a, e, E));
  }
  std::set<Symbol> used;
  for (auto& g : gens)
    for (Symbol s : g.variables()) used.insert(s);
  std::vector<Symbol> stage;
  for (Symbol s : E.vars())
    if (used.count(s)) stage.push_back(s);
  std::string name = M.name + "(A..)";
  if (!stage_presentable(gens, stage)) return Verdict::unknown(std::nullopt, name + " is not presentable as a free stage");
  auto c = constants_at_stage(E, stage, cfg);
  if (c.perfect) {
    Verdict v = Verdict::yes(name + " is differentially perfect at its stage");
    v.notes = c.notes;
    return v;
  }
  Verdict v = Verdict::no(name + " has constants beyond its p-th powers");
  KernelDimension w{name, {}, 1};
  for (auto& k : c.kernel_basis) w.basis.push_back(k.str());
  v.witnesses.push_back(std::move(w));
  return v;
}

}  // namespace dtrap
