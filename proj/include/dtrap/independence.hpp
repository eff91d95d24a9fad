#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dtrap/config.hpp"
#include "dtrap/presentation.hpp"

namespace dtrap {

/// Generators of a base field inside the ambient presentation; empty means F_p.
struct BaseSpec {
  std::vector<Rational> generators;
};

namespace detail {

// Coordinate rows of elements in the ambient p-monomial basis. Columns are
// the p-monomials that actually occur, in graded-lex order.
inline std::vector<Vector> coordinate_rows(const std::vector<Rational>& elems, const DiffPresentation& ambient) {
  std::vector<PDecomposition> decs;
  std::map<Monomial, std::size_t, GrlexLess> cols;
  for (auto& e : elems) {
    decs.push_back(p_decompose(e, ambient.vars()));
    for (auto& [w, c] : decs.back()) cols.emplace(w, 0);
  }
  std::size_t k = 0;
  for (auto& [w, idx] : cols) idx = k++;
  std::vector<Vector> rows;
  for (auto& d : decs) {
    Vector r(cols.size(), Rational(ambient.field()));
    for (auto& [w, c] : d) r[cols.at(w)] = c;
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void check_cap(std::size_t n, const EngineConfig& cfg, std::uint32_t p, const std::string& what) {
  if (n > cfg.pmonomial_cap(p))
    throw Error(ErrorCode::SizeCap, what + " needs " + std::to_string(n) + " p-monomials, cap is " +
                                        std::to_string(cfg.pmonomial_cap(p)));
}

}  // namespace detail

/// A basis over E^p of E^p(base), chosen greedily among the p-monomials in
/// the base generators (mixed-radix order).
inline std::vector<Rational> pk_basis(const BaseSpec& base, const DiffPresentation& ambient, const EngineConfig& cfg) {
  const std::uint32_t p = ambient.p();
  std::size_t count = 1;
  for (std::size_t i = 0; i < base.generators.size(); ++i) {
    count *= p;
    detail::check_cap(count, cfg, p, "base");
  }
  auto monos = pmonomials_of(base.generators, ambient.field());
  auto rows = detail::coordinate_rows(monos, ambient);
  std::size_t cols = rows.front().size();
  auto keep = independent_rows(FFMatrix::from_rows(ambient.field(), rows, cols));
  std::vector<Rational> out;
  for (auto i : keep) out.push_back(monos[i]);
  return out;
}

/// Linear independence of v over E^p(base) inside the ambient E.
inline Verdict linear_independent_over_pk(const std::vector<Rational>& v, const BaseSpec& base,
                                          const DiffPresentation& ambient, const EngineConfig& cfg = {}) {
  if (v.empty()) return Verdict::yes("empty family");
  auto U = pk_basis(base, ambient, cfg);
  detail::check_cap(U.size() * v.size(), cfg, ambient.p(), "independence test");
  std::vector<Rational> products;
  for (auto& x : v)
    for (auto& u : U) products.push_back(u * x);
  auto rows = detail::coordinate_rows(products, ambient);
  std::size_t cols = rows.front().size();
  std::size_t r = rank(FFMatrix::from_rows(ambient.field(), rows, cols));
  std::string dims = std::to_string(r) + " of " + std::to_string(products.size()) + " (|U| = " +
                     std::to_string(U.size()) + ")";
  if (r == products.size()) {
    Verdict yes = Verdict::yes("coordinate rank " + dims);
    return yes;
  }
  auto mu = dependence_witness(rows, ambient.field());
  if (!mu) throw Error(ErrorCode::Internal, "rank deficit without a dependence");
  LinearDependence dep;
  dep.elements = v;
  dep.parts.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < U.size(); ++j) {
      const Rational& c = (*mu)[i * U.size() + j];
      if (!c.is_zero()) dep.parts[i].emplace_back(c, U[j]);
    }
  if (!dep.verify()) throw Error(ErrorCode::Internal, "linear dependence fails verification");
  Verdict no = Verdict::no("coordinate rank " + dims);
  no.witnesses.push_back(std::move(dep));
  return no;
}

/// S is p-independent over base iff its p^|S| p-monomials are linearly
/// independent over E^p(base).
inline Verdict p_independent(const std::vector<Rational>& S, const BaseSpec& base, const DiffPresentation& ambient,
                             const EngineConfig& cfg = {}) {
  if (S.size() > static_cast<std::size_t>(cfg.max_pmonomial_vars))
    throw Error(ErrorCode::SizeCap, "p-independence of " + std::to_string(S.size()) + " elements exceeds cap");
  return linear_independent_over_pk(pmonomials_of(S, ambient.field()), base, ambient, cfg);
}

struct PBasisTrace {
  std::vector<Rational> basis;
  std::vector<std::string> steps;  // one line per candidate
};

/// Greedy extension of S by candidates in input order.
inline PBasisTrace p_basis_extend(const std::vector<Rational>& S, const std::vector<Rational>& candidates,
                                  const BaseSpec& base, const DiffPresentation& ambient, const EngineConfig& cfg = {}) {
  PBasisTrace out;
  out.basis = S;
  if (!S.empty() && !p_independent(S, base, ambient, cfg).is_true())
    throw Error(ErrorCode::Precondition, "initial set is not p-independent over the base");
  for (auto& c : candidates) {
    auto trial = out.basis;
    trial.push_back(c);
    bool keep = p_independent(trial, base, ambient, cfg).is_true();
    out.steps.push_back((keep ? "keep " : "reject ") + c.str());
    if (keep) out.basis = std::move(trial);
  }
  return out;
}

/// A is separably independent over k inside F = k(A), which is p-independence
/// of A over k in F.
inline Verdict separably_independent(const std::vector<Symbol>& A, const std::vector<Symbol>& k_gens,
                                     const DiffPresentation& F, const EngineConfig& cfg = {}) {
  std::set<Symbol> a(A.begin(), A.end()), k(k_gens.begin(), k_gens.end()), all(F.vars().begin(), F.vars().end());
  std::set<Symbol> joined = a;
  joined.insert(k.begin(), k.end());
  if (a.size() != A.size() || k.size() != k_gens.size() || joined.size() != a.size() + k.size() || joined != all)
    throw Error(ErrorCode::Precondition, "A and k must partition the generators of " + F.name());
  if (A.empty()) return Verdict::yes("empty set");
  std::vector<Rational> S;
  for (Symbol s : A) S.push_back(F.element(s));
  BaseSpec base;
  for (Symbol s : k_gens) base.generators.push_back(F.element(s));
  return p_independent(S, base, F, cfg);
}

// Algebraic independence.

inline std::vector<Vector> jacobian(const std::vector<Rational>& elems, const std::vector<Symbol>& vars) {
  std::vector<Vector> rows;
  for (auto& e : elems) {
    Vector r;
    for (Symbol v : vars) r.push_back(partial(e, v));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::size_t jacobian_rank(const std::vector<Rational>& elems, const DiffPresentation& ambient) {
  if (elems.empty()) return 0;
  return rank(FFMatrix::from_rows(ambient.field(), jacobian(elems, ambient.vars()), ambient.vars().size()));
}

inline JacobianCertificate jacobian_certificate(const std::vector<Rational>& elems, const DiffPresentation& ambient,
                                                const std::vector<std::string>& labels = {}) {
  JacobianCertificate c;
  for (std::size_t i = 0; i < elems.size(); ++i) c.elements.push_back(i < labels.size() ? labels[i] : elems[i].str());
  for (Symbol v : ambient.vars()) c.columns.push_back(v.name());
  c.rows = jacobian(elems, ambient.vars());
  c.claimed_rank = jacobian_rank(elems, ambient);
  return c;
}

struct TrdegOptions {
  int degree = 6;
  // indeterminate names, base block first; default y1, y2, ...
  std::vector<std::string> names;
  std::vector<std::string> labels;  // display names for the family in certificates
  bool always_run_oracle = false;
};

struct TrdegResult {
  int lower_bound = 0;
  Verdict verdict;  // for "trdeg(f / base) = |f|"
  bool jacobian_certified = false;
  bool oracle_ran = false;
  std::optional<Annihilator> oracle_witness;
};

namespace detail {

// Monomials in n indeterminates of total degree <= D: those supported on the
// first `nbase` indeterminates come first, the rest by degree.
inline std::vector<std::vector<int>> annihilator_monomials(std::size_t nbase, std::size_t n, int D) {
  std::vector<std::vector<int>> all;
  std::vector<int> e(n, 0);
  auto rec = [&](auto& self, std::size_t i, int left) -> void {
    if (i == n) {
      all.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(rec, 0, D);
  auto free_degree = [&](const std::vector<int>& a) {
    int s = 0;
    for (std::size_t i = nbase; i < n; ++i) s += a[i];
    return s;
  };
  auto total = [](const std::vector<int>& a) {
    int s = 0;
    for (int x : a) s += x;
    return s;
  };
  std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    bool fa = free_degree(a) > 0, fb = free_degree(b) > 0;
    if (fa != fb) return !fa;
    return total(a) < total(b);
  });
  return all;
}

inline std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  // C(n + k, k) with saturation at cap + 1
  long double r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n + i) / static_cast<long double>(i);
    if (r > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(r + 0.5L);
}

// Seeks a polynomial relation with positive degree in the free block.
inline std::optional<Annihilator> annihilator_search(const std::vector<Rational>& values, std::size_t nbase, int D,
                                                     const std::vector<Symbol>& names, std::size_t cap) {
  const std::size_t n = values.size();
  const PrimeField f = values.front().field();
  if (binomial_capped(n, static_cast<std::size_t>(D), cap) > cap)
    throw Error(ErrorCode::SizeCap, "annihilator search with " + std::to_string(n) + " indeterminates at degree " +
                                        std::to_string(D) + " exceeds " + std::to_string(cap) + " unknowns");
  // column of y^a is prod num_j^{a_j} den_j^{D - a_j}, i.e. the value times prod den_j^D
  std::vector<std::vector<Poly>> num_pow(n), den_pow(n);
  for (std::size_t j = 0; j < n; ++j) {
    num_pow[j].push_back(Poly::constant(f, 1));
    den_pow[j].push_back(Poly::constant(f, 1));
    for (int e = 1; e <= D; ++e) {
      num_pow[j].push_back(num_pow[j].back() * values[j].num());
      den_pow[j].push_back(den_pow[j].back() * values[j].den());
    }
  }
  auto monos = annihilator_monomials(nbase, n, D);
  auto to_monomial = [&](const std::vector<int>& a) {
    std::vector<Monomial::Factor> fs;
    for (std::size_t j = 0; j < n; ++j)
      if (a[j]) fs.emplace_back(names[j], a[j]);
    return Monomial(std::move(fs));
  };

  struct Row {
    Poly vec;
    std::map<std::size_t, std::uint32_t> comb;
  };
  std::map<Monomial, Row, GrlexGreater> basis;  // keyed by leading monomial, rows monic
  for (std::size_t c = 0; c < monos.size(); ++c) {
    Poly v = Poly::constant(f, 1);
    for (std::size_t j = 0; j < n; ++j) {
      int a = monos[c][j];
      if (a) v = v * num_pow[j][static_cast<std::size_t>(a)];
      if (D - a) v = v * den_pow[j][static_cast<std::size_t>(D - a)];
    }
    std::map<std::size_t, std::uint32_t> comb{{c, 1u}};
    while (!v.is_zero()) {
      auto it = basis.find(v.leading().mono);
      if (it == basis.end()) break;
      std::uint32_t t = v.leading().coef;
      v = v - it->second.vec.scaled(t);
      for (auto& [k, x] : it->second.comb) {
        auto& slot = comb[k];
        slot = f.sub(slot, f.mul(t, x));
        if (!slot) comb.erase(k);
      }
    }
    if (!v.is_zero()) {
      std::uint32_t inv = f.inv(v.leading().coef);
      for (auto& [k, x] : comb) x = f.mul(x, inv);
      Monomial lead = v.leading().mono;
      basis.emplace(std::move(lead), Row{v.scaled(inv), std::move(comb)});
      continue;
    }
    bool free_part = false;
    for (std::size_t j = nbase; j < n; ++j) free_part |= monos[c][j] > 0;
    if (!free_part) continue;  // a relation among the base alone
    std::vector<Term> terms;
    for (auto& [k, x] : comb) terms.push_back({to_monomial(monos[k]), x});
    Annihilator a;
    a.polynomial = Poly::from_terms(f, std::move(terms));
    a.indeterminates = names;
    a.values = values;
    a.first_free = nbase;
    // relations whose free-block coefficients all vanish on the base are
    // consequences of base relations and prove nothing
    if (a.verify()) return a;
  }
  return std::nullopt;
}

}  // namespace detail

/// Two-stage test of "trdeg(f / base) = |f|". Stage 1 certifies with a
/// full-rank Jacobian: either base and base+f both have full rank, or the
/// ambient generators occurring in the base together with f do. Stage 2 looks
/// for an annihilator of degree <= D.
inline TrdegResult trdeg(const std::vector<Rational>& f, const BaseSpec& base, const DiffPresentation& ambient,
                         const EngineConfig& cfg = {}, TrdegOptions opt = {}) {
  if (opt.degree < 1) throw Error(ErrorCode::Precondition, "annihilator degree must be at least 1");
  TrdegResult res;
  const auto& B = base.generators;
  if (f.empty()) {
    res.verdict = Verdict::yes("empty family");
    res.verdict.witnesses.push_back(EmptyFamily{"no elements to test"});
    res.jacobian_certified = true;
    return res;
  }

  std::vector<Rational> joined = B;
  joined.insert(joined.end(), f.begin(), f.end());
  std::size_t rb = jacobian_rank(B, ambient), rj = jacobian_rank(joined, ambient);
  std::set<Symbol> vset;
  for (auto& b : B)
    for (Symbol s : b.variables()) vset.insert(s);
  std::vector<Rational> vjoined;
  for (Symbol s : ambient.vars())
    if (vset.count(s)) vjoined.push_back(ambient.element(s));
  const std::size_t nv = vjoined.size();
  vjoined.insert(vjoined.end(), f.begin(), f.end());
  std::size_t rv = jacobian_rank(vjoined, ambient);

  auto labels = [&](const std::vector<Rational>& elems, std::size_t family_from) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      std::size_t k = i >= family_from ? i - family_from : opt.labels.size();
      out.push_back(k < opt.labels.size() ? opt.labels[k] : elems[i].str());
    }
    return out;
  };
  int lb = 0;
  lb = std::max(lb, static_cast<int>(rj) - static_cast<int>(B.size()));
  lb = std::max(lb, static_cast<int>(rv) - static_cast<int>(nv));
  res.lower_bound = lb;

  if (rb == B.size() && rj == B.size() + f.size()) {
    res.jacobian_certified = true;
    res.verdict = Verdict::yes("Jacobian of base and family has full rank " + std::to_string(rj));
    res.verdict.witnesses.push_back(jacobian_certificate(joined, ambient, labels(joined, B.size())));
  } else if (rv == nv + f.size()) {
    res.jacobian_certified = true;
    res.verdict = Verdict::yes("Jacobian of the base's generators and family has full rank " + std::to_string(rv));
    res.verdict.witnesses.push_back(jacobian_certificate(vjoined, ambient, labels(vjoined, nv)));
  }
  if (res.jacobian_certified) res.lower_bound = static_cast<int>(f.size());
  if (res.jacobian_certified && !opt.always_run_oracle) return res;

  std::vector<Symbol> names;
  for (std::size_t i = 0; i < joined.size(); ++i)
    names.push_back(Symbol::intern(i < opt.names.size() ? opt.names[i] : "y" + std::to_string(i + 1)));
  res.oracle_ran = true;
  res.oracle_witness =
      detail::annihilator_search(joined, B.size(), opt.degree, names, cfg.max_annihilator_unknowns);
  if (res.jacobian_certified) return res;
  if (res.oracle_witness) {
    res.verdict = Verdict::no("annihilator of degree " + std::to_string(res.oracle_witness->polynomial.total_degree()));
    res.verdict.witnesses.push_back(*res.oracle_witness);
    res.lower_bound = std::min<int>(res.lower_bound, static_cast<int>(f.size()) - 1);
  } else {
    res.verdict = Verdict::unknown(opt.degree, "Jacobian rank " + std::to_string(rj) + " is not full and no annihilator of degree <= " +
                                                  std::to_string(opt.degree) + " exists");
  }
  return res;
}

}  // namespace dtrap
