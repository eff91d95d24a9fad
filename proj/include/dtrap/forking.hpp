#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "dtrap/constants.hpp"

namespace dtrap {

namespace detail {

// A subset T of `gens`, chosen greedily, with rank J(k ∪ T) = |k| + |T|.
inline std::vector<Rational> jacobian_basis_over(const std::vector<Rational>& gens, const std::vector<Rational>& k,
                                                 const DiffPresentation& E) {
  std::vector<Rational> T, joined = k;
  std::size_t r = jacobian_rank(joined, E);
  for (auto& g : gens) {
    joined.push_back(g);
    std::size_t r2 = jacobian_rank(joined, E);
    if (r2 > r) {
      T.push_back(g);
      r = r2;
    } else {
      joined.pop_back();
    }
  }
  return T;
}

struct AcfDirection {
  Verdict verdict;
  std::string label;
};

// T_X algebraically independent over the other side, where T_X is a
// transcendence basis of X over k.
inline AcfDirection acf_direction(const std::string& xname, const std::vector<Rational>& xgens, const std::string& yname,
                                  const std::vector<Rational>& ygens, const std::vector<Rational>& kgens,
                                  const DiffPresentation& E, const EngineConfig& cfg) {
  AcfDirection d;
  d.label = "transcendence basis of " + xname + " over " + yname;
  std::vector<Rational> T = xgens;
  if (!kgens.empty()) {
    T = jacobian_basis_over(xgens, kgens, E);
    if (T.size() + kgens.size() != xgens.size()) {
      d.verdict = Verdict::unknown(std::nullopt, "no Jacobian-certified transcendence basis of " + xname + " over k");
      return d;
    }
  }
  TrdegOptions opt;
  opt.degree = cfg.oracle_degree;
  opt.always_run_oracle = cfg.always_run_oracle;
  d.verdict = trdeg(T, {ygens}, E, cfg, opt).verdict;
  return d;
}

}  // namespace detail

/// K and L algebraically independent over k (k's generators lying in both).
/// A transcendence basis of one side over k must stay independent over the
/// other; both directions are tried and either one may decide.
inline Verdict check_acf_independence(const std::vector<Rational>& Kgens, const std::vector<Rational>& Lgens,
                                      const std::vector<Rational>& kgens, const DiffPresentation& E,
                                      const EngineConfig& cfg = {}) {
  auto a = detail::acf_direction("L", Lgens, "K", Kgens, kgens, E, cfg);
  auto b = detail::acf_direction("K", Kgens, "L", Lgens, kgens, E, cfg);
  if ((a.verdict.is_true() && b.verdict.is_false()) || (a.verdict.is_false() && b.verdict.is_true()))
    throw Error(ErrorCode::Internal, "the two directions of the independence test disagree");
  for (auto* d : {&a, &b})
    if (d->verdict.is_false() || d->verdict.is_true()) {
      Verdict v = d->verdict;
      v.reason = d->label + ": " + v.reason;
      return v;
    }
  Verdict v = Verdict::unknown(a.verdict.bound ? a.verdict.bound : b.verdict.bound, "neither direction is decided");
  v.notes.push_back(a.label + ": " + a.verdict.label() + ", " + a.verdict.reason);
  v.notes.push_back(b.label + ": " + b.verdict.label() + ", " + b.verdict.reason);
  return v;
}

struct ForkingVerdict {
  Verdict acf_part;
  Verdict trap_part;
  Verdict overall;
  TrapCertificate trap_certificate;
  std::vector<std::string> diagnostics;
};

inline std::string perfectness_note(const SubfieldDecl& F, const EngineConfig& cfg) {
  try {
    auto c = constants(F.own, cfg);
    if (c.perfect) return F.name + " is differentially perfect";
    return F.name + " is not differentially perfect (constants dimension " + std::to_string(c.dim) + ")";
  } catch (const Error& e) {
    return "perfectness of " + F.name + " not computed: " + std::string(to_string(e.code()));
  }
}

/// K independent from L over k: algebraic independence and M = KL trap up to
/// order ell. `k` may be null for the prime field. FALSE dominates; TRUE
/// needs both parts TRUE.
inline ForkingVerdict check_forking(const SubfieldDecl* k, const SubfieldDecl& K, const SubfieldDecl& L,
                                    const SubfieldDecl& M, const DiffPresentation& E, int ell,
                                    const EngineConfig& cfg = {}) {
  std::vector<Rational> kgens = k ? k->embedded_generators() : std::vector<Rational>{};
  auto Kgens = K.embedded_generators(), Lgens = L.embedded_generators();
  {
    std::vector<Rational> want = Kgens, have = M.embedded_generators();
    for (auto& g : Lgens)
      if (std::find(want.begin(), want.end(), g) == want.end()) want.push_back(g);
    auto covered = [](const std::vector<Rational>& a, const std::vector<Rational>& b) {
      return std::all_of(a.begin(), a.end(), [&](auto& x) { return std::find(b.begin(), b.end(), x) != b.end(); });
    };
    if (!covered(want, have) || !covered(have, want))
      throw Error(ErrorCode::Precondition, M.name + " is not generated by the generators of " + K.name + " and " + L.name);
    for (auto& g : kgens)
      if (std::find(Kgens.begin(), Kgens.end(), g) == Kgens.end() || std::find(Lgens.begin(), Lgens.end(), g) == Lgens.end())
        throw Error(ErrorCode::Precondition, "generator " + g.str() + " of " + k->name + " is not a generator of both " +
                                                 K.name + " and " + L.name);
  }

  ForkingVerdict out;
  out.acf_part = check_acf_independence(Kgens, Lgens, kgens, E, cfg);
  auto trap = trap_up_to(M, E, ell, cfg, ell + 1);
  out.trap_part = trap.verdict;
  out.trap_certificate = std::move(trap.certificate);
  if (k) out.diagnostics.push_back(perfectness_note(*k, cfg));
  out.diagnostics.push_back(perfectness_note(K, cfg));
  out.diagnostics.push_back(perfectness_note(L, cfg));

  const Verdict &acf = out.acf_part, &tr = out.trap_part;
  if (acf.is_false() || tr.is_false()) {
    std::string why;
    if (acf.is_false()) why = "K and L are algebraically dependent over k";
    if (tr.is_false()) why += std::string(why.empty() ? "" : "; ") + M.name + " is not differentially trap";
    out.overall = Verdict::no(why);
    if (acf.is_false()) out.overall.witnesses = acf.witnesses;
    if (tr.is_false()) out.overall.witnesses.insert(out.overall.witnesses.end(), tr.witnesses.begin(), tr.witnesses.end());
  } else if (acf.is_true() && tr.is_true()) {
    out.overall = Verdict::yes("algebraically independent and " + M.name + " is trap up to order " + std::to_string(ell));
  } else {
    std::optional<int> bound = acf.is_true() ? tr.bound : acf.bound;
    out.overall = Verdict::unknown(bound, std::string("undecided part: ") + (acf.is_true() ? "trap" : "algebraic independence"));
  }
  return out;
}

}  // namespace dtrap
