#pragma once

#include <array>
#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dtrap/bernoulli.hpp"
#include "dtrap/builtins.hpp"
#include "dtrap/forking.hpp"
#include "dtrap/fuzz.hpp"
#include "dtrap/runner.hpp"

namespace dtrap {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

namespace detail {

struct Check {
  bool ok = true;
  std::string first_failure;
  int cases = 0;

  void expect(bool cond, const std::string& what) {
    ++cases;
    if (!cond && ok) {
      ok = false;
      first_failure = what;
    }
  }
  std::pair<bool, std::string> done(const std::string& summary) const {
    return {ok, ok ? summary + " (" + std::to_string(cases) + " checks)" : first_failure};
  }
};

inline std::pair<bool, std::string> pdecomp_roundtrip() {
  Check c;
  std::mt19937_64 rng(20240601);
  const std::vector<std::string> names{"x", "y", "z"};
  for (int i = 0; i < 1000; ++i) {
    std::uint32_t p = std::array<std::uint32_t, 3>{2, 3, 5}[i % 3];
    std::vector<Symbol> vars;
    for (int v = 0; v <= (i / 3) % 3; ++v) vars.push_back(Symbol::intern(names[v]));
    PrimeField f(p);
    Rational r = fuzz::random_rational(rng, f, vars, 6);
    c.expect(reconstructs(p_decompose(r), r), "p=" + std::to_string(p) + ": no roundtrip for " + r.str());
  }
  return c.done("1000 rational functions reconstructed");
}

inline std::pair<bool, std::string> constants_kernel() {
  Check c;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    DiffPresentation M("K", p, 1, std::vector<std::string>{"x"});
    M.set_image(0, "x", "1");
    auto k = constants(M);
    c.expect(k.dim == 1 && k.perfect, "d/dx on F_" + std::to_string(p) + "(x): dimension " + std::to_string(k.dim));
    for (auto& b : k.kernel_basis) c.expect(derive(b, 0, M).is_zero(), "kernel element " + b.str() + " is not constant");
  }
  // random presentations: whatever comes back must be a constant
  std::mt19937_64 rng(7);
  for (std::uint32_t p : {2u, 3u})
    for (int i = 0; i < 6; ++i) {
      DiffPresentation M("M", p, 1, std::vector<std::string>{"x", "y"});
      for (Symbol v : M.vars()) M.set_image(0, v, fuzz::random_polynomial(rng, M.field(), M.vars(), 3, 3));
      for (auto& b : constants(M).kernel_basis)
        c.expect(derive(b, 0, M).is_zero(), "kernel element " + b.str() + " is not constant");
    }
  return c.done("constants differentiate to zero, C = K^p on F_p(x)");
}

inline std::pair<bool, std::string> bernoulli_surrogate() {
  Check c;
  for (std::uint32_t p : {2u, 3u})
    for (std::vector<int> ks : std::vector<std::vector<int>>{{1}, {2}, {1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
      auto spec = bernoulli_from_k(p, ks);
      auto v = bernoulli_perfectness(spec);
      auto dim = constants(make_bernoulli(spec)).dim;
      c.expect(v.is_true() && dim == 1, "p=" + std::to_string(p) + " spec not perfect: " + v.reason);
    }
  // d(ab) = a^3 b + a b^5 = (a + b^2)^2 ab over F_2
  auto M = make_bernoulli(bernoulli_from_k(2, {1, 2}));
  auto d = derivation_matrix(M, 0);
  Rational ab = M.element("a*b");
  c.expect(d.delta.size() == 4 && d.delta[3][3] == M.element("a + b^2"), "delta(ab, ab) differs from a + b^2");
  c.expect(M.element("(a + b^2)^2 * a*b") == derive(ab, 0, M), "hand computation of d(ab) disagrees");
  return c.done("12 specs perfect, delta(ab, ab) = a + b^2");
}

inline std::pair<bool, std::string> pmonomial_identity() {
  Check c;
  for (std::uint32_t p : {2u, 3u})
    for (int s = 1; s <= 2; ++s)
      for (int kmask = 0; kmask < (1 << s); ++kmask) {
        std::vector<int> ks;
        for (int i = 0; i < s; ++i) ks.push_back(1 + (kmask >> i & 1));
        int total = s == 1 ? static_cast<int>(p) : static_cast<int>(p * p);
        for (int code = 0; code < total; ++code) {
          std::vector<int> alpha;
          for (int i = 0, x = code; i < s; ++i, x /= static_cast<int>(p)) alpha.push_back(x % static_cast<int>(p));
          auto v = verify_pmonomial_derivative(p, alpha, ks);
          c.expect(v.is_true(), "p=" + std::to_string(p) + ": " + v.reason);
        }
      }
  return c.done("identity holds on every p-monomial");
}

inline std::pair<bool, std::string> leibniz() {
  Check c;
  for (std::uint32_t p : {2u, 3u, 5u})
    for (std::int64_t n = -7; n <= 7; ++n) {
      std::string tag = "p=" + std::to_string(p) + " n=" + std::to_string(n);
      bool divides = (n - 1) % static_cast<std::int64_t>(p) == 0;
      try {
        auto r = leibniz_reduce(p, n);
        auto M = make_bernoulli({p, {n}, {"T"}});
        c.expect(!divides, tag + ": expected INAPPLICABLE");
        c.expect(r.verdict.is_true() && derive(r.X, 0, M) == M.element("1"), tag + ": dX != 1");
      } catch (const Error& e) {
        c.expect(divides && e.code() == ErrorCode::Inapplicable, tag + ": " + e.what());
      }
    }
  return c.done("dX = 1 wherever p does not divide n - 1");
}

inline std::pair<bool, std::string> power_map() {
  Check c;
  for (std::uint32_t p : {2u, 3u})
    for (int k = 1; k <= 2; ++k)
      for (std::int64_t m = 1; m <= 5; ++m) {
        if (m % p == 0) continue;
        auto v = power_map_check(p, k, m);
        c.expect(v.is_true(), "p=" + std::to_string(p) + " k=" + std::to_string(k) + " m=" + std::to_string(m) + ": " + v.reason);
      }
  return c.done("m a^m solves the equation");
}

inline std::pair<bool, std::string> example_branches() {
  Check c;
  auto constant = run_scenario(parse_scenario(builtin_scenario("example-d1-constant")));
  const auto& fk = constant.queries.at(1);
  c.expect(fk.verdict && fk.verdict->is_false(), "constant branch: forking is not FALSE");
  bool witness = false;
  if (fk.verdict)
    for (auto& w : fk.verdict->witnesses)
      if (auto* a = std::get_if<Annihilator>(&w)) witness |= a->note == "d1(lambda) = 0" && a->verify();
  c.expect(witness, "constant branch: no verified witness d1(lambda) = 0");

  auto free = run_scenario(parse_scenario(builtin_scenario("example-d1-free")));
  const auto& trap = free.queries.at(0);
  const auto& fork = free.queries.at(1);
  c.expect(trap.verdict && trap.verdict->is_true(), "free branch: trap at order 2 is not TRUE");
  c.expect(fork.verdict && !fork.verdict->is_false(), "free branch: forking is FALSE");
  c.expect(fork.parts.count("trap") && fork.parts.at("trap").is_true(), "free branch: trap part of forking is not TRUE");
  std::string label = fork.verdict ? fork.verdict->label() : "error";
  return c.done("constant: FALSE via d1(lambda) = 0; free: trap TRUE, forking " + label);
}

inline std::pair<bool, std::string> pdep_versus_trdeg() {
  Check c;
  DiffPresentation E("E", 2, 1, std::vector<std::string>{"x", "y"});
  E.set_image(0, "x", "1");
  E.set_image(0, "y", "0");
  auto v = p_independent({E.element("x")}, {{E.element("x + y^2")}}, E);
  c.expect(v.is_false(), "p_independent is " + v.label());
  c.expect(!v.witnesses.empty() && v.verify(), "witness does not re-verify");
  TrdegOptions opt;
  opt.degree = 6;
  auto t = trdeg({E.element("x"), E.element("x + y^2")}, {}, E, {}, opt);
  bool ok = t.verdict.is_true() || (t.verdict.status == Status::Inconclusive && t.verdict.bound == 6);
  c.expect(ok, "trdeg is " + t.verdict.label());
  return c.done("p-dependent with witness; trdeg " + t.verdict.label());
}

inline std::pair<bool, std::string> adjoined_stage() {
  Check c;
  auto sc = parse_scenario(builtin_scenario("example-d1-free"));
  auto M = sc.field_or_ambient("M");
  const auto& E = sc.E();
  auto v = adjoined_stage_perfect(M, {E.element("lambda")}, 2, E);
  c.expect(v.is_true(), "stage with lambda, d lambda: " + v.label() + " " + v.reason);
  return c.done("stage M(lambda, d lambda) is differentially perfect");
}

inline std::pair<bool, std::string> kolchin() {
  Check c;
  DiffPresentation B("B", 2, 1, std::vector<std::string>{"x"});
  B.set_image(0, "x", "1");
  DiffPresentation C("C", 2, 1, std::vector<std::string>{"x", "y"});
  C.set_image(0, "x", "1");
  C.set_image(0, "y", "0");
  auto one = kolchin_crosscheck(B, {{"lambda", 1}});
  auto two = kolchin_crosscheck(C, {{"lambda", 1}});
  c.expect(one.is_true(), "F_2(x) + lambda: " + one.reason);
  c.expect(two.is_true(), "F_2(x, y) + lambda: " + two.reason);
  return c.done("no new constants in either construction");
}

inline std::vector<Query> swapped(const Scenario& sc) {
  std::vector<Query> out;
  for (auto q : sc.queries)
    if (q.kind == QueryKind::Forking) {
      std::swap(q.names[0], q.names[1]);
      out.push_back(q);
    }
  return out;
}

inline std::pair<bool, std::string> checker_properties() {
  Check c;
  int forks = 0;
  for (auto& name : builtin_names()) {
    auto sc = parse_scenario(builtin_scenario(name));
    auto rep = run_scenario(sc);
    c.expect(rep.exit_code() == 0, name + ": run failed");
    for (auto& q : rep.queries) {
      if (!q.verdict) continue;
      c.expect(q.verdict->verify(), name + ": witness of [" + q.text + "] fails to verify");
      for (auto& [part, v] : q.parts) c.expect(v.verify(), name + ": " + part + " part of [" + q.text + "] fails to verify");
    }
    auto mirror = sc;
    mirror.queries = swapped(sc);
    auto rep2 = run_scenario(mirror);
    std::size_t j = 0;
    for (auto& q : rep.queries) {
      if (sc.queries[q.index - 1].kind != QueryKind::Forking) continue;
      const auto& r = rep2.queries.at(j++);
      ++forks;
      bool same = q.verdict && r.verdict && q.verdict->status == r.verdict->status;
      c.expect(same, name + ": [" + q.text + "] changes under swapping K and L");
    }
  }
  return c.done(std::to_string(builtin_names().size()) + " scenarios, " + std::to_string(forks) + " forking queries symmetric");
}

inline std::pair<bool, std::string> lattice_soundness() {
  Check c;
  std::mt19937_64 rng(12);
  int certified = 0, witnessed = 0;
  for (int i = 0; i < 200; ++i) {
    std::uint32_t p = i % 2 ? 3 : 2;
    DiffPresentation E("E", p, 1, std::vector<std::string>{"x", "y", "z"});
    E.set_image(0, "x", "1");
    E.set_image(0, "y", "0");
    E.set_image(0, "z", "0");
    auto draw = [&] {
      Rational r(E.field());
      while (r.scalar()) r = fuzz::random_rational(rng, E.field(), E.vars(), 3, 3);
      return r;
    };
    std::vector<Rational> f{draw(), draw()};
    // planted cases: a p-th power of a member, or a polynomial in the others
    switch (i % 5) {
      case 0: f.push_back(f[0].pow(p)); break;
      case 1: f.push_back(f[0] * f[1] + f[1]); break;
      case 2: f.push_back(draw()); break;
      default: break;
    }
    TrdegOptions opt;
    opt.degree = 3;
    opt.always_run_oracle = true;
    auto r = trdeg(f, {}, E, {}, opt);
    certified += r.jacobian_certified;
    witnessed += r.oracle_witness.has_value();
    c.expect(!(r.jacobian_certified && r.oracle_witness), "instance " + std::to_string(i) + ": Jacobian and oracle disagree");
    if (r.oracle_witness) c.expect(r.oracle_witness->verify(), "instance " + std::to_string(i) + ": witness fails to verify");
  }
  return c.done("200 instances, " + std::to_string(certified) + " certified, " + std::to_string(witnessed) + " with annihilators");
}

}  // namespace detail

inline std::vector<std::pair<std::string, std::function<std::pair<bool, std::string>()>>> acceptance_criteria() {
  return {
      {"p-decomposition roundtrip", detail::pdecomp_roundtrip},
      {"constants kernel", detail::constants_kernel},
      {"Bernoulli perfectness", detail::bernoulli_surrogate},
      {"p-monomial derivative identity", detail::pmonomial_identity},
      {"Leibniz reduction", detail::leibniz},
      {"power map solutions", detail::power_map},
      {"example d1, both branches", detail::example_branches},
      {"p-independence versus algebraic independence", detail::pdep_versus_trdeg},
      {"adjoined stage is perfect", detail::adjoined_stage},
      {"Kolchin cross-check", detail::kolchin},
      {"checker symmetry and witnesses", detail::checker_properties},
      {"verdict lattice soundness", detail::lattice_soundness},
  };
}

/// Runs every acceptance criterion; a thrown error fails that criterion only.
inline std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> out;
  int id = 0;
  for (auto& [title, fn] : acceptance_criteria()) {
    CriterionResult r{++id, title, false, "", 0};
    auto t0 = std::chrono::steady_clock::now();
    try {
      std::tie(r.pass, r.detail) = fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string acceptance_line(const CriterionResult& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + "  " + std::to_string(r.id) + ". " + r.title + " [" + buf + " s]: " + r.detail;
}

}  // namespace dtrap
