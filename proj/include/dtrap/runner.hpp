#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "dtrap/scenario.hpp"

namespace dtrap {

inline constexpr const char* kToolVersion = "dtrap 0.1.0";

struct RunOptions {
  EngineConfig cfg;
  bool certificate = false;
  std::optional<int> order;  // replaces the order of every trap and forking query
  int jobs = 1;
  bool timing = false;
};

struct QueryOutcome {
  std::size_t index = 0;  // 1-based
  int line = 0;
  std::string text;
  std::optional<Verdict> verdict;
  std::map<std::string, Verdict> parts;
  nlohmann::json details = nlohmann::json::object();
  bool always_show_details = false;
  std::optional<std::pair<ErrorCode, std::string>> error;
  double seconds = 0;
};

struct Report {
  std::string digest;
  std::uint32_t p = 0;
  int m = 1;
  std::string ambient;
  ValidationResult validation;
  std::vector<QueryOutcome> queries;
  RunOptions options;

  /// 0 when every query resolved, 1 on validation failure or a query error.
  int exit_code() const {
    if (!validation.ok) return 1;
    for (auto& q : queries)
      if (q.error) return 1;
    return 0;
  }
};

inline std::string fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline nlohmann::json strings(const std::vector<Rational>& xs) {
  auto out = nlohmann::json::array();
  for (auto& x : xs) out.push_back(x.str());
  return out;
}

inline nlohmann::json trap_details(const TrapCertificate& c) {
  nlohmann::json j;
  auto a = nlohmann::json::array();
  for (auto& [b, root] : c.p_basis_A) a.push_back({{"constant", b.str()}, {"root", root.str()}});
  j["p_basis_A"] = a;
  j["extraction"] = c.extraction;
  j["constants_dim"] = c.constants.dim;
  j["order"] = c.order;
  auto fam = nlohmann::json::array();
  for (std::size_t i = 0; i < c.family.size(); ++i) fam.push_back({{"label", c.family_labels[i]}, {"value", c.family[i].str()}});
  j["family"] = fam;
  return j;
}

inline void evaluate(const Scenario& sc, const Query& q, const RunOptions& opt, QueryOutcome& out) {
  const EngineConfig& cfg = opt.cfg;
  const DiffPresentation& E = sc.E();
  int order = opt.order.value_or(q.order);
  switch (q.kind) {
    case QueryKind::Perfect:
    case QueryKind::Constants: {
      SubfieldDecl F = sc.field_or_ambient(q.names[0]);
      auto c = constants(F.own, cfg);
      out.details["dim"] = c.dim;
      out.details["basis"] = strings(c.kernel_basis);
      out.always_show_details = q.kind == QueryKind::Constants;
      if (c.perfect) {
        out.verdict = Verdict::yes(F.name + " is differentially perfect");
      } else {
        out.verdict = Verdict::no(F.name + " has constants dimension " + std::to_string(c.dim) + " over its p-th powers");
        KernelDimension w{F.name, {}, 1};
        for (auto& k : c.kernel_basis) w.basis.push_back(k.str());
        out.verdict->witnesses.push_back(std::move(w));
      }
      break;
    }
    case QueryKind::PIndep:
      out.verdict = p_independent(q.elems, {q.base}, E, cfg);
      break;
    case QueryKind::SepIndep: {
      SubfieldDecl F = sc.field_or_ambient(q.names[0]);
      std::vector<Symbol> A, k;
      for (auto& id : q.ids) A.push_back(Symbol::intern(id));
      for (Symbol v : F.own.vars())
        if (std::find(A.begin(), A.end(), v) == A.end()) k.push_back(v);
      out.verdict = separably_independent(A, k, F.own, cfg);
      break;
    }
    case QueryKind::Trap: {
      SubfieldDecl F = sc.field_or_ambient(q.names[0]);
      auto r = trap_up_to(F, E, order, cfg);
      out.verdict = r.verdict;
      out.details = trap_details(r.certificate);
      break;
    }
    case QueryKind::Forking: {
      SubfieldDecl k = sc.field_or_ambient(q.names[2]), K = sc.field_or_ambient(q.names[0]),
                   L = sc.field_or_ambient(q.names[1]), M = sc.field_or_ambient(q.names[3]);
      auto f = check_forking(&k, K, L, M, E, order, cfg);
      out.verdict = f.overall;
      out.parts["acf"] = f.acf_part;
      out.parts["trap"] = f.trap_part;
      out.details["trap"] = trap_details(f.trap_certificate);
      out.details["diagnostics"] = f.diagnostics;
      break;
    }
    case QueryKind::BernoulliPerfect:
      out.verdict = bernoulli_perfectness(bernoulli_from_k(q.bp, q.ks), cfg);
      break;
    case QueryKind::Trdeg: {
      TrdegOptions t;
      t.degree = q.degree.value_or(cfg.oracle_degree);
      t.always_run_oracle = cfg.always_run_oracle;
      auto r = trdeg(q.elems, {q.base}, E, cfg, t);
      out.verdict = r.verdict;
      out.details["lower_bound"] = r.lower_bound;
      out.details["jacobian_certified"] = r.jacobian_certified;
      out.details["oracle_ran"] = r.oracle_ran;
      break;
    }
  }
}

}  // namespace detail

/// Validates, then runs every query. Queries are independent; with jobs > 1
/// they run on worker threads, and results keep declaration order.
inline Report run_scenario(const Scenario& sc, const RunOptions& opt = {}) {
  Report rep;
  rep.options = opt;
  rep.digest = "fnv1a64:" + fnv1a64(print_scenario(sc));
  rep.p = sc.p;
  rep.m = sc.m;
  rep.ambient = sc.ambient ? sc.ambient->name() : "";
  rep.validation = validate(sc, opt.cfg);
  if (!rep.validation.ok) return rep;
  rep.queries.resize(sc.queries.size());
  auto one = [&](std::size_t i) {
    auto& out = rep.queries[i];
    const Query& q = sc.queries[i];
    out.index = i + 1;
    out.line = q.line;
    out.text = query_text(q);
    auto t0 = std::chrono::steady_clock::now();
    try {
      detail::evaluate(sc, q, opt, out);
    } catch (const Error& e) {
      out.verdict.reset();
      out.error = std::make_pair(e.code(), "query " + std::to_string(i + 1) + " (" + out.text + "): " + e.what());
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  std::size_t jobs = static_cast<std::size_t>(std::max(1, opt.jobs));
  if (jobs == 1 || sc.queries.size() < 2) {
    for (std::size_t i = 0; i < sc.queries.size(); ++i) one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(jobs, sc.queries.size()); ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < sc.queries.size();) one(i);
      });
    for (auto& t : pool) t.join();
  }
  return rep;
}

inline nlohmann::json verdict_json(const Verdict& v, bool certificate) {
  nlohmann::json j;
  j["status"] = std::string(to_string(v.status));
  j["label"] = v.label();
  j["reason"] = v.reason;
  if (v.bound) j["bound"] = *v.bound;
  if (!v.notes.empty()) j["notes"] = v.notes;
  if (certificate || v.is_false()) {
    auto ws = nlohmann::json::array();
    for (auto& w : v.witnesses)
      ws.push_back({{"kind", std::string(witness_kind(w))}, {"text", describe(w)}, {"verified", verify(w)}});
    j["witnesses"] = ws;
  }
  return j;
}

inline nlohmann::json report_json(const Report& r) {
  nlohmann::json j;
  j["format"] = 1;
  j["tool"] = kToolVersion;
  j["scenario"] = {{"digest", r.digest}, {"prime", r.p}, {"derivations", r.m}, {"ambient", r.ambient}};
  nlohmann::json cfg = {{"oracle_degree", r.options.cfg.oracle_degree},
                        {"pure_iterates", r.options.cfg.pure_iterates},
                        {"certificate", r.options.certificate}};
  cfg["order"] = r.options.order ? nlohmann::json(*r.options.order) : nlohmann::json(nullptr);
  j["config"] = cfg;
  j["validation"] = {{"ok", r.validation.ok}, {"issues", r.validation.issues}, {"notes", r.validation.notes}};
  auto qs = nlohmann::json::array();
  for (auto& q : r.queries) {
    nlohmann::json e = {{"index", q.index}, {"line", q.line}, {"query", q.text}};
    if (q.verdict) e["verdict"] = verdict_json(*q.verdict, r.options.certificate);
    for (auto& [name, v] : q.parts) e["parts"][name] = verdict_json(v, r.options.certificate);
    if ((r.options.certificate || q.always_show_details) && !q.details.empty()) e["result"] = q.details;
    if (q.error) e["error"] = {{"code", std::string(to_string(q.error->first))}, {"message", q.error->second}};
    if (r.options.timing) e["seconds"] = q.seconds;
    qs.push_back(std::move(e));
  }
  j["queries"] = qs;
  return j;
}

inline std::string report_table(const Report& r) {
  std::string out = std::string(kToolVersion) + "  scenario " + r.digest + "  p=" + std::to_string(r.p) +
                    " m=" + std::to_string(r.m) + " ambient " + r.ambient + "\n";
  out += std::string("validation: ") + (r.validation.ok ? "ok" : "FAILED") + "\n";
  for (auto& s : r.validation.issues) out += "  error: " + s + "\n";
  for (auto& s : r.validation.notes) out += "  note: " + s + "\n";
  auto verdict_lines = [&](const Verdict& v, const std::string& indent) {
    std::string s = indent + v.label() + "  " + v.reason + "\n";
    for (auto& n : v.notes) s += indent + "  note: " + n + "\n";
    if (r.options.certificate || v.is_false())
      for (auto& w : v.witnesses)
        s += indent + "  " + std::string(witness_kind(w)) + (verify(w) ? "" : " (FAILS TO VERIFY)") + ": " + describe(w) + "\n";
    return s;
  };
  for (auto& q : r.queries) {
    out += "[" + std::to_string(q.index) + "] " + q.text + "\n";
    if (q.error) {
      out += "    ERROR " + std::string(to_string(q.error->first)) + ": " + q.error->second + "\n";
      continue;
    }
    if (q.verdict) out += verdict_lines(*q.verdict, "    ");
    for (auto& [name, v] : q.parts) out += verdict_lines(v, "    " + name + ": ");
    if ((r.options.certificate || q.always_show_details) && !q.details.empty()) out += "    result: " + q.details.dump() + "\n";
    if (r.options.timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", q.seconds);
      out += std::string("    time: ") + buf + " s\n";
    }
  }
  return out;
}

}  // namespace dtrap
