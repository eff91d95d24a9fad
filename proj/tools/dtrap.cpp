// Command-line front end: run scenario files, show builtins, run the selftest.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dtrap/dtrap.hpp"
#include "dtrap/selftest.hpp"

using namespace dtrap;

namespace {

constexpr int kExitParse = 2;

struct RunFlags {
  bool json = false;
  bool certificate = false;
  int order = 0;
  int oracle_degree = 6;
  bool pure_iterates = false;
  int jobs = 1;
  bool timing = false;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_flag("--json", f.json, "emit a JSON report");
  app->add_flag("--certificate", f.certificate, "include witnesses and certificates for every verdict");
  app->add_option("--order", f.order, "override the order of trap and forking queries")->check(CLI::PositiveNumber);
  app->add_option("--oracle-degree", f.oracle_degree, "annihilator search degree")->check(CLI::PositiveNumber);
  app->add_flag("--pure-iterates", f.pure_iterates, "trap families use pure iterates only");
  app->add_option("--jobs", f.jobs, "worker threads for independent queries")->check(CLI::PositiveNumber);
  app->add_flag("--timing", f.timing, "report per-query wall time (breaks byte-identical output)");
}

int run_text(const std::string& text, const std::string& origin, const RunFlags& f) {
  Scenario sc;
  try {
    sc = parse_scenario(text);
  } catch (const SourceError& e) {
    std::cerr << origin << ":" << e.what() << " [" << to_string(e.code()) << "]\n";
    return kExitParse;
  }
  RunOptions opt;
  opt.certificate = f.certificate;
  if (f.order > 0) opt.order = f.order;
  opt.cfg.oracle_degree = f.oracle_degree;
  opt.cfg.pure_iterates = f.pure_iterates;
  opt.jobs = f.jobs;
  opt.timing = f.timing;
  auto rep = run_scenario(sc, opt);
  if (f.json)
    std::cout << report_json(rep).dump(2) << "\n";
  else
    std::cout << report_table(rep);
  return rep.exit_code();
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": cannot open\n";
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

std::string verdict_line(const Verdict& v) {
  std::string s = v.label() + "  " + v.reason;
  for (auto& w : v.witnesses) s += "\n  " + std::string(witness_kind(w)) + ": " + describe(w);
  return s;
}

// Errors from the engines end the command with exit 1 and a readable message.
template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    std::cerr << "error " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolVersion) + ": differential algebra workbench over F_p"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  RunFlags flags;
  std::string file;

  auto* run = app.add_subcommand("run", "run the queries of a scenario file");
  run->add_option("file", file, "scenario file")->required();
  add_run_flags(run, flags);

  std::string name;
  bool builtin_run = false, list = false;
  auto* builtin = app.add_subcommand("builtin", "print a builtin scenario, or run it with --run");
  builtin->add_option("name", name, "builtin name");
  builtin->add_flag("--run", builtin_run, "run instead of printing");
  builtin->add_flag("--list", list, "list builtin names");
  add_run_flags(builtin, flags);

  auto* print = app.add_subcommand("print", "parse a scenario file and print it canonically");
  print->add_option("file", file, "scenario file")->required();

  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");

  auto* bern = app.add_subcommand("bernoulli", "Bernoulli equation toolkit");
  bern->require_subcommand(1);
  std::uint32_t p = 2;
  std::vector<int> ks, alpha;
  std::int64_t n = 0, m = 1;
  int k = 1;
  auto* pmon = bern->add_subcommand("pmonomial", "check the derivative formula for a p-monomial");
  pmon->add_option("--p", p)->required();
  pmon->add_option("--k", ks, "k_i for each generator")->required()->delimiter(',');
  pmon->add_option("--alpha", alpha, "exponents in [0, p-1]")->required()->delimiter(',');
  auto* leib = bern->add_subcommand("leibniz", "reduce d y = y^n to d X = 1");
  leib->add_option("--p", p)->required();
  leib->add_option("--n", n)->required();
  auto* pmap = bern->add_subcommand("powermap", "check that m a^m solves the equation for a^m");
  pmap->add_option("--p", p)->required();
  pmap->add_option("--k", k)->required();
  pmap->add_option("--m", m)->required();
  auto* perf = bern->add_subcommand("perfect", "perfectness of the field of generic solutions");
  perf->add_option("--p", p)->required();
  perf->add_option("--k", ks)->required()->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    std::string text;
    if (!read_file(file, text)) return kExitParse;
    return run_text(text, file, flags);
  }
  if (*builtin) {
    if (list || name.empty()) {
      for (auto& b : builtin_names()) std::cout << b << "\n";
      return 0;
    }
    std::string text;
    try {
      text = builtin_scenario(name);
    } catch (const Error& e) {
      std::cerr << e.what() << "\n";
      return kExitParse;
    }
    if (!builtin_run) {
      std::cout << text;
      return 0;
    }
    return run_text(text, name, flags);
  }
  if (*print) {
    std::string text;
    if (!read_file(file, text)) return kExitParse;
    try {
      std::cout << print_scenario(parse_scenario(text));
    } catch (const SourceError& e) {
      std::cerr << file << ":" << e.what() << " [" << to_string(e.code()) << "]\n";
      return kExitParse;
    }
    return 0;
  }
  if (*selftest) {
    int failed = 0;
    for (auto& r : run_acceptance()) {
      std::cout << acceptance_line(r) << "\n";
      failed += !r.pass;
    }
    return failed ? 1 : 0;
  }
  if (*pmon) return guarded([&] {
      std::cout << verdict_line(verify_pmonomial_derivative(p, alpha, ks)) << "\n";
      return 0;
    });
  if (*leib) return guarded([&] {
      auto r = leibniz_reduce(p, n);
      std::cout << "X = " << r.X.str() << "\n" << verdict_line(r.verdict) << "\n";
      return 0;
    });
  if (*pmap) return guarded([&] {
      std::cout << verdict_line(power_map_check(p, k, m)) << "\n";
      return 0;
    });
  if (*perf) return guarded([&] {
      auto v = bernoulli_perfectness(bernoulli_from_k(p, ks));
      std::cout << verdict_line(v) << "\n";
      return 0;
    });
  return 0;
}
