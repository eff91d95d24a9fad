#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "dtrap/scenario.hpp"

namespace dtrap {

inline std::vector<std::string> builtin_names() {
  return {"example-d1-free", "example-d1-constant", "srour-counterexample", "bernoulli-pair",
          "degenerate-k-equals-K", "two-derivations", "monotone-tower"};
}

namespace detail {

inline std::string bernoulli_pair_text(std::uint32_t p, int k1, int k2) {
  if (!is_prime(p) || p > 65521) throw Error(ErrorCode::BadParameter, "bernoulli-pair: " + std::to_string(p) + " is not a supported prime");
  if (k1 < 1 || k2 < 1 || k1 > 4 || k2 > 4) throw Error(ErrorCode::BadParameter, "bernoulli-pair: k must lie in 1..4");
  auto spec = bernoulli_from_k(p, {k1, k2});
  std::string ps = std::to_string(p), ks = std::to_string(k1) + "," + std::to_string(k2);
  return "# d a = a^(p^k1 + 1), d b = b^(p^k2 + 1)\n"
         "prime " + ps + "\nderivations 1\n\n"
         "ambient B\ngens a b\n"
         "d a = a^" + std::to_string(spec.exponents[0]) + "\n"
         "d b = b^" + std::to_string(spec.exponents[1]) + "\n\n"
         "query perfect B\n"
         "query constants B\n"
         "query pindep {a, b} over {} in B\n"
         "query bernoulli-perfect p=" + ps + " k=" + ks + "\n";
}

// Fields shared by both branches of the first example; only the ambient differs.
inline std::string example_d1_fields() {
  return "# the prime field\nfield k\n\n"
         "field K\ngens u\nembed u -> a\nd u = 1\n\n"
         "field L\ngens v\nembed v -> a + lambda^2\nd v = 1\n\n"
         "field M\ngens u v\nembed u -> a\nembed v -> a + lambda^2\nd u = 1\nd v = 1\n\n";
}

}  // namespace detail

/// Scenario text of a builtin. bernoulli-pair takes "(p,k1,k2)"; the bare
/// name means (2,1,2).
inline std::string builtin_scenario(std::string_view name) {
  if (name == "example-d1-free")
    return "# a with d a = 1, and lambda differentially transcendental up to the horizon\n"
           "prime 2\nderivations 1\n\n"
           "ambient E\ngens a lambda lambda1 lambda2 lambda3\n"
           "d a = 1\nd lambda = lambda1\nd lambda1 = lambda2\nd lambda2 = lambda3\nd lambda3 = ?\n\n" +
           detail::example_d1_fields() +
           "query trap M order 2\n"
           "query forking K L over k compositum M order 2\n"
           "query trdeg {a, a + lambda^2} over {} in E\n";
  if (name == "example-d1-constant")
    return "# the same tower with lambda a constant\n"
           "prime 2\nderivations 1\n\n"
           "ambient E\ngens a lambda\nd a = 1\nd lambda = 0\n\n" +
           detail::example_d1_fields() +
           "query trap M order 2\n"
           "query forking K L over k compositum M order 2\n";
  if (name == "srour-counterexample")
    return "# K = F_2(x) and L = F_2(x + y^2): algebraically independent, not p-independent\n"
           "prime 2\nderivations 1\n\n"
           "ambient E\ngens x y\nd x = 1\nd y = 0\n\n"
           "field k\n\n"
           "field K\ngens u\nembed u -> x\nd u = 1\n\n"
           "field L\ngens v\nembed v -> x + y^2\nd v = 1\n\n"
           "field M\ngens u v\nembed u -> x\nembed v -> x + y^2\nd u = 1\nd v = 1\n\n"
           "query pindep {x} over {x + y^2} in E\n"
           "query trdeg {x, x + y^2} over {} in E\n"
           "query forking K L over k compositum M order 1\n";
  if (name == "bernoulli-pair") return detail::bernoulli_pair_text(2, 1, 2);
  if (name.rfind("bernoulli-pair(", 0) == 0 && name.back() == ')') {
    std::string args(name.substr(15, name.size() - 16));
    unsigned p = 0;
    int k1 = 0, k2 = 0;
    char tail = 0;
    if (std::sscanf(args.c_str(), "%u,%d,%d%c", &p, &k1, &k2, &tail) != 3)
      throw Error(ErrorCode::BadParameter, "expected bernoulli-pair(p,k1,k2)");
    return detail::bernoulli_pair_text(p, k1, k2);
  }
  if (name == "degenerate-k-equals-K")
    return "# K = k, so the question reduces to perfectness of L\n"
           "prime 2\nderivations 1\n\n"
           "ambient E\ngens x y\nd x = 1\nd y = x\n\n"
           "field k\ngens t\nembed t -> x\nd t = 1\n\n"
           "field L\ngens t s\nembed t -> x\nembed s -> y\nd t = 1\nd s = t\n\n"
           "query perfect L\n"
           "query forking k L over k compositum L order 2\n";
  if (name == "two-derivations")
    return "# partial derivatives on F_3(x, y)\n"
           "prime 3\nderivations 2\n\n"
           "ambient E\ngens x y\nd1 x = 1\nd1 y = 0\nd2 x = 0\nd2 y = 1\n\n"
           "field k\n\n"
           "field K\ngens u\nembed u -> x\nd1 u = 1\nd2 u = 0\n\n"
           "field L\ngens v\nembed v -> y\nd1 v = 0\nd2 v = 1\n\n"
           "field M\ngens u v\nembed u -> x\nembed v -> y\nd1 u = 1\nd1 v = 0\nd2 u = 0\nd2 v = 1\n\n"
           "query perfect K\n"
           "query sepindep {u} in M\n"
           "query forking K L over k compositum M order 2\n";
  if (name == "monotone-tower")
    return "# L = F_2(y) inside L1 = F_2(y, z)\n"
           "prime 2\nderivations 1\n\n"
           "ambient E\ngens x y z\nd x = 1\nd y = y^3\nd z = z^5\n\n"
           "field k\n\n"
           "field K\ngens u\nembed u -> x\nd u = 1\n\n"
           "field L\ngens v\nembed v -> y\nd v = v^3\n\n"
           "field L1\ngens v w\nembed v -> y\nembed w -> z\nd v = v^3\nd w = w^5\n\n"
           "field M\ngens u v\nembed u -> x\nembed v -> y\nd u = 1\nd v = v^3\n\n"
           "field M1\ngens u v w\nembed u -> x\nembed v -> y\nembed w -> z\nd u = 1\nd v = v^3\nd w = w^5\n\n"
           "query forking K L1 over k compositum M1 order 2\n"
           "query forking K L over k compositum M order 2\n";
  throw Error(ErrorCode::BadParameter, "no builtin scenario named " + std::string(name));
}

}  // namespace dtrap
