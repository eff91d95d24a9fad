#pragma once

#include <cstdint>
#include <cstddef>

namespace dtrap {

struct EngineConfig {
  // p-monomial sets are capped at p^max_pmonomial_vars rows
  int max_pmonomial_vars = 4;
  std::size_t max_annihilator_unknowns = 200000;
  int oracle_degree = 6;
  // restrict trap families to pure iterates d_i^j instead of all mixed monomials
  bool pure_iterates = false;
  // run the annihilator search even when the Jacobian already certified
  bool always_run_oracle = false;

  std::size_t pmonomial_cap(std::uint32_t p) const {
    std::size_t cap = 1;
    for (int i = 0; i < max_pmonomial_vars; ++i) cap *= p;
    return cap;
  }
};

}  // namespace dtrap
