#pragma once

#include <random>
#include <string>
#include <vector>

#include "dtrap/rational.hpp"

namespace dtrap::fuzz {

inline std::vector<Symbol> symbols(std::initializer_list<const char*> names) {
  std::vector<Symbol> out;
  for (auto n : names) out.push_back(Symbol::intern(n));
  return out;
}

inline Poly random_poly(std::mt19937_64& rng, PrimeField f, const std::vector<Symbol>& vars,
                        int max_degree, int max_terms) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<std::uint32_t> coef(0, f.p() - 1);
  std::vector<Term> terms;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    std::uniform_int_distribution<int> budget(0, max_degree);
    int left = budget(rng);
    std::vector<Monomial::Factor> factors;
    for (Symbol v : vars) {
      std::uniform_int_distribution<int> e(0, left);
      int k = e(rng);
      left -= k;
      if (k) factors.emplace_back(v, k);
    }
    terms.push_back({Monomial(std::move(factors)), coef(rng)});
  }
  return Poly::from_terms(f, std::move(terms));
}

/// Random element of F_p(vars) with numerator and denominator of degree <= max_degree.
inline Rational random_rational(std::mt19937_64& rng, PrimeField f, const std::vector<Symbol>& vars,
                                int max_degree, int max_terms = 4) {
  Poly num = random_poly(rng, f, vars, max_degree, max_terms);
  Poly den(f);
  while (den.is_zero()) den = random_poly(rng, f, vars, max_degree, max_terms);
  return Rational(num, den);
}

inline Rational random_polynomial(std::mt19937_64& rng, PrimeField f, const std::vector<Symbol>& vars,
                                  int max_degree, int max_terms = 4) {
  return Rational(random_poly(rng, f, vars, max_degree, max_terms));
}

}  // namespace dtrap::fuzz
