#pragma once

#include <string>
#include <vector>

#include "dtrap/constants.hpp"

namespace dtrap {

/// d a_i = a_i^{n_i} on F_p(a_1, ..., a_s), one derivation.
struct BernoulliSpec {
  std::uint32_t p = 2;
  std::vector<std::int64_t> exponents;
  std::vector<std::string> names;  // default a, b, c, ...
};

inline std::int64_t checked_pow(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::int64_t{1} << 40) / base) throw Error(ErrorCode::BadParameter, "exponent too large");
    r *= base;
  }
  return r;
}

/// The spec with n_i = p^{k_i} + 1.
inline BernoulliSpec bernoulli_from_k(std::uint32_t p, const std::vector<int>& ks) {
  BernoulliSpec s;
  s.p = p;
  for (int k : ks) {
    if (k < 1) throw Error(ErrorCode::BadParameter, "k must be at least 1");
    s.exponents.push_back(checked_pow(p, k) + 1);
  }
  return s;
}

inline DiffPresentation make_bernoulli(const BernoulliSpec& spec) {
  if (!is_prime(spec.p) || spec.p > 65521) throw Error(ErrorCode::BadParameter, std::to_string(spec.p) + " is not a supported prime");
  if (spec.exponents.empty()) throw Error(ErrorCode::BadParameter, "at least one exponent is required");
  if (spec.exponents.size() > 26 && spec.names.empty()) throw Error(ErrorCode::BadParameter, "too many variables");
  std::vector<std::string> names = spec.names;
  if (names.empty())
    for (std::size_t i = 0; i < spec.exponents.size(); ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  if (names.size() != spec.exponents.size()) throw Error(ErrorCode::BadParameter, "one name per exponent is required");
  DiffPresentation d("Bernoulli", spec.p, 1, names);
  for (std::size_t i = 0; i < names.size(); ++i) {
    Rational a = d.element(Symbol::intern(names[i]));
    d.set_image(0, Symbol::intern(names[i]), a.pow(spec.exponents[i]));
  }
  return d;
}

/// d w = (sum_i alpha_i a_i^{p^{k_i - 1}})^p * w for w = prod a_i^{alpha_i}
/// under d a_i = a_i^{p^{k_i} + 1}.
inline Verdict verify_pmonomial_derivative(std::uint32_t p, const std::vector<int>& alpha, const std::vector<int>& ks) {
  if (alpha.size() != ks.size()) throw Error(ErrorCode::BadParameter, "alpha and k must have the same length");
  auto M = make_bernoulli(bernoulli_from_k(p, ks));
  const PrimeField f = M.field();
  Rational w = Rational::constant(f, 1), inner(f);
  std::string wtext;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0 || alpha[i] >= static_cast<int>(p)) throw Error(ErrorCode::BadParameter, "alpha must lie in [0, p-1]");
    Rational a = M.element(M.vars()[i]);
    w = w * a.pow(alpha[i]);
    inner = inner + Rational::constant(f, alpha[i]) * a.pow(checked_pow(p, ks[i] - 1));
  }
  Rational lhs = derive(w, 0, M), rhs = inner.pow(p) * w;
  if (lhs == rhs) return Verdict::yes("d(" + w.str() + ") = " + lhs.str());
  Verdict v = Verdict::no("p-monomial derivative identity fails for " + w.str());
  v.witnesses.push_back(DerivationMismatch{w.str(), 0, rhs, lhs});
  return v;
}

struct LeibnizResult {
  Rational X{PrimeField::trusted(2)};
  Verdict verdict;
};

/// X = T^{1-n} / (1-n) turns d T = T^n into d X = 1.
inline LeibnizResult leibniz_reduce(std::uint32_t p, std::int64_t n) {
  if (!is_prime(p) || p > 65521) throw Error(ErrorCode::BadParameter, std::to_string(p) + " is not a supported prime");
  std::int64_t r = (1 - n) % static_cast<std::int64_t>(p);
  if (r == 0)
    throw Error(ErrorCode::Inapplicable, "p = " + std::to_string(p) + " divides n - 1 = " + std::to_string(n - 1));
  BernoulliSpec spec{p, {n}, {"T"}};
  auto M = make_bernoulli(spec);
  const PrimeField f = M.field();
  LeibnizResult out;
  out.X = M.element(Symbol::intern("T")).pow(1 - n) / Rational::constant(f, 1 - n);
  Rational dX = derive(out.X, 0, M);
  if (dX == Rational::constant(f, 1)) {
    out.verdict = Verdict::yes("X = " + out.X.str() + " satisfies d X = 1");
  } else {
    out.verdict = Verdict::no("d X = " + dX.str());
    out.verdict.witnesses.push_back(DerivationMismatch{"X", 0, Rational::constant(f, 1), dX});
  }
  return out;
}

/// With d a = a^{p^k m + 1}, b = m a^m solves d X = X^{p^k + 1}.
inline Verdict power_map_check(std::uint32_t p, int k, std::int64_t m) {
  if (k < 1) throw Error(ErrorCode::BadParameter, "k must be positive");
  if (m < 1 || m % static_cast<std::int64_t>(p) == 0)
    throw Error(ErrorCode::BadParameter, "m must be positive and prime to p");
  std::int64_t q = checked_pow(p, k);
  BernoulliSpec spec{p, {q * m + 1}, {"a"}};
  auto M = make_bernoulli(spec);
  Rational b = Rational::constant(M.field(), m) * M.element(Symbol::intern("a")).pow(m);
  Rational lhs = derive(b, 0, M), rhs = b.pow(q + 1);
  if (lhs == rhs) return Verdict::yes("b = " + b.str() + ", d b = " + lhs.str() + " = b^" + std::to_string(q + 1));
  Verdict v = Verdict::no("power map identity fails");
  v.witnesses.push_back(DerivationMismatch{"b", 0, rhs, lhs});
  return v;
}

/// Perfectness of the Bernoulli presentation, together with linear
/// independence of 1, a_1, ..., a_s over its p-th powers.
inline Verdict bernoulli_perfectness(const BernoulliSpec& spec, const EngineConfig& cfg = {}) {
  auto M = make_bernoulli(spec);
  auto c = constants(M, cfg);
  std::vector<Rational> ones{M.element("1")};
  for (Symbol v : M.vars()) ones.push_back(M.element(v));
  auto lin = linear_independent_over_pk(ones, {}, M, cfg);
  if (!c.perfect) {
    Verdict v = Verdict::no("constants dimension " + std::to_string(c.dim));
    KernelDimension w{M.name(), {}, 1};
    for (auto& k : c.kernel_basis) w.basis.push_back(k.str());
    v.witnesses.push_back(std::move(w));
    return v;
  }
  if (lin.is_false()) {
    Verdict v = Verdict::no("1 and the generators are linearly dependent over the p-th powers");
    v.witnesses = lin.witnesses;
    return v;
  }
  Verdict v = Verdict::yes("perfect: constants dimension 1");
  v.notes.push_back("1 and the generators are linearly independent over the p-th powers");
  return v;
}

}  // namespace dtrap
