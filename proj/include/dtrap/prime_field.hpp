#pragma once

#include <cstdint>
#include <string>

#include "dtrap/error.hpp"

namespace dtrap {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Scalar arithmetic in F_p. Elements are kept in [0, p).
class PrimeField {
 public:
  static constexpr std::uint32_t kMaxPrime = 65521;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p) || p > kMaxPrime)
      throw Error(ErrorCode::BadPrime,
                  "characteristic must be a prime <= 65521, got " + std::to_string(p));
  }

  /// For moduli already validated elsewhere (copied out of an existing value).
  static PrimeField trusted(std::uint32_t p) { return PrimeField(p, 0); }

  std::uint32_t p() const { return p_; }

  friend bool operator==(PrimeField a, PrimeField b) { return a.p_ == b.p_; }

  std::uint32_t reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
    std::uint64_t result = 1 % p_, base = a % p_;
    while (e) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a % p_ == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero in F_p");
    return pow(a, p_ - 2);
  }

 private:
  PrimeField(std::uint32_t p, int) : p_(p) {}

  std::uint32_t p_;
};

}  // namespace dtrap
