#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtrap/error.hpp"
#include "dtrap/symbol.hpp"

namespace dtrap {

namespace detail {

inline std::int32_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t s = a + b;
  if (s > std::numeric_limits<std::int32_t>::max() ||
      s < std::numeric_limits<std::int32_t>::min())
    throw Error(ErrorCode::Overflow, "exponent overflow");
  return static_cast<std::int32_t>(s);
}

inline std::int32_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r) || r > std::numeric_limits<std::int32_t>::max() ||
      r < std::numeric_limits<std::int32_t>::min())
    throw Error(ErrorCode::Overflow, "exponent overflow");
  return static_cast<std::int32_t>(r);
}

}  // namespace detail

/// A power product of variables with positive exponents, stored sparsely and
/// sorted by variable name. The empty monomial is 1.
class Monomial {
 public:
  using Factor = std::pair<Symbol, std::int32_t>;

  Monomial() = default;

  explicit Monomial(std::vector<Factor> factors) {
    std::sort(factors.begin(), factors.end(),
              [](const Factor& a, const Factor& b) { return a.first < b.first; });
    for (auto& [s, e] : factors) {
      if (e < 0) throw Error(ErrorCode::Internal, "negative exponent in monomial");
      if (!factors_.empty() && factors_.back().first == s)
        factors_.back().second = detail::checked_add(factors_.back().second, e);
      else
        factors_.emplace_back(s, e);
    }
    std::erase_if(factors_, [](const Factor& f) { return f.second == 0; });
    for (auto& f : factors_) degree_ += f.second;
  }

  static Monomial var(Symbol s, std::int32_t e = 1) { return Monomial({{s, e}}); }

  const std::vector<Factor>& factors() const { return factors_; }
  std::int64_t degree() const { return degree_; }
  bool is_one() const { return factors_.empty(); }

  std::int32_t exponent(Symbol s) const {
    for (auto& [v, e] : factors_)
      if (v == s) return e;
    return 0;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin(), j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
      if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
        r.factors_.push_back(*i++);
      } else if (i == a.factors_.end() || j->first < i->first) {
        r.factors_.push_back(*j++);
      } else {
        r.factors_.emplace_back(i->first, detail::checked_add(i->second, j->second));
        ++i, ++j;
      }
    }
    r.degree_ = a.degree_ + b.degree_;
    return r;
  }

  /// a / b when b divides a.
  std::optional<Monomial> divide(const Monomial& b) const {
    Monomial r;
    auto j = b.factors_.begin();
    for (auto& [s, e] : factors_) {
      if (j != b.factors_.end() && j->first < s) return std::nullopt;
      if (j != b.factors_.end() && j->first == s) {
        if (j->second > e) return std::nullopt;
        if (j->second < e) r.factors_.emplace_back(s, e - j->second);
        ++j;
      } else {
        r.factors_.emplace_back(s, e);
      }
    }
    if (j != b.factors_.end()) return std::nullopt;
    r.degree_ = degree_ - b.degree_;
    return r;
  }

  Monomial pow(std::int64_t e) const {
    Monomial r;
    if (e == 0) return r;
    for (auto& [s, x] : factors_) r.factors_.emplace_back(s, detail::checked_mul(x, e));
    for (auto& f : r.factors_) r.degree_ += f.second;
    return r;
  }

  Monomial without(Symbol s) const {
    Monomial r;
    for (auto& f : factors_)
      if (f.first != s) r.factors_.push_back(f);
    for (auto& f : r.factors_) r.degree_ += f.second;
    return r;
  }

  /// Graded-lex comparison: total degree first, then lexicographic with the
  /// alphabetically first variable most significant.
  static int compare(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_ ? -1 : 1;
    auto i = a.factors_.begin(), j = b.factors_.begin();
    for (; i != a.factors_.end() && j != b.factors_.end(); ++i, ++j) {
      if (i->first != j->first) return i->first < j->first ? 1 : -1;
      if (i->second != j->second) return i->second < j->second ? -1 : 1;
    }
    if (i == a.factors_.end() && j == b.factors_.end()) return 0;
    return i == a.factors_.end() ? -1 : 1;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.factors_ == b.factors_;
  }

  std::string str() const {
    if (factors_.empty()) return "1";
    std::string out;
    for (auto& [s, e] : factors_) {
      if (!out.empty()) out += '*';
      out += s.name();
      if (e != 1) out += '^' + std::to_string(e);
    }
    return out;
  }

 private:
  std::vector<Factor> factors_;
  std::int64_t degree_ = 0;
};

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return Monomial::compare(a, b) < 0;
  }
};

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return Monomial::compare(a, b) > 0;
  }
};

}  // namespace dtrap
