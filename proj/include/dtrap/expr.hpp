#pragma once

#include <cctype>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtrap/rational.hpp"

namespace dtrap {

/// Raised by the expression reader; offset is a byte offset into the input.
struct ExprError {
  ErrorCode code;
  std::size_t offset;
  std::string token;
  std::string message;
};

/// Resolves an identifier to a variable, or nullopt when it is not in scope.
using SymbolResolver = std::function<std::optional<Symbol>(std::string_view)>;

namespace detail {

inline bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
inline bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

class ExprReader {
 public:
  ExprReader(std::string_view text, PrimeField field, const SymbolResolver& resolve)
      : text_(text), field_(field), resolve_(resolve) {}

  Rational read() {
    Rational r = sum();
    skip_space();
    if (pos_ != text_.size()) fail(ErrorCode::ParseError, "unexpected input");
    return r;
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& msg, std::size_t at = std::string_view::npos,
                         std::string token = {}) {
    if (at == std::string_view::npos) at = pos_;
    if (token.empty() && at < text_.size()) {
      std::size_t end = at + 1;
      if (ident_start(static_cast<unsigned char>(text_[at])))
        while (end < text_.size() && ident_char(static_cast<unsigned char>(text_[end]))) ++end;
      token = std::string(text_.substr(at, end - at));
    }
    throw ExprError{code, at, token, msg};
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Rational sum() {
    Rational acc = product();
    for (;;) {
      if (accept('+')) acc = acc + product();
      else if (accept('-')) acc = acc - product();
      else return acc;
    }
  }

  Rational product() {
    Rational acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Rational d = unary();
        if (d.is_zero()) fail(ErrorCode::DivisionByZero, "division by zero", at);
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  Rational unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Rational power() {
    Rational base = atom();
    if (!accept('^')) return base;
    std::size_t at = pos_;
    std::int64_t e = exponent();
    if (e < 0 && base.is_zero()) fail(ErrorCode::DivisionByZero, "negative power of zero", at);
    return base.pow(e);
  }

  std::int64_t exponent() {
    bool paren = accept('(');
    bool negative = false;
    if (accept('-')) negative = true;
    else accept('+');
    skip_space();
    std::size_t start = pos_;
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 0x7fffffff) fail(ErrorCode::Overflow, "exponent too large", start);
      ++pos_;
    }
    if (pos_ == start) fail(ErrorCode::ParseError, "expected integer exponent");
    if (paren && !accept(')')) fail(ErrorCode::ParseError, "expected ')'");
    return negative ? -v : v;
  }

  Rational atom() {
    skip_space();
    if (pos_ >= text_.size()) fail(ErrorCode::ParseError, "unexpected end of expression");
    unsigned char c = static_cast<unsigned char>(text_[pos_]);
    if (c == '(') {
      ++pos_;
      Rational r = sum();
      if (!accept(')')) fail(ErrorCode::ParseError, "expected ')'");
      return r;
    }
    if (std::isdigit(c)) {
      // reduce the literal mod p digit by digit, so any length is accepted
      std::uint64_t v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        v = (v * 10 + static_cast<std::uint64_t>(text_[pos_++] - '0')) % field_.p();
      return Rational::constant(field_, static_cast<std::int64_t>(v));
    }
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && ident_char(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      auto sym = resolve_(name);
      if (!sym) fail(ErrorCode::UnknownVariable, "unknown variable", start, std::string(name));
      return Rational::variable(field_, *sym);
    }
    fail(ErrorCode::ParseError, "unexpected character");
  }

  std::string_view text_;
  PrimeField field_;
  const SymbolResolver& resolve_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Reads an expression such as "(x^2 + 1)/(x*y) - 3*T^-2". Integer literals
/// are reduced mod p. Throws ExprError.
inline Rational read_expression(std::string_view text, PrimeField field,
                                const SymbolResolver& resolve) {
  return detail::ExprReader(text, field, resolve).read();
}

/// Convenience reader with an explicit variable list; unknown identifiers
/// raise Error(UNKNOWN_VARIABLE).
inline Rational parse_rational(std::string_view text, std::uint32_t p,
                               const std::vector<std::string>& vars) {
  PrimeField field(p);
  SymbolResolver resolve = [&](std::string_view name) -> std::optional<Symbol> {
    for (auto& v : vars)
      if (v == name) return Symbol::intern(name);
    return std::nullopt;
  };
  try {
    return read_expression(text, field, resolve);
  } catch (const ExprError& e) {
    throw Error(e.code, e.message + " at offset " + std::to_string(e.offset) +
                            (e.token.empty() ? "" : " ('" + e.token + "')"));
  }
}

}  // namespace dtrap
