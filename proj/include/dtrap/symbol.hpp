#pragma once

#include <compare>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_set>

namespace dtrap {

/// An interned variable name. Equality is pointer identity; ordering is
/// alphabetical on the name, which fixes the variable order used by the
/// graded-lex monomial order.
class Symbol {
 public:
  Symbol() = default;

  static Symbol intern(std::string_view name) {
    static std::mutex mutex;
    static std::unordered_set<std::string> table;
    std::lock_guard lock(mutex);
    auto it = table.emplace(name).first;
    Symbol s;
    s.name_ = &*it;
    return s;
  }

  bool valid() const { return name_ != nullptr; }
  const std::string& name() const { return *name_; }

  friend bool operator==(Symbol a, Symbol b) { return a.name_ == b.name_; }
  friend std::strong_ordering operator<=>(Symbol a, Symbol b) {
    if (a.name_ == b.name_) return std::strong_ordering::equal;
    if (a.name_ == nullptr) return std::strong_ordering::less;
    if (b.name_ == nullptr) return std::strong_ordering::greater;
    int c = a.name_->compare(*b.name_);
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }

  std::size_t hash() const { return std::hash<const void*>{}(name_); }

 private:
  const std::string* name_ = nullptr;
};

}  // namespace dtrap

template <>
struct std::hash<dtrap::Symbol> {
  std::size_t operator()(dtrap::Symbol s) const noexcept { return s.hash(); }
};
