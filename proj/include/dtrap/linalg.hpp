#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtrap/rational.hpp"

namespace dtrap {

using Vector = std::vector<Rational>;

/// Dense matrix over F_p(X). Labels are free-form tags carried into
/// certificates (typically a p-monomial per column).
class FFMatrix {
 public:
  FFMatrix(PrimeField f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), data_(rows * cols, Rational(f)) {}

  static FFMatrix from_rows(PrimeField f, const std::vector<Vector>& rows, std::size_t cols) {
    FFMatrix m(f, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw Error(ErrorCode::Precondition, "ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }
  static FFMatrix from_rows(PrimeField f, const std::vector<Vector>& rows) {
    return from_rows(f, rows, rows.empty() ? 0 : rows.front().size());
  }
  static FFMatrix identity(PrimeField f, std::size_t n) {
    FFMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, Rational::constant(f, 1));
    return m;
  }

  PrimeField field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, Rational v) { data_[i * cols_ + j] = std::move(v); }

  Vector row(std::size_t i) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  FFMatrix transpose() const {
    FFMatrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.set(j, i, at(i, j));
    t.row_labels = col_labels;
    t.col_labels = row_labels;
    return t;
  }

  Vector apply(const Vector& v) const {
    if (v.size() != cols_) throw Error(ErrorCode::Precondition, "vector length mismatch");
    Vector out(rows_, Rational(field_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!at(i, j).is_zero() && !v[j].is_zero()) out[i] = out[i] + at(i, j) * v[j];
    return out;
  }

  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

 private:
  PrimeField field_;
  std::size_t rows_, cols_;
  std::vector<Rational> data_;
};

/// Row echelon form over F_p[X] from fraction-free elimination.
struct Echelon {
  std::vector<std::vector<Poly>> rows;  // the first `pivot_cols.size()` rows are nonzero
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> row_order;  // original index of each echelon row
  std::size_t rank() const { return pivot_cols.size(); }
};

namespace detail {

inline Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (b.divide_exact(a)) return b;
  if (a.divide_exact(b)) return a;
  return (a * *b.divide_exact(gcd(a, b))).monic();
}

// Scales a row of rational functions to polynomials by the lcm of its denominators.
inline std::vector<Poly> clear_denominators(const Vector& row, PrimeField f) {
  Poly l = Poly::constant(f, 1);
  for (auto& x : row)
    if (!x.is_zero()) l = lcm(l, x.den());
  std::vector<Poly> out;
  out.reserve(row.size());
  for (auto& x : row) {
    if (x.is_zero()) {
      out.emplace_back(f);
      continue;
    }
    out.push_back(x.num() * *l.divide_exact(x.den()));
  }
  return out;
}

inline Poly exact_quotient(const Poly& a, const Poly& b) {
  if (b.is_one()) return a;
  auto q = a.divide_exact(b);
  if (!q) throw Error(ErrorCode::Internal, "Bareiss division is not exact");
  return std::move(*q);
}

}  // namespace detail

/// Fraction-free (Bareiss) elimination. Pivoting is deterministic: columns
/// are scanned left to right and the first remaining row with a nonzero entry
/// in the column becomes the pivot row.
inline Echelon echelon(const FFMatrix& m) {
  const PrimeField f = m.field();
  Echelon e;
  e.rows.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) e.rows.push_back(detail::clear_denominators(m.row(i), f));
  for (std::size_t i = 0; i < m.rows(); ++i) e.row_order.push_back(i);
  auto& a = e.rows;
  const std::size_t n = m.rows(), cols = m.cols();
  Poly prev = Poly::constant(f, 1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < n; ++c) {
    std::size_t piv = r;
    while (piv < n && a[piv][c].is_zero()) ++piv;
    if (piv == n) continue;
    if (piv != r) {
      // rotate rather than swap so untouched rows keep their relative order
      std::rotate(a.begin() + static_cast<std::ptrdiff_t>(r), a.begin() + static_cast<std::ptrdiff_t>(piv),
                  a.begin() + static_cast<std::ptrdiff_t>(piv) + 1);
      std::rotate(e.row_order.begin() + static_cast<std::ptrdiff_t>(r),
                  e.row_order.begin() + static_cast<std::ptrdiff_t>(piv),
                  e.row_order.begin() + static_cast<std::ptrdiff_t>(piv) + 1);
    }
    const Poly& p = a[r][c];
    for (std::size_t i = r + 1; i < n; ++i) {
      const Poly lead = a[i][c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        if (lead.is_zero()) {
          if (!a[i][j].is_zero()) a[i][j] = detail::exact_quotient(p * a[i][j], prev);
        } else {
          a[i][j] = detail::exact_quotient(p * a[i][j] - lead * a[r][j], prev);
        }
      }
      a[i][c] = Poly(f);
    }
    prev = p;
    e.pivot_cols.push_back(c);
    ++r;
  }
  return e;
}

inline std::size_t rank(const FFMatrix& m) { return echelon(m).rank(); }

/// Canonical kernel basis: one vector per non-pivot column j, with entry 1 at
/// j and 0 at the other non-pivot columns (the reduced row echelon basis).
/// Every vector is checked against M before it is returned.
inline std::vector<Vector> kernel(const FFMatrix& m) {
  const PrimeField f = m.field();
  Echelon e = echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols(), Rational(f));
    v[free] = Rational::constant(f, 1);
    for (std::size_t k = e.rank(); k-- > 0;) {
      std::size_t pc = e.pivot_cols[k];
      Rational acc(f);
      for (std::size_t j = pc + 1; j < m.cols(); ++j)
        if (!v[j].is_zero() && !e.rows[k][j].is_zero()) acc = acc + Rational(e.rows[k][j]) * v[j];
      if (!acc.is_zero()) v[pc] = -acc / Rational(e.rows[k][pc]);
    }
    for (auto& x : m.apply(v))
      if (!x.is_zero()) throw Error(ErrorCode::Internal, "kernel vector fails verification");
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Indices of the greedy (first-come) maximal independent subset of rows.
inline std::vector<std::size_t> independent_rows(const FFMatrix& m) {
  return echelon(m.transpose()).pivot_cols;
}

/// A nonzero combination sum_i c_i * rows[i] = 0, or nullopt when the rows are
/// independent. The combination is re-evaluated before it is returned.
inline std::optional<Vector> dependence_witness(const std::vector<Vector>& rows, PrimeField f) {
  if (rows.empty()) return std::nullopt;
  const std::size_t cols = rows.front().size();
  FFMatrix t(f, cols, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t.set(j, i, rows[i][j]);
  auto k = kernel(t);
  if (k.empty()) return std::nullopt;
  Vector c = k.front();
  for (std::size_t j = 0; j < cols; ++j) {
    Rational s(f);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!c[i].is_zero()) s = s + c[i] * rows[i][j];
    if (!s.is_zero()) throw Error(ErrorCode::Internal, "dependence witness fails verification");
  }
  return c;
}

}  // namespace dtrap
