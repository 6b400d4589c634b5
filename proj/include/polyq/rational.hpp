#pragma once

/**
 * Exact rational scalars, dense rational vectors/matrices and the Gaussian
 * elimination primitives (row echelon form, null space, determinant) that
 * every other part of the library builds on.
 *
 * Scalars are GMP rationals, which are kept in canonical form (positive
 * denominator, coprime numerator/denominator, zero as 0/1) after every
 * operation.
 */

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polyq {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using QVector = std::vector<Rational>;

class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign(const Rational& q) { return q.sign(); }

inline Rational abs(const Rational& q) { return q.sign() < 0 ? Rational(-q) : q; }

/// Parses the token form `[+-]digits[/digits]`; the denominator must be positive.
inline Rational parse_rational(std::string_view tok) {
  auto bad = [&] { return ParseError("invalid rational token '" + std::string(tok) + "'"); };
  if (tok.empty()) throw bad();
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  std::string_view body = tok;
  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!digits(num) || !digits(den)) throw bad();
  Integer n{std::string(num)};
  Integer d{std::string(den)};
  if (d == 0) throw bad();
  if (negative) n = -n;
  return Rational(n, d);
}

inline std::string to_string(const Rational& q) { return q.str(); }

// ---------------------------------------------------------------------------

/// Dense row-major rational matrix. May be 0×n or m×0.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
    for (const auto& r : init) append_row(QVector(r));
  }

  static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols_if_empty = 0) {
    QMatrix m(0, rows.empty() ? cols_if_empty : rows.front().size());
    for (const auto& r : rows) m.append_row(r);
    return m;
  }

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  QVector row_vector(std::size_t i) const { return QVector(row(i).begin(), row(i).end()); }

  std::vector<QVector> row_list() const {
    std::vector<QVector> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row_vector(i));
    return out;
  }

  void append_row(std::span<const Rational> r) {
    if (rows_ == 0 && data_.empty()) cols_ = r.size();
    if (r.size() != cols_)
      throw DimensionMismatch("row of length " + std::to_string(r.size()) + " appended to matrix with " +
                              std::to_string(cols_) + " columns");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }
  void append_row(const QVector& r) { append_row(std::span<const Rational>(r)); }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  QMatrix select_rows(std::span<const int> idx) const {
    QMatrix m(0, cols_);
    for (int i : idx) m.append_row(row(static_cast<std::size_t>(i)));
    return m;
  }

  QMatrix select_cols(std::span<const int> idx) const {
    QMatrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) m(i, k) = (*this)(i, static_cast<std::size_t>(idx[k]));
    return m;
  }

  /// Stacks `other` below this matrix; an empty operand adopts the other's width.
  QMatrix stack(const QMatrix& other) const {
    if (rows_ == 0) return other.rows_ == 0 && other.cols_ == 0 ? *this : other;
    QMatrix m = *this;
    for (std::size_t i = 0; i < other.rows_; ++i) m.append_row(other.row(i));
    return m;
  }

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && (a.rows_ == 0 || a.cols_ == b.cols_) && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline std::ostream& operator<<(std::ostream& os, const QMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j).str();
    os << '\n';
  }
  return os;
}

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product of vectors with different lengths");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

inline QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product with incompatible shapes");
  QMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

inline bool is_zero(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.is_zero(); });
}

inline bool is_zero(const QMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!is_zero(m.row(i))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Gaussian elimination

struct RowEchelon {
  std::size_t rank = 0;
  QMatrix rref;
  std::vector<int> pivot_columns;
};

/// Reduced row echelon form. The pivot in each column is the first row (from the
/// current position down) with a nonzero entry.
inline RowEchelon gauss_reduce(QMatrix m) {
  RowEchelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    const Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    out.pivot_columns.push_back(static_cast<int>(c));
    ++r;
  }
  out.rank = r;
  out.rref = std::move(m);
  return out;
}

inline std::size_t rank(const QMatrix& m) { return gauss_reduce(m).rank; }

/// Rows form a basis of {x : m·x = 0}; one row per non-pivot column.
inline QMatrix kernel_basis(const QMatrix& m) {
  const auto ech = gauss_reduce(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (int c : ech.pivot_columns) is_pivot[static_cast<std::size_t>(c)] = true;
  QMatrix basis(0, n);
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    QVector v(n);
    v[free] = 1;
    for (std::size_t k = 0; k < ech.rank; ++k)
      v[static_cast<std::size_t>(ech.pivot_columns[k])] = -ech.rref(k, free);
    basis.append_row(v);
  }
  return basis;
}

inline Rational determinant(QMatrix m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("determinant of a " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            " matrix");
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      const Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Solves m·x = rhs; returns one solution, or nothing when the system is inconsistent.
inline std::optional<QVector> solve(const QMatrix& m, std::span<const Rational> rhs) {
  if (rhs.size() != m.rows()) throw DimensionMismatch("right-hand side length differs from row count");
  QMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = rhs[i];
  }
  const auto ech = gauss_reduce(aug);
  if (!ech.pivot_columns.empty() && static_cast<std::size_t>(ech.pivot_columns.back()) == m.cols())
    return std::nullopt;
  QVector x(m.cols());
  for (std::size_t k = 0; k < ech.rank; ++k)
    x[static_cast<std::size_t>(ech.pivot_columns[k])] = ech.rref(k, m.cols());
  return x;
}

// ---------------------------------------------------------------------------
// Row scaling helpers

/// Positive multiple of `v` with coprime integer entries. Zero vectors are returned unchanged.
inline QVector primitive(std::span<const Rational> v) {
  Integer l = 1;
  Integer g = 0;
  for (const auto& x : v)
    if (!x.is_zero()) l = boost::multiprecision::lcm(l, denominator(x));
  for (const auto& x : v)
    if (!x.is_zero()) g = boost::multiprecision::gcd(g, Integer(numerator(x) * (l / denominator(x))));
  QVector out(v.begin(), v.end());
  if (g == 0) return out;
  const Rational scale(l, g);
  for (auto& x : out) x *= scale;
  return out;
}

/// primitive(v), then negated if needed so the first nonzero entry is positive.
inline QVector primitive_unsigned(std::span<const Rational> v) {
  QVector out = primitive(v);
  auto it = std::find_if(out.begin(), out.end(), [](const Rational& x) { return !x.is_zero(); });
  if (it != out.end() && it->sign() < 0)
    for (auto& x : out) x = -x;
  return out;
}

}  // namespace polyq
