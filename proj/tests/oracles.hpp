#pragma once

// Independent brute-force oracles used only by the test suites. Nothing in here
// calls into the elimination or hull code it is used to check.

#include "polyq/index_set.hpp"
#include "polyq/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace polyq::oracle {

using Rows = std::vector<std::vector<Rational>>;

/// Laplace expansion along the first row.
inline Rational laplace_det(const Rows& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Rational det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    Rows minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Rational> r;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) r.push_back(m[i][k]);
      minor.push_back(std::move(r));
    }
    const Rational c = m[0][j] * laplace_det(minor);
    det += (j % 2 == 0) ? c : Rational(-c);
  }
  return det;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      f(idx);
      return;
    }
    for (std::size_t i = start; i + (k - pos) <= n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

/// Rank as the size of the largest nonvanishing square minor.
inline std::size_t minor_rank(const Rows& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  for (std::size_t k = std::min(rows, cols); k > 0; --k) {
    bool found = false;
    for_each_subset(rows, k, [&](const std::vector<std::size_t>& ri) {
      if (found) return;
      for_each_subset(cols, k, [&](const std::vector<std::size_t>& ci) {
        if (found) return;
        Rows sub;
        for (auto i : ri) {
          std::vector<Rational> r;
          for (auto j : ci) r.push_back(m[i][j]);
          sub.push_back(std::move(r));
        }
        if (!laplace_det(sub).is_zero()) found = true;
      });
    });
    if (found) return k;
  }
  return 0;
}

/// Fraction-free (Bareiss) determinant of a small integer matrix.
inline std::int64_t bareiss_det(std::vector<std::vector<std::int64_t>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  std::int64_t sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// gcd of all k×k minors of an integer matrix (0 if all vanish).
inline std::int64_t minor_gcd(const std::vector<std::vector<std::int64_t>>& m, std::size_t k) {
  std::int64_t g = 0;
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  for_each_subset(rows, k, [&](const std::vector<std::size_t>& ri) {
    if (g == 1) return;
    for_each_subset(cols, k, [&](const std::vector<std::size_t>& ci) {
      if (g == 1) return;
      std::vector<std::vector<std::int64_t>> sub;
      for (auto i : ri) {
        std::vector<std::int64_t> r;
        for (auto j : ci) r.push_back(m[i][j]);
        sub.push_back(std::move(r));
      }
      g = std::gcd(g, std::abs(bareiss_det(sub)));
    });
  });
  return g;
}

/// Solution of a square system by Cramer's rule, or nothing when singular.
inline std::optional<std::vector<Rational>> cramer(const Rows& a, const std::vector<Rational>& b) {
  const Rational d = laplace_det(a);
  if (d.is_zero()) return std::nullopt;
  std::vector<Rational> x(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    Rows aj = a;
    for (std::size_t i = 0; i < a.size(); ++i) aj[i][j] = b[i];
    x[j] = laplace_det(aj) / d;
  }
  return x;
}

/// Vertices of {x ∈ R^d : a0 + a·x >= 0 for every row}: solve every d-subset of
/// tight rows and keep the feasible unique solutions. Rows are (a0, a1..ad).
inline std::set<std::vector<Rational>> vertices_by_subsets(const Rows& ineqs, std::size_t d) {
  std::set<std::vector<Rational>> out;
  for_each_subset(ineqs.size(), d, [&](const std::vector<std::size_t>& s) {
    Rows a;
    std::vector<Rational> b;
    for (auto i : s) {
      a.emplace_back(ineqs[i].begin() + 1, ineqs[i].end());
      b.push_back(-ineqs[i][0]);
    }
    auto x = cramer(a, b);
    if (!x) return;
    for (const auto& row : ineqs) {
      Rational v = row[0];
      for (std::size_t j = 0; j < d; ++j) v += row[j + 1] * (*x)[j];
      if (v.sign() < 0) return;
    }
    std::vector<Rational> h{1};
    h.insert(h.end(), x->begin(), x->end());
    out.insert(h);
  });
  return out;
}

/// Coprime integer scaling (positive factor).
inline std::vector<Rational> scale_primitive(std::vector<Rational> v) {
  Integer l = 1, g = 0;
  for (auto& x : v)
    if (!x.is_zero()) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
  for (auto& x : v) x *= l;
  for (auto& x : v)
    if (!x.is_zero()) g = boost::multiprecision::gcd(g, boost::multiprecision::numerator(x));
  if (g != 0)
    for (auto& x : v) x /= Rational(g);
  return v;
}

/// Facets of conv(points) for full-dimensional point sets in R^d (homogeneous rows):
/// every d-subset spanning a hyperplane with all points on one side.
inline std::set<std::vector<Rational>> facets_by_subsets(const Rows& pts, std::size_t d) {
  std::set<std::vector<Rational>> out;
  const std::size_t n = d + 1;
  for_each_subset(pts.size(), d, [&](const std::vector<std::size_t>& s) {
    // normal (a0..ad) orthogonal to the d chosen homogeneous points: cofactors of the
    // d×(d+1) matrix
    std::vector<Rational> a(n);
    for (std::size_t j = 0; j < n; ++j) {
      Rows minor;
      for (auto i : s) {
        std::vector<Rational> r;
        for (std::size_t k = 0; k < n; ++k)
          if (k != j) r.push_back(pts[i][k]);
        minor.push_back(std::move(r));
      }
      a[j] = laplace_det(minor);
      if (j % 2 == 1) a[j] = -a[j];
    }
    if (std::all_of(a.begin(), a.end(), [](const Rational& x) { return x.is_zero(); })) return;
    int side = 0;
    for (const auto& p : pts) {
      Rational v = 0;
      for (std::size_t k = 0; k < n; ++k) v += a[k] * p[k];
      const int sg = v.sign();
      if (sg == 0) continue;
      if (side == 0) side = sg;
      if (sg != side) return;
    }
    if (side < 0)
      for (auto& x : a) x = -x;
    out.insert(scale_primitive(a));
  });
  return out;
}

inline Rows random_rows(std::mt19937& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  Rows m(rows, std::vector<Rational>(cols));
  for (auto& r : m)
    for (auto& x : r) x = dist(rng);
  return m;
}

inline QMatrix to_matrix(const Rows& r, std::size_t cols = 0) { return QMatrix::from_rows(r, cols); }

inline std::set<std::vector<Rational>> row_set(const QMatrix& m) {
  std::set<std::vector<Rational>> s;
  for (std::size_t i = 0; i < m.rows(); ++i) s.insert(m.row_vector(i));
  return s;
}

}  // namespace polyq::oracle
