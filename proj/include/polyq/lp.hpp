#pragma once

// Exact two-phase simplex method with Bland's rule, over an H-description
// {x : a0 + a·x >= 0 (ineqs), e0 + e·x = 0 (eqs)} with free variables.

#include "polyq/index_set.hpp"
#include "polyq/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polyq {

enum class Sense { Maximize, Minimize };
enum class LPStatus { Optimal, Unbounded, Infeasible };

inline std::string to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::Infeasible: return "infeasible";
  }
  return "?";
}

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  Rational value;
  QVector vertex;  ///< homogeneous, leading 1
};

namespace detail {

class Tableau {
 public:
  Tableau(std::vector<QVector> rows, std::vector<int> basis, std::size_t cols)
      : rows_(std::move(rows)), basis_(std::move(basis)), cols_(cols) {}

  /// Minimizes with reduced-cost row `z` (z[cols] holds minus the objective value).
  /// Columns with `allowed[j] == false` never enter. Returns false if unbounded.
  bool optimize(QVector& z, const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j)
        if (allowed[j] && z[j].sign() < 0) {
          enter = j;
          break;
        }
      if (enter == cols_) return true;
      std::size_t leave = rows_.size();
      Rational best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][enter].sign() <= 0) continue;
        const Rational ratio = rows_[i][cols_] / rows_[i][enter];
        if (leave == rows_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows_.size()) return false;
      pivot(leave, enter, z);
    }
  }

  void pivot(std::size_t r, std::size_t c, QVector& z) {
    const Rational p = rows_[r][c];
    for (auto& x : rows_[r]) x /= p;
    auto eliminate = [&](QVector& row) {
      if (row[c].is_zero()) return;
      const Rational f = row[c];
      for (std::size_t j = 0; j <= cols_; ++j) row[j] -= f * rows_[r][j];
    };
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (i != r) eliminate(rows_[i]);
    eliminate(z);
    basis_[r] = static_cast<int>(c);
  }

  void drop_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  std::vector<QVector>& rows() { return rows_; }
  const std::vector<int>& basis() const { return basis_; }

  QVector solution() const {
    QVector x(cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i) x[static_cast<std::size_t>(basis_[i])] = rows_[i][cols_];
    return x;
  }

 private:
  std::vector<QVector> rows_;
  std::vector<int> basis_;
  std::size_t cols_;
};

/// Moves a feasible optimal point along null directions of its tight rows until
/// they have full rank (or the direction is a lineality direction).
inline QVector purify(const QMatrix& ineqs, const QMatrix& eqs, QVector x) {
  const std::size_t d = x.size() - 1;
  for (;;) {
    QMatrix tight(0, d);
    std::vector<std::size_t> loose;
    auto linear = [&](const QMatrix& m, std::size_t i) { return QVector(m.row(i).begin() + 1, m.row(i).end()); };
    for (std::size_t i = 0; i < eqs.rows(); ++i) tight.append_row(linear(eqs, i));
    for (std::size_t i = 0; i < ineqs.rows(); ++i) {
      if (dot(ineqs.row(i), x).is_zero())
        tight.append_row(linear(ineqs, i));
      else
        loose.push_back(i);
    }
    const QMatrix k = kernel_basis(tight);
    if (k.rows() == 0) return x;
    QVector z = k.row_vector(0);
    QVector zh(d + 1);
    for (std::size_t j = 0; j < d; ++j) zh[j + 1] = z[j];
    bool any_neg = false, any_pos = false;
    for (std::size_t i : loose) {
      const int s = dot(ineqs.row(i), zh).sign();
      any_neg |= s < 0;
      any_pos |= s > 0;
    }
    if (!any_neg && !any_pos) return x;  // lineality direction
    if (!any_neg)
      for (auto& v : zh) v = -v;
    std::optional<Rational> step;
    for (std::size_t i : loose) {
      const Rational rate = dot(ineqs.row(i), zh);
      if (rate.sign() >= 0) continue;
      const Rational t = dot(ineqs.row(i), x) / -rate;
      if (!step || t < *step) step = t;
    }
    for (std::size_t j = 1; j <= d; ++j) x[j] += *step * zh[j];
  }
}

}  // namespace detail

/// Optimizes c0 + c·x. A returned optimal vertex is a vertex of the polyhedron
/// whenever the polyhedron is pointed.
inline LPResult simplex_optimize(const QMatrix& ineqs, const QMatrix& eqs, std::span<const Rational> objective,
                                 Sense sense) {
  const std::size_t n = objective.size();
  if (n == 0) throw DimensionMismatch("empty objective");
  if ((ineqs.rows() > 0 && ineqs.cols() != n) || (eqs.rows() > 0 && eqs.cols() != n))
    throw DimensionMismatch("objective length " + std::to_string(n) + " does not match constraint width");
  const std::size_t d = n - 1, mi = ineqs.rows(), me = eqs.rows(), m = mi + me;
  // columns: x+ (d), x- (d), slacks (mi), artificials (m)
  const std::size_t cols = 2 * d + mi + m;
  std::vector<QVector> rows;
  std::vector<int> basis;
  for (std::size_t i = 0; i < m; ++i) {
    const bool is_ineq = i < mi;
    const auto src = is_ineq ? ineqs.row(i) : eqs.row(i - mi);
    QVector r(cols + 1);
    for (std::size_t j = 0; j < d; ++j) {
      r[j] = src[j + 1];
      r[d + j] = -src[j + 1];
    }
    if (is_ineq) r[2 * d + i] = -1;
    r[cols] = -src[0];
    if (r[cols].sign() < 0)
      for (auto& v : r) v = -v;
    r[2 * d + mi + i] = 1;
    rows.push_back(std::move(r));
    basis.push_back(static_cast<int>(2 * d + mi + i));
  }
  detail::Tableau t(std::move(rows), std::move(basis), cols);

  // phase I: minimize the sum of artificials
  std::vector<bool> allowed(cols, true);
  QVector z(cols + 1);
  for (const auto& r : t.rows())
    for (std::size_t j = 0; j < 2 * d + mi; ++j) z[j] -= r[j];
  for (const auto& r : t.rows()) z[cols] -= r[cols];
  t.optimize(z, allowed);
  LPResult res;
  if (!z[cols].is_zero()) return res;

  for (std::size_t j = 2 * d + mi; j < cols; ++j) allowed[j] = false;
  for (std::size_t i = 0; i < t.rows().size();) {
    if (static_cast<std::size_t>(t.basis()[i]) < 2 * d + mi) {
      ++i;
      continue;
    }
    std::size_t c = 0;
    while (c < 2 * d + mi && t.rows()[i][c].is_zero()) ++c;
    if (c == 2 * d + mi) {
      t.drop_row(i);  // redundant equation
      continue;
    }
    t.pivot(i, c, z);
    ++i;
  }

  // phase II
  const int s = sense == Sense::Maximize ? -1 : 1;
  QVector cost(cols + 1);
  for (std::size_t j = 0; j < d; ++j) {
    cost[j] = s * objective[j + 1];
    cost[d + j] = -cost[j];
  }
  z = cost;
  for (std::size_t i = 0; i < t.rows().size(); ++i) {
    const Rational cb = cost[static_cast<std::size_t>(t.basis()[i])];
    if (cb.is_zero()) continue;
    for (std::size_t j = 0; j <= cols; ++j) z[j] -= cb * t.rows()[i][j];
  }
  if (!t.optimize(z, allowed)) {
    res.status = LPStatus::Unbounded;
    return res;
  }
  const QVector sol = t.solution();
  QVector x(n);
  x[0] = 1;
  for (std::size_t j = 0; j < d; ++j) x[j + 1] = sol[j] - sol[d + j];
  res.vertex = detail::purify(ineqs, eqs, std::move(x));
  res.status = LPStatus::Optimal;
  res.value = dot(objective, res.vertex);
  return res;
}

/// Optimum over a finite list of homogeneous vertex rows; the first best row wins.
inline LPResult optimize_over_vertices(const QMatrix& vertices, std::span<const Rational> objective, Sense sense) {
  LPResult res;
  for (std::size_t i = 0; i < vertices.rows(); ++i) {
    if (vertices(i, 0).sign() == 0) throw DimensionMismatch("optimize_over_vertices: row " + std::to_string(i) + " is a ray");
    QVector v = vertices.row_vector(i);
    for (auto& x : v) x /= vertices(i, 0);
    const Rational val = dot(objective, v);
    const bool better = sense == Sense::Maximize ? val > res.value : val < res.value;
    if (res.status != LPStatus::Optimal || better) {
      res.status = LPStatus::Optimal;
      res.value = val;
      res.vertex = std::move(v);
    }
  }
  return res;
}

struct OrientedGraph {
  std::vector<std::pair<int, int>> directed;  ///< (u, v) with value(v) > value(u)
  std::vector<std::pair<int, int>> flat;      ///< equal values at both ends
  std::vector<Rational> values;
};

inline OrientedGraph orient_graph(const Graph& g, const QMatrix& vertices, std::span<const Rational> objective) {
  if (static_cast<std::size_t>(g.nodes) != vertices.rows())
    throw DimensionMismatch("graph has " + std::to_string(g.nodes) + " nodes but there are " +
                            std::to_string(vertices.rows()) + " vertices");
  OrientedGraph og;
  for (std::size_t i = 0; i < vertices.rows(); ++i) og.values.push_back(dot(objective, vertices.row(i)) / vertices(i, 0));
  for (auto [u, v] : g.edges) {
    const Rational& a = og.values[static_cast<std::size_t>(u)];
    const Rational& b = og.values[static_cast<std::size_t>(v)];
    if (b > a)
      og.directed.emplace_back(u, v);
    else if (b < a)
      og.directed.emplace_back(v, u);
    else
      og.flat.emplace_back(u, v);
  }
  return og;
}

}  // namespace polyq
