#pragma once

// Delaunay cells via the paraboloid lifting, Voronoi vertices as circumcenters,
// and the crust reconstruction of planar curves.
//
// Point clouds are plain coordinate rows (no homogenizing column).

#include "polyq/hull.hpp"
#include "polyq/index_set.hpp"
#include "polyq/rational.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polyq {

class DegenerateInput : public std::invalid_argument {
 public:
  explicit DegenerateInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Cells of the Delaunay decomposition: the lower facets of the lifted points
/// (1, x, |x|^2). Cospherical subsets give one non-simplicial cell.
inline std::vector<IndexSet> delaunay(const QMatrix& cloud) {
  const std::size_t n = cloud.rows(), d = cloud.cols();
  if (n < d + 1) throw DegenerateInput("delaunay needs at least d+1 = " + std::to_string(d + 1) + " points");
  QMatrix lifted(n, d + 2);
  std::set<QVector> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen.insert(cloud.row_vector(i)).second) throw DegenerateInput("duplicate point " + std::to_string(i));
    lifted(i, 0) = 1;
    Rational sq = 0;
    for (std::size_t j = 0; j < d; ++j) {
      lifted(i, j + 1) = cloud(i, j);
      sq += cloud(i, j) * cloud(i, j);
    }
    lifted(i, d + 1) = sq;
  }
  std::vector<int> affine_cols(d + 1);
  for (std::size_t j = 0; j <= d; ++j) affine_cols[j] = static_cast<int>(j);
  if (rank(lifted.select_cols(affine_cols)) < d + 1) throw DegenerateInput("points are affinely dependent");
  const auto bb = beneath_beyond(lifted);

  std::vector<IndexSet> cells;
  if (bb.dim == static_cast<int>(d)) {
    // every point on one sphere
    IndexSet all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
    cells.push_back(std::move(all));
    return cells;
  }
  for (std::size_t f = 0; f < bb.facets.rows(); ++f)
    if (bb.facets(f, d + 1).sign() > 0) cells.push_back(bb.facet_points[f]);
  std::sort(cells.begin(), cells.end());
  return cells;
}

/// Center of the sphere through the given points, from the equal-distance equations
/// 2 (p_i - p_0)·c = |p_i|^2 - |p_0|^2.
inline QVector circumcenter(const QMatrix& cloud, const IndexSet& cell) {
  const std::size_t d = cloud.cols();
  QMatrix a(0, d);
  QVector rhs;
  const auto p0 = cloud.row(static_cast<std::size_t>(cell.front()));
  for (std::size_t k = 1; k < cell.size(); ++k) {
    const auto pi = cloud.row(static_cast<std::size_t>(cell[k]));
    QVector row(d);
    Rational r = 0;
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = 2 * (pi[j] - p0[j]);
      r += pi[j] * pi[j] - p0[j] * p0[j];
    }
    a.append_row(row);
    rhs.push_back(r);
  }
  auto c = solve(a, rhs);
  if (!c) throw DegenerateInput("cell " + format_set(cell) + " has no circumsphere");
  return *c;
}

/// Circumcenters of the Delaunay cells, in cell order.
inline QMatrix voronoi_vertices(const QMatrix& cloud) {
  QMatrix out(0, cloud.cols());
  for (const auto& cell : delaunay(cloud)) out.append_row(circumcenter(cloud, cell));
  return out;
}

namespace detail {

/// Boundary edges of a planar convex cell: pairs with every other point strictly on one side.
inline std::vector<std::pair<int, int>> cell_edges(const QMatrix& pts, const IndexSet& cell) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t a = 0; a < cell.size(); ++a)
    for (std::size_t b = a + 1; b < cell.size(); ++b) {
      const auto p = pts.row(static_cast<std::size_t>(cell[a]));
      const auto q = pts.row(static_cast<std::size_t>(cell[b]));
      int side = 0;
      bool ok = true;
      for (std::size_t c = 0; c < cell.size() && ok; ++c) {
        if (c == a || c == b) continue;
        const auto r = pts.row(static_cast<std::size_t>(cell[c]));
        const int s = Rational((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])).sign();
        if (s == 0 || (side != 0 && s != side)) ok = false;
        side = s;
      }
      if (ok) out.emplace_back(cell[a], cell[b]);
    }
  return out;
}

}  // namespace detail

/// Delaunay edges of a planar cloud (boundary edges of its cells).
inline std::vector<std::pair<int, int>> delaunay_edges(const QMatrix& cloud) {
  if (cloud.cols() != 2) throw DimensionMismatch("delaunay_edges works in the plane");
  std::set<std::pair<int, int>> edges;
  for (const auto& cell : delaunay(cloud))
    for (auto e : detail::cell_edges(cloud, cell)) edges.insert(e);
  return {edges.begin(), edges.end()};
}

/// Delaunay edges of S ∪ V (V = Voronoi vertices of S) joining two points of S.
inline std::vector<std::pair<int, int>> crust(const QMatrix& cloud) {
  if (cloud.cols() != 2) throw DimensionMismatch("crust needs planar points (2 coordinates per row)");
  if (cloud.rows() < 3) throw std::invalid_argument("crust needs at least 3 points");
  const QMatrix v = voronoi_vertices(cloud);
  QMatrix all = cloud;
  std::set<QVector> present;
  for (std::size_t i = 0; i < cloud.rows(); ++i) present.insert(cloud.row_vector(i));
  for (std::size_t i = 0; i < v.rows(); ++i)
    if (present.insert(v.row_vector(i)).second) all.append_row(v.row(i));
  const int n = static_cast<int>(cloud.rows());
  std::vector<std::pair<int, int>> out;
  for (auto [a, b] : delaunay_edges(all))
    if (a < n && b < n) out.emplace_back(a, b);
  return out;
}

}  // namespace polyq
