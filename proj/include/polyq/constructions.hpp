#pragma once

// Standard polytopes (cube, simplex, random points on the sphere) and the wedge
// construction, in both its combinatorial and its coordinate form.

#include "polyq/index_set.hpp"
#include "polyq/rational.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyq {

/// 2^d homogeneous points with coordinates in {lower, 1}. Point i has coordinate j
/// equal to bit d-1-j of i, so the 0/1 3-cube lists (0,0,0), (0,0,1), (0,1,0), ...
inline QMatrix make_cube(int d, const Rational& lower = -1) {
  if (d < 1) throw std::invalid_argument("cube dimension must be at least 1, got " + std::to_string(d));
  if (d > 24) throw std::invalid_argument("cube dimension " + std::to_string(d) + " is too large");
  if (lower >= 1) throw std::invalid_argument("cube lower bound must be below 1");
  const std::size_t n = std::size_t{1} << d;
  QMatrix pts(n, static_cast<std::size_t>(d) + 1);
  for (std::size_t i = 0; i < n; ++i) {
    pts(i, 0) = 1;
    for (int j = 0; j < d; ++j) pts(i, static_cast<std::size_t>(j) + 1) = ((i >> (d - 1 - j)) & 1) ? Rational(1) : lower;
  }
  return pts;
}

/// Origin and the d unit vectors.
inline QMatrix make_simplex(int d) {
  if (d < 0) throw std::invalid_argument("simplex dimension must be nonnegative");
  const auto n = static_cast<std::size_t>(d) + 1;
  QMatrix pts(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    pts(i, 0) = 1;
    if (i > 0) pts(i, i) = 1;
  }
  return pts;
}

// ---------------------------------------------------------------------------
// random points on the unit sphere

/// Grid used for the stereographic parameters: multiples of 2^-kSphereGridBits.
inline constexpr int kSphereGridBits = 20;

/// n distinct exact rational points on S^{d-1} (homogeneous rows).
///
/// Sampling: a Gaussian vector g (Box-Muller over mt19937_64, uniform doubles from
/// the top 53 bits) is normalized to x on the sphere; its stereographic parameter
/// u = (x_1..x_{d-1}) / (1 - x_d) is rounded to the dyadic grid and mapped back
/// exactly by u -> (2u, |u|^2 - 1) / (1 + |u|^2).
inline QMatrix rand_sphere(int d, int n, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("rand_sphere needs dimension at least 2");
  if (n < d + 1) throw std::invalid_argument("rand_sphere needs at least d+1 points");
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto gaussian = [&] {
    double u1;
    do u1 = uniform();
    while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  const auto dd = static_cast<std::size_t>(d);
  const Rational unit = Rational(1, Integer(1) << kSphereGridBits);
  QMatrix pts(0, dd + 1);
  std::set<QVector> seen;
  auto sample = [&]() -> std::optional<QVector> {
    std::vector<double> g(dd);
    double norm = 0;
    for (auto& x : g) {
      x = gaussian();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return std::nullopt;
    const double denom = 1.0 - g[dd - 1] / norm;
    if (denom < 1e-9) return std::nullopt;
    QVector u(dd - 1);
    Rational s = 0;
    for (std::size_t j = 0; j + 1 < dd; ++j) {
      const double uj = g[j] / norm / denom;
      if (!std::isfinite(uj) || std::fabs(uj) > 1e6) return std::nullopt;
      u[j] = Rational(Integer(std::llround(std::ldexp(uj, kSphereGridBits)))) * unit;
      s += u[j] * u[j];
    }
    QVector p(dd + 1);
    p[0] = 1;
    for (std::size_t j = 0; j + 1 < dd; ++j) p[j + 1] = 2 * u[j] / (1 + s);
    p[dd] = (s - 1) / (1 + s);
    return p;
  };
  while (pts.rows() < static_cast<std::size_t>(n))
    if (auto p = sample(); p && seen.insert(*p).second) pts.append_row(*p);
  return pts;
}

// ---------------------------------------------------------------------------
// wedge

struct WedgeResult {
  IncidenceList vertices_in_facets;
  int n_vertices = 0;
  std::optional<QMatrix> vertices;  ///< only in coordinate mode
};

namespace detail {

struct WedgeLabels {
  IndexSet facet;         ///< vertices of F
  std::vector<int> plus;  ///< per original vertex: index of its + copy (or itself on F)
  std::vector<int> minus;
  int total = 0;
};

inline WedgeLabels wedge_labels(const IncidenceList& inc, int n, int facet_index) {
  if (facet_index < 0 || static_cast<std::size_t>(facet_index) >= inc.size())
    throw std::out_of_range("facet index " + std::to_string(facet_index) + " out of range (" +
                            std::to_string(inc.size()) + " facets)");
  WedgeLabels l;
  l.facet = inc[static_cast<std::size_t>(facet_index)];
  l.plus.resize(static_cast<std::size_t>(n));
  l.minus.resize(static_cast<std::size_t>(n));
  int next = n;
  for (int v = 0; v < n; ++v) {
    l.plus[static_cast<std::size_t>(v)] = v;
    l.minus[static_cast<std::size_t>(v)] = contains(l.facet, v) ? v : next++;
  }
  l.total = next;
  return l;
}

}  // namespace detail

/// Vertices of F keep their index; every other vertex i becomes i (+ copy) and
/// n, n+1, ... (- copies, ascending in i). Facets: F ∪ others⁻, F ∪ others⁺, then
/// (G∩F) ∪ (G∖F)⁺ ∪ (G∖F)⁻ for each other facet G in order.
inline WedgeResult wedge_combinatorial(const IncidenceList& inc, int n_vertices, int facet_index) {
  const int n = n_vertices < 0 ? vertex_count(inc) : n_vertices;
  const auto l = detail::wedge_labels(inc, n, facet_index);
  WedgeResult w;
  w.n_vertices = l.total;
  IndexSet bottom, top;
  for (int v = 0; v < n; ++v) {
    bottom.push_back(l.minus[static_cast<std::size_t>(v)]);
    top.push_back(l.plus[static_cast<std::size_t>(v)]);
  }
  w.vertices_in_facets.push_back(make_set(bottom));
  w.vertices_in_facets.push_back(make_set(top));
  for (std::size_t g = 0; g < inc.size(); ++g) {
    if (static_cast<int>(g) == facet_index) continue;
    IndexSet s;
    for (int v : inc[g]) {
      s.push_back(l.plus[static_cast<std::size_t>(v)]);
      if (!contains(l.facet, v)) s.push_back(l.minus[static_cast<std::size_t>(v)]);
    }
    w.vertices_in_facets.push_back(make_set(s));
  }
  return w;
}

/// W = {(x, t) : x ∈ P, 0 <= t <= a0 + a·x} for the facet inequality a of F. The +
/// copy of a vertex v sits at height a0 + a·v, the - copy at 0; vertex rows are
/// homogeneous, labels as in wedge_combinatorial.
inline WedgeResult wedge_geometric(const QMatrix& vertices, const QMatrix& facets, int facet_index) {
  if (facet_index < 0 || static_cast<std::size_t>(facet_index) >= facets.rows())
    throw std::out_of_range("facet index " + std::to_string(facet_index) + " out of range (" +
                            std::to_string(facets.rows()) + " facets)");
  IncidenceList inc(facets.rows());
  for (std::size_t f = 0; f < facets.rows(); ++f)
    for (std::size_t v = 0; v < vertices.rows(); ++v) {
      const Rational val = dot(facets.row(f), vertices.row(v));
      if (val.sign() < 0) throw std::invalid_argument("vertex " + std::to_string(v) + " violates facet " + std::to_string(f));
      if (val.is_zero()) inc[f].push_back(static_cast<int>(v));
    }
  const int n = static_cast<int>(vertices.rows());
  WedgeResult w = wedge_combinatorial(inc, n, facet_index);
  const auto l = detail::wedge_labels(inc, n, facet_index);
  const std::size_t cols = vertices.cols() + 1;
  QMatrix out(static_cast<std::size_t>(l.total), cols);
  for (int v = 0; v < n; ++v) {
    const auto row = vertices.row(static_cast<std::size_t>(v));
    const Rational lead = row[0];
    const Rational height = dot(facets.row(static_cast<std::size_t>(facet_index)), row) / lead;
    for (int copy : {l.plus[static_cast<std::size_t>(v)], l.minus[static_cast<std::size_t>(v)]}) {
      for (std::size_t j = 0; j < row.size(); ++j) out(static_cast<std::size_t>(copy), j) = row[j] / lead;
    }
    out(static_cast<std::size_t>(l.plus[static_cast<std::size_t>(v)]), cols - 1) = height;
  }
  w.vertices = std::move(out);
  return w;
}

}  // namespace polyq
