#pragma once

/**
 * Convex hull algorithms over homogeneous coordinates.
 *
 * A polyhedron P ⊆ R^d is handled through its homogenization, the cone over
 * {1} × P in R^{d+1}. Points carry a leading 1, rays a leading 0, and an
 * inequality (a0, a1, ..., ad) means a0 + a1 x1 + ... + ad xd >= 0.
 *
 *  - double_description: extreme rays and lineality of {y : A y >= 0, E y = 0}.
 *    Applied to a generator matrix it yields the facets (cone duality).
 *  - beneath_beyond: incremental insertion of affine points; produces the
 *    facets, the affine hull and a placing triangulation.
 *
 * All output rows are canonical: inequalities are reduced modulo the affine
 * hull equations and scaled to coprime integers, equations are additionally
 * sign-normalized, so hull outputs compare bit-exactly.
 */

#include "polyq/index_set.hpp"
#include "polyq/rational.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polyq {

class UnsupportedInput : public std::invalid_argument {
 public:
  explicit UnsupportedInput(const std::string& what) : std::invalid_argument(what) {}
};

struct ConeDescription {
  QMatrix generators;  ///< extreme rays, canonical modulo the lineality space
  QMatrix lineality;   ///< basis of the lineality space, in reduced echelon form
};

/// Cone constraints {y : inequalities·y >= 0, equations·y = 0}.
struct ConeConstraints {
  QMatrix inequalities;
  QMatrix equations;
};

enum class InsertionOrder { Given, Lexicographic };

// ---------------------------------------------------------------------------
// canonical rows

/// Equations in reduced echelon form with coprime integer rows, leading entry positive.
inline QMatrix canonical_equations(const QMatrix& eqs, std::size_t cols) {
  QMatrix out(0, cols);
  if (eqs.rows() == 0) return out;
  const auto ech = gauss_reduce(eqs);
  for (std::size_t i = 0; i < ech.rank; ++i) out.append_row(primitive_unsigned(ech.rref.row(i)));
  return out;
}

/// Reduces `row` modulo the span of `eqs` (canonical equations): the entry at each
/// equation's pivot column is cleared. The result is then made primitive.
inline QVector reduce_modulo(std::span<const Rational> row, const QMatrix& eqs) {
  QVector v(row.begin(), row.end());
  for (std::size_t i = 0; i < eqs.rows(); ++i) {
    const auto e = eqs.row(i);
    std::size_t pc = 0;
    while (pc < e.size() && e[pc].is_zero()) ++pc;
    if (pc == e.size() || v[pc].is_zero()) continue;
    const Rational f = v[pc] / e[pc];
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!e[j].is_zero()) v[j] -= f * e[j];
  }
  return primitive(v);
}

/// Generator rows rescaled: leading coordinate 1 for points, coprime integers for rays.
inline QVector canonical_generator(std::span<const Rational> g) {
  if (g.empty() || g[0].is_zero()) return primitive(g);
  QVector v(g.begin(), g.end());
  const Rational lead = v[0];
  for (auto& x : v) x /= lead;
  return v;
}

// ---------------------------------------------------------------------------
// homogenization

/// Cone of the polyhedron {x : A (1,x) >= 0, E (1,x) = 0}: the rows of A and E
/// are used as they are, and y0 >= 0 is appended to the inequalities.
/// `columns` fixes d+1 when both lists are empty.
inline ConeConstraints homogenize_h(const QMatrix& inequalities, const QMatrix& equations,
                                    std::size_t columns = 0) {
  std::size_t n = columns;
  if (inequalities.rows() > 0) n = inequalities.cols();
  if (equations.rows() > 0) {
    if (inequalities.rows() > 0 && equations.cols() != n)
      throw DimensionMismatch("inequalities and equations have different lengths");
    n = equations.cols();
  }
  if (n == 0) throw DimensionMismatch("cannot determine the ambient dimension of an empty description");
  ConeConstraints c;
  c.inequalities = QMatrix(0, n);
  for (std::size_t i = 0; i < inequalities.rows(); ++i) c.inequalities.append_row(inequalities.row(i));
  QVector far(n);
  far[0] = 1;
  c.inequalities.append_row(far);
  c.equations = equations.rows() > 0 ? equations : QMatrix(0, n);
  return c;
}

// ---------------------------------------------------------------------------
// double description

namespace detail {

struct DdRay {
  QVector v;
  boost::dynamic_bitset<> zeros;  // processed constraints tight at v
};

inline void scale_down(QVector& v) { v = primitive(v); }

}  // namespace detail

/// Extreme rays and lineality space of {y : ineqs·y >= 0, eqs·y = 0}.
///
/// Constraints are inserted one at a time (equations first, then inequalities in
/// the requested order). Adjacency of a positive and a negative ray is decided
/// combinatorially: no third ray is tight on every constraint both are tight on.
inline ConeDescription double_description(const QMatrix& ineqs, const QMatrix& eqs = {},
                                          InsertionOrder order = InsertionOrder::Given) {
  const std::size_t n = ineqs.rows() > 0 ? ineqs.cols() : eqs.cols();
  if (eqs.rows() > 0 && eqs.cols() != n) throw DimensionMismatch("constraint rows of different lengths");

  struct Constraint {
    QVector a;
    bool equality;
  };
  std::vector<Constraint> constraints;
  for (std::size_t i = 0; i < eqs.rows(); ++i) constraints.push_back({eqs.row_vector(i), true});
  std::vector<QVector> rows = ineqs.row_list();
  if (order == InsertionOrder::Lexicographic) std::sort(rows.begin(), rows.end());
  for (auto& r : rows) constraints.push_back({std::move(r), false});

  std::vector<QVector> lineality;
  for (std::size_t j = 0; j < n; ++j) {
    QVector e(n);
    e[j] = 1;
    lineality.push_back(std::move(e));
  }
  std::vector<detail::DdRay> rays;
  const std::size_t m = constraints.size();

  for (std::size_t ci = 0; ci < m; ++ci) {
    const QVector& a = constraints[ci].a;
    const bool equality = constraints[ci].equality;

    // A lineality direction not in the hyperplane: sweep everything into the hyperplane.
    std::size_t li = 0;
    Rational al;
    for (; li < lineality.size(); ++li) {
      al = dot(a, lineality[li]);
      if (!al.is_zero()) break;
    }
    if (li < lineality.size()) {
      QVector l = std::move(lineality[li]);
      lineality.erase(lineality.begin() + static_cast<std::ptrdiff_t>(li));
      if (al.sign() < 0) {
        for (auto& x : l) x = -x;
        al = -al;
      }
      auto project = [&](QVector& v) {
        const Rational av = dot(a, v);
        if (av.is_zero()) return;
        const Rational f = av / al;
        for (std::size_t j = 0; j < n; ++j)
          if (!l[j].is_zero()) v[j] -= f * l[j];
        detail::scale_down(v);
      };
      for (auto& w : lineality) project(w);
      for (auto& r : rays) {
        project(r.v);
        r.zeros.resize(m);
        r.zeros.set(ci);
      }
      if (!equality) {
        detail::DdRay r{primitive(l), boost::dynamic_bitset<>(m)};
        for (std::size_t k = 0; k < ci; ++k) r.zeros.set(k);
        rays.push_back(std::move(r));
      }
      continue;
    }

    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      rays[r].zeros.resize(m);
      val[r] = dot(a, rays[r].v);
      if (val[r].sign() > 0)
        pos.push_back(r);
      else if (val[r].sign() < 0)
        neg.push_back(r);
      else
        rays[r].zeros.set(ci);
    }

    std::vector<detail::DdRay> next;
    for (std::size_t r = 0; r < rays.size(); ++r)
      if (val[r].is_zero() || (val[r].sign() > 0 && !equality)) next.push_back(rays[r]);

    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        boost::dynamic_bitset<> common = rays[p].zeros & rays[q].zeros;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.is_subset_of(rays[r].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        detail::DdRay nr;
        nr.v.resize(n);
        for (std::size_t j = 0; j < n; ++j) nr.v[j] = val[p] * rays[q].v[j] - val[q] * rays[p].v[j];
        detail::scale_down(nr.v);
        nr.zeros = std::move(common);
        nr.zeros.set(ci);
        next.push_back(std::move(nr));
      }
    }
    rays = std::move(next);
  }

  ConeDescription out;
  QMatrix lin = QMatrix::from_rows(lineality, n);
  out.lineality = canonical_equations(lin, n);
  out.generators = QMatrix(0, n);
  for (const auto& r : rays) out.generators.append_row(reduce_modulo(r.v, out.lineality));
  return out;
}

/// double_description applied to homogenize_h's output.
inline ConeDescription double_description(const ConeConstraints& c,
                                          InsertionOrder order = InsertionOrder::Given) {
  return double_description(c.inequalities, c.equations, order);
}

struct DehomogenizedCone {
  QMatrix vertices;  ///< generators with leading coordinate 1
  QMatrix rays;      ///< generators with leading coordinate 0
  QMatrix lineality;
  bool pointed = true;
  bool feasible = false;
};

inline DehomogenizedCone dehomogenize(const ConeDescription& cone) {
  const std::size_t n = std::max(cone.generators.cols(), cone.lineality.cols());
  DehomogenizedCone out;
  out.vertices = QMatrix(0, n);
  out.rays = QMatrix(0, n);
  out.lineality = cone.lineality;
  for (std::size_t i = 0; i < cone.generators.rows(); ++i) {
    const auto g = cone.generators.row(i);
    if (g[0].sign() > 0)
      out.vertices.append_row(canonical_generator(g));
    else if (g[0].is_zero())
      out.rays.append_row(primitive(g));
  }
  out.pointed = cone.lineality.rows() == 0;
  out.feasible = out.vertices.rows() > 0;
  return out;
}

// ---------------------------------------------------------------------------
// primal hull through cone duality

struct FacetDescription {
  QMatrix facets;       ///< irredundant, canonical modulo affine_hull
  QMatrix affine_hull;  ///< canonical equations
};

/// Facets of conv(points) + cone(rays) + lin(lineality), all given as homogeneous rows.
inline FacetDescription facets_from_generators(const QMatrix& generators, const QMatrix& lineality = {}) {
  if (generators.rows() == 0) throw DimensionMismatch("no generators given");
  const auto dual = double_description(generators, lineality);
  FacetDescription out;
  out.affine_hull = dual.lineality;
  out.facets = dual.generators;
  // A single point: the only extreme ray of the dual cone is the trivial inequality.
  if (rank(generators.stack(lineality)) == 1 && generators(0, 0).sign() != 0)
    out.facets = QMatrix(0, generators.cols());
  return out;
}

// ---------------------------------------------------------------------------
// beneath-beyond

struct BeneathBeyondResult {
  QMatrix facets;                    ///< canonical modulo affine_hull
  QMatrix affine_hull;               ///< canonical equations
  IncidenceList facet_points;        ///< per facet: input indices of the vertices on it
  IndexSet vertices;                 ///< input indices of the vertices of the hull
  Triangulation triangulation;       ///< placing triangulation, input indices
  int dim = -1;
  bool essentially_generic = true;
};

namespace detail {

inline std::size_t rank_of(const QMatrix& pts, const IndexSet& idx) {
  if (idx.empty()) return 0;
  return rank(pts.select_rows(idx));
}

/// The inequality vanishing on `on`, reduced modulo `eqs`, positive at `inside`.
inline QVector facet_through(const QMatrix& pts, const IndexSet& on, const QMatrix& eqs,
                             std::span<const Rational> inside) {
  const std::size_t n = pts.cols();
  QMatrix k = on.empty() ? QMatrix::identity(n) : kernel_basis(pts.select_rows(on));
  for (std::size_t i = 0; i < k.rows(); ++i) {
    QVector a = reduce_modulo(k.row(i), eqs);
    if (is_zero(a)) continue;
    const Rational s = dot(a, inside);
    if (s.is_zero()) continue;
    if (s.sign() < 0)
      for (auto& x : a) x = -x;
    return a;
  }
  throw std::logic_error("beneath_beyond: degenerate facet vertex set");
}

}  // namespace detail

/// Incremental convex hull of affine points (leading coordinate 1), in input order.
///
/// Points already inside the current hull are skipped. A point outside the
/// current affine hull turns the polytope into a pyramid; otherwise the facets
/// visible from the point are replaced by the cones over the horizon ridges,
/// and the boundary simplices on visible facets are coned to the new point.
inline BeneathBeyondResult beneath_beyond(const QMatrix& points) {
  if (points.rows() == 0) throw DimensionMismatch("beneath_beyond needs at least one point");
  const std::size_t n = points.cols();
  for (std::size_t i = 0; i < points.rows(); ++i)
    if (points(i, 0) != 1)
      throw UnsupportedInput("beneath_beyond accepts affine points only (leading coordinate 1); row " +
                             std::to_string(i) + " is not");

  struct Facet {
    QVector a;
    IndexSet on;  // placed points on the hyperplane
  };

  BeneathBeyondResult res;
  IndexSet placed;
  QVector inside(n);  // sum of placed points; strictly interior relative to the affine hull
  QMatrix eqs;
  std::vector<Facet> facets;
  int dim = -1;

  auto add_inside = [&](std::size_t p) {
    for (std::size_t j = 0; j < n; ++j) inside[j] += points(p, j);
  };
  auto on_hyperplane = [&](const QVector& a, int p) { return dot(a, points.row(static_cast<std::size_t>(p))).is_zero(); };

  std::vector<QVector> seen;
  for (std::size_t pi = 0; pi < points.rows(); ++pi) {
    const int p = static_cast<int>(pi);
    const auto pt = points.row(pi);
    QVector pv(pt.begin(), pt.end());
    if (std::find(seen.begin(), seen.end(), pv) != seen.end()) continue;  // duplicate
    seen.push_back(pv);

    if (dim < 0) {
      placed.push_back(p);
      add_inside(pi);
      dim = 0;
      eqs = canonical_equations(kernel_basis(points.select_rows(placed)), n);
      facets.push_back({detail::facet_through(points, {}, eqs, inside), {}});
      res.triangulation.push_back({p});
      continue;
    }

    bool in_hull = true;
    for (std::size_t e = 0; e < eqs.rows(); ++e)
      if (!dot(eqs.row(e), pt).is_zero()) in_hull = false;

    if (!in_hull) {
      // pyramid over the current polytope with apex p
      std::vector<Facet> next;
      for (auto& f : facets) next.push_back({{}, unite(f.on, {p})});
      next.push_back({{}, placed});
      for (auto& s : res.triangulation) s = unite(s, {p});
      placed.push_back(p);
      add_inside(pi);
      ++dim;
      eqs = canonical_equations(kernel_basis(points.select_rows(placed)), n);
      for (auto& f : next) f.a = detail::facet_through(points, f.on, eqs, inside);
      facets = std::move(next);
      continue;
    }

    std::vector<int> side(facets.size());
    bool any_visible = false;
    for (std::size_t f = 0; f < facets.size(); ++f) {
      side[f] = dot(facets[f].a, pt).sign();
      if (side[f] < 0) any_visible = true;
      if (side[f] == 0) res.essentially_generic = false;
    }
    if (!any_visible) {
      res.essentially_generic = false;
      continue;
    }

    // cone the boundary simplices lying on visible facets
    Triangulation added;
    for (const auto& s : res.triangulation) {
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        IndexSet face = s;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
        for (std::size_t f = 0; f < facets.size(); ++f) {
          if (side[f] < 0 && is_subset(face, facets[f].on)) {
            added.push_back(unite(face, {p}));
            break;
          }
        }
      }
    }

    placed.push_back(p);
    IndexSet placed_sorted = make_set(placed);
    QVector next_inside = inside;
    for (std::size_t j = 0; j < n; ++j) next_inside[j] += pt[j];

    std::vector<Facet> next;
    for (std::size_t f = 0; f < facets.size(); ++f) {
      if (side[f] < 0) continue;
      Facet g = facets[f];
      if (side[f] == 0) g.on = unite(g.on, {p});
      next.push_back(std::move(g));
    }
    const std::size_t kept = next.size();
    for (std::size_t v = 0; v < facets.size(); ++v) {
      if (side[v] >= 0) continue;
      for (std::size_t b = 0; b < facets.size(); ++b) {
        if (side[b] <= 0) continue;
        IndexSet ridge = intersect(facets[v].on, facets[b].on);
        if (detail::rank_of(points, ridge) != static_cast<std::size_t>(dim - 1)) continue;
        QVector a = detail::facet_through(points, unite(ridge, {p}), eqs, next_inside);
        bool dup = false;
        for (std::size_t k = kept; k < next.size() && !dup; ++k) dup = next[k].a == a;
        if (dup) continue;
        IndexSet on;
        for (int q : placed_sorted)
          if (on_hyperplane(a, q)) on.push_back(q);
        next.push_back({std::move(a), std::move(on)});
      }
    }
    facets = std::move(next);
    inside = std::move(next_inside);
    res.triangulation.insert(res.triangulation.end(), added.begin(), added.end());
  }

  res.dim = dim;
  res.affine_hull = eqs;
  IndexSet placed_sorted = make_set(placed);

  // vertex ⇔ the facets through it meet in no other placed point
  if (dim == 0) {
    res.vertices = placed_sorted;
  } else {
    for (int v : placed_sorted) {
      IndexSet common = placed_sorted;
      for (const auto& f : facets)
        if (contains(f.on, v)) common = intersect(common, f.on);
      if (common.size() == 1) res.vertices.push_back(v);
    }
  }
  res.facets = QMatrix(0, n);
  if (dim > 0) {
    for (const auto& f : facets) {
      res.facets.append_row(f.a);
      res.facet_points.push_back(intersect(f.on, res.vertices));
    }
  }
  return res;
}

/// Facet adjacency: two facets are adjacent iff their common points span a ridge.
inline Graph facet_adjacency(const QMatrix& points, const IncidenceList& facet_points, int dim) {
  Graph g;
  g.nodes = static_cast<int>(facet_points.size());
  for (std::size_t i = 0; i < facet_points.size(); ++i)
    for (std::size_t j = i + 1; j < facet_points.size(); ++j) {
      const IndexSet common = intersect(facet_points[i], facet_points[j]);
      if (dim >= 1 && detail::rank_of(points, common) == static_cast<std::size_t>(dim - 1))
        g.add_edge(static_cast<int>(i), static_cast<int>(j));
    }
  g.normalize();
  return g;
}

}  // namespace polyq
