#pragma once

// Derived properties of polytopes: dimension and affine hull, vertex-facet
// incidences, face lattice, f- and h-vector, vertex and dual graphs, the
// SIMPLE/SIMPLICIAL/CUBICAL/BOUNDED flags, volume and Gale transform.

#include "polyq/hull.hpp"
#include "polyq/index_set.hpp"
#include "polyq/iso.hpp"
#include "polyq/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace polyq {

class PreconditionViolation : public std::runtime_error {
 public:
  explicit PreconditionViolation(const std::string& what) : std::runtime_error(what) {}
};

struct AffineHull {
  int dim = -1;
  QMatrix equations;
};

/// Dimension and canonical equations of the affine hull of homogeneous rows.
inline AffineHull affine_hull_dim(const QMatrix& vertices) {
  AffineHull h;
  if (vertices.rows() == 0) return h;
  h.dim = static_cast<int>(rank(vertices)) - 1;
  h.equations = canonical_equations(kernel_basis(vertices), vertices.cols());
  return h;
}

/// Vertex v is listed under facet F iff F vanishes at v.
inline IncidenceList incidences(const QMatrix& vertices, const QMatrix& facets) {
  IncidenceList inc(facets.rows());
  for (std::size_t f = 0; f < facets.rows(); ++f)
    for (std::size_t v = 0; v < vertices.rows(); ++v)
      if (dot(facets.row(f), vertices.row(v)).is_zero()) inc[f].push_back(static_cast<int>(v));
  return inc;
}

// ---------------------------------------------------------------------------
// face lattice

struct FaceLattice {
  std::vector<IndexSet> faces;            ///< vertex set per node
  std::vector<int> rank;                  ///< -1 for the empty face, dim for the polytope
  std::vector<std::pair<int, int>> hasse;  ///< covering pairs (lower node, upper node)
  int top = -1;
  int bottom = -1;
  int dim = -1;

  std::vector<int> nodes_of_rank(int r) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < faces.size(); ++i)
      if (rank[i] == r) out.push_back(static_cast<int>(i));
    return out;
  }
  std::vector<int> parents(int node) const {
    std::vector<int> out;
    for (auto [lo, hi] : hasse)
      if (lo == node) out.push_back(hi);
    return out;
  }
  std::vector<int> children(int node) const {
    std::vector<int> out;
    for (auto [lo, hi] : hasse)
      if (hi == node) out.push_back(lo);
    return out;
  }
};

/// Top-down closure enumeration: the facets of a face F are the inclusion-maximal
/// sets among F ∩ G over facets G not containing F.
inline FaceLattice face_lattice(const IncidenceList& inc, int n_vertices = -1) {
  const int n = n_vertices < 0 ? vertex_count(inc) : n_vertices;
  FaceLattice lat;
  std::unordered_map<IndexSet, int, IndexSetHash> id;
  std::vector<int> depth;
  auto node = [&](const IndexSet& s, int d) {
    auto [it, fresh] = id.try_emplace(s, static_cast<int>(lat.faces.size()));
    if (fresh) {
      lat.faces.push_back(s);
      depth.push_back(d);
    }
    return it->second;
  };

  IndexSet all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  lat.top = node(all, 0);

  std::vector<int> level{lat.top};
  for (int d = 0; !level.empty(); ++d) {
    std::vector<int> next;
    for (int f : level) {
      const IndexSet face = lat.faces[static_cast<std::size_t>(f)];
      if (face.empty()) continue;
      std::vector<IndexSet> cand;
      for (const auto& g : inc)
        if (!is_subset(face, g)) cand.push_back(intersect(face, g));
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      for (std::size_t i = 0; i < cand.size(); ++i) {
        bool maximal = true;
        for (std::size_t j = 0; j < cand.size() && maximal; ++j)
          if (i != j && cand[i].size() < cand[j].size() && is_subset(cand[i], cand[j])) maximal = false;
        if (!maximal) continue;
        const std::size_t before = lat.faces.size();
        const int c = node(cand[i], d + 1);
        lat.hasse.emplace_back(c, f);
        if (lat.faces.size() > before) next.push_back(c);
      }
    }
    level = std::move(next);
  }

  auto empty_it = id.find(IndexSet{});
  if (empty_it == id.end()) {
    // no facets separate the vertices (a point): hang the empty face below the minimal faces
    int deepest = 0;
    for (int d : depth) deepest = std::max(deepest, d);
    std::vector<bool> has_child(lat.faces.size(), false);
    for (auto [lo, hi] : lat.hasse) has_child[static_cast<std::size_t>(hi)] = true;
    const int b = node(IndexSet{}, deepest + 1);
    for (std::size_t i = 0; i + 1 < lat.faces.size(); ++i)
      if (!has_child[i]) lat.hasse.emplace_back(b, static_cast<int>(i));
    lat.bottom = b;
  } else {
    lat.bottom = empty_it->second;
  }
  lat.dim = depth[static_cast<std::size_t>(lat.bottom)] - 1;
  lat.rank.resize(lat.faces.size());
  for (std::size_t i = 0; i < lat.faces.size(); ++i) lat.rank[i] = lat.dim - depth[i];
  std::sort(lat.hasse.begin(), lat.hasse.end());
  return lat;
}

/// Dimension from incidences alone (realizability is not checked).
inline int combinatorial_dim(const IncidenceList& inc, int n_vertices = -1) {
  if (inc.empty() && n_vertices <= 0 && vertex_count(inc) == 0) return -1;
  return face_lattice(inc, n_vertices).dim;
}

// ---------------------------------------------------------------------------
// f- and h-vector

struct FHVector {
  std::vector<std::int64_t> f;
  std::optional<std::vector<std::int64_t>> h;
};

inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::vector<std::int64_t> f_vector(const FaceLattice& lat) {
  std::vector<std::int64_t> f(static_cast<std::size_t>(std::max(lat.dim, 0)), 0);
  if (lat.dim == 0) return {1};
  for (int r : lat.rank)
    if (r >= 0 && r < lat.dim) ++f[static_cast<std::size_t>(r)];
  return f;
}

/// h_k = Σ_{i=0..k} (-1)^{k-i} C(d-i, k-i) f_{i-1}, with f_{-1} = 1.
inline std::vector<std::int64_t> h_from_f(const std::vector<std::int64_t>& f, int d) {
  std::vector<std::int64_t> h(static_cast<std::size_t>(d + 1), 0);
  for (int k = 0; k <= d; ++k)
    for (int i = 0; i <= k; ++i) {
      const std::int64_t fi = i == 0 ? 1 : f[static_cast<std::size_t>(i - 1)];
      const std::int64_t term = binomial(d - i, k - i) * fi;
      h[static_cast<std::size_t>(k)] += ((k - i) % 2 == 0) ? term : -term;
    }
  return h;
}

inline bool is_simplicial(const IncidenceList& inc, int dim) {
  return std::all_of(inc.begin(), inc.end(), [&](const IndexSet& f) { return static_cast<int>(f.size()) == dim; });
}

/// h is present only for simplicial polytopes.
inline FHVector f_h_vector(const FaceLattice& lat) {
  FHVector out;
  out.f = f_vector(lat);
  bool simplicial = true;
  for (int fnode : lat.nodes_of_rank(lat.dim - 1))
    if (static_cast<int>(lat.faces[static_cast<std::size_t>(fnode)].size()) != lat.dim) simplicial = false;
  if (simplicial && lat.dim >= 1) out.h = h_from_f(out.f, lat.dim);
  return out;
}

// ---------------------------------------------------------------------------
// graphs

struct PolytopeGraphs {
  Graph vertex_graph;
  Graph dual_graph;
};

inline PolytopeGraphs graphs(const FaceLattice& lat, const IncidenceList& inc, int n_vertices) {
  PolytopeGraphs g;
  g.vertex_graph.nodes = n_vertices;
  for (int e : lat.nodes_of_rank(1)) {
    const auto& s = lat.faces[static_cast<std::size_t>(e)];
    if (s.size() == 2) g.vertex_graph.add_edge(s[0], s[1]);
  }
  g.vertex_graph.normalize();

  std::unordered_map<IndexSet, int, IndexSetHash> facet_index;
  for (std::size_t f = 0; f < inc.size(); ++f) facet_index.emplace(inc[f], static_cast<int>(f));
  g.dual_graph.nodes = static_cast<int>(inc.size());
  for (int r : lat.nodes_of_rank(lat.dim - 2)) {
    const auto up = lat.parents(r);
    if (up.size() != 2) continue;
    auto a = facet_index.find(lat.faces[static_cast<std::size_t>(up[0])]);
    auto b = facet_index.find(lat.faces[static_cast<std::size_t>(up[1])]);
    if (a != facet_index.end() && b != facet_index.end()) g.dual_graph.add_edge(a->second, b->second);
  }
  g.dual_graph.normalize();
  return g;
}

inline PolytopeGraphs graphs(const IncidenceList& inc, int n_vertices = -1) {
  const int n = n_vertices < 0 ? vertex_count(inc) : n_vertices;
  return graphs(face_lattice(inc, n), inc, n);
}

struct GraphStats {
  bool connected = true;
  std::optional<int> regular_degree;
  int diameter = 0;  ///< -1 when disconnected
};

inline GraphStats graph_stats(const Graph& g) {
  GraphStats s;
  const auto adj = g.adjacency();
  if (g.nodes > 0) {
    const std::size_t deg = adj[0].size();
    if (std::all_of(adj.begin(), adj.end(), [&](const auto& a) { return a.size() == deg; }))
      s.regular_degree = static_cast<int>(deg);
  }
  for (int src = 0; src < g.nodes; ++src) {
    std::vector<int> dist(static_cast<std::size_t>(g.nodes), -1);
    std::deque<int> q{src};
    dist[static_cast<std::size_t>(src)] = 0;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (int v : adj[static_cast<std::size_t>(u)])
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
          q.push_back(v);
        }
    }
    for (int d : dist) {
      if (d < 0) {
        s.connected = false;
        s.diameter = -1;
        return s;
      }
      s.diameter = std::max(s.diameter, d);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// flags

/// Vertex-facet incidences of the k-cube; vertices are bit masks.
inline IncidenceList cube_incidences(int k) {
  IncidenceList inc;
  const int n = 1 << k;
  for (int i = 0; i < k; ++i)
    for (int b = 0; b <= 1; ++b) {
      IndexSet f;
      for (int v = 0; v < n; ++v)
        if (((v >> i) & 1) == b) f.push_back(v);
      inc.push_back(std::move(f));
    }
  return inc;
}

namespace detail {

/// The facet's own vertex-facet incidences (its facets are its children in the lattice).
inline IncidenceList facet_sub_incidences(const FaceLattice& lat, int facet_node) {
  const IndexSet& verts = lat.faces[static_cast<std::size_t>(facet_node)];
  std::unordered_map<int, int> local;
  for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
  IncidenceList sub;
  for (int c : lat.children(facet_node)) {
    IndexSet row;
    for (int v : lat.faces[static_cast<std::size_t>(c)]) row.push_back(local.at(v));
    sub.push_back(make_set(row));
  }
  std::sort(sub.begin(), sub.end());
  return sub;
}

}  // namespace detail

/// Every facet's face lattice is that of a (dim-1)-cube.
inline bool is_cubical(const FaceLattice& lat) {
  const int k = lat.dim - 1;
  if (k < 0) return true;
  if (k > 20) return false;
  const std::size_t nv = std::size_t{1} << k;
  std::optional<std::string> cube_form;
  for (int f : lat.nodes_of_rank(k)) {
    const auto& verts = lat.faces[static_cast<std::size_t>(f)];
    if (verts.size() != nv) return false;
    if (k <= 1) continue;  // points and segments are cubes
    const auto sub = detail::facet_sub_incidences(lat, f);
    if (sub.size() != static_cast<std::size_t>(2 * k)) return false;
    if (!cube_form) cube_form = canonical_form(cube_incidences(k), static_cast<int>(nv));
    if (canonical_form(sub, static_cast<int>(nv)) != *cube_form) return false;
  }
  return true;
}

struct PolytopeFlags {
  bool simple = false;
  bool simplicial = false;
  bool cubical = false;
  bool bounded = false;
};

inline bool is_simple(const IncidenceList& inc, int dim, int n_vertices = -1) {
  const int n = n_vertices < 0 ? vertex_count(inc) : n_vertices;
  std::vector<int> count(static_cast<std::size_t>(n), 0);
  for (const auto& f : inc)
    for (int v : f) ++count[static_cast<std::size_t>(v)];
  return std::all_of(count.begin(), count.end(), [&](int c) { return c == dim; });
}

inline PolytopeFlags flags(const IncidenceList& inc, int dim, bool rays_present, int n_vertices = -1) {
  PolytopeFlags fl;
  fl.simple = is_simple(inc, dim, n_vertices);
  fl.simplicial = is_simplicial(inc, dim);
  fl.cubical = is_cubical(face_lattice(inc, n_vertices));
  fl.bounded = !rays_present;
  return fl;
}

// ---------------------------------------------------------------------------
// volume, Gale transform

/// Σ |det| / k! over the simplices, in the coordinates of the affine hull's pivot
/// columns (k = dimension of the polytope).
inline Rational volume(const QMatrix& vertices, const Triangulation& tri) {
  for (std::size_t i = 0; i < vertices.rows(); ++i)
    if (vertices(i, 0).sign() <= 0) throw PreconditionViolation("volume requires a bounded polytope (BOUNDED)");
  if (vertices.rows() == 0) return 0;
  const auto ech = gauss_reduce(vertices);
  const std::vector<int>& cols = ech.pivot_columns;
  const int k = static_cast<int>(ech.rank) - 1;
  Rational fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  Rational sum = 0;
  for (const auto& s : tri) {
    if (static_cast<int>(s.size()) != k + 1)
      throw DimensionMismatch("triangulation simplex " + format_set(s) + " does not have dim+1 vertices");
    for (int v : s)
      if (v < 0 || static_cast<std::size_t>(v) >= vertices.rows())
        throw DimensionMismatch("triangulation index out of range");
    QMatrix m = vertices.select_rows(s).select_cols(cols);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const Rational lead = vertices(static_cast<std::size_t>(s[i]), 0);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) /= lead;
    }
    sum += abs(determinant(m));
  }
  return sum / fact;
}

/// n×(n-d-1) matrix G with vertices^T · G = 0 (rows are the Gale vectors).
inline QMatrix gale_transform(const QMatrix& vertices) {
  const QMatrix k = kernel_basis(vertices.transpose());
  QMatrix g = k.transpose();
  if (k.rows() == 0) return QMatrix(vertices.rows(), 0);
  return g;
}

}  // namespace polyq
