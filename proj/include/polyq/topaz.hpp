#pragma once

// Finite simplicial complexes given by their facets, and integral (co)homology
// through Smith normal forms of the boundary matrices.

#include "polyq/index_set.hpp"
#include "polyq/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyq {

/// Dense integer matrix.
struct ZMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Integer> a;

  ZMatrix() = default;
  ZMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  Integer& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  ZMatrix transpose() const {
    ZMatrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  friend ZMatrix operator*(const ZMatrix& x, const ZMatrix& y) {
    if (x.cols != y.rows) throw DimensionMismatch("integer matrix product shape mismatch");
    ZMatrix p(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
      for (std::size_t k = 0; k < x.cols; ++k) {
        if (x(i, k) == 0) continue;
        for (std::size_t j = 0; j < y.cols; ++j) p(i, j) += x(i, k) * y(k, j);
      }
    return p;
  }
  bool is_zero() const {
    return std::all_of(a.begin(), a.end(), [](const Integer& v) { return v == 0; });
  }
};

struct SimplicialComplex {
  std::vector<IndexSet> facets;  ///< maximal faces, each ascending
  int n_vertices = 0;

  int dim() const {
    int d = -1;
    for (const auto& f : facets) d = std::max(d, static_cast<int>(f.size()) - 1);
    return d;
  }
};

/// Builds a complex from any generating sets: keeps only inclusion-maximal ones.
inline SimplicialComplex make_complex(std::vector<IndexSet> sets, int n_vertices = -1) {
  for (auto& s : sets) s = make_set(s);
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  SimplicialComplex c;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].empty()) continue;
    bool maximal = true;
    for (std::size_t j = 0; j < sets.size() && maximal; ++j)
      if (i != j && sets[j].size() > sets[i].size() && is_subset(sets[i], sets[j])) maximal = false;
    if (maximal) c.facets.push_back(sets[i]);
  }
  c.n_vertices = n_vertices < 0 ? vertex_count(c.facets) : n_vertices;
  for (const auto& f : c.facets)
    if (f.front() < 0 || f.back() >= c.n_vertices) throw std::out_of_range("complex vertex index out of range");
  return c;
}

/// All k-faces (k+1 vertices) in lexicographic order.
inline std::vector<IndexSet> faces_of_dim(const SimplicialComplex& c, int k) {
  std::set<IndexSet> out;
  if (k < 0) return {};
  const auto size = static_cast<std::size_t>(k) + 1;
  for (const auto& f : c.facets) {
    if (f.size() < size) continue;
    std::vector<bool> pick(f.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      IndexSet s;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (pick[i]) s.push_back(f[i]);
      out.insert(std::move(s));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return {out.begin(), out.end()};
}

/// ∂_k: columns are k-faces, rows (k-1)-faces; removing the i-th vertex gives sign (-1)^i.
inline ZMatrix boundary_matrix(int k, const SimplicialComplex& c) {
  if (k < 0 || k > c.dim())
    throw std::out_of_range("boundary_matrix: k = " + std::to_string(k) + " outside 0.." + std::to_string(c.dim()));
  const auto upper = faces_of_dim(c, k);
  const auto lower = faces_of_dim(c, k - 1);
  std::map<IndexSet, std::size_t> row_of;
  for (std::size_t i = 0; i < lower.size(); ++i) row_of.emplace(lower[i], i);
  ZMatrix m(lower.size(), upper.size());
  if (k == 0) return m;
  for (std::size_t j = 0; j < upper.size(); ++j)
    for (std::size_t i = 0; i < upper[j].size(); ++i) {
      IndexSet face = upper[j];
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      m(row_of.at(face), j) = (i % 2 == 0) ? 1 : -1;
    }
  return m;
}

struct SmithForm {
  std::vector<Integer> diagonal;  ///< nonzero invariant factors, d1 | d2 | ...
  std::size_t rank = 0;
};

/// Pivot on a smallest nonzero entry, clear its row and column by Euclidean steps,
/// then restore divisibility of the remaining block before moving on.
inline SmithForm smith_normal_form(ZMatrix m) {
  SmithForm out;
  const std::size_t r = m.rows, c = m.cols;
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i != j)
      for (std::size_t k = 0; k < c; ++k) std::swap(m(i, k), m(j, k));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i != j)
      for (std::size_t k = 0; k < r; ++k) std::swap(m(k, i), m(k, j));
  };
  for (std::size_t t = 0; t < std::min(r, c); ++t) {
    for (;;) {
      // smallest |entry| in the trailing block
      std::size_t pi = r, pj = c;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (m(i, j) != 0 && (pi == r || boost::multiprecision::abs(m(i, j)) < boost::multiprecision::abs(m(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == r) {
        out.rank = t;
        return out;
      }
      swap_rows(t, pi);
      swap_cols(t, pj);
      const Integer p = m(t, t);
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (m(i, t) == 0) continue;
        const Integer q = m(i, t) / p;
        for (std::size_t k = t; k < c; ++k) m(i, k) -= q * m(t, k);
        if (m(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (m(t, j) == 0) continue;
        const Integer q = m(t, j) / p;
        for (std::size_t k = t; k < r; ++k) m(k, j) -= q * m(k, t);
        if (m(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility: fold a row holding a non-multiple into the pivot row
      bool divides = true;
      for (std::size_t i = t + 1; i < r && divides; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (m(i, j) % p != 0) {
            for (std::size_t k = t; k < c; ++k) m(t, k) += m(i, k);
            divides = false;
            break;
          }
      if (divides) break;
    }
    out.diagonal.push_back(boost::multiprecision::abs(m(t, t)));
    out.rank = t + 1;
  }
  return out;
}

struct HomologyGroup {
  std::int64_t betti = 0;
  std::vector<Integer> torsion;  ///< factors > 1

  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

/// "0", "Z^2", "Z/2", "Z^1 + Z/2 + Z/4"
inline std::string to_string(const HomologyGroup& g) {
  std::string s;
  if (g.betti > 0) s = "Z^" + std::to_string(g.betti);
  for (const auto& t : g.torsion) s += (s.empty() ? "" : " + ") + ("Z/" + t.str());
  return s.empty() ? "0" : s;
}

namespace detail {

inline std::vector<Integer> torsion_of(const SmithForm& s) {
  std::vector<Integer> t;
  for (const auto& d : s.diagonal)
    if (d > 1) t.push_back(d);
  return t;
}

}  // namespace detail

/// H_0..H_dim with integer coefficients; non-reduced unless `reduced`.
inline std::vector<HomologyGroup> homology(const SimplicialComplex& c, bool reduced = false) {
  const int dim = c.dim();
  std::vector<HomologyGroup> out(static_cast<std::size_t>(std::max(dim + 1, 0)));
  std::vector<SmithForm> snf(static_cast<std::size_t>(dim + 2));
  for (int k = 0; k <= dim; ++k) snf[static_cast<std::size_t>(k)] = smith_normal_form(boundary_matrix(k, c));
  for (int k = 0; k <= dim; ++k) {
    const auto fk = static_cast<std::int64_t>(faces_of_dim(c, k).size());
    const auto& down = snf[static_cast<std::size_t>(k)];
    const auto& up = snf[static_cast<std::size_t>(k + 1)];
    auto& h = out[static_cast<std::size_t>(k)];
    h.betti = fk - static_cast<std::int64_t>(down.rank) - static_cast<std::int64_t>(up.rank);
    h.torsion = detail::torsion_of(up);
  }
  if (reduced && !out.empty()) out[0].betti -= 1;
  return out;
}

/// H^0..H^dim from the coboundary maps δ^k = ∂_{k+1}^T.
inline std::vector<HomologyGroup> cohomology(const SimplicialComplex& c, bool reduced = false) {
  const int dim = c.dim();
  std::vector<HomologyGroup> out(static_cast<std::size_t>(std::max(dim + 1, 0)));
  // delta[k] = δ^k : C^k -> C^{k+1}
  std::vector<SmithForm> delta(static_cast<std::size_t>(dim + 1));
  for (int k = 0; k < dim; ++k)
    delta[static_cast<std::size_t>(k)] = smith_normal_form(boundary_matrix(k + 1, c).transpose());
  for (int k = 0; k <= dim; ++k) {
    const auto fk = static_cast<std::int64_t>(faces_of_dim(c, k).size());
    const SmithForm none;
    const auto& out_map = delta[static_cast<std::size_t>(k)];
    const auto& in_map = k > 0 ? delta[static_cast<std::size_t>(k - 1)] : none;
    auto& h = out[static_cast<std::size_t>(k)];
    h.betti = fk - static_cast<std::int64_t>(out_map.rank) - static_cast<std::int64_t>(in_map.rank);
    h.torsion = detail::torsion_of(in_map);
  }
  if (reduced && !out.empty()) out[0].betti -= 1;
  return out;
}

inline std::int64_t euler_characteristic(const SimplicialComplex& c) {
  std::int64_t chi = 0;
  for (int k = 0; k <= c.dim(); ++k) {
    const auto fk = static_cast<std::int64_t>(faces_of_dim(c, k).size());
    chi += (k % 2 == 0) ? fk : -fk;
  }
  return chi;
}

}  // namespace polyq
