#pragma once

/**
 * Combinatorial equivalence of vertex-facet incidence structures.
 *
 * An incidence list is viewed as a two-colored bipartite graph: nodes
 * 0..n-1 are vertices, nodes n..n+m-1 are facets. Only side-preserving maps
 * are considered (vertices to vertices, facets to facets).
 *
 * The canonical labeling is found by individualization-refinement: the
 * ordered partition is refined to an equitable one (cells split by the sorted
 * multiset of neighbor cell indices, iterated to a fixpoint); then the
 * smallest non-singleton cell (first one on ties) is branched on, each member
 * in turn placed in a singleton cell in front of the rest. Every discrete
 * leaf gives a relabeled incidence structure; the lexicographically smallest
 * one is the canonical form, and the number of leaves reaching it is the
 * order of the automorphism group.
 */

#include "polyq/index_set.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyq {

struct IsoCertificate {
  std::vector<int> vertex_map;  ///< vertex of a -> vertex of b
  std::vector<int> facet_map;   ///< facet of a -> facet of b
};

struct IsoSearchStats {
  std::size_t tree_nodes = 0;
  std::size_t leaves = 0;
  std::size_t max_level = 0;
};

struct CanonicalLabeling {
  /// node_at[k] = original node placed at canonical position k.
  std::vector<int> node_at;
  /// Relabeled structure: n, m, then per canonical facet its sorted canonical vertex positions.
  std::vector<int> form;
  std::uint64_t automorphisms = 0;
  IsoSearchStats stats;
};

namespace detail {

class IsoSearch {
 public:
  IsoSearch(const IncidenceList& inc, int n_vertices)
      : n_(n_vertices < 0 ? vertex_count(inc) : n_vertices), m_(static_cast<int>(inc.size())) {
    adj_.resize(static_cast<std::size_t>(n_ + m_));
    for (int f = 0; f < m_; ++f)
      for (int v : inc[static_cast<std::size_t>(f)]) {
        adj_[static_cast<std::size_t>(v)].push_back(n_ + f);
        adj_[static_cast<std::size_t>(n_ + f)].push_back(v);
      }
    facets_ = inc;
  }

  CanonicalLabeling run() {
    std::vector<std::vector<int>> cells;
    std::vector<int> verts(static_cast<std::size_t>(n_)), facets(static_cast<std::size_t>(m_));
    for (int i = 0; i < n_; ++i) verts[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < m_; ++i) facets[static_cast<std::size_t>(i)] = n_ + i;
    if (!verts.empty()) cells.push_back(verts);
    if (!facets.empty()) cells.push_back(facets);
    search(std::move(cells), 0);
    return std::move(best_);
  }

 private:
  void refine(std::vector<std::vector<int>>& cells) const {
    std::vector<int> cell_of(static_cast<std::size_t>(n_ + m_));
    for (;;) {
      for (std::size_t c = 0; c < cells.size(); ++c)
        for (int x : cells[c]) cell_of[static_cast<std::size_t>(x)] = static_cast<int>(c);
      std::vector<std::vector<int>> next;
      next.reserve(cells.size());
      for (auto& cell : cells) {
        if (cell.size() == 1) {
          next.push_back(cell);
          continue;
        }
        std::vector<std::pair<std::vector<int>, int>> keyed;
        keyed.reserve(cell.size());
        for (int x : cell) {
          std::vector<int> sig;
          for (int y : adj_[static_cast<std::size_t>(x)]) sig.push_back(cell_of[static_cast<std::size_t>(y)]);
          std::sort(sig.begin(), sig.end());
          keyed.emplace_back(std::move(sig), x);
        }
        std::sort(keyed.begin(), keyed.end());
        std::size_t start = 0;
        for (std::size_t i = 1; i <= keyed.size(); ++i) {
          if (i == keyed.size() || keyed[i].first != keyed[start].first) {
            std::vector<int> part;
            for (std::size_t k = start; k < i; ++k) part.push_back(keyed[k].second);
            next.push_back(std::move(part));
            start = i;
          }
        }
      }
      const bool stable = next.size() == cells.size();
      cells = std::move(next);
      if (stable) return;
    }
  }

  std::vector<int> leaf_form(const std::vector<int>& node_at) const {
    std::vector<int> pos(static_cast<std::size_t>(n_ + m_));
    for (std::size_t k = 0; k < node_at.size(); ++k) pos[static_cast<std::size_t>(node_at[k])] = static_cast<int>(k);
    std::vector<int> form{n_, m_};
    for (int k = n_; k < n_ + m_; ++k) {
      const int f = node_at[static_cast<std::size_t>(k)] - n_;
      std::vector<int> row;
      for (int v : facets_[static_cast<std::size_t>(f)]) row.push_back(pos[static_cast<std::size_t>(v)]);
      std::sort(row.begin(), row.end());
      form.push_back(static_cast<int>(row.size()));
      form.insert(form.end(), row.begin(), row.end());
    }
    return form;
  }

  void search(std::vector<std::vector<int>> cells, std::size_t level) {
    ++best_.stats.tree_nodes;
    best_.stats.max_level = std::max(best_.stats.max_level, level);
    refine(cells);
    std::size_t target = cells.size();
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (cells[c].size() > 1 && (target == cells.size() || cells[c].size() < cells[target].size())) target = c;
    if (target == cells.size()) {
      ++best_.stats.leaves;
      std::vector<int> node_at;
      for (const auto& c : cells) node_at.push_back(c.front());
      auto form = leaf_form(node_at);
      if (best_.automorphisms == 0 || form < best_.form) {
        best_.form = std::move(form);
        best_.node_at = std::move(node_at);
        best_.automorphisms = 1;
      } else if (form == best_.form) {
        ++best_.automorphisms;
      }
      return;
    }
    std::vector<int> members = cells[target];
    std::sort(members.begin(), members.end());
    for (int x : members) {
      std::vector<std::vector<int>> branch;
      branch.reserve(cells.size() + 1);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c != target) {
          branch.push_back(cells[c]);
          continue;
        }
        std::vector<int> rest;
        for (int y : cells[c])
          if (y != x) rest.push_back(y);
        branch.push_back({x});
        branch.push_back(std::move(rest));
      }
      search(std::move(branch), level + 1);
    }
  }

  int n_, m_;
  std::vector<std::vector<int>> adj_;
  IncidenceList facets_;
  CanonicalLabeling best_;
};

}  // namespace detail

/// `n_vertices` < 0 infers the vertex count from the largest index.
inline CanonicalLabeling canonical_labeling(const IncidenceList& inc, int n_vertices = -1) {
  return detail::IsoSearch(inc, n_vertices).run();
}

/// Canonical byte sequence: equal iff the incidence structures are isomorphic.
inline std::string canonical_form(const IncidenceList& inc, int n_vertices = -1) {
  const auto lab = canonical_labeling(inc, n_vertices);
  std::string bytes;
  for (int x : lab.form) {
    const auto u = static_cast<std::uint32_t>(x);
    for (int s = 24; s >= 0; s -= 8) bytes.push_back(static_cast<char>((u >> s) & 0xff));
  }
  return bytes;
}

inline std::uint64_t automorphism_order(const IncidenceList& inc, int n_vertices = -1) {
  return canonical_labeling(inc, n_vertices).automorphisms;
}

/// Applies both maps to `a` and compares with `b` row by row.
inline bool verify_certificate(const IncidenceList& a, const IncidenceList& b, const IsoCertificate& cert) {
  if (a.size() != b.size() || cert.facet_map.size() != a.size()) return false;
  std::vector<int> vm = cert.vertex_map;
  std::vector<int> sorted_vm = vm, sorted_fm = cert.facet_map;
  std::sort(sorted_vm.begin(), sorted_vm.end());
  std::sort(sorted_fm.begin(), sorted_fm.end());
  for (std::size_t i = 0; i < sorted_vm.size(); ++i)
    if (sorted_vm[i] != static_cast<int>(i)) return false;
  for (std::size_t i = 0; i < sorted_fm.size(); ++i)
    if (sorted_fm[i] != static_cast<int>(i)) return false;
  for (std::size_t f = 0; f < a.size(); ++f) {
    IndexSet image;
    for (int v : a[f]) {
      if (v < 0 || static_cast<std::size_t>(v) >= vm.size()) return false;
      image.push_back(vm[static_cast<std::size_t>(v)]);
    }
    if (make_set(image) != b[static_cast<std::size_t>(cert.facet_map[f])]) return false;
  }
  return true;
}

struct IsoResult {
  bool isomorphic = false;
  std::optional<IsoCertificate> certificate;
  CanonicalLabeling a, b;
};

/// Side-preserving isomorphism test; a returned certificate has been verified.
inline IsoResult check_iso(const IncidenceList& a, const IncidenceList& b, int na = -1, int nb = -1) {
  IsoResult r;
  r.a = canonical_labeling(a, na);
  r.b = canonical_labeling(b, nb);
  if (r.a.form != r.b.form) return r;
  const int n = r.a.form[0];
  IsoCertificate cert;
  cert.vertex_map.assign(static_cast<std::size_t>(n), -1);
  cert.facet_map.assign(a.size(), -1);
  for (std::size_t k = 0; k < r.a.node_at.size(); ++k) {
    const int x = r.a.node_at[k], y = r.b.node_at[k];
    if (x < n)
      cert.vertex_map[static_cast<std::size_t>(x)] = y;
    else
      cert.facet_map[static_cast<std::size_t>(x - n)] = y - n;
  }
  if (!verify_certificate(a, b, cert)) throw std::logic_error("check_iso: certificate failed verification");
  r.isomorphic = true;
  r.certificate = std::move(cert);
  return r;
}

}  // namespace polyq
