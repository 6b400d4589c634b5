#pragma once

// Sorted vertex-index sets and the incidence/graph containers built from them.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace polyq {

/// Ascending, duplicate-free list of indices.
using IndexSet = std::vector<int>;
/// One IndexSet per facet (or cell, or simplex).
using IncidenceList = std::vector<IndexSet>;
using Triangulation = std::vector<IndexSet>;

inline IndexSet make_set(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline IndexSet intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet unite(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool contains(const IndexSet& s, int x) { return std::binary_search(s.begin(), s.end(), x); }

inline std::string format_set(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out + "}";
}

struct IndexSetHash {
  std::size_t operator()(const IndexSet& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (int x : s) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ull;
    return h ^ s.size();
  }
};

/// Number of vertices referenced by an incidence list (largest index + 1).
inline int vertex_count(const IncidenceList& inc) {
  int n = 0;
  for (const auto& row : inc)
    if (!row.empty()) n = std::max(n, row.back() + 1);
  return n;
}

/// Undirected simple graph on nodes 0..n-1; edges stored as (u < v) pairs, sorted.
struct Graph {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;

  void add_edge(int u, int v) {
    if (u == v) return;
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
  }
  void normalize() {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
    for (auto [u, v] : edges) {
      adj[static_cast<std::size_t>(u)].push_back(v);
      adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return adj;
  }
  friend bool operator==(const Graph&, const Graph&) = default;
};

}  // namespace polyq
