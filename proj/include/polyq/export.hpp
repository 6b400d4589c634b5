#pragma once

// Graph drawings: DOT text (layout left to graphviz) and a self-contained SVG
// with a spring layout.

#include "polyq/index_set.hpp"
#include "polyq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace polyq {

/// Undirected DOT, or arrows toward larger objective values when `oriented` is given.
/// Nodes are named by their vertex index; directed mode adds the objective value
/// to the label and draws edges between equal values undirected and dashed.
inline std::string to_dot(const Graph& g, const OrientedGraph* oriented = nullptr) {
  std::ostringstream os;
  os << (oriented ? "digraph" : "graph") << " polytope {\n";
  for (int v = 0; v < g.nodes; ++v) {
    os << "  " << v;
    if (oriented) os << " [label=\"" << v << "\\n" << to_string(oriented->values[static_cast<std::size_t>(v)]) << "\"]";
    os << ";\n";
  }
  if (!oriented) {
    for (auto [u, v] : g.edges) os << "  " << u << " -- " << v << ";\n";
  } else {
    for (auto [u, v] : oriented->directed) os << "  " << u << " -> " << v << ";\n";
    for (auto [u, v] : oriented->flat) os << "  " << u << " -> " << v << " [dir=none, style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

/// 32-bit FNV-1a.
inline std::uint32_t fnv1a(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

struct Point2 {
  double x = 0, y = 0;
};

/// Fruchterman-Reingold on the unit square from random starting positions.
inline std::vector<Point2> spring_layout(const Graph& g, std::uint32_t seed, int iterations = 300) {
  const auto n = static_cast<std::size_t>(g.nodes);
  std::vector<Point2> pos(n);
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (auto& p : pos) p = {uniform(), uniform()};
  if (n < 2) return pos;
  const double k = std::sqrt(1.0 / static_cast<double>(n));
  double temp = 0.1;
  for (int it = 0; it < iterations; ++it) {
    std::vector<Point2> disp(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
        const double d = std::max(std::hypot(dx, dy), 1e-6);
        const double f = k * k / d;
        disp[i].x += dx / d * f;
        disp[i].y += dy / d * f;
        disp[j].x -= dx / d * f;
        disp[j].y -= dy / d * f;
      }
    for (auto [u, v] : g.edges) {
      auto& a = pos[static_cast<std::size_t>(u)];
      auto& b = pos[static_cast<std::size_t>(v)];
      const double dx = a.x - b.x, dy = a.y - b.y;
      const double d = std::max(std::hypot(dx, dy), 1e-6);
      const double f = d * d / k;
      disp[static_cast<std::size_t>(u)].x -= dx / d * f;
      disp[static_cast<std::size_t>(u)].y -= dy / d * f;
      disp[static_cast<std::size_t>(v)].x += dx / d * f;
      disp[static_cast<std::size_t>(v)].y += dy / d * f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::max(std::hypot(disp[i].x, disp[i].y), 1e-9);
      const double step = std::min(d, temp);
      pos[i].x = std::clamp(pos[i].x + disp[i].x / d * step, 0.0, 1.0);
      pos[i].y = std::clamp(pos[i].y + disp[i].y / d * step, 0.0, 1.0);
    }
    temp *= 0.985;
  }
  return pos;
}

/// Nodes at the given positions (any scale, y up), straight edges, optional arrows.
inline std::string to_svg(const std::vector<Point2>& pos, const std::vector<std::pair<int, int>>& edges, bool arrows,
                          const std::vector<std::string>& labels = {}) {
  const double size = 400, margin = 30;
  double minx = 0, maxx = 1, miny = 0, maxy = 1;
  if (!pos.empty()) {
    minx = maxx = pos[0].x;
    miny = maxy = pos[0].y;
    for (const auto& p : pos) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  }
  const double scale = (size - 2 * margin) / std::max({maxx - minx, maxy - miny, 1e-9});
  auto sx = [&](const Point2& p) { return margin + (p.x - minx) * scale; };
  auto sy = [&](const Point2& p) { return size - margin - (p.y - miny) * scale; };

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
     << size << " " << size << "\">\n";
  if (arrows)
    os << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"16\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" "
          "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n";
  for (auto [u, v] : edges) {
    const auto& a = pos[static_cast<std::size_t>(u)];
    const auto& b = pos[static_cast<std::size_t>(v)];
    os << "<line x1=\"" << sx(a) << "\" y1=\"" << sy(a) << "\" x2=\"" << sx(b) << "\" y2=\"" << sy(b)
       << "\" stroke=\"black\"" << (arrows ? " marker-end=\"url(#arrow)\"" : "") << "/>\n";
  }
  for (std::size_t i = 0; i < pos.size(); ++i) {
    os << "<circle cx=\"" << sx(pos[i]) << "\" cy=\"" << sy(pos[i]) << "\" r=\"5\" fill=\"white\" stroke=\"black\"/>\n";
    os << "<text x=\"" << sx(pos[i]) + 7 << "\" y=\"" << sy(pos[i]) - 7 << "\" font-size=\"11\">"
       << (i < labels.size() ? labels[i] : std::to_string(i)) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace polyq
