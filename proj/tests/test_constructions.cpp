#include "polyq/constructions.hpp"
#include "polyq/hull.hpp"
#include "polyq/iso.hpp"
#include "polyq/props.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace polyq;

namespace {

struct Hull {
  QMatrix points;
  QMatrix vertices;
  QMatrix facets;
  IncidenceList inc;
  Triangulation tri;
  int dim;
};

Hull hull_of(const QMatrix& pts) {
  const auto bb = beneath_beyond(pts);
  Hull h{pts, pts.select_rows(bb.vertices), bb.facets, {}, bb.triangulation, bb.dim};
  h.inc = incidences(h.vertices, h.facets);
  return h;
}

std::size_t oracle_distinct(const QMatrix& m) {
  std::set<QVector> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.insert(m.row_vector(i));
  return rows.size();
}

const IncidenceList kSquare{{0, 1}, {1, 2}, {2, 3}, {0, 3}};

}  // namespace

TEST(Cube, ZeroOneMatchesListing) {
  const QMatrix expected = {{1, 0, 0, 0}, {1, 0, 0, 1}, {1, 0, 1, 0}, {1, 0, 1, 1},
                            {1, 1, 0, 0}, {1, 1, 0, 1}, {1, 1, 1, 0}, {1, 1, 1, 1}};
  EXPECT_EQ(make_cube(3, 0), expected);
  EXPECT_EQ(make_cube(1, 0), (QMatrix{{1, 0}, {1, 1}}));
  EXPECT_THROW(make_cube(0), std::invalid_argument);
}

TEST(Cube, SymmetricVolumeAndFacets) {
  const auto h = hull_of(make_cube(3));
  EXPECT_EQ(volume(h.points, h.tri), 8);
  for (int d = 1; d <= 5; ++d) {
    const auto c = hull_of(make_cube(d, 0));
    EXPECT_EQ(c.facets.rows(), static_cast<std::size_t>(2 * d)) << d;
    EXPECT_TRUE(is_simple(c.inc, d, static_cast<int>(c.vertices.rows()))) << d;
  }
}

TEST(Simplex, Examples) {
  const auto tri = hull_of(make_simplex(2));
  EXPECT_EQ(f_vector(face_lattice(tri.inc)), (std::vector<std::int64_t>{3, 3}));
  const auto tet = hull_of(make_simplex(3));
  EXPECT_EQ(volume(tet.points, tet.tri), Rational(1, 6));
  const auto pt = make_simplex(0);
  EXPECT_EQ(pt.rows(), 1u);
  EXPECT_EQ(affine_hull_dim(pt).dim, 0);
}

TEST(RandSphere, PointsLieExactlyOnSphere) {
  for (int d : {2, 3, 4}) {
    const auto pts = rand_sphere(d, 15, 42);
    ASSERT_EQ(pts.rows(), 15u);
    for (std::size_t i = 0; i < pts.rows(); ++i) {
      EXPECT_EQ(pts(i, 0), 1);
      Rational s = 0;
      for (std::size_t j = 1; j < pts.cols(); ++j) s += pts(i, j) * pts(i, j);
      EXPECT_EQ(s, 1);
    }
    EXPECT_EQ(oracle_distinct(pts), 15u);
  }
}

TEST(RandSphere, Deterministic) {
  EXPECT_EQ(rand_sphere(3, 20, 7), rand_sphere(3, 20, 7));
  EXPECT_NE(rand_sphere(3, 20, 7), rand_sphere(3, 20, 8));
  EXPECT_THROW(rand_sphere(1, 5, 1), std::invalid_argument);
  EXPECT_THROW(rand_sphere(3, 3, 1), std::invalid_argument);
}

TEST(RandSphere, HullIsSimplicialSphere) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto h = hull_of(rand_sphere(3, 20, seed));
    EXPECT_EQ(h.vertices.rows(), 20u);
    const auto lat = face_lattice(h.inc);
    const auto f = f_vector(lat);
    EXPECT_TRUE(is_simplicial(h.inc, 3));
    EXPECT_EQ(f[0] - f[1] + f[2], 2);
    EXPECT_EQ(f[1], 3 * f[0] - 6);
  }
}

TEST(Wedge, SquareOverFacetZero) {
  const auto w = wedge_combinatorial(kSquare, 4, 0);
  EXPECT_EQ(w.n_vertices, 6);
  const IncidenceList expected{{0, 1, 4, 5}, {0, 1, 2, 3}, {1, 2, 4}, {2, 3, 4, 5}, {0, 3, 5}};
  EXPECT_EQ(w.vertices_in_facets, expected);
  std::vector<std::size_t> sizes;
  for (const auto& f : w.vertices_in_facets) sizes.push_back(f.size());
  EXPECT_EQ(std::count(sizes.begin(), sizes.end(), 4u), 3);
  EXPECT_EQ(std::count(sizes.begin(), sizes.end(), 3u), 2);
  const auto lat = face_lattice(w.vertices_in_facets, w.n_vertices);
  EXPECT_EQ(lat.dim, 3);
  EXPECT_TRUE(is_simple(w.vertices_in_facets, 3, 6));
  EXPECT_FALSE(is_simplicial(w.vertices_in_facets, 3));
}

TEST(Wedge, TriangleGivesTetrahedron) {
  // F = {0 1} is kept; vertex 2 doubles, so 4 vertices and 4 triangles
  const auto w = wedge_combinatorial({{0, 1}, {1, 2}, {0, 2}}, 3, 0);
  EXPECT_EQ(w.n_vertices, 4);
  const auto lat = face_lattice(w.vertices_in_facets, w.n_vertices);
  EXPECT_EQ(f_vector(lat), (std::vector<std::int64_t>{4, 6, 4}));
  EXPECT_TRUE(check_iso(w.vertices_in_facets, {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}).isomorphic);
}

TEST(Wedge, RaisesDimensionAndFacetCount) {
  const std::vector<QMatrix> polys = {make_cube(2, 0), make_cube(3, 0), make_simplex(3),
                                      QMatrix{{1, 0, 0}, {1, 2, 0}, {1, 3, 1}, {1, 1, 2}, {1, -1, 1}}};
  for (const auto& p : polys) {
    const auto h = hull_of(p);
    for (int f = 0; f < static_cast<int>(h.inc.size()); ++f) {
      const auto w = wedge_combinatorial(h.inc, static_cast<int>(h.vertices.rows()), f);
      EXPECT_EQ(combinatorial_dim(w.vertices_in_facets, w.n_vertices), h.dim + 1);
      EXPECT_EQ(w.vertices_in_facets.size(), h.inc.size() + 1);
    }
  }
}

TEST(Wedge, GeometricMatchesCombinatorial) {
  const std::vector<QMatrix> polys = {make_cube(2, 0), make_cube(3, 0), make_simplex(2),
                                      QMatrix{{1, 0, 0}, {1, 2, 0}, {1, 3, 1}, {1, 1, 2}, {1, -1, 1}}};
  for (const auto& p : polys) {
    const auto h = hull_of(p);
    for (int f = 0; f < static_cast<int>(h.inc.size()); ++f) {
      const auto comb = wedge_combinatorial(h.inc, static_cast<int>(h.vertices.rows()), f);
      const auto geo = wedge_geometric(h.vertices, h.facets, f);
      ASSERT_TRUE(geo.vertices);
      EXPECT_EQ(geo.vertices_in_facets, comb.vertices_in_facets);
      const auto wh = hull_of(*geo.vertices);
      EXPECT_EQ(wh.vertices.rows(), static_cast<std::size_t>(comb.n_vertices));
      const auto r = check_iso(wh.inc, comb.vertices_in_facets, static_cast<int>(wh.vertices.rows()), comb.n_vertices);
      EXPECT_TRUE(r.isomorphic);
      // labels line up too: the hull's incidences are exactly the formula's, up to facet order
      auto sorted_hull = wh.inc, sorted_comb = comb.vertices_in_facets;
      std::sort(sorted_hull.begin(), sorted_hull.end());
      std::sort(sorted_comb.begin(), sorted_comb.end());
      EXPECT_EQ(sorted_hull, sorted_comb);
    }
  }
}

TEST(Wedge, RejectsBadFacetIndex) {
  EXPECT_THROW(wedge_combinatorial(kSquare, 4, 4), std::out_of_range);
  EXPECT_THROW(wedge_combinatorial(kSquare, 4, -1), std::out_of_range);
}
