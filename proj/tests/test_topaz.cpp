#include "polyq/topaz.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace polyq;
using namespace polyq::fixture;

namespace {

SimplicialComplex two_triangles() { return make_complex({{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

SimplicialComplex cone_over(const SimplicialComplex& c) {
  std::vector<IndexSet> f;
  for (auto s : c.facets) {
    s.push_back(c.n_vertices);
    f.push_back(s);
  }
  return make_complex(f, c.n_vertices + 1);
}

HomologyGroup Z(std::int64_t b, std::vector<Integer> t = {}) { return {b, std::move(t)}; }

std::vector<std::vector<std::int64_t>> to_int64(const ZMatrix& m) {
  std::vector<std::vector<std::int64_t>> out(m.rows, std::vector<std::int64_t>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out[i][j] = m(i, j).convert_to<std::int64_t>();
  return out;
}

std::vector<SimplicialComplex> fixtures() {
  return {boundary_of_simplex(3), rp2(), torus(), two_triangles(), boundary_of_simplex(4), make_complex({{0}})};
}

}  // namespace

TEST(Boundary, EdgeOrientation) {
  const auto m = boundary_matrix(1, make_complex({{0, 1}}));
  ASSERT_EQ(m.rows, 2u);
  ASSERT_EQ(m.cols, 1u);
  EXPECT_EQ(m(0, 0), -1);
  EXPECT_EQ(m(1, 0), 1);
  EXPECT_THROW(boundary_matrix(2, make_complex({{0, 1}})), std::out_of_range);
}

TEST(Boundary, HollowTetrahedronColumns) {
  const auto m = boundary_matrix(2, boundary_of_simplex(3));
  ASSERT_EQ(m.rows, 6u);
  ASSERT_EQ(m.cols, 4u);
  for (std::size_t j = 0; j < m.cols; ++j) {
    int s = 0;
    for (std::size_t i = 0; i < m.rows; ++i) s += boost::multiprecision::abs(m(i, j)).convert_to<int>();
    EXPECT_EQ(s, 3);
  }
}

TEST(Boundary, SquaresToZero) {
  for (const auto& c : fixtures())
    for (int k = 1; k + 1 <= c.dim(); ++k) EXPECT_TRUE((boundary_matrix(k, c) * boundary_matrix(k + 1, c)).is_zero());
}

TEST(Smith, Examples) {
  ZMatrix id(3, 3);
  for (std::size_t i = 0; i < 3; ++i) id(i, i) = 1;
  EXPECT_EQ(smith_normal_form(id).diagonal, (std::vector<Integer>{1, 1, 1}));
  ZMatrix d(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 3;
  const auto s = smith_normal_form(d);
  EXPECT_EQ(s.diagonal, (std::vector<Integer>{1, 6}));
  EXPECT_EQ(s.rank, 2u);
  EXPECT_EQ(smith_normal_form(ZMatrix(2, 3)).rank, 0u);
}

TEST(Smith, MatchesMinorGcdOracle) {
  std::mt19937 rng(55);
  std::uniform_int_distribution<int> e(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    ZMatrix m(4, 5);
    for (auto& x : m.a) x = e(rng);
    if (trial % 4 == 0)
      for (std::size_t j = 0; j < 5; ++j) m(3, j) = 2 * m(0, j) - 3 * m(1, j);
    const auto s = smith_normal_form(m);
    const auto mi = to_int64(m);
    // rank agrees with the rational rank oracle
    std::vector<std::vector<Rational>> q(4, std::vector<Rational>(5));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 5; ++j) q[i][j] = mi[i][j];
    EXPECT_EQ(s.rank, oracle::minor_rank(q));
    // d1 * ... * dk = gcd of k×k minors
    Integer prod = 1;
    for (std::size_t k = 1; k <= s.rank; ++k) {
      prod *= s.diagonal[k - 1];
      EXPECT_EQ(prod, oracle::minor_gcd(mi, k));
    }
    for (std::size_t k = 1; k < s.diagonal.size(); ++k) EXPECT_EQ(s.diagonal[k] % s.diagonal[k - 1], 0);
  }
}

TEST(Homology, Fixtures) {
  EXPECT_EQ(homology(boundary_of_simplex(3)), (std::vector<HomologyGroup>{Z(1), Z(0), Z(1)}));
  EXPECT_EQ(homology(rp2()), (std::vector<HomologyGroup>{Z(1), Z(0, {2}), Z(0)}));
  EXPECT_EQ(homology(torus()), (std::vector<HomologyGroup>{Z(1), Z(2), Z(1)}));
  EXPECT_EQ(homology(two_triangles()), (std::vector<HomologyGroup>{Z(2), Z(2)}));
  EXPECT_EQ(homology(make_complex({{0}})), (std::vector<HomologyGroup>{Z(1)}));
  EXPECT_EQ(homology(boundary_of_simplex(3), true), (std::vector<HomologyGroup>{Z(0), Z(0), Z(1)}));
}

TEST(Homology, EulerPoincare) {
  for (const auto& c : fixtures()) {
    std::int64_t alt = 0;
    const auto h = homology(c);
    for (std::size_t k = 0; k < h.size(); ++k) alt += (k % 2 == 0) ? h[k].betti : -h[k].betti;
    EXPECT_EQ(euler_characteristic(c), alt);
  }
  EXPECT_EQ(euler_characteristic(boundary_of_simplex(3)), 2);
  EXPECT_EQ(euler_characteristic(torus()), 0);
  EXPECT_EQ(euler_characteristic(make_complex({{0}})), 1);
  EXPECT_EQ(euler_characteristic(rp2()), 1);
}

TEST(Homology, ConeIsAcyclic) {
  for (const auto& c : fixtures()) {
    const auto h = homology(cone_over(c));
    EXPECT_EQ(h[0], Z(1));
    for (std::size_t k = 1; k < h.size(); ++k) EXPECT_EQ(h[k], Z(0));
  }
}

TEST(Cohomology, UniversalCoefficients) {
  for (const auto& c : fixtures()) {
    const auto h = homology(c);
    const auto co = cohomology(c);
    ASSERT_EQ(h.size(), co.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
      EXPECT_EQ(co[k].betti, h[k].betti);
      // torsion of H^k is the torsion of H_{k-1}
      EXPECT_EQ(co[k].torsion, k == 0 ? std::vector<Integer>{} : h[k - 1].torsion);
    }
  }
  EXPECT_EQ(cohomology(rp2()), (std::vector<HomologyGroup>{Z(1), Z(0), Z(0, {2})}));
}

TEST(Homology, Formatting) {
  EXPECT_EQ(to_string(Z(0)), "0");
  EXPECT_EQ(to_string(Z(1, {2})), "Z^1 + Z/2");
  EXPECT_EQ(to_string(Z(0, {2})), "Z/2");
  EXPECT_EQ(to_string(Z(2)), "Z^2");
}

TEST(Complex, KeepsMaximalFaces) {
  const auto c = make_complex({{0, 1, 2}, {0, 1}, {2, 1, 0}, {3}});
  EXPECT_EQ(c.facets, (std::vector<IndexSet>{{0, 1, 2}, {3}}));
  EXPECT_EQ(c.n_vertices, 4);
}
