#pragma once

// The property schema of polytopes and the rule base answering requests on them.

#include "polyq/hull.hpp"
#include "polyq/iso.hpp"
#include "polyq/lp.hpp"
#include "polyq/props.hpp"
#include "polyq/rules.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyq {

inline Schema polytope_schema() {
  return Schema{
      {"POINTS", Kind::Matrix},
      {"INEQUALITIES", Kind::Matrix},
      {"EQUATIONS", Kind::Matrix},
      {"VERTICES", Kind::Matrix},
      {"LINEALITY_SPACE", Kind::Matrix},
      {"FACETS", Kind::Matrix},
      {"AFFINE_HULL", Kind::Matrix},
      {"POINTED", Kind::Boolean},
      {"FEASIBLE", Kind::Boolean},
      {"BOUNDED", Kind::Boolean},
      {"VERTICES_IN_FACETS", Kind::Incidence},
      {"TRIANGULATION", Kind::Incidence},
      {"DUAL_GRAPH", Kind::Graph},
      {"GRAPH", Kind::Graph},
      {"ESSENTIALLY_GENERIC", Kind::Boolean},
      {"N_VERTICES", Kind::Integer},
      {"N_FACETS", Kind::Integer},
      {"DIM", Kind::Integer},
      {"FACE_LATTICE", Kind::Lattice},
      {"F_VECTOR", Kind::IntVector},
      {"H_VECTOR", Kind::IntVector},
      {"SIMPLE", Kind::Boolean},
      {"SIMPLICIAL", Kind::Boolean},
      {"CUBICAL", Kind::Boolean},
      {"VOLUME", Kind::Scalar},
      {"LINEAR_OBJECTIVE", Kind::Matrix},
      {"MAXIMAL_VALUE", Kind::Scalar},
      {"MINIMAL_VALUE", Kind::Scalar},
      {"MAXIMAL_VERTEX", Kind::Matrix},
      {"MINIMAL_VERTEX", Kind::Matrix},
      {"GALE_TRANSFORM", Kind::Matrix},
      {"CONNECTED", Kind::Boolean},
      {"DIAMETER", Kind::Integer},
      {"N_AUTOMORPHISMS", Kind::Integer},
      {"FACETS_OF_COMPLEX", Kind::Incidence},
      {"EDGES", Kind::Incidence},
  };
}

namespace detail {

/// Width of the homogeneous rows, from whichever of `names` is a nonempty matrix.
/// An empty section loses its width when written, so several sources are tried.
inline std::size_t ambient_columns(const RuleContext& ctx, std::initializer_list<const char*> names) {
  std::size_t c = 0;
  for (const char* n : names)
    if (ctx.has(n)) c = std::max(c, ctx.as<QMatrix>(n).cols());
  return c;
}

inline QMatrix with_width(const QMatrix& m, std::size_t cols) { return m.rows() == 0 ? QMatrix(0, cols) : m; }

inline QMatrix optional_matrix(const RuleContext& ctx, const char* name, std::size_t cols) {
  return ctx.has(name) ? with_width(ctx.as<QMatrix>(name), cols) : QMatrix(0, cols);
}

/// Constraint rows and equations of whichever H-description is present.
inline std::pair<QMatrix, QMatrix> h_description(const RuleContext& ctx, std::size_t group) {
  const std::string& src = ctx.chosen(group);
  const std::size_t cols = ambient_columns(ctx, {"FACETS", "INEQUALITIES", "AFFINE_HULL", "EQUATIONS"});
  const QMatrix ineqs = with_width(ctx.as<QMatrix>(src), cols);
  const char* eq_name = src == "FACETS" ? "AFFINE_HULL" : "EQUATIONS";
  return {ineqs, optional_matrix(ctx, eq_name, cols)};
}

/// Rows rescaled to leading coordinate 1; rays are rejected.
inline QMatrix affine_rows(const QMatrix& pts, const char* what) {
  QMatrix out(0, pts.cols());
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    if (pts(i, 0).sign() <= 0) throw UnsupportedInput(std::string(what) + " row " + std::to_string(i) + " is not an affine point");
    out.append_row(canonical_generator(pts.row(i)));
  }
  return out;
}

inline std::int64_t vertex_total(const RuleContext& ctx, const IncidenceList& inc) {
  if (ctx.has("N_VERTICES")) return ctx.as<std::int64_t>("N_VERTICES");
  return vertex_count(inc);
}

inline QVector objective_row(const RuleContext& ctx) {
  const auto& obj = ctx.as<QMatrix>("LINEAR_OBJECTIVE");
  if (obj.rows() != 1) throw std::invalid_argument("LINEAR_OBJECTIVE must be a single row");
  return obj.row_vector(0);
}

inline PropertyMap lp_outputs(const LPResult& r, bool maximize) {
  if (r.status != LPStatus::Optimal) throw std::runtime_error("linear program is " + to_string(r.status));
  QMatrix v(0, r.vertex.size());
  v.append_row(r.vertex);
  if (maximize) return {{"MAXIMAL_VALUE", r.value}, {"MAXIMAL_VERTEX", v}};
  return {{"MINIMAL_VALUE", r.value}, {"MINIMAL_VERTEX", v}};
}

/// Permutation p with ours[p[i]] == theirs[i] after canonicalization.
inline std::vector<std::size_t> match_facets(const QMatrix& ours, const QMatrix& theirs, const QMatrix& eqs) {
  const QMatrix ceq = canonical_equations(eqs, ours.cols());
  std::map<QVector, std::size_t> index;
  for (std::size_t i = 0; i < ours.rows(); ++i) index.emplace(reduce_modulo(ours.row(i), ceq), i);
  if (theirs.rows() != ours.rows()) throw std::runtime_error("existing FACETS do not match the vertices");
  std::vector<std::size_t> p;
  for (std::size_t i = 0; i < theirs.rows(); ++i) {
    auto it = index.find(reduce_modulo(theirs.row(i), ceq));
    if (it == index.end()) throw std::runtime_error("existing FACETS do not match the vertices");
    p.push_back(it->second);
  }
  return p;
}

}  // namespace detail

/// Native algorithms weigh 10, counting and flag checks 1. Registration order
/// decides between chains of equal weight.
inline RuleBase polytope_rules() {
  RuleBase base(polytope_schema());
  using detail::ambient_columns;

  base.add(Rule{"cdd.convex_hull.dual",
                {"VERTICES", "POINTED", "FEASIBLE", "LINEALITY_SPACE"},
                {{"FACETS", "INEQUALITIES"}},
                {},
                {"AFFINE_HULL", "EQUATIONS"},
                10,
                [](const RuleContext& ctx) {
                  const auto [ineqs, eqs] = detail::h_description(ctx, 0);
                  const auto cone = dehomogenize(double_description(homogenize_h(ineqs, eqs, ineqs.cols())));
                  return PropertyMap{{"VERTICES", cone.vertices.stack(cone.rays)},
                                     {"POINTED", cone.pointed},
                                     {"FEASIBLE", cone.feasible},
                                     {"LINEALITY_SPACE", detail::with_width(cone.lineality, ineqs.cols())}};
                }});

  base.add(Rule{"cdd.convex_hull.primal",
                {"FACETS", "AFFINE_HULL"},
                {{"VERTICES", "POINTS"}},
                {},
                {"LINEALITY_SPACE"},
                10,
                [](const RuleContext& ctx) {
                  const auto& gens = ctx.as<QMatrix>(ctx.chosen(0));
                  if (gens.rows() == 0) throw std::invalid_argument("no points to take the hull of");
                  const auto hull = facets_from_generators(gens, detail::optional_matrix(ctx, "LINEALITY_SPACE", gens.cols()));
                  return PropertyMap{{"FACETS", hull.facets}, {"AFFINE_HULL", hull.affine_hull}};
                }});

  base.add(Rule{"default.bounded",
                {"BOUNDED"},
                {{"VERTICES", "POINTS"}},
                {},
                {"LINEALITY_SPACE"},
                1,
                [](const RuleContext& ctx) {
                  const auto& gens = ctx.as<QMatrix>(ctx.chosen(0));
                  bool bounded = !ctx.has("LINEALITY_SPACE") || ctx.as<QMatrix>("LINEALITY_SPACE").rows() == 0;
                  for (std::size_t i = 0; i < gens.rows(); ++i) bounded = bounded && gens(i, 0).sign() > 0;
                  return PropertyMap{{"BOUNDED", bounded}};
                }});

  base.add(Rule{"beneath_beyond.convex_hull.primal, default.triangulation",
                {"FACETS", "AFFINE_HULL", "VERTICES_IN_FACETS", "DUAL_GRAPH", "TRIANGULATION", "ESSENTIALLY_GENERIC"},
                {{"VERTICES"}},
                {},
                {"FACETS"},
                10,
                [](const RuleContext& ctx) {
                  const QMatrix pts = detail::affine_rows(ctx.as<QMatrix>("VERTICES"), "VERTICES");
                  auto bb = beneath_beyond(pts);
                  QMatrix facets = bb.facets;
                  IncidenceList vif = bb.facet_points;
                  if (ctx.has("FACETS") && ctx.as<QMatrix>("FACETS").rows() + facets.rows() > 0) {
                    // keep facet numbering consistent with what is already known
                    const auto p = detail::match_facets(bb.facets, ctx.as<QMatrix>("FACETS"), bb.affine_hull);
                    facets = QMatrix(0, bb.facets.cols());
                    vif.clear();
                    for (std::size_t i : p) {
                      facets.append_row(bb.facets.row(i));
                      vif.push_back(bb.facet_points[i]);
                    }
                  }
                  Graph dual = facet_adjacency(pts, vif, bb.dim);
                  return PropertyMap{{"FACETS", facets},
                                     {"AFFINE_HULL", bb.affine_hull},
                                     {"VERTICES_IN_FACETS", vif},
                                     {"DUAL_GRAPH", dual},
                                     {"TRIANGULATION", bb.triangulation},
                                     {"ESSENTIALLY_GENERIC", bb.essentially_generic}};
                }});

  base.add(Rule{"beneath_beyond.convex_hull.points",
                {"FACETS", "AFFINE_HULL", "VERTICES"},
                {{"POINTS"}},
                {},
                {},
                10,
                [](const RuleContext& ctx) {
                  const QMatrix pts = detail::affine_rows(ctx.as<QMatrix>("POINTS"), "POINTS");
                  const auto bb = beneath_beyond(pts);
                  return PropertyMap{{"FACETS", bb.facets},
                                     {"AFFINE_HULL", bb.affine_hull},
                                     {"VERTICES", pts.select_rows(bb.vertices)}};
                }});

  base.add(Rule{"default.vertices",
                {"VERTICES"},
                {{"POINTS"}, {"FACETS"}},
                {},
                {"AFFINE_HULL"},
                1,
                [](const RuleContext& ctx) {
                  const QMatrix pts = detail::affine_rows(ctx.as<QMatrix>("POINTS"), "POINTS");
                  const std::size_t cols = pts.cols();
                  const QMatrix facets = detail::with_width(ctx.as<QMatrix>("FACETS"), cols);
                  const QMatrix eqs = detail::optional_matrix(ctx, "AFFINE_HULL", cols);
                  QMatrix out(0, cols);
                  std::set<QVector> seen;
                  for (std::size_t i = 0; i < pts.rows(); ++i) {
                    QMatrix tight = eqs;
                    for (std::size_t f = 0; f < facets.rows(); ++f)
                      if (dot(facets.row(f), pts.row(i)).is_zero()) tight.append_row(facets.row(f));
                    if (rank(tight) + 1 == cols && seen.insert(pts.row_vector(i)).second) out.append_row(pts.row(i));
                  }
                  return PropertyMap{{"VERTICES", out}};
                }});

  base.add(Rule{"default.vertices_in_facets",
                {"VERTICES_IN_FACETS"},
                {{"VERTICES"}, {"FACETS"}},
                {},
                {},
                1,
                [](const RuleContext& ctx) {
                  const auto& v = ctx.as<QMatrix>("VERTICES");
                  return PropertyMap{{"VERTICES_IN_FACETS", incidences(v, detail::with_width(ctx.as<QMatrix>("FACETS"), v.cols()))}};
                }});

  base.add(Rule{"default.n_facets", {"N_FACETS"}, {{"FACETS"}}, {}, {}, 1, [](const RuleContext& ctx) {
                  return PropertyMap{{"N_FACETS", static_cast<std::int64_t>(ctx.as<QMatrix>("FACETS").rows())}};
                }});
  base.add(Rule{"default.n_facets.combinatorial", {"N_FACETS"}, {{"VERTICES_IN_FACETS"}}, {}, {}, 1,
                [](const RuleContext& ctx) {
                  return PropertyMap{
                      {"N_FACETS", static_cast<std::int64_t>(ctx.as<IncidenceList>("VERTICES_IN_FACETS").size())}};
                }});
  base.add(Rule{"default.n_vertices", {"N_VERTICES"}, {{"VERTICES"}}, {}, {}, 1, [](const RuleContext& ctx) {
                  return PropertyMap{{"N_VERTICES", static_cast<std::int64_t>(ctx.as<QMatrix>("VERTICES").rows())}};
                }});
  base.add(Rule{"default.n_vertices.combinatorial", {"N_VERTICES"}, {{"VERTICES_IN_FACETS"}}, {}, {}, 1,
                [](const RuleContext& ctx) {
                  return PropertyMap{{"N_VERTICES", static_cast<std::int64_t>(
                                                        vertex_count(ctx.as<IncidenceList>("VERTICES_IN_FACETS")))}};
                }});

  base.add(Rule{"default.affine_hull", {"AFFINE_HULL"}, {{"VERTICES", "POINTS"}}, {}, {"LINEALITY_SPACE"}, 1,
                [](const RuleContext& ctx) {
                  const auto& gens = ctx.as<QMatrix>(ctx.chosen(0));
                  if (gens.rows() == 0) throw std::invalid_argument("empty point set");
                  const QMatrix all = gens.stack(detail::optional_matrix(ctx, "LINEALITY_SPACE", gens.cols()));
                  return PropertyMap{{"AFFINE_HULL", affine_hull_dim(all).equations}};
                }});

  base.add(Rule{"default.dim", {"DIM"}, {{"VERTICES", "POINTS"}}, {}, {"LINEALITY_SPACE"}, 1,
                [](const RuleContext& ctx) {
                  const auto& gens = ctx.as<QMatrix>(ctx.chosen(0));
                  const QMatrix all = gens.stack(detail::optional_matrix(ctx, "LINEALITY_SPACE", gens.cols()));
                  return PropertyMap{{"DIM", static_cast<std::int64_t>(rank(all)) - 1}};
                }});
  base.add(Rule{"default.dim.lattice", {"DIM"}, {{"FACE_LATTICE"}}, {}, {}, 1, [](const RuleContext& ctx) {
                  return PropertyMap{{"DIM", static_cast<std::int64_t>(ctx.as<FaceLattice>("FACE_LATTICE").dim)}};
                }});

  base.add(Rule{"default.face_lattice", {"FACE_LATTICE"}, {{"VERTICES_IN_FACETS"}}, {}, {"N_VERTICES"}, 10,
                [](const RuleContext& ctx) {
                  const auto& inc = ctx.as<IncidenceList>("VERTICES_IN_FACETS");
                  const auto n = detail::vertex_total(ctx, inc);
                  if (n == 0) throw std::invalid_argument("no vertices");
                  return PropertyMap{{"FACE_LATTICE", face_lattice(inc, static_cast<int>(n))}};
                }});
  base.add(Rule{"default.f_vector", {"F_VECTOR"}, {{"FACE_LATTICE"}}, {}, {}, 1, [](const RuleContext& ctx) {
                  return PropertyMap{{"F_VECTOR", f_vector(ctx.as<FaceLattice>("FACE_LATTICE"))}};
                }});
  base.add(Rule{"default.h_vector", {"H_VECTOR"}, {{"F_VECTOR"}, {"DIM"}}, {{"SIMPLICIAL", true}}, {}, 1,
                [](const RuleContext& ctx) {
                  return PropertyMap{{"H_VECTOR", h_from_f(ctx.as<std::vector<std::int64_t>>("F_VECTOR"),
                                                           static_cast<int>(ctx.as<std::int64_t>("DIM")))}};
                }});
  base.add(Rule{"default.graph", {"GRAPH"}, {{"FACE_LATTICE"}, {"VERTICES_IN_FACETS"}}, {}, {"N_VERTICES"}, 1,
                [](const RuleContext& ctx) {
                  const auto& inc = ctx.as<IncidenceList>("VERTICES_IN_FACETS");
                  const auto g = graphs(ctx.as<FaceLattice>("FACE_LATTICE"), inc,
                                        static_cast<int>(detail::vertex_total(ctx, inc)));
                  return PropertyMap{{"GRAPH", g.vertex_graph}};
                }});
  base.add(Rule{"default.dual_graph", {"DUAL_GRAPH"}, {{"FACE_LATTICE"}, {"VERTICES_IN_FACETS"}}, {}, {"N_VERTICES"},
                1, [](const RuleContext& ctx) {
                  const auto& inc = ctx.as<IncidenceList>("VERTICES_IN_FACETS");
                  const auto g = graphs(ctx.as<FaceLattice>("FACE_LATTICE"), inc,
                                        static_cast<int>(detail::vertex_total(ctx, inc)));
                  return PropertyMap{{"DUAL_GRAPH", g.dual_graph}};
                }});

  base.add(Rule{"default.simple", {"SIMPLE"}, {{"VERTICES_IN_FACETS"}, {"DIM"}}, {}, {"N_VERTICES"}, 1,
                [](const RuleContext& ctx) {
                  const auto& inc = ctx.as<IncidenceList>("VERTICES_IN_FACETS");
                  return PropertyMap{{"SIMPLE", is_simple(inc, static_cast<int>(ctx.as<std::int64_t>("DIM")),
                                                          static_cast<int>(detail::vertex_total(ctx, inc)))}};
                }});
  base.add(Rule{"default.simplicial", {"SIMPLICIAL"}, {{"VERTICES_IN_FACETS"}, {"DIM"}}, {}, {}, 1,
                [](const RuleContext& ctx) {
                  return PropertyMap{{"SIMPLICIAL", is_simplicial(ctx.as<IncidenceList>("VERTICES_IN_FACETS"),
                                                                  static_cast<int>(ctx.as<std::int64_t>("DIM")))}};
                }});
  base.add(Rule{"default.cubical", {"CUBICAL"}, {{"FACE_LATTICE"}}, {}, {}, 1, [](const RuleContext& ctx) {
                  return PropertyMap{{"CUBICAL", is_cubical(ctx.as<FaceLattice>("FACE_LATTICE"))}};
                }});

  base.add(Rule{"default.volume", {"VOLUME"}, {{"VERTICES"}, {"TRIANGULATION"}}, {{"BOUNDED", true}}, {}, 10,
                [](const RuleContext& ctx) {
                  return PropertyMap{
                      {"VOLUME", volume(ctx.as<QMatrix>("VERTICES"), ctx.as<IncidenceList>("TRIANGULATION"))}};
                }});

  for (bool maximize : {true, false}) {
    const Sense sense = maximize ? Sense::Maximize : Sense::Minimize;
    const std::vector<std::string> outs =
        maximize ? std::vector<std::string>{"MAXIMAL_VALUE", "MAXIMAL_VERTEX"}
                 : std::vector<std::string>{"MINIMAL_VALUE", "MINIMAL_VERTEX"};
    base.add(Rule{maximize ? "simplex.maximize" : "simplex.minimize",
                  outs,
                  {{"LINEAR_OBJECTIVE"}, {"FACETS", "INEQUALITIES"}},
                  {},
                  {"AFFINE_HULL", "EQUATIONS"},
                  10,
                  [sense, maximize](const RuleContext& ctx) {
                    const auto [ineqs, eqs] = detail::h_description(ctx, 1);
                    const QVector c = detail::objective_row(ctx);
                    return detail::lp_outputs(simplex_optimize(ineqs, eqs, c, sense), maximize);
                  }});
    base.add(Rule{maximize ? "default.maximal_vertex" : "default.minimal_vertex",
                  outs,
                  {{"LINEAR_OBJECTIVE"}, {"VERTICES"}},
                  {{"BOUNDED", true}},
                  {},
                  1,
                  [sense, maximize](const RuleContext& ctx) {
                    const QVector c = detail::objective_row(ctx);
                    return detail::lp_outputs(optimize_over_vertices(ctx.as<QMatrix>("VERTICES"), c, sense), maximize);
                  }});
  }

  base.add(Rule{"default.gale_transform", {"GALE_TRANSFORM"}, {{"VERTICES"}}, {{"BOUNDED", true}}, {}, 10,
                [](const RuleContext& ctx) {
                  return PropertyMap{{"GALE_TRANSFORM", gale_transform(ctx.as<QMatrix>("VERTICES"))}};
                }});
  base.add(Rule{"default.graph_stats", {"CONNECTED", "DIAMETER"}, {{"GRAPH"}}, {}, {}, 1, [](const RuleContext& ctx) {
                  const auto st = graph_stats(ctx.as<Graph>("GRAPH"));
                  return PropertyMap{{"CONNECTED", st.connected}, {"DIAMETER", static_cast<std::int64_t>(st.diameter)}};
                }});
  base.add(Rule{"default.n_automorphisms", {"N_AUTOMORPHISMS"}, {{"VERTICES_IN_FACETS"}}, {}, {"N_VERTICES"}, 10,
                [](const RuleContext& ctx) {
                  const auto& inc = ctx.as<IncidenceList>("VERTICES_IN_FACETS");
                  const auto order = automorphism_order(inc, static_cast<int>(detail::vertex_total(ctx, inc)));
                  return PropertyMap{{"N_AUTOMORPHISMS", static_cast<std::int64_t>(order)}};
                }});
  return base;
}

}  // namespace polyq
