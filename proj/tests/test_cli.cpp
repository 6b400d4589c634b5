#include "polyq/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

using namespace polyq;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string tmpl = (fs::temp_directory_path() / "polyq_cli_XXXXXX").string();
    ASSERT_NE(::mkdtemp(tmpl.data()), nullptr);
    dir_ = tmpl;
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  static std::string slurp(const std::string& p) { return read_text_file(p); }

  fs::path dir_;
};

const char* kLinearProgram = R"(LINEAR_OBJECTIVE
 0    1  1  1

INEQUALITIES
 0    1  0  0
 0    0  1  0
 0    0  0  1
 1   -1  0  0
 1    0 -1  0
 1    0  0 -1
5/2  -1 -1 -1
 8   -1 17  0
)";

}  // namespace

TEST_F(Cli, CubeSession) {
  const auto f = path("cube.poly");
  ASSERT_EQ(run({"cube", f, "3", "0"}).code, 0);
  const auto obj = PolytopeObject::parse(polytope_schema(), slurp(f));
  EXPECT_EQ(obj.get_as<QMatrix>("POINTS"), make_cube(3, 0));
  const auto r = run({f, "N_FACETS", "SIMPLE"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "N_FACETS\n6\n\nSIMPLE\n1\n\n");
}

TEST_F(Cli, LinearProgramMaximum) {
  const auto f = write("lp.poly", kLinearProgram);
  const auto r = run({f, "MAXIMAL_VALUE"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "MAXIMAL_VALUE\n5/2\n\n");
}

TEST_F(Cli, VolumeIsCachedInTheFile) {
  const auto f = write("lp.poly", kLinearProgram);
  const auto first = run({"-vv", f, "VOLUME"});
  EXPECT_EQ(first.out, "VOLUME\n47/48\n\n");
  EXPECT_NE(first.err.find("polyq: applying rule default.volume: VOLUME : VERTICES, TRIANGULATION"), std::string::npos)
      << first.err;
  const auto second = run({"-vv", f, "VOLUME"});
  EXPECT_EQ(second.out, "VOLUME\n47/48\n\n");
  EXPECT_EQ(second.err.find("applying rule"), std::string::npos) << second.err;
  EXPECT_NE(slurp(f).find("\nVOLUME\n47/48\n"), std::string::npos);
}

TEST_F(Cli, RequestsAreIdempotent) {
  const auto f = write("lp.poly", kLinearProgram);
  run({f, "F_VECTOR", "MAXIMAL_VALUE"});
  const std::string once = slurp(f);
  EXPECT_EQ(once.rfind(kLinearProgram, 0), 0u) << "original sections must come first, unchanged";
  run({f, "F_VECTOR", "MAXIMAL_VALUE"});
  EXPECT_EQ(slurp(f), once);
}

TEST_F(Cli, OutputIsParsableAsSections) {
  const auto f = write("lp.poly", kLinearProgram);
  const auto r = run({f, "VERTICES", "F_VECTOR", "SIMPLE", "VOLUME"});
  ASSERT_EQ(r.code, 0);
  const auto secs = parse_sections(r.out);
  ASSERT_EQ(secs.size(), 4u);
  EXPECT_EQ(secs[0].name, "VERTICES");
  EXPECT_EQ(secs[1].lines, std::vector<std::string>{"10 15 7"});
}

TEST_F(Cli, ExitCodes) {
  const auto lp = write("lp.poly", kLinearProgram);
  EXPECT_EQ(run({lp, "NO_SUCH_THING"}).code, 2);
  EXPECT_EQ(run({lp}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"cube", path("c.poly")}).code, 2);
  EXPECT_EQ(run({"cube", path("c.poly"), "0"}).code, 2);
  EXPECT_EQ(run({"cube", path("c.poly"), "three"}).code, 2);
  EXPECT_EQ(run({path("missing.poly"), "DIM"}).code, 1);

  const auto bad = write("bad.poly", "POINTS\n1 0\n1 x\n");
  const auto parse = run({bad, "DIM"});
  EXPECT_EQ(parse.code, 1);
  EXPECT_NE(parse.err.find("line 3"), std::string::npos) << parse.err;

  const auto unbounded = write("u.poly", "INEQUALITIES\n0 1 0\n0 0 1\n");
  const auto vol = run({unbounded, "VOLUME"});
  EXPECT_EQ(vol.code, 1);
  EXPECT_TRUE(vol.out.empty());
  EXPECT_NE(vol.err.find("BOUNDED"), std::string::npos) << vol.err;
  // what was learned on the way is kept
  EXPECT_NE(slurp(unbounded).find("BOUNDED\n0\n"), std::string::npos);

  const auto bare = write("bare.poly", "LINEAR_OBJECTIVE\n0 1\n");
  const auto none = run({bare, "VOLUME"});
  EXPECT_EQ(none.code, 1);
  EXPECT_NE(none.err.find("INEQUALITIES"), std::string::npos) << none.err;
  EXPECT_NE(none.err.find("POINTS"), std::string::npos) << none.err;
}

TEST_F(Cli, WedgeWithoutCoordinates) {
  const auto sq = write("square.poly", "VERTICES_IN_FACETS\n{0 1}\n{1 2}\n{2 3}\n{0 3}\n");
  EXPECT_EQ(run({sq, "DIM"}).out, "DIM\n2\n\n");
  const auto prism = path("prism.poly");
  ASSERT_EQ(run({"wedge", prism, sq, "0", "-noc"}).code, 0);
  const auto secs = parse_sections(slurp(prism));
  ASSERT_EQ(secs.size(), 1u);
  EXPECT_EQ(secs[0].name, "VERTICES_IN_FACETS");
  EXPECT_EQ(run({prism, "SIMPLE", "SIMPLICIAL"}).out, "SIMPLE\n1\n\nSIMPLICIAL\n0\n\n");
  EXPECT_EQ(run({"wedge", path("x.poly"), sq, "4", "-noc"}).code, 2);
}

TEST_F(Cli, WedgeWithCoordinates) {
  const auto sq = write("square.poly", "POINTS\n1 0 0\n1 1 0\n1 0 1\n1 1 1\n");
  const auto out = path("prism.poly");
  ASSERT_EQ(run({"wedge", out, sq, "1"}).code, 0);
  const auto r = run({out, "SIMPLE", "SIMPLICIAL", "F_VECTOR", "N_VERTICES"});
  EXPECT_EQ(r.out, "SIMPLE\n1\n\nSIMPLICIAL\n0\n\nF_VECTOR\n6 9 5\n\nN_VERTICES\n6\n\n");
  // the input file is read only
  EXPECT_EQ(slurp(sq), "POINTS\n1 0 0\n1 1 0\n1 0 1\n1 1 1\n");
}

TEST_F(Cli, RandSphereIsReproducible) {
  const auto a = path("a.poly"), b = path("b.poly"), c = path("c.poly");
  ASSERT_EQ(run({"rand_sphere", a, "3", "20", "--seed", "7"}).code, 0);
  ASSERT_EQ(run({"rand_sphere", b, "3", "20", "--seed", "7"}).code, 0);
  ASSERT_EQ(run({"rand_sphere", c, "3", "20", "--seed", "8"}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a), slurp(c));
  const auto obj = PolytopeObject::parse(polytope_schema(), slurp(a));
  const auto& pts = obj.get_as<QMatrix>("POINTS");
  ASSERT_EQ(pts.rows(), 20u);
  for (std::size_t i = 0; i < pts.rows(); ++i)
    EXPECT_EQ(pts(i, 1) * pts(i, 1) + pts(i, 2) * pts(i, 2) + pts(i, 3) * pts(i, 3), 1);
}

TEST_F(Cli, CheckIso) {
  const auto sharir = write("sharir.poly",
                            "INEQUALITIES\n25 -2 -25 10\n-2 25 2 10\n25 -2 25 10\n-2 25 -2 10\n0 0 -1 -1\n2 0 -1 1\n");
  const auto cube = path("cube.poly");
  run({"cube", cube, "3", "0"});
  const auto plain = run({"check_iso", sharir, cube});
  EXPECT_EQ(plain.out, "check_iso\n1\n");
  const auto simplex = write("simplex.poly", "POINTS\n1 0 0 0\n1 1 0 0\n1 0 1 0\n1 0 0 1\n");
  EXPECT_EQ(run({"check_iso", cube, simplex}).out, "check_iso\n0\n");

  // the printed map (vertices, then facets numbered after them) carries incidences over
  const auto verbose = run({"-v", "check_iso", sharir, cube});
  std::smatch m;
  const std::string out = verbose.out;
  ASSERT_TRUE(std::regex_search(out, m, std::regex("\n((?: \\d+-\\d+)+)\n")));
  std::map<int, int> map;
  std::istringstream pairs(m[1].str());
  std::string tok;
  while (pairs >> tok) map[std::stoi(tok.substr(0, tok.find('-')))] = std::stoi(tok.substr(tok.find('-') + 1));
  ASSERT_EQ(map.size(), 14u);
  auto vif = [&](const std::string& f) {
    auto obj = PolytopeObject::parse(polytope_schema(), slurp(f));
    request(polytope_rules(), obj, {"VERTICES_IN_FACETS"}, Trace{});
    return obj.get_as<IncidenceList>("VERTICES_IN_FACETS");
  };
  const auto a = vif(sharir), b = vif(cube);
  const int n = 8;
  IsoCertificate cert;
  for (int v = 0; v < n; ++v) cert.vertex_map.push_back(map.at(v));
  for (int f = 0; f < 6; ++f) cert.facet_map.push_back(map.at(n + f) - n);
  EXPECT_TRUE(verify_certificate(a, b, cert));
  EXPECT_NE(verbose.out.find("grpsize=48;"), std::string::npos);
  // neither input gains sections
  EXPECT_EQ(parse_sections(slurp(sharir)).size(), 1u);
}

namespace {

struct DotGraph {
  std::map<int, Rational> value;
  std::vector<std::pair<int, int>> arrows, flat, edges;
};

DotGraph parse_dot(const std::string& dot) {
  DotGraph g;
  std::istringstream in(dot);
  std::string line;
  const std::regex node(R"re(^\s*(\d+) \[label="\d+\\n([-0-9/]+)"\];$)re");
  const std::regex edge(R"(^\s*(\d+) (--|->) (\d+)( \[dir=none, style=dashed\])?;$)");
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_match(line, m, node)) {
      g.value[std::stoi(m[1])] = Rational(m[2].str());
    } else if (std::regex_match(line, m, edge)) {
      const std::pair<int, int> e{std::stoi(m[1]), std::stoi(m[3])};
      if (m[2] == "--")
        g.edges.push_back(e);
      else if (m[4].matched)
        g.flat.push_back(e);
      else
        g.arrows.push_back(e);
    }
  }
  return g;
}

}  // namespace

TEST_F(Cli, ExportUndirectedCube) {
  const auto f = path("cube.poly");
  run({"cube", f, "3", "0"});
  const auto r = run({"export_graph", f});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("graph polytope {", 0), 0u);
  const auto g = parse_dot(r.out);
  EXPECT_EQ(g.edges.size(), 12u);
  // cube vertices are 0/1 vectors; an edge flips exactly one coordinate
  const auto pts = make_cube(3, 0);
  for (auto [u, v] : g.edges) {
    int diff = 0;
    for (std::size_t j = 1; j < 4; ++j) diff += pts(static_cast<std::size_t>(u), j) != pts(static_cast<std::size_t>(v), j);
    EXPECT_EQ(diff, 1) << u << " " << v;
  }
}

TEST_F(Cli, ExportDirectedArrowsClimb) {
  const auto f = write("lp.poly", kLinearProgram);
  const auto r = run({"export_graph", f, "--directed"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("digraph polytope {", 0), 0u);
  const auto g = parse_dot(r.out);
  // recompute the objective at each stored vertex
  const auto obj = PolytopeObject::parse(polytope_schema(), slurp(f));
  const auto& verts = obj.get_as<QMatrix>("VERTICES");
  const auto& c = obj.get_as<QMatrix>("LINEAR_OBJECTIVE");
  ASSERT_EQ(g.value.size(), verts.rows());
  for (std::size_t i = 0; i < verts.rows(); ++i) {
    Rational val = 0;
    for (std::size_t j = 1; j < verts.cols(); ++j) val += c(0, j) * verts(i, j);
    EXPECT_EQ(g.value.at(static_cast<int>(i)), val);
  }
  ASSERT_FALSE(g.arrows.empty());
  for (auto [u, v] : g.arrows) EXPECT_LT(g.value.at(u), g.value.at(v)) << u << " -> " << v;
  for (auto [u, v] : g.flat) EXPECT_EQ(g.value.at(u), g.value.at(v));
  EXPECT_EQ(g.arrows.size() + g.flat.size(), obj.get_as<Graph>("GRAPH").edges.size());
}

TEST_F(Cli, ExportDirectedSegment) {
  const auto f = write("seg.poly", "POINTS\n1 0\n1 3\n\nLINEAR_OBJECTIVE\n0 -1\n");
  const auto g = parse_dot(run({"export_graph", f, "--directed"}).out);
  ASSERT_EQ(g.arrows.size(), 1u);
  EXPECT_EQ(g.value.at(g.arrows[0].second), 0);
  EXPECT_EQ(g.value.at(g.arrows[0].first), -3);
}

TEST_F(Cli, ExportSvgAndMissingObjective) {
  const auto f = path("cube.poly");
  run({"cube", f, "3", "0"});
  EXPECT_EQ(run({"export_graph", f, "--directed"}).code, 1);
  const auto svg = path("cube.svg");
  ASSERT_EQ(run({"export_graph", f, "--svg", svg}).code, 0);
  const std::string text = slurp(svg);
  EXPECT_EQ(text.rfind("<svg", 0), 0u);
  std::size_t lines = 0;
  for (std::size_t p = 0; (p = text.find("<line ", p)) != std::string::npos; ++p) ++lines;
  EXPECT_EQ(lines, 12u);
  const auto again = path("again.svg");
  fs::copy_file(svg, again);
  run({"export_graph", f, "--svg", svg});
  EXPECT_EQ(slurp(svg), slurp(again));
}

TEST_F(Cli, CrustOfSquare) {
  const auto f = write("sq.poly", "POINTS\n0 0\n1 0\n1 1\n0 1\n");
  const auto r = run({"crust", f});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto secs = parse_sections(r.out);
  ASSERT_EQ(secs.size(), 1u);
  EXPECT_EQ(secs[0].lines, (std::vector<std::string>{"{0 1}", "{0 3}", "{1 2}", "{2 3}"}));
  EXPECT_NE(slurp(f).find("EDGES\n"), std::string::npos);
  EXPECT_EQ(run({"crust", write("bad.poly", "POINTS\n0 0 0 0\n")}).code, 1);
}

TEST_F(Cli, HomologyOfSphere) {
  const auto f = write("s2.poly", "FACETS_OF_COMPLEX\n{0 1 2}\n{0 1 3}\n{0 2 3}\n{1 2 3}\n");
  EXPECT_EQ(run({"homology", f}).out, "H0: Z^1\nH1: 0\nH2: Z^1\n");
  EXPECT_EQ(run({"homology", f, "--cohomology"}).out, "H^0: Z^1\nH^1: 0\nH^2: Z^1\n");
}

TEST_F(Cli, ConcurrentRequestsAgree) {
  const auto f = write("lp.poly", kLinearProgram);
  std::vector<std::thread> ts;
  std::vector<CliRun> results(4);
  for (std::size_t i = 0; i < results.size(); ++i)
    ts.emplace_back([&, i] { results[i] = run({f, "VOLUME", "F_VECTOR"}); });
  for (auto& t : ts) t.join();
  for (const auto& r : results) EXPECT_EQ(r.out, "VOLUME\n47/48\n\nF_VECTOR\n10 15 7\n\n") << r.err;
  const auto obj = PolytopeObject::parse(polytope_schema(), slurp(f));
  EXPECT_EQ(obj.get_as<Rational>("VOLUME"), Rational(47, 48));
}
