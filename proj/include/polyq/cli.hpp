#pragma once

// The polyq command line.
//
//   polyq [-v|-vv] FILE PROPERTY...          compute, print and store properties
//   polyq cube FILE DIM [LOWER]
//   polyq rand_sphere FILE DIM N [--seed S]
//   polyq wedge OUT IN FACET [-noc]
//   polyq check_iso FILE1 FILE2
//   polyq crust FILE [--svg PATH]
//   polyq homology FILE [--reduced] [--cohomology]
//   polyq export_graph FILE [--directed] [--svg PATH]
//
// Exit status: 0 on success, 1 when a computation or file fails, 2 on usage errors.

#include "polyq/constructions.hpp"
#include "polyq/export.hpp"
#include "polyq/geom_apps.hpp"
#include "polyq/polytope_rules.hpp"
#include "polyq/topaz.hpp"

#include <CLI11.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <iostream>
#include <string>
#include <vector>

namespace polyq {

inline constexpr std::uint64_t kDefaultSphereSeed = 1;

namespace cli {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An open file under an advisory flock, released on destruction.
class LockedFile {
 public:
  enum class Mode { Read, Update, Create };

  LockedFile(const std::string& path, Mode mode) : path_(path) {
    const int flags = mode == Mode::Read ? O_RDONLY : mode == Mode::Update ? O_RDWR : (O_RDWR | O_CREAT);
    fd_ = ::open(path.c_str(), flags | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Failure("cannot open " + path + ": " + std::strerror(errno));
    if (::flock(fd_, mode == Mode::Read ? LOCK_SH : LOCK_EX) != 0) {
      ::close(fd_);
      throw Failure("cannot lock " + path + ": " + std::strerror(errno));
    }
  }
  LockedFile(const LockedFile&) = delete;
  LockedFile& operator=(const LockedFile&) = delete;
  ~LockedFile() { ::close(fd_); }

  std::string read() const {
    std::string text;
    char buf[65536];
    ::lseek(fd_, 0, SEEK_SET);
    for (;;) {
      const ssize_t got = ::read(fd_, buf, sizeof buf);
      if (got < 0) throw Failure("cannot read " + path_ + ": " + std::strerror(errno));
      if (got == 0) break;
      text.append(buf, static_cast<std::size_t>(got));
    }
    return text;
  }

  void write(const std::string& text) const {
    if (::ftruncate(fd_, 0) != 0 || ::lseek(fd_, 0, SEEK_SET) != 0)
      throw Failure("cannot rewrite " + path_ + ": " + std::strerror(errno));
    std::size_t done = 0;
    while (done < text.size()) {
      const ssize_t put = ::write(fd_, text.data() + done, text.size() - done);
      if (put < 0) throw Failure("cannot write " + path_ + ": " + std::strerror(errno));
      done += static_cast<std::size_t>(put);
    }
  }

 private:
  std::string path_;
  int fd_ = -1;
};

inline const RuleBase& rule_base() {
  static const RuleBase base = polytope_rules();
  return base;
}

inline PolytopeObject parse_object(const std::string& path, const std::string& text) {
  try {
    return PolytopeObject::parse(rule_base().schema(), text, path);
  } catch (const ParseError& e) {
    throw Failure(path + ": " + e.what());
  }
}

inline PolytopeObject read_object(const std::string& path) {
  LockedFile f(path, LockedFile::Mode::Read);
  return parse_object(path, f.read());
}

inline void write_new(const std::string& path, const PolytopeObject& obj) {
  LockedFile f(path, LockedFile::Mode::Create);
  f.write(obj.text());
}

inline void print_property(std::ostream& out, const std::string& name, const Value& v) {
  out << name << "\n";
  for (const auto& l : format_value(v)) out << l << "\n";
  out << "\n";
}

struct Session {
  std::ostream& out;
  std::ostream& err;
  int verbosity = 0;

  Trace trace() const {
    return Trace{verbosity, [this](const std::string& l) { err << "polyq: " << l << "\n"; }};
  }
};

/// Lock, load, compute, store, print. Intermediate results are stored even when
/// the request as a whole fails.
inline int main_request(const Session& s, const std::string& path, const std::vector<std::string>& props) {
  for (const auto& p : props)
    if (!rule_base().schema().contains(p)) {
      s.err << "polyq: unknown property " << p << "\n";
      return 2;
    }
  LockedFile f(path, LockedFile::Mode::Update);
  PolytopeObject obj = parse_object(path, f.read());
  int status = 0;
  try {
    request(rule_base(), obj, props, s.trace());
  } catch (const UnsatisfiableRequest& e) {
    s.err << "polyq: " << e.what() << "\n";
    status = 1;
  }
  if (!obj.added().empty()) f.write(obj.text());
  if (status == 0)
    for (const auto& p : props) print_property(s.out, p, obj.get(p));
  return status;
}

/// Request on an in-memory copy; input files of constructions stay untouched.
inline PolytopeObject computed(const Session& s, const std::string& path, const std::vector<std::string>& props) {
  PolytopeObject obj = read_object(path);
  try {
    request(rule_base(), obj, props, s.trace());
  } catch (const UnsatisfiableRequest& e) {
    throw Failure(path + ": " + e.what());
  }
  return obj;
}

inline int cube(const Session&, const std::string& path, int dim, const std::string& lower) {
  Rational lo;
  try {
    lo = parse_rational(lower);
  } catch (const ParseError& e) {
    throw CLI::ValidationError("LOWER", e.what());
  }
  QMatrix pts;
  try {
    pts = make_cube(dim, lo);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("cube", e.what());
  }
  PolytopeObject obj(rule_base().schema(), path);
  obj.set("POINTS", pts);
  write_new(path, obj);
  return 0;
}

inline int rand_sphere_cmd(const Session&, const std::string& path, int dim, int n, std::uint64_t seed) {
  QMatrix pts;
  try {
    pts = rand_sphere(dim, n, seed);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("rand_sphere", e.what());
  }
  PolytopeObject obj(rule_base().schema(), path);
  obj.set("POINTS", pts);
  write_new(path, obj);
  return 0;
}

inline int wedge(const Session& s, const std::string& out_path, const std::string& in_path, int facet, bool noc) {
  PolytopeObject out(rule_base().schema(), out_path);
  try {
    if (noc) {
      const auto in = computed(s, in_path, {"VERTICES_IN_FACETS", "N_VERTICES"});
      const auto w = wedge_combinatorial(in.get_as<IncidenceList>("VERTICES_IN_FACETS"),
                                         static_cast<int>(in.get_as<std::int64_t>("N_VERTICES")), facet);
      out.set("VERTICES_IN_FACETS", w.vertices_in_facets);
    } else {
      const auto in = computed(s, in_path, {"VERTICES", "FACETS", "VERTICES_IN_FACETS"});
      const auto w = wedge_geometric(in.get_as<QMatrix>("VERTICES"), in.get_as<QMatrix>("FACETS"), facet);
      out.set("VERTICES", *w.vertices);
      out.set("VERTICES_IN_FACETS", w.vertices_in_facets);
    }
  } catch (const std::out_of_range& e) {
    throw CLI::ValidationError("FACET", e.what());
  }
  write_new(out_path, out);
  return 0;
}

inline int check_iso_cmd(const Session& s, const std::string& a_path, const std::string& b_path) {
  const auto a = computed(s, a_path, {"VERTICES_IN_FACETS", "N_VERTICES"});
  const auto b = computed(s, b_path, {"VERTICES_IN_FACETS", "N_VERTICES"});
  const auto na = static_cast<int>(a.get_as<std::int64_t>("N_VERTICES"));
  const auto nb = static_cast<int>(b.get_as<std::int64_t>("N_VERTICES"));
  const auto r = polyq::check_iso(a.get_as<IncidenceList>("VERTICES_IN_FACETS"),
                                  b.get_as<IncidenceList>("VERTICES_IN_FACETS"), na, nb);
  if (s.verbosity >= 1) {
    for (const auto* lab : {&r.a, &r.b})
      s.out << "grpsize=" << lab->automorphisms << "; " << lab->stats.tree_nodes << " nodes; " << lab->stats.leaves
            << " leaves; maxlev=" << lab->stats.max_level << "\n";
    if (r.certificate) {
      s.out << "incidence graphs are identical.\n";
      for (std::size_t v = 0; v < r.certificate->vertex_map.size(); ++v)
        s.out << " " << v << "-" << r.certificate->vertex_map[v];
      for (std::size_t f = 0; f < r.certificate->facet_map.size(); ++f)
        s.out << " " << na + static_cast<int>(f) << "-" << nb + r.certificate->facet_map[f];
      s.out << "\n";
    }
  }
  s.out << "check_iso\n" << (r.isomorphic ? 1 : 0) << "\n";
  return 0;
}

/// POINTS rows are plain planar coordinates, or homogeneous with a leading 1.
inline QMatrix planar_cloud(const QMatrix& pts) {
  if (pts.cols() == 2) return pts;
  if (pts.cols() == 3) {
    QMatrix out(0, 2);
    for (std::size_t i = 0; i < pts.rows(); ++i) {
      if (pts(i, 0) != 1) throw Failure("POINTS row " + std::to_string(i) + " has 3 entries but does not start with 1");
      out.append_row(QVector{pts(i, 1), pts(i, 2)});
    }
    return out;
  }
  throw Failure("crust needs planar POINTS (2 coordinates, or 3 with a leading 1)");
}

inline int crust_cmd(const Session& s, const std::string& path, const std::string& svg) {
  LockedFile f(path, LockedFile::Mode::Update);
  PolytopeObject obj = parse_object(path, f.read());
  if (!obj.has("POINTS")) throw Failure(path + ": no POINTS section");
  const QMatrix cloud = planar_cloud(obj.get_as<QMatrix>("POINTS"));
  IncidenceList edges;
  for (auto [a, b] : polyq::crust(cloud)) edges.push_back({a, b});
  if (!obj.has("EDGES")) {
    obj.set("EDGES", edges);
    f.write(obj.text());
  }
  if (!svg.empty()) {
    std::vector<Point2> pos;
    for (std::size_t i = 0; i < cloud.rows(); ++i)
      pos.push_back({cloud(i, 0).convert_to<double>(), cloud(i, 1).convert_to<double>()});
    std::vector<std::pair<int, int>> e;
    for (const auto& x : obj.get_as<IncidenceList>("EDGES")) e.emplace_back(x[0], x[1]);
    std::ofstream(svg) << to_svg(pos, e, false);
  }
  print_property(s.out, "EDGES", obj.get("EDGES"));
  return 0;
}

inline int homology_cmd(const Session& s, const std::string& path, bool reduced, bool co) {
  const auto obj = read_object(path);
  if (!obj.has("FACETS_OF_COMPLEX")) throw Failure(path + ": no FACETS_OF_COMPLEX section");
  const auto c = make_complex(obj.get_as<IncidenceList>("FACETS_OF_COMPLEX"));
  const auto groups = co ? cohomology(c, reduced) : homology(c, reduced);
  for (std::size_t k = 0; k < groups.size(); ++k)
    s.out << (co ? "H^" : "H") << k << ": " << to_string(groups[k]) << "\n";
  return 0;
}

inline int export_graph(const Session& s, const std::string& path, bool directed, const std::string& svg) {
  std::vector<std::string> props{"GRAPH"};
  if (directed) {
    props.push_back("VERTICES");
    const auto probe = read_object(path);
    if (!probe.has("LINEAR_OBJECTIVE")) throw Failure(path + ": directed graph needs a LINEAR_OBJECTIVE");
  }
  LockedFile f(path, LockedFile::Mode::Update);
  PolytopeObject obj = parse_object(path, f.read());
  try {
    request(rule_base(), obj, props, s.trace());
  } catch (const UnsatisfiableRequest& e) {
    if (!obj.added().empty()) f.write(obj.text());
    throw Failure(path + ": " + e.what());
  }
  if (!obj.added().empty()) f.write(obj.text());
  const auto& g = obj.get_as<Graph>("GRAPH");
  std::optional<OrientedGraph> og;
  if (directed) {
    const auto& c = obj.get_as<QMatrix>("LINEAR_OBJECTIVE");
    if (c.rows() != 1) throw Failure("LINEAR_OBJECTIVE must be a single row");
    og = orient_graph(g, obj.get_as<QMatrix>("VERTICES"), c.row(0));
  }
  if (svg.empty()) {
    s.out << to_dot(g, og ? &*og : nullptr);
    return 0;
  }
  std::vector<std::string> labels;
  for (int v = 0; v < g.nodes; ++v)
    labels.push_back(og ? std::to_string(v) + " (" + to_string(og->values[static_cast<std::size_t>(v)]) + ")"
                        : std::to_string(v));
  std::vector<std::pair<int, int>> edges = og ? og->directed : g.edges;
  if (og) edges.insert(edges.end(), og->flat.begin(), og->flat.end());
  std::ofstream(svg) << to_svg(spring_layout(g, fnv1a(path)), edges, og.has_value(), labels);
  return 0;
}

}  // namespace cli

/// Runs one command line (without the program name).
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  cli::Session s{out, err, 0};
  std::vector<std::string> rest;
  for (auto& a : args) {
    if (a == "-v")
      s.verbosity = std::max(s.verbosity, 1);
    else if (a == "-vv")
      s.verbosity = 2;
    else if (a == "-noc")
      rest.push_back("--noc");
    else
      rest.push_back(std::move(a));
  }

  static const std::set<std::string> commands{"cube", "rand_sphere", "wedge", "check_iso", "crust", "homology",
                                              "export_graph"};
  try {
    if (rest.empty() || (!commands.count(rest[0]) && rest[0] != "-h" && rest[0] != "--help")) {
      if (rest.size() < 2 || rest[0].rfind("-", 0) == 0) {
        err << "usage: polyq [-v|-vv] FILE PROPERTY...\n"
               "       polyq COMMAND ...   (polyq --help lists the commands)\n";
        return 2;
      }
      return cli::main_request(s, rest[0], {rest.begin() + 1, rest.end()});
    }

    CLI::App app{"Exact polytope computations on .poly files", "polyq"};
    app.require_subcommand(1);
    int status = 0;
    std::string file, file2, svg, lower = "-1";
    int dim = 0, n = 0, facet = 0;
    std::uint64_t seed = kDefaultSphereSeed;
    bool flag_a = false, flag_b = false;

    auto* cube = app.add_subcommand("cube", "write the DIM-cube with coordinates LOWER and 1");
    cube->add_option("FILE", file)->required();
    cube->add_option("DIM", dim)->required();
    cube->add_option("LOWER", lower, "lower coordinate (default -1)");
    cube->callback([&] { status = cli::cube(s, file, dim, lower); });

    auto* sphere = app.add_subcommand("rand_sphere", "write N random rational points on the unit sphere in R^DIM");
    sphere->add_option("FILE", file)->required();
    sphere->add_option("DIM", dim)->required();
    sphere->add_option("N", n)->required();
    sphere->add_option("--seed", seed, "random seed (default 1)");
    sphere->callback([&] { status = cli::rand_sphere_cmd(s, file, dim, n, seed); });

    auto* wedge = app.add_subcommand("wedge", "write the wedge of IN over facet FACET to OUT");
    wedge->add_option("OUT", file)->required();
    wedge->add_option("IN", file2)->required();
    wedge->add_option("FACET", facet)->required();
    wedge->add_flag("--noc", flag_a, "combinatorial description only");
    wedge->callback([&] { status = cli::wedge(s, file, file2, facet, flag_a); });

    auto* iso = app.add_subcommand("check_iso", "test two polytopes for combinatorial equivalence");
    iso->add_option("FILE1", file)->required();
    iso->add_option("FILE2", file2)->required();
    iso->callback([&] { status = cli::check_iso_cmd(s, file, file2); });

    auto* crust = app.add_subcommand("crust", "reconstruct a curve through planar POINTS, stored as EDGES");
    crust->add_option("FILE", file)->required();
    crust->add_option("--svg", svg, "also draw points and edges");
    crust->callback([&] { status = cli::crust_cmd(s, file, svg); });

    auto* hom = app.add_subcommand("homology", "integral homology of FACETS_OF_COMPLEX");
    hom->add_option("FILE", file)->required();
    hom->add_flag("--reduced", flag_a);
    hom->add_flag("--cohomology", flag_b);
    hom->callback([&] { status = cli::homology_cmd(s, file, flag_a, flag_b); });

    auto* graph = app.add_subcommand("export_graph", "vertex-edge graph as DOT (stdout) or SVG");
    graph->add_option("FILE", file)->required();
    graph->add_flag("--directed", flag_a, "orient edges by LINEAR_OBJECTIVE");
    graph->add_option("--svg", svg, "write SVG here instead of DOT");
    graph->callback([&] { status = cli::export_graph(s, file, flag_a, svg); });

    std::vector<std::string> reversed(rest.rbegin(), rest.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 2;
    }
    return status;
  } catch (const cli::Failure& e) {
    err << "polyq: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "polyq: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace polyq
