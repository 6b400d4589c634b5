#pragma once

// The keyword-section file format and typed property values.
//
//   POINTS            <- keyword line (uppercase)
//   1 0 0             <- data lines
//   1 1 0
//                     <- one or more blank lines end a section
//   VERTICES_IN_FACETS
//   {0 1}
//
// Sections the schema knows are decoded into values; unknown sections are kept
// as opaque text. Loaded sections are written back exactly as read and newly
// computed ones are appended, so saving twice gives identical bytes.

#include "polyq/index_set.hpp"
#include "polyq/props.hpp"
#include "polyq/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace polyq {

class SchemaError : public std::invalid_argument {
 public:
  explicit SchemaError(const std::string& what) : std::invalid_argument(what) {}
};

enum class Kind { Matrix, Incidence, Scalar, Integer, Boolean, Graph, IntVector, Lattice };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Matrix: return "matrix";
    case Kind::Incidence: return "incidence list";
    case Kind::Scalar: return "rational scalar";
    case Kind::Integer: return "integer";
    case Kind::Boolean: return "boolean";
    case Kind::Graph: return "graph";
    case Kind::IntVector: return "integer vector";
    case Kind::Lattice: return "face lattice";
  }
  return "?";
}

using Value = std::variant<QMatrix, IncidenceList, Rational, std::int64_t, bool, Graph, std::vector<std::int64_t>, FaceLattice>;

inline bool value_has_kind(const Value& v, Kind k) {
  switch (k) {
    case Kind::Matrix: return std::holds_alternative<QMatrix>(v);
    case Kind::Incidence: return std::holds_alternative<IncidenceList>(v);
    case Kind::Scalar: return std::holds_alternative<Rational>(v);
    case Kind::Integer: return std::holds_alternative<std::int64_t>(v);
    case Kind::Boolean: return std::holds_alternative<bool>(v);
    case Kind::Graph: return std::holds_alternative<Graph>(v);
    case Kind::IntVector: return std::holds_alternative<std::vector<std::int64_t>>(v);
    case Kind::Lattice: return std::holds_alternative<FaceLattice>(v);
  }
  return false;
}

/// Property names and their value kinds, in registration order.
class Schema {
 public:
  Schema() = default;
  Schema(std::initializer_list<std::pair<std::string, Kind>> entries) {
    for (const auto& [n, k] : entries) add(n, k);
  }

  void add(const std::string& name, Kind kind) {
    if (!valid_name(name)) throw SchemaError("invalid property name '" + name + "'");
    if (index_.count(name)) throw SchemaError("property " + name + " registered twice");
    index_.emplace(name, names_.size());
    names_.push_back(name);
    kinds_.push_back(kind);
  }
  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  std::size_t index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw SchemaError("unknown property " + name);
    return it->second;
  }
  Kind kind(const std::string& name) const { return kinds_[index(name)]; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::size_t size() const { return names_.size(); }

  static bool valid_name(std::string_view s) {
    if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
      if (!(std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
        return false;
    return true;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Kind> kinds_;
  std::map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// sections

struct Section {
  std::string name;
  std::vector<std::string> lines;
  int line = 0;  ///< 1-based line of the keyword
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

inline std::vector<Section> parse_sections(std::string_view text) {
  std::vector<Section> out;
  Section* cur = nullptr;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    if (detail::trim(line).empty()) {
      cur = nullptr;
      continue;
    }
    if (cur) {
      cur->lines.emplace_back(line);
      continue;
    }
    const std::string_view key = detail::trim(line);
    if (!Schema::valid_name(key))
      throw ParseError("expected a section keyword (uppercase letters, digits, '_'), got '" + std::string(key) + "'",
                       line_no);
    for (const auto& s : out)
      if (s.name == key) throw ParseError("section " + std::string(key) + " appears twice", line_no);
    out.push_back(Section{std::string(key), {}, line_no});
    cur = &out.back();
  }
  return out;
}

/// NAME, data lines, blank line.
inline std::string format_section(const std::string& name, const std::vector<std::string>& lines) {
  std::string s = name + "\n";
  for (const auto& l : lines) s += l + "\n";
  return s + "\n";
}

// ---------------------------------------------------------------------------
// value codecs

namespace detail {

inline std::int64_t parse_int(std::string_view tok, int line) {
  if (tok.empty()) throw ParseError("expected an integer", line);
  std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
  if (i == tok.size() || tok.size() > 19) throw ParseError("bad integer '" + std::string(tok) + "'", line);
  for (std::size_t j = i; j < tok.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(tok[j]))) throw ParseError("bad integer '" + std::string(tok) + "'", line);
  return std::stoll(std::string(tok));
}

inline IndexSet parse_braced_set(std::string_view s, int line) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw ParseError("expected a set like {0 1 2}, got '" + std::string(s) + "'", line);
  IndexSet out;
  for (auto t : tokens(s.substr(1, s.size() - 2))) {
    const auto v = parse_int(t, line);
    if (v < 0 || v > INT32_MAX) throw ParseError("index out of range: " + std::string(t), line);
    out.push_back(static_cast<int>(v));
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw ParseError("set indices must be strictly ascending", line);
  return out;
}

inline std::string single_token(const Section& s) {
  std::vector<std::string_view> toks;
  for (const auto& l : s.lines)
    for (auto t : tokens(l)) toks.push_back(t);
  if (toks.size() != 1) throw ParseError(s.name + " expects exactly one value", s.line + 1);
  return std::string(toks[0]);
}

inline FaceLattice lattice_from_faces(std::vector<IndexSet> faces, std::vector<int> ranks) {
  FaceLattice lat;
  lat.faces = std::move(faces);
  lat.rank = std::move(ranks);
  lat.dim = *std::max_element(lat.rank.begin(), lat.rank.end());
  for (std::size_t i = 0; i < lat.faces.size(); ++i) {
    if (lat.rank[i] == lat.dim) lat.top = static_cast<int>(i);
    if (lat.rank[i] == -1) lat.bottom = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < lat.faces.size(); ++i)
    for (std::size_t j = 0; j < lat.faces.size(); ++j)
      if (lat.rank[i] + 1 == lat.rank[j] && is_subset(lat.faces[i], lat.faces[j]))
        lat.hasse.emplace_back(static_cast<int>(i), static_cast<int>(j));
  std::sort(lat.hasse.begin(), lat.hasse.end());
  return lat;
}

}  // namespace detail

/// Decodes a section according to its kind; errors carry file line numbers.
inline Value parse_value(Kind kind, const Section& s) {
  auto line_of = [&](std::size_t i) { return s.line + 1 + static_cast<int>(i); };
  switch (kind) {
    case Kind::Matrix: {
      std::vector<QVector> rows;
      for (std::size_t i = 0; i < s.lines.size(); ++i) {
        QVector row;
        for (auto t : detail::tokens(s.lines[i])) {
          try {
            row.push_back(parse_rational(t));
          } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()), line_of(i));
          }
        }
        if (!rows.empty() && row.size() != rows.front().size())
          throw ParseError(s.name + ": row has " + std::to_string(row.size()) + " entries, expected " +
                               std::to_string(rows.front().size()),
                           line_of(i));
        rows.push_back(std::move(row));
      }
      return QMatrix::from_rows(rows);
    }
    case Kind::Incidence: {
      IncidenceList inc;
      for (std::size_t i = 0; i < s.lines.size(); ++i) inc.push_back(detail::parse_braced_set(s.lines[i], line_of(i)));
      return inc;
    }
    case Kind::Scalar: {
      try {
        return parse_rational(detail::single_token(s));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), s.line + 1);
      }
    }
    case Kind::Integer: return detail::parse_int(detail::single_token(s), s.line + 1);
    case Kind::Boolean: {
      const auto t = detail::single_token(s);
      if (t != "0" && t != "1") throw ParseError(s.name + " expects 1 or 0, got '" + t + "'", s.line + 1);
      return t == "1";
    }
    case Kind::Graph: {
      Graph g;
      g.nodes = static_cast<int>(s.lines.size());
      std::vector<IndexSet> adj;
      for (std::size_t i = 0; i < s.lines.size(); ++i) adj.push_back(detail::parse_braced_set(s.lines[i], line_of(i)));
      for (std::size_t u = 0; u < adj.size(); ++u)
        for (int v : adj[u]) {
          if (v >= g.nodes || v == static_cast<int>(u))
            throw ParseError(s.name + ": bad neighbour " + std::to_string(v), line_of(u));
          if (!contains(adj[static_cast<std::size_t>(v)], static_cast<int>(u)))
            throw ParseError(s.name + ": adjacency is not symmetric", line_of(u));
          if (static_cast<int>(u) < v) g.add_edge(static_cast<int>(u), v);
        }
      g.normalize();
      return g;
    }
    case Kind::IntVector: {
      std::vector<std::int64_t> v;
      for (std::size_t i = 0; i < s.lines.size(); ++i)
        for (auto t : detail::tokens(s.lines[i])) v.push_back(detail::parse_int(t, line_of(i)));
      return v;
    }
    case Kind::Lattice: {
      std::vector<IndexSet> faces;
      std::vector<int> ranks;
      for (std::size_t i = 0; i < s.lines.size(); ++i) {
        const std::string_view l = detail::trim(s.lines[i]);
        const auto brace = l.find('{');
        if (brace == std::string_view::npos) throw ParseError("expected 'rank {set}'", line_of(i));
        ranks.push_back(static_cast<int>(detail::parse_int(detail::trim(l.substr(0, brace)), line_of(i))));
        faces.push_back(detail::parse_braced_set(l.substr(brace), line_of(i)));
      }
      if (faces.empty()) throw ParseError(s.name + " is empty", s.line);
      return detail::lattice_from_faces(std::move(faces), std::move(ranks));
    }
  }
  throw ParseError("unknown kind", s.line);
}

inline std::vector<std::string> format_value(const Value& v) {
  std::vector<std::string> out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QMatrix>) {
          for (std::size_t i = 0; i < x.rows(); ++i) {
            std::string l;
            for (std::size_t j = 0; j < x.cols(); ++j) l += (j ? " " : "") + to_string(x(i, j));
            out.push_back(std::move(l));
          }
        } else if constexpr (std::is_same_v<T, IncidenceList>) {
          for (const auto& s : x) out.push_back(format_set(s));
        } else if constexpr (std::is_same_v<T, Rational>) {
          out.push_back(to_string(x));
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          out.push_back(std::to_string(x));
        } else if constexpr (std::is_same_v<T, bool>) {
          out.push_back(x ? "1" : "0");
        } else if constexpr (std::is_same_v<T, Graph>) {
          for (const auto& a : x.adjacency()) out.push_back(format_set(a));
        } else if constexpr (std::is_same_v<T, std::vector<std::int64_t>>) {
          std::string l;
          for (std::size_t i = 0; i < x.size(); ++i) l += (i ? " " : "") + std::to_string(x[i]);
          if (!x.empty()) out.push_back(std::move(l));
        } else {
          // faces by decreasing rank, then lexicographically
          std::vector<std::size_t> order(x.faces.size());
          for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
          std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (x.rank[a] != x.rank[b]) return x.rank[a] > x.rank[b];
            return x.faces[a] < x.faces[b];
          });
          for (auto i : order) out.push_back(std::to_string(x.rank[i]) + " " + format_set(x.faces[i]));
        }
      },
      v);
  return out;
}

/// Cheap structural checks run before a value is committed.
inline std::optional<std::string> structural_problem(const Value& v) {
  if (const auto* inc = std::get_if<IncidenceList>(&v)) {
    for (const auto& s : *inc)
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < 0 || (i > 0 && s[i] <= s[i - 1])) return "incidence row " + format_set(s) + " is not strictly ascending";
  }
  if (const auto* g = std::get_if<Graph>(&v)) {
    for (auto [a, b] : g->edges)
      if (a < 0 || b >= g->nodes || a >= b) return "graph edge out of range";
  }
  if (const auto* lat = std::get_if<FaceLattice>(&v)) {
    if (lat->faces.empty() || lat->faces.size() != lat->rank.size()) return "malformed face lattice";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// objects

/// An open property map backed by a section list.
class PolytopeObject {
 public:
  explicit PolytopeObject(const Schema& schema, std::string name = {})
      : schema_(std::make_shared<const Schema>(schema)), name_(std::move(name)) {}

  const Schema& schema() const { return *schema_; }
  const std::string& name() const { return name_; }

  bool has(const std::string& prop) const { return values_.count(prop) > 0; }
  const Value& get(const std::string& prop) const {
    auto it = values_.find(prop);
    if (it == values_.end()) throw std::out_of_range("property " + prop + " is not set");
    return it->second;
  }
  template <class T>
  const T& get_as(const std::string& prop) const {
    return std::get<T>(get(prop));
  }

  /// Adds a new property; existing values are never replaced.
  void set(const std::string& prop, Value v) {
    const Kind k = schema_->kind(prop);
    if (!value_has_kind(v, k)) throw SchemaError(prop + " must be a " + kind_name(k));
    if (has(prop)) throw std::logic_error("property " + prop + " is already set");
    values_.emplace(prop, std::move(v));
    added_.push_back(prop);
  }

  std::vector<std::string> property_names() const {
    std::vector<std::string> out;
    for (const auto& s : sections_)
      if (has(s.name)) out.push_back(s.name);
    for (const auto& a : added_) out.push_back(a);
    return out;
  }
  const std::vector<std::string>& added() const { return added_; }
  const std::map<std::string, Value>& values() const { return values_; }

  static PolytopeObject parse(const Schema& schema, std::string_view text, std::string name = {}) {
    PolytopeObject obj(schema, std::move(name));
    obj.sections_ = parse_sections(text);
    for (const auto& s : obj.sections_)
      if (schema.contains(s.name)) obj.values_.emplace(s.name, parse_value(schema.kind(s.name), s));
    return obj;
  }

  /// Loaded sections verbatim, then the added ones in commit order.
  std::string text() const {
    std::string out;
    for (const auto& s : sections_) out += format_section(s.name, s.lines);
    for (const auto& a : added_) out += format_section(a, format_value(values_.at(a)));
    return out;
  }

  /// After a save the added sections count as loaded.
  void mark_saved() {
    for (const auto& a : added_) sections_.push_back(Section{a, format_value(values_.at(a)), 0});
    added_.clear();
  }

  const std::vector<Section>& sections() const { return sections_; }

 private:
  std::shared_ptr<const Schema> schema_;
  std::string name_;
  std::vector<Section> sections_;
  std::map<std::string, Value> values_;
  std::vector<std::string> added_;
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace polyq
