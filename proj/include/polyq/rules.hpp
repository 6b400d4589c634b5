#pragma once

// Declarative rules over a PolytopeObject and the scheduler that answers requests.
//
// A rule reads groups of alternative inputs (FACETS | INEQUALITIES), may be
// guarded by boolean preconditions, and produces a fixed list of outputs. A
// request picks a minimum-weight chain by Dijkstra over sets of available
// properties, runs it one rule at a time, commits each rule's outputs
// atomically and, when a rule fails or a precondition is false, drops that rule
// and schedules again.

#include "polyq/poly_file.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyq {

using PropertyMap = std::map<std::string, Value>;

class RuleContext;

struct Rule {
  std::string label;
  std::vector<std::string> outputs;
  std::vector<std::vector<std::string>> inputs;  ///< each group needs one available member
  std::vector<std::pair<std::string, bool>> preconditions;
  std::vector<std::string> optional;  ///< read when present, never scheduled for
  int weight = 10;
  std::function<PropertyMap(const RuleContext&)> run;
};

/// "label: OUT, OUT : IN | IN, IN"
inline std::string signature(const Rule& r) {
  std::string s = r.label + ":";
  for (std::size_t i = 0; i < r.outputs.size(); ++i) s += (i ? ", " : " ") + r.outputs[i];
  s += " :";
  for (std::size_t g = 0; g < r.inputs.size(); ++g) {
    s += g ? ", " : " ";
    for (std::size_t i = 0; i < r.inputs[g].size(); ++i) s += (i ? " | " : "") + r.inputs[g][i];
  }
  return s;
}

/// Read access for a running rule, limited to what it declared.
class RuleContext {
 public:
  RuleContext(const PolytopeObject& obj, const Rule& rule) : obj_(obj), rule_(rule) {}

  bool has(const std::string& p) const {
    check_declared(p);
    return obj_.has(p);
  }
  const Value& get(const std::string& p) const {
    check_declared(p);
    return obj_.get(p);
  }
  template <class T>
  const T& as(const std::string& p) const {
    const Value& v = get(p);
    if (!std::holds_alternative<T>(v)) throw SchemaError(p + " does not hold the expected kind");
    return std::get<T>(v);
  }
  /// First available member of input group g.
  const std::string& chosen(std::size_t g) const {
    for (const auto& p : rule_.inputs.at(g))
      if (obj_.has(p)) return p;
    throw std::logic_error(rule_.label + ": no input of group " + std::to_string(g) + " is available");
  }
  const Rule& rule() const { return rule_; }

 private:
  void check_declared(const std::string& p) const {
    for (const auto& g : rule_.inputs)
      for (const auto& q : g)
        if (q == p) return;
    for (const auto& [q, want] : rule_.preconditions)
      if (q == p) return;
    for (const auto& q : rule_.optional)
      if (q == p) return;
    throw std::logic_error(rule_.label + " reads undeclared property " + p);
  }

  const PolytopeObject& obj_;
  const Rule& rule_;
};

/// Schema plus rules in registration order.
class RuleBase {
 public:
  explicit RuleBase(Schema schema) : schema_(std::move(schema)) {}

  void add(Rule r) {
    if (r.label.empty()) throw SchemaError("rule without label");
    for (const auto& q : rules_)
      if (q.label == r.label) throw SchemaError("duplicate rule label " + r.label);
    if (r.outputs.empty()) throw SchemaError(r.label + ": rule has no outputs");
    if (r.weight <= 0) throw SchemaError(r.label + ": weight must be positive");
    if (!r.run) throw SchemaError(r.label + ": rule has no body");
    std::set<std::string> outs;
    for (const auto& o : r.outputs) {
      schema_.index(o);
      if (!outs.insert(o).second) throw SchemaError(r.label + ": output " + o + " listed twice");
    }
    for (const auto& g : r.inputs) {
      if (g.empty()) throw SchemaError(r.label + ": empty input group");
      for (const auto& p : g) {
        schema_.index(p);
        if (outs.count(p)) throw SchemaError(r.label + ": " + p + " is both input and output");
      }
    }
    for (const auto& [p, want] : r.preconditions) {
      if (schema_.kind(p) != Kind::Boolean) throw SchemaError(r.label + ": precondition " + p + " is not boolean");
      if (outs.count(p)) throw SchemaError(r.label + ": " + p + " is both precondition and output");
    }
    for (const auto& p : r.optional) schema_.index(p);
    rules_.push_back(std::move(r));
  }

  const Schema& schema() const { return schema_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(std::size_t i) const { return rules_.at(i); }

 private:
  Schema schema_;
  std::vector<Rule> rules_;
};

struct RuleChain {
  std::vector<std::size_t> rules;  ///< indices into the rule base, in execution order
  int weight = 0;
};

class UnsatisfiableRequest : public std::runtime_error {
 public:
  UnsatisfiableRequest(const std::string& what, std::vector<std::string> missing, std::vector<std::string> frontier)
      : std::runtime_error(what), missing(std::move(missing)), frontier(std::move(frontier)) {}
  std::vector<std::string> missing;   ///< requested properties no chain reaches
  std::vector<std::string> frontier;  ///< absent properties nothing can produce
};

class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

using PropSet = boost::dynamic_bitset<>;

struct RuleMasks {
  std::vector<PropSet> groups;
  PropSet pre, out;
};

inline std::vector<RuleMasks> rule_masks(const RuleBase& base) {
  const std::size_t n = base.schema().size();
  std::vector<RuleMasks> out;
  for (const auto& r : base.rules()) {
    RuleMasks m{{}, PropSet(n), PropSet(n)};
    for (const auto& g : r.inputs) {
      PropSet s(n);
      for (const auto& p : g) s.set(base.schema().index(p));
      m.groups.push_back(std::move(s));
    }
    for (const auto& [p, want] : r.preconditions) m.pre.set(base.schema().index(p));
    for (const auto& p : r.outputs) m.out.set(base.schema().index(p));
    out.push_back(std::move(m));
  }
  return out;
}

inline bool applicable(const RuleMasks& m, const PropSet& have) {
  for (const auto& g : m.groups)
    if (!g.intersects(have)) return false;
  return m.pre.is_subset_of(have);
}

/// Everything derivable from `have`, ignoring weights.
inline PropSet closure(const std::vector<RuleMasks>& masks, const std::set<std::size_t>& excluded, PropSet have) {
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < masks.size(); ++i)
      if (!excluded.count(i) && applicable(masks[i], have) && !masks[i].out.is_subset_of(have)) {
        have |= masks[i].out;
        grew = true;
      }
  }
  return have;
}

}  // namespace detail

/// Minimum-weight chain from `available` to `targets`.
///
/// States are sets of available properties restricted to those that can matter
/// for the targets; a transition applies one rule that adds something new.
/// Ties are broken by the sequence of registration indices.
inline RuleChain schedule(const RuleBase& base, const std::set<std::string>& available,
                          const std::vector<std::string>& targets, const std::set<std::size_t>& excluded = {}) {
  using detail::PropSet;
  const auto& schema = base.schema();
  const std::size_t n = schema.size();
  const auto masks = detail::rule_masks(base);

  PropSet have(n), want(n);
  for (const auto& p : available)
    if (schema.contains(p)) have.set(schema.index(p));
  for (const auto& t : targets) want.set(schema.index(t));
  if (want.is_subset_of(have)) return {};

  // backward relevance
  PropSet relevant = want;
  std::vector<bool> useful(masks.size(), false);
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (useful[i] || excluded.count(i) || !masks[i].out.intersects(relevant)) continue;
      useful[i] = true;
      grew = true;
      for (const auto& g : masks[i].groups) relevant |= g;
      relevant |= masks[i].pre;
    }
  }

  struct Label {
    int cost;
    std::vector<std::size_t> seq;
    PropSet state;
  };
  auto later = [](const Label& a, const Label& b) {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.seq > b.seq;
  };
  std::priority_queue<Label, std::vector<Label>, decltype(later)> queue(later);
  std::set<PropSet> settled;
  queue.push(Label{0, {}, have & relevant});
  const PropSet goal = want & relevant;
  while (!queue.empty()) {
    Label cur = queue.top();
    queue.pop();
    if (!settled.insert(cur.state).second) continue;
    if (goal.is_subset_of(cur.state)) return RuleChain{std::move(cur.seq), cur.cost};
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (!useful[i] || !detail::applicable(masks[i], cur.state)) continue;
      PropSet next = cur.state | (masks[i].out & relevant);
      if (next == cur.state || settled.count(next)) continue;
      auto seq = cur.seq;
      seq.push_back(i);
      queue.push(Label{cur.cost + base.rule(i).weight, std::move(seq), std::move(next)});
    }
  }

  // no chain: report the missing targets and the absent source properties behind them
  const PropSet reach = detail::closure(masks, excluded, have);
  std::vector<std::string> missing, frontier;
  PropSet seen(n);
  std::vector<std::size_t> stack;
  for (std::size_t p = 0; p < n; ++p)
    if (want.test(p) && !reach.test(p)) {
      missing.push_back(schema.name(p));
      stack.push_back(p);
      seen.set(p);
    }
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    bool produced = false;
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (excluded.count(i) || !masks[i].out.test(p)) continue;
      produced = true;
      PropSet needs = masks[i].pre;
      for (const auto& g : masks[i].groups) needs |= g;
      for (std::size_t q = 0; q < n; ++q)
        if (needs.test(q) && !reach.test(q) && !seen.test(q)) {
          seen.set(q);
          stack.push_back(q);
        }
    }
    if (!produced) frontier.push_back(schema.name(p));
  }
  std::sort(frontier.begin(), frontier.end());
  std::string msg = "cannot compute";
  for (const auto& m : missing) msg += " " + m;
  msg += ": no rule chain from the available properties";
  if (!frontier.empty()) {
    msg += " (missing inputs:";
    for (const auto& f : frontier) msg += " " + f;
    msg += ")";
  }
  throw UnsatisfiableRequest(msg, std::move(missing), std::move(frontier));
}

inline RuleChain schedule(const RuleBase& base, const PolytopeObject& obj, const std::vector<std::string>& targets,
                          const std::set<std::size_t>& excluded = {}) {
  std::set<std::string> have;
  for (const auto& [k, v] : obj.values()) have.insert(k);
  return schedule(base, have, targets, excluded);
}

/// Sink for trace lines; level 1 = rule labels, level 2 = full signatures.
struct Trace {
  int verbosity = 0;
  std::function<void(const std::string&)> sink;

  void operator()(int level, const std::string& line) const {
    if (sink && verbosity >= level) sink(line);
  }
};

struct RequestReport {
  std::vector<std::string> applied;   ///< labels of rules that committed, in order
  std::vector<std::string> failures;  ///< "label: reason"
};

namespace detail {

/// Runs one rule and validates its output; nothing touches the object here.
inline PropertyMap run_rule(const RuleBase& base, const PolytopeObject& obj, const Rule& r) {
  RuleContext ctx(obj, r);
  PropertyMap out = r.run(ctx);
  for (const auto& [name, value] : out) {
    if (std::find(r.outputs.begin(), r.outputs.end(), name) == r.outputs.end())
      throw IntegrityError("produced undeclared property " + name);
    const Kind k = base.schema().kind(name);
    if (!value_has_kind(value, k)) throw IntegrityError(name + " is not a " + kind_name(k));
    if (auto problem = structural_problem(value)) throw IntegrityError(name + ": " + *problem);
  }
  for (const auto& o : r.outputs)
    if (!out.count(o)) throw IntegrityError("did not produce " + o);
  return out;
}

}  // namespace detail

/// Computes the targets on `obj`, retaining every intermediate property.
inline RequestReport request(const RuleBase& base, PolytopeObject& obj, const std::vector<std::string>& targets,
                             const Trace& trace = {}) {
  for (const auto& t : targets) base.schema().index(t);
  RequestReport report;
  std::set<std::size_t> excluded;
  for (;;) {
    RuleChain chain;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      chain = schedule(base, obj, targets, excluded);
    } catch (const UnsatisfiableRequest& e) {
      std::string msg = e.what();
      for (const auto& f : report.failures) msg += "\n  " + f;
      throw UnsatisfiableRequest(msg, e.missing, e.frontier);
    }
    if (chain.rules.empty()) return report;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[96];
    std::snprintf(buf, sizeof buf, "minimum weight rule chain constructed in %.3f sec.", secs);
    trace(2, buf);

    std::set<std::size_t> checked;
    // a precondition is evaluated as soon as its property is known, before any costlier rule runs
    auto check_preconditions = [&]() -> bool {
      for (std::size_t i : chain.rules) {
        const Rule& r = base.rule(i);
        if (r.preconditions.empty() || checked.count(i)) continue;
        bool ready = true;
        for (const auto& [p, want] : r.preconditions) ready = ready && obj.has(p);
        if (!ready) continue;
        checked.insert(i);
        for (const auto& [p, want] : r.preconditions) {
          trace(1, "applying rule PRECONDITION: " + p + " ( " + (trace.verbosity >= 2 ? signature(r) : r.label) + " )");
          if (std::get<bool>(obj.get(p)) != want) {
            report.failures.push_back(r.label + ": precondition " + p + " is " + (want ? "false" : "true"));
            trace(1, "precondition " + p + " failed, dropping " + r.label);
            excluded.insert(i);
            return false;
          }
        }
      }
      return true;
    };

    bool completed = check_preconditions();
    for (std::size_t k = 0; completed && k < chain.rules.size(); ++k) {
      const std::size_t i = chain.rules[k];
      const Rule& r = base.rule(i);
      trace(1, "applying rule " + (trace.verbosity >= 2 ? signature(r) : r.label));
      PropertyMap out;
      try {
        out = detail::run_rule(base, obj, r);
      } catch (const std::exception& e) {
        report.failures.push_back(r.label + ": " + e.what());
        trace(1, "rule " + r.label + " failed: " + e.what());
        excluded.insert(i);
        completed = false;
        break;
      }
      for (const auto& o : r.outputs)
        if (!obj.has(o)) obj.set(o, std::move(out.at(o)));
      report.applied.push_back(r.label);
      completed = check_preconditions();
    }
    if (completed) {
      bool done = true;
      for (const auto& t : targets) done = done && obj.has(t);
      if (done) return report;
    }
  }
}

}  // namespace polyq
