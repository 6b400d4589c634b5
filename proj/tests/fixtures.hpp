#pragma once

// Shared test inputs: sample complexes, circle samples and random rule bases with
// a brute-force scheduling oracle.

#include "polyq/rules.hpp"
#include "polyq/topaz.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace polyq::fixture {

inline SimplicialComplex boundary_of_simplex(int d) {
  std::vector<IndexSet> f;
  for (int skip = 0; skip <= d; ++skip) {
    IndexSet s;
    for (int v = 0; v <= d; ++v)
      if (v != skip) s.push_back(v);
    f.push_back(s);
  }
  return make_complex(f);
}

// 6-vertex real projective plane, written 1-based and shifted down
inline SimplicialComplex rp2() {
  const std::vector<IndexSet> one_based = {{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 6, 2},
                                           {2, 3, 5}, {3, 4, 6}, {4, 5, 2}, {5, 6, 3}, {6, 2, 4}};
  std::vector<IndexSet> f;
  for (auto s : one_based) {
    for (auto& v : s) --v;
    f.push_back(s);
  }
  return make_complex(f);
}

// 7-vertex torus
inline SimplicialComplex torus() {
  std::vector<IndexSet> f;
  for (int i = 0; i < 7; ++i) {
    f.push_back({i, (i + 1) % 7, (i + 3) % 7});
    f.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return make_complex(f);
}

// rational point on the circle of radius r around (cx, cy) near angle theta
inline QVector circle_point(double theta, const Rational& r, const Rational& cx, const Rational& cy) {
  const Rational t(static_cast<long>(std::llround(std::tan(theta / 2) * 1000)), 1000);
  const Rational q = 1 + t * t;
  return {cx + r * (1 - t * t) / q, cy + r * 2 * t / q};
}

// true iff edges form one cycle visiting `order` consecutively (cyclically)
inline bool is_cycle_in_order(const std::vector<std::pair<int, int>>& edges, const std::vector<int>& order) {
  std::set<std::pair<int, int>> want;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int a = order[i], b = order[(i + 1) % order.size()];
    want.insert({std::min(a, b), std::max(a, b)});
  }
  std::set<std::pair<int, int>> got;
  for (auto [a, b] : edges) got.insert({std::min(a, b), std::max(a, b)});
  return got == want;
}

// Random rule bases over boolean properties. Rules are (groups, preconditions, outputs, weight).
struct RandomBase {
  int n_props = 0;
  std::vector<Rule> rules;
  std::set<std::string> initial;
  std::vector<std::string> targets;
};

inline std::string prop_name(int i) { return "P" + std::to_string(i); }

inline RandomBase random_base(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RandomBase rb;
  rb.n_props = pick(4, 12);
  const int n_rules = pick(1, 10);
  for (int r = 0; r < n_rules; ++r) {
    Rule rule;
    rule.label = "r" + std::to_string(r);
    std::set<int> outs;
    const int n_out = pick(1, 2);
    while (static_cast<int>(outs.size()) < n_out) outs.insert(pick(0, rb.n_props - 1));
    for (int o : outs) rule.outputs.push_back(prop_name(o));
    std::vector<int> others;
    for (int p = 0; p < rb.n_props; ++p)
      if (!outs.count(p)) others.push_back(p);
    auto any_other = [&] { return others[static_cast<std::size_t>(pick(0, static_cast<int>(others.size()) - 1))]; };
    const int n_groups = pick(0, 3);
    for (int g = 0; g < n_groups; ++g) {
      std::set<int> alts;
      const int n_alt = pick(1, 2);
      while (static_cast<int>(alts.size()) < n_alt) alts.insert(any_other());
      std::vector<std::string> group;
      for (int a : alts) group.push_back(prop_name(a));
      rule.inputs.push_back(group);
    }
    if (pick(0, 3) == 0) rule.preconditions.emplace_back(prop_name(any_other()), true);
    rule.weight = pick(1, 10);
    const auto outputs = rule.outputs;
    rule.run = [outputs](const RuleContext&) {
      PropertyMap m;
      for (const auto& o : outputs) m.emplace(o, true);
      return m;
    };
    rb.rules.push_back(std::move(rule));
  }
  const int n_init = pick(1, 3);
  for (int i = 0; i < n_init; ++i) rb.initial.insert(prop_name(pick(0, rb.n_props - 1)));
  const int n_targets = pick(1, 2);
  for (int i = 0; i < n_targets; ++i) rb.targets.push_back(prop_name(pick(0, rb.n_props - 1)));
  return rb;
}

inline RuleBase build(const RandomBase& rb) {
  Schema schema;
  for (int p = 0; p < rb.n_props; ++p) schema.add(prop_name(p), Kind::Boolean);
  RuleBase base(schema);
  for (const auto& r : rb.rules) base.add(r);
  return base;
}

inline bool rule_applicable(const Rule& r, const std::set<std::string>& have) {
  for (const auto& g : r.inputs)
    if (std::none_of(g.begin(), g.end(), [&](const std::string& p) { return have.count(p) > 0; })) return false;
  for (const auto& [p, want] : r.preconditions)
    if (!have.count(p)) return false;
  return true;
}

/// Cheapest subset of rules whose forward closure covers the targets; -1 if none.
inline int exhaustive_minimum(const RandomBase& rb) {
  const std::size_t n = rb.rules.size();
  int best = -1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    int w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w += rb.rules[i].weight;
    if (best >= 0 && w >= best) continue;
    std::set<std::string> have = rb.initial;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i & 1) && rule_applicable(rb.rules[i], have))
          for (const auto& o : rb.rules[i].outputs) grew |= have.insert(o).second;
    }
    if (std::all_of(rb.targets.begin(), rb.targets.end(), [&](const std::string& t) { return have.count(t) > 0; }))
      best = w;
  }
  return best;
}

}  // namespace polyq::fixture
