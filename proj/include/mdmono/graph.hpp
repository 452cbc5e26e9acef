#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdmono/error.hpp"

namespace mdmono {

enum class VertexKind { Observed, Partial, Indicator };

inline std::string_view to_string(VertexKind kind) {
  switch (kind) {
    case VertexKind::Observed: return "observed";
    case VertexKind::Partial: return "partial";
    case VertexKind::Indicator: return "indicator";
  }
  return "?";
}

using VertexSet = std::set<std::string>;
using Edge = std::pair<std::string, std::string>;

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

// Missing-data DAG over fully observed variables, partially observed
// variables and their response indicators. Proxies are never stored.
// The container accepts structurally invalid graphs (cycles, indicators
// with substantive descendants) so that validate_mdag can report them.
class MDag {
 public:
  void add_observed(const std::string& name) { add_vertex(name, VertexKind::Observed); }

  // Adds the partially observed variable and its response indicator.
  void add_partial(const std::string& name, std::optional<std::string> indicator = std::nullopt) {
    const std::string ind = indicator.value_or("R_" + name);
    if (ind == name) throw Error(ErrorCode::InvalidGraph, "indicator name equals variable name '" + name + "'");
    if (index_.count(ind)) throw Error(ErrorCode::InvalidGraph, "duplicate vertex '" + ind + "'");
    add_vertex(name, VertexKind::Partial);
    add_vertex(ind, VertexKind::Indicator);
    indicator_of_[name] = ind;
    variable_of_[ind] = name;
  }

  void add_edge(const std::string& from, const std::string& to) {
    require(from);
    require(to);
    if (from == to) throw Error(ErrorCode::InvalidGraph, "self loop on '" + from + "'");
    if (edge_set_.insert({from, to}).second) {
      edges_.emplace_back(from, to);
      children_[from].insert(to);
      parents_[to].insert(from);
    }
  }

  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  VertexKind kind(const std::string& name) const { return kinds_.at(require(name)); }

  bool is_indicator(const std::string& name) const { return contains(name) && kind(name) == VertexKind::Indicator; }
  bool is_partial(const std::string& name) const { return contains(name) && kind(name) == VertexKind::Partial; }
  bool is_observed(const std::string& name) const { return contains(name) && kind(name) == VertexKind::Observed; }

  // Declaration order.
  const std::vector<std::string>& vertices() const { return names_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(const std::string& from, const std::string& to) const { return edge_set_.count({from, to}) != 0; }

  const VertexSet& parents(const std::string& v) const {
    require(v);
    auto it = parents_.find(v);
    return it == parents_.end() ? empty_ : it->second;
  }

  const VertexSet& children(const std::string& v) const {
    require(v);
    auto it = children_.find(v);
    return it == children_.end() ? empty_ : it->second;
  }

  const std::string& indicator_of(const std::string& partial) const {
    auto it = indicator_of_.find(partial);
    if (it == indicator_of_.end()) throw Error(ErrorCode::UnknownVertex, "'" + partial + "' is not a partially observed variable");
    return it->second;
  }

  const std::string& variable_of(const std::string& indicator) const {
    auto it = variable_of_.find(indicator);
    if (it == variable_of_.end()) throw Error(ErrorCode::NotIndicator, "'" + indicator + "' is not a response indicator");
    return it->second;
  }

  VertexSet of_kind(VertexKind k) const {
    VertexSet out;
    for (const auto& n : names_) {
      if (kinds_[index_.at(n)] == k) out.insert(n);
    }
    return out;
  }

  std::vector<std::string> ordered_of_kind(VertexKind k) const {
    std::vector<std::string> out;
    for (const auto& n : names_) {
      if (kinds_[index_.at(n)] == k) out.push_back(n);
    }
    return out;
  }

  VertexSet indicators() const { return of_kind(VertexKind::Indicator); }
  VertexSet partials() const { return of_kind(VertexKind::Partial); }
  VertexSet observed() const { return of_kind(VertexKind::Observed); }

  VertexSet indicators_of(const VertexSet& partials) const {
    VertexSet out;
    for (const auto& p : partials) out.insert(indicator_of(p));
    return out;
  }

  std::size_t require(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + name + "'");
    return it->second;
  }

  friend bool operator==(const MDag& a, const MDag& b) {
    return a.names_ == b.names_ && a.kinds_ == b.kinds_ && a.edge_set_ == b.edge_set_ && a.indicator_of_ == b.indicator_of_;
  }

 private:
  void add_vertex(const std::string& name, VertexKind kind) {
    if (name.empty()) throw Error(ErrorCode::InvalidGraph, "empty vertex name");
    if (index_.count(name)) throw Error(ErrorCode::InvalidGraph, "duplicate vertex '" + name + "'");
    index_[name] = names_.size();
    names_.push_back(name);
    kinds_.push_back(kind);
  }

  std::vector<std::string> names_;
  std::vector<VertexKind> kinds_;
  std::map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::set<Edge> edge_set_;
  std::map<std::string, VertexSet> parents_;
  std::map<std::string, VertexSet> children_;
  std::map<std::string, std::string> indicator_of_;
  std::map<std::string, std::string> variable_of_;
  inline static const VertexSet empty_{};
};

// Locally monotone pairs (upper, lower) meaning R_upper >= R_lower.
class MonotoneSpec {
 public:
  MonotoneSpec() = default;
  MonotoneSpec(std::initializer_list<Edge> pairs) : pairs_(pairs) {}

  void add(const std::string& upper, const std::string& lower) { pairs_.insert({upper, lower}); }
  bool contains(const std::string& upper, const std::string& lower) const { return pairs_.count({upper, lower}) != 0; }
  bool empty() const { return pairs_.empty(); }
  std::size_t size() const { return pairs_.size(); }
  const std::set<Edge>& pairs() const { return pairs_; }

  // Direct monotone parents of an indicator.
  VertexSet uppers_of(const std::string& lower) const {
    VertexSet out;
    for (const auto& [u, l] : pairs_) {
      if (l == lower) out.insert(u);
    }
    return out;
  }

  // Transitive closure: every (u, l) with a chain of pairs from u to l.
  std::set<Edge> closure() const {
    std::set<Edge> out = pairs_;
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<Edge> added;
      for (const auto& [a, b] : out) {
        for (const auto& [c, d] : out) {
          if (b == c && !out.count({a, d})) added.emplace_back(a, d);
        }
      }
      for (auto& e : added) grew |= out.insert(std::move(e)).second;
    }
    return out;
  }

  friend bool operator==(const MonotoneSpec&, const MonotoneSpec&) = default;

 private:
  std::set<Edge> pairs_;
};

enum class ViolationKind { Cycle, IndicatorHasSubstantiveDescendant, IndicatorPairing, MonotoneWithoutEdge, MonotoneEndpoint };

inline std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::IndicatorHasSubstantiveDescendant: return "indicator has descendant in O ∪ X(1)";
    case ViolationKind::IndicatorPairing: return "indicator pairing";
    case ViolationKind::MonotoneWithoutEdge: return "monotone pair without edge";
    case ViolationKind::MonotoneEndpoint: return "monotone endpoint is not a response indicator";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::vector<std::string> vertices;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

enum class Relation { Parents, Children, Ancestors, Descendants };

namespace detail {

inline VertexSet reach(const MDag& g, const std::string& v, bool upward) {
  VertexSet seen;
  std::vector<std::string> stack{v};
  while (!stack.empty()) {
    const std::string cur = stack.back();
    stack.pop_back();
    for (const auto& n : upward ? g.parents(cur) : g.children(cur)) {
      if (seen.insert(n).second) stack.push_back(n);
    }
  }
  // A vertex on a cycle reaches itself; relatives exclude the vertex.
  seen.erase(v);
  return seen;
}

}  // namespace detail

// Ancestors and descendants exclude v itself.
inline VertexSet relation_set(const MDag& g, const std::string& v, Relation kind) {
  g.require(v);
  switch (kind) {
    case Relation::Parents: return g.parents(v);
    case Relation::Children: return g.children(v);
    case Relation::Ancestors: return detail::reach(g, v, true);
    case Relation::Descendants: return detail::reach(g, v, false);
  }
  return {};
}

inline VertexSet ancestors(const MDag& g, const std::string& v) { return relation_set(g, v, Relation::Ancestors); }
inline VertexSet descendants(const MDag& g, const std::string& v) { return relation_set(g, v, Relation::Descendants); }

// Kahn's algorithm; the result holds only the acyclic part when cycles exist.
inline std::vector<std::string> topological_order(const MDag& g) {
  std::map<std::string, std::size_t> in_degree;
  for (const auto& v : g.vertices()) in_degree[v] = g.parents(v).size();
  std::vector<std::string> ready;
  for (const auto& v : g.vertices()) {
    if (in_degree[v] == 0) ready.push_back(v);
  }
  std::vector<std::string> order;
  std::size_t head = 0;
  while (head < ready.size()) {
    const std::string v = ready[head++];
    order.push_back(v);
    for (const auto& c : g.children(v)) {
      if (--in_degree[c] == 0) ready.push_back(c);
    }
  }
  return order;
}

inline bool is_acyclic(const MDag& g) { return topological_order(g).size() == g.vertices().size(); }

inline ValidationReport validate_mdag(const MDag& g) {
  ValidationReport report;
  for (const auto& v : g.vertices()) {
    const bool on_cycle = std::any_of(g.children(v).begin(), g.children(v).end(),
                                      [&](const std::string& c) { return detail::reach(g, c, false).count(v) != 0; });
    if (on_cycle) {
      report.violations.push_back({ViolationKind::Cycle, {v}, "vertex '" + v + "' lies on a directed cycle"});
    }
  }
  for (const auto& v : g.vertices()) {
    if (g.kind(v) == VertexKind::Partial) {
      const auto& r = g.indicator_of(v);
      if (!g.is_indicator(r) || g.variable_of(r) != v) {
        report.violations.push_back({ViolationKind::IndicatorPairing, {v, r}, "'" + v + "' lacks a unique response indicator"});
      }
    }
    if (g.kind(v) == VertexKind::Indicator) {
      VertexSet bad;
      for (const auto& d : descendants(g, v)) {
        if (g.kind(d) != VertexKind::Indicator) bad.insert(d);
      }
      if (!bad.empty()) {
        std::vector<std::string> verts{v};
        verts.insert(verts.end(), bad.begin(), bad.end());
        std::string msg = "indicator '" + v + "' has descendant in O ∪ X(1):";
        for (const auto& b : bad) msg += " " + b;
        report.violations.push_back({ViolationKind::IndicatorHasSubstantiveDescendant, std::move(verts), msg});
      }
    }
  }
  return report;
}

inline ValidationReport validate_mdag(const MDag& g, const MonotoneSpec& mono) {
  ValidationReport report = validate_mdag(g);
  for (const auto& [u, l] : mono.pairs()) {
    if (!g.is_indicator(u) || !g.is_indicator(l)) {
      report.violations.push_back({ViolationKind::MonotoneEndpoint, {u, l}, "monotone pair (" + u + ", " + l + ") has a non-indicator endpoint"});
    } else if (!g.has_edge(u, l)) {
      report.violations.push_back({ViolationKind::MonotoneWithoutEdge, {u, l}, "monotone pair (" + u + ", " + l + ") requires the edge " + u + " -> " + l});
    }
  }
  return report;
}

inline void require_valid(const MDag& g, const MonotoneSpec& mono) {
  const auto report = validate_mdag(g, mono);
  if (!report.valid()) throw Error(ErrorCode::InvalidGraph, report.violations.front().message);
}

// Standard d-separation via the moralized ancestral graph.
inline bool d_separated(const MDag& g, const VertexSet& a, const VertexSet& b, const VertexSet& z) {
  for (const auto* s : {&a, &b, &z}) {
    for (const auto& v : *s) g.require(v);
  }
  if (!set_intersection(a, b).empty() || !set_intersection(a, z).empty() || !set_intersection(b, z).empty()) {
    throw Error(ErrorCode::OverlappingSets, "d-separation sets must be pairwise disjoint");
  }
  if (a.empty() || b.empty()) return true;

  VertexSet relevant = set_union(set_union(a, b), z);
  for (const auto& v : VertexSet(relevant)) {
    const auto an = ancestors(g, v);
    relevant.insert(an.begin(), an.end());
  }

  std::map<std::string, VertexSet> moral;
  auto link = [&](const std::string& x, const std::string& y) {
    moral[x].insert(y);
    moral[y].insert(x);
  };
  for (const auto& v : relevant) {
    std::vector<std::string> pa;
    for (const auto& p : g.parents(v)) {
      if (relevant.count(p)) {
        pa.push_back(p);
        link(p, v);
      }
    }
    for (std::size_t i = 0; i < pa.size(); ++i) {
      for (std::size_t j = i + 1; j < pa.size(); ++j) link(pa[i], pa[j]);
    }
  }

  VertexSet seen(a.begin(), a.end());
  std::vector<std::string> stack(a.begin(), a.end());
  while (!stack.empty()) {
    const std::string cur = stack.back();
    stack.pop_back();
    if (b.count(cur)) return false;
    for (const auto& n : moral[cur]) {
      if (z.count(n) || seen.count(n)) continue;
      seen.insert(n);
      stack.push_back(n);
    }
  }
  return true;
}

}  // namespace mdmono
