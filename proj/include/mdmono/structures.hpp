#pragma once

#include <string>
#include <vector>

#include "mdmono/graph.hpp"

namespace mdmono {

// X(1) -> R_Y <- R_X
struct Colluder {
  std::string collider_var;
  std::string collider_ind;
  std::string target;
  friend bool operator==(const Colluder&, const Colluder&) = default;
  friend auto operator<=>(const Colluder&, const Colluder&) = default;
};

struct MaximalColluder {
  VertexSet c_set;
  std::string target;
  bool empty() const { return c_set.empty(); }
  friend bool operator==(const MaximalColluder&, const MaximalColluder&) = default;
};

// variable -> indicator_chain[0] -> ... -> indicator_chain.back() == R_variable,
// every chain edge monotone. A one-element chain is a self-censoring edge.
struct SelfCensoringPath {
  std::string variable;
  std::vector<std::string> indicator_chain;
  std::size_t length() const { return indicator_chain.size(); }
  friend bool operator==(const SelfCensoringPath&, const SelfCensoringPath&) = default;
  friend auto operator<=>(const SelfCensoringPath&, const SelfCensoringPath&) = default;
};

struct SelfCensoring {
  std::vector<Edge> edges;
  std::vector<SelfCensoringPath> paths;
};

inline MaximalColluder find_maximal_colluder(const MDag& g, const std::string& r_y) {
  if (!g.is_indicator(r_y)) throw Error(ErrorCode::NotIndicator, "'" + r_y + "' is not a response indicator");
  MaximalColluder out{{}, r_y};
  const auto& pa = g.parents(r_y);
  for (const auto& v : pa) {
    if (g.is_partial(v) && v != g.variable_of(r_y) && pa.count(g.indicator_of(v))) out.c_set.insert(v);
  }
  return out;
}

inline std::vector<Colluder> find_colluders(const MDag& g) {
  std::vector<Colluder> out;
  for (const auto& r : g.ordered_of_kind(VertexKind::Indicator)) {
    for (const auto& c : find_maximal_colluder(g, r).c_set) out.push_back({c, g.indicator_of(c), r});
  }
  return out;
}

inline SelfCensoring find_self_censoring(const MDag& g, const MonotoneSpec& mono) {
  SelfCensoring out;
  for (const auto& x : g.ordered_of_kind(VertexKind::Partial)) {
    const auto& own = g.indicator_of(x);
    if (g.has_edge(x, own)) out.edges.emplace_back(x, own);

    // Walk monotone pairs upstream from the variable's own indicator,
    // recording every simple chain whose head is a child of the variable.
    std::vector<std::string> chain{own};
    std::vector<std::vector<std::string>> found;
    auto walk = [&](auto&& self) -> void {
      const std::string head = chain.back();
      if (g.has_edge(x, head)) found.emplace_back(chain.rbegin(), chain.rend());
      for (const auto& upper : mono.uppers_of(head)) {
        if (!g.has_edge(upper, head)) continue;
        if (std::find(chain.begin(), chain.end(), upper) != chain.end()) continue;
        chain.push_back(upper);
        self(self);
        chain.pop_back();
      }
    };
    walk(walk);
    std::sort(found.begin(), found.end());
    for (auto& f : found) out.paths.push_back({x, std::move(f)});
  }
  return out;
}

}  // namespace mdmono
