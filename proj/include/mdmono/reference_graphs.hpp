#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mdmono/constructions.hpp"
#include "mdmono/graph.hpp"

namespace mdmono::figures {

struct Figure {
  std::string name;
  MDag graph;
  MonotoneSpec mono;
};

inline Figure fig1() {
  MDag g;
  g.add_partial("X");
  g.add_partial("Y");
  g.add_edge("X", "Y");
  g.add_edge("X", "R_Y");
  g.add_edge("R_X", "R_Y");
  return {"fig1", g, MonotoneSpec{{"R_X", "R_Y"}}};
}

inline Figure fig2a() {
  auto [g, mono] = appendix_graph();
  return {"fig2a", g, mono};
}

inline Figure fig2b() {
  auto [g, mono] = self_censoring_chain_graph(4);
  return {"fig2b", g, mono};
}

namespace detail {

// Shared core of the colluder examples.
inline Figure fig3_core(const std::string& name) {
  MDag g;
  g.add_partial("X");
  g.add_partial("Y");
  g.add_partial("Z");
  g.add_edge("X", "Y");
  g.add_edge("Y", "Z");
  g.add_edge("X", "R_Y");
  g.add_edge("X", "R_Z");
  g.add_edge("Z", "R_Y");
  g.add_edge("R_X", "R_Y");
  return {name, g, MonotoneSpec{{"R_X", "R_Y"}}};
}

inline Figure fig3_with_w(const std::string& name, bool w_partial) {
  auto f = fig3_core(name);
  MDag g;
  // W goes first so that declaration order reads naturally in output.
  if (w_partial) g.add_partial("W");
  else g.add_observed("W");
  for (const auto& v : f.graph.ordered_of_kind(VertexKind::Partial)) g.add_partial(v);
  for (const auto& [a, b] : f.graph.edges()) g.add_edge(a, b);
  g.add_edge("R_Y", "R_Z");
  g.add_edge("W", "Z");
  g.add_edge("W", "R_Z");
  f.graph = g;
  return f;
}

}  // namespace detail

inline Figure fig3a() { return detail::fig3_core("fig3a"); }

inline Figure fig3b() {
  auto f = detail::fig3_core("fig3b");
  f.graph.add_edge("R_Y", "R_Z");
  return f;
}

inline Figure fig3c() { return detail::fig3_with_w("fig3c", false); }

inline Figure fig3d() {
  auto f = detail::fig3_with_w("fig3d", true);
  f.graph.add_edge("R_W", "R_Y");
  return f;
}

inline Figure fig3e() {
  auto f = detail::fig3_with_w("fig3e", true);
  f.graph.add_edge("R_X", "R_W");
  return f;
}

inline std::vector<Figure> all() { return {fig1(), fig2a(), fig2b(), fig3a(), fig3b(), fig3c(), fig3d(), fig3e()}; }

inline Figure without_mono(Figure f) {
  f.mono = MonotoneSpec{};
  f.name += "-nomono";
  return f;
}

}  // namespace mdmono::figures
