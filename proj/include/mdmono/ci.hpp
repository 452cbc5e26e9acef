#pragma once

#include <map>
#include <string>

#include "mdmono/graph.hpp"

namespace mdmono {

// Partial assignment of response indicators to {0, 1}.
using Context = std::map<std::string, int>;

enum class CiStatus {
  Holds,
  // d-separation fails; the independence is not implied by the graph.
  NotSeparated,
  // The context is an event of probability zero under the monotone pairs.
  UndefinedContext,
  // Monotone determinism outside the context could break the independence.
  Unknown,
};

inline std::string_view to_string(CiStatus s) {
  switch (s) {
    case CiStatus::Holds: return "Holds";
    case CiStatus::NotSeparated: return "NotSeparated";
    case CiStatus::UndefinedContext: return "UndefinedContext";
    case CiStatus::Unknown: return "Unknown";
  }
  return "?";
}

struct CiVerdict {
  CiStatus status;
  std::string reason;
  bool holds() const { return status == CiStatus::Holds; }
};

namespace detail {

inline void check_context(const MDag& g, const Context& ctx) {
  for (const auto& [v, value] : ctx) {
    if (!g.contains(v)) throw Error(ErrorCode::MalformedContext, "context assigns unknown vertex '" + v + "'");
    if (!g.is_indicator(v)) throw Error(ErrorCode::MalformedContext, "context assigns non-indicator '" + v + "'");
    if (value != 0 && value != 1) throw Error(ErrorCode::MalformedContext, "context value for '" + v + "' is not 0/1");
  }
}

// Values implied by the context through the monotone closure, or nullopt
// when the context itself violates monotonicity.
inline std::optional<Context> propagate_context(const std::set<Edge>& closure, const Context& ctx, std::string* conflict) {
  Context forced = ctx;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [upper, lower] : closure) {
      auto u = forced.find(upper);
      auto l = forced.find(lower);
      if (u != forced.end() && l != forced.end()) {
        if (u->second == 0 && l->second == 1) {
          if (conflict) *conflict = upper + "=0 with " + lower + "=1 violates " + upper + " >= " + lower;
          return std::nullopt;
        }
        continue;
      }
      if (u != forced.end() && u->second == 0) {
        forced[lower] = 0;
        changed = true;
      } else if (l != forced.end() && l->second == 1) {
        forced[upper] = 1;
        changed = true;
      }
    }
  }
  return forced;
}

}  // namespace detail

// Independence A ⫫ B | Z restricted to the slice fixed by ctx. Context
// vertices outside A ∪ B ∪ Z are treated as conditioned on.
inline CiVerdict ci_under_context(const MDag& g, const MonotoneSpec& mono, const VertexSet& a, const VertexSet& b,
                                  const VertexSet& z, const Context& ctx) {
  detail::check_context(g, ctx);
  VertexSet cond = z;
  const VertexSet queried_ab = set_union(a, b);
  for (const auto& [v, value] : ctx) {
    if (!queried_ab.count(v)) cond.insert(v);
  }

  const auto closure = mono.closure();
  std::string conflict;
  const auto forced = detail::propagate_context(closure, ctx, &conflict);
  if (!forced) return {CiStatus::UndefinedContext, conflict};

  // The context event equals the event of its monotone consequences, so
  // forced indicators are conditioned on as well; a forced member of A or B
  // is constant and drops out.
  VertexSet a2, b2;
  for (const auto& v : a) {
    if (!forced->count(v)) a2.insert(v);
  }
  for (const auto& v : b) {
    if (!forced->count(v)) b2.insert(v);
  }
  for (const auto& [v, value] : *forced) {
    if (!a2.count(v) && !b2.count(v)) cond.insert(v);
  }
  if (a2.empty() || b2.empty()) return {CiStatus::Holds, "one side is fixed by the context"};

  if (!d_separated(g, a2, b2, cond)) return {CiStatus::NotSeparated, "not d-separated"};
  if (mono.empty()) return {CiStatus::Holds, "d-separated; no monotone pairs"};

  const VertexSet queried = set_union(set_union(a2, b2), cond);
  for (const auto& [upper, lower] : closure) {
    if (!queried.count(lower) || forced->count(lower)) continue;
    auto it = forced->find(upper);
    if (it != forced->end() && it->second == 1) continue;
    return {CiStatus::Unknown, "monotone pair " + upper + " >= " + lower + " is active outside the context"};
  }
  return {CiStatus::Holds, "d-separated; monotone pairs inactive under the context"};
}

}  // namespace mdmono
