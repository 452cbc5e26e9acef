#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mdmono/ci.hpp"
#include "mdmono/evaluate.hpp"
#include "mdmono/expr.hpp"
#include "mdmono/structures.hpp"

namespace mdmono {

enum class Theorem { T1, T2, T3, T4, T5, Fallback, Mohan };

inline std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    case Theorem::T3: return "T3";
    case Theorem::T4: return "T4";
    case Theorem::T5: return "T5";
    case Theorem::Fallback: return "Fallback";
    case Theorem::Mohan: return "Mohan";
  }
  return "?";
}

struct CiObligation {
  std::string label;
  VertexSet a, b, z;
  Context ctx;
  CiVerdict verdict;
};

struct TheoremApplication {
  Theorem theorem = Theorem::T2;
  // Functional form used; differs from `theorem` only for Fallback.
  Theorem shape = Theorem::T2;
  std::string target;
  VertexSet c_set, z_set, r_prime, w_set, d_set;
  // Indicator values fixed where the functional applies.
  Assignment slice;
  // For T1: the indicator assignments (min = 0) covered by the piece.
  std::vector<Assignment> region;
  std::vector<CiObligation> obligations;
  ProbExpr functional;
  // What the functional equals: p(R_Y | pa(R_Y)) on the slice.
  ProbExpr query;
};

enum class IdentifyStatus { Identified, NotIdentifiable, Unknown };
enum class Reason { None, SelfCensoringEdge, SelfCensoringPath, Colluder, NoApplicableTheorem };

inline std::string_view to_string(IdentifyStatus s) {
  switch (s) {
    case IdentifyStatus::Identified: return "Identified";
    case IdentifyStatus::NotIdentifiable: return "NotIdentifiable";
    case IdentifyStatus::Unknown: return "Unknown";
  }
  return "?";
}

inline std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::None: return "None";
    case Reason::SelfCensoringEdge: return "SelfCensoringEdge";
    case Reason::SelfCensoringPath: return "SelfCensoringPath";
    case Reason::Colluder: return "Colluder";
    case Reason::NoApplicableTheorem: return "NoApplicableTheorem";
  }
  return "?";
}

struct IdentifyResult {
  IdentifyStatus status = IdentifyStatus::Unknown;
  Reason reason = Reason::None;
  std::string message;
  std::optional<ProbExpr> functional;
  ProbExpr query;
  std::vector<TheoremApplication> provenance;
  // Structures witnessing a refusal.
  std::vector<Edge> witness_edges;
  std::vector<SelfCensoringPath> witness_paths;
  std::vector<Colluder> witness_colluders;
  // Obligations that failed on the way to an Unknown.
  std::vector<CiObligation> failed_obligations;

  bool identified() const { return status == IdentifyStatus::Identified; }
};

namespace detail {

inline VarRef free_ref(const std::string& n) { return {n, std::nullopt}; }

// Refs for `names`, pinned where `pins` fixes them; free refs first.
inline std::vector<VarRef> refs_in(const VertexSet& names, const Assignment& pins) {
  std::vector<VarRef> free, fixed;
  for (const auto& n : names) {
    auto it = pins.find(n);
    if (it == pins.end()) free.push_back(free_ref(n));
    else fixed.push_back({n, it->second});
  }
  free.insert(free.end(), fixed.begin(), fixed.end());
  return free;
}

inline std::vector<VarRef> concat(std::initializer_list<std::vector<VarRef>> parts) {
  std::vector<VarRef> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::stable_partition(out.begin(), out.end(), [](const VarRef& r) { return !r.value; });
  return out;
}

inline std::vector<VarRef> ones(const VertexSet& names) {
  std::vector<VarRef> out;
  for (const auto& n : names) out.push_back({n, 1});
  return out;
}

// Nonempty subsets, smallest first, lexicographic within a size.
inline std::vector<VertexSet> subsets_by_size(const VertexSet& pool) {
  const std::vector<std::string> items(pool.begin(), pool.end());
  std::vector<VertexSet> out;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t size) {
    if (pick.size() == size) {
      VertexSet s;
      for (auto i : pick) s.insert(items[i]);
      out.push_back(std::move(s));
      return;
    }
    for (std::size_t i = start; i < items.size(); ++i) {
      pick.push_back(i);
      rec(i + 1, size);
      pick.pop_back();
    }
  };
  for (std::size_t size = 1; size <= items.size(); ++size) rec(0, size);
  return out;
}

// Everything the theorem search needs about one indicator on one slice.
struct Frame {
  const MDag* g;
  const MonotoneSpec* mono;
  std::string target;
  VertexSet pa;
  VertexSet c_set;
  VertexSet z_set;
  VertexSet r_z;
  Assignment slice;
};

inline Frame make_frame(const MDag& g, const MonotoneSpec& mono, const std::string& r_y, const VertexSet& c_set, const Assignment& slice) {
  Frame f{&g, &mono, r_y, g.parents(r_y), c_set, {}, {}, slice};
  for (const auto& v : f.pa) {
    if (g.is_partial(v) && !f.pa.count(g.indicator_of(v))) f.z_set.insert(v);
  }
  f.r_z = g.indicators_of(f.z_set);
  return f;
}

class TheoremSearch {
 public:
  explicit TheoremSearch(const Frame& f) : f_(f) {}

  std::optional<TheoremApplication> run() {
    if (auto a = t2()) return a;
    if (f_.z_set.empty()) return std::nullopt;
    if (auto a = t3()) return a;
    if (auto a = t4()) return a;
    return t5();
  }

  const std::vector<CiObligation>& failed() const { return failed_; }

 private:
  CiObligation check(const std::string& label, const VertexSet& a, const VertexSet& b, const VertexSet& z, const Context& ctx) {
    // Labels are written for R_Y; name the actual target.
    std::string text = label;
    for (auto at = text.find("R_Y"); at != std::string::npos; at = text.find("R_Y", at + f_.target.size())) {
      text.replace(at, 3, f_.target);
    }
    CiObligation ob{text, a, b, z, ctx, {}};
    if (a.empty() || b.empty()) {
      ob.verdict = {CiStatus::Holds, "vacuous: empty side"};
    } else {
      ob.verdict = ci_under_context(*f_.g, *f_.mono, a, b, z, ctx);
    }
    if (!ob.verdict.holds()) failed_.push_back(ob);
    return ob;
  }

  TheoremApplication base(Theorem t, const Assignment& slice) const {
    TheoremApplication app;
    app.theorem = t;
    app.shape = t;
    app.target = f_.target;
    app.c_set = f_.c_set;
    app.z_set = f_.z_set;
    app.r_prime = f_.r_z;
    app.slice = slice;
    app.region = {slice};
    app.query = expr::term({free_ref(f_.target)}, refs_in(f_.pa, slice));
    return app;
  }

  VertexSet rest() const { return set_difference(f_.pa, f_.z_set); }

  std::optional<TheoremApplication> t2() {
    auto ob = check("R_Y _||_ R' | pa(R_Y)", {f_.target}, f_.r_z, f_.pa, f_.slice);
    if (!ob.verdict.holds()) return std::nullopt;
    auto app = base(Theorem::T2, f_.slice);
    app.obligations = {ob};
    app.functional = expr::term({free_ref(f_.target)}, concat({refs_in(f_.pa, f_.slice), ones(f_.r_z)}));
    return app;
  }

  std::optional<TheoremApplication> t3() {
    VertexSet cond = rest();
    cond.insert(f_.target);
    auto ob = check("Z _||_ R_Z | R_Y, pa(R_Y) \\ Z", f_.z_set, f_.r_z, cond, f_.slice);
    if (!ob.verdict.holds()) return std::nullopt;
    auto app = base(Theorem::T3, f_.slice);
    app.obligations = {ob};
    const ProbExpr n = expr::product({
        expr::term(refs_in(f_.z_set, {}), concat({ones(f_.r_z), {free_ref(f_.target)}, refs_in(rest(), f_.slice)})),
        expr::term(concat({{free_ref(f_.target)}, refs_in(rest(), f_.slice)})),
    });
    app.functional = expr::quotient(n, expr::sum({f_.target}, n));
    return app;
  }

  std::optional<TheoremApplication> t4() {
    const VertexSet pool = set_difference(f_.g->observed(), f_.pa);
    for (const auto& w : subsets_by_size(pool)) {
      VertexSet cond = set_union(rest(), w);
      cond.insert(f_.target);
      auto ob = check("Z _||_ R_Z | W, R_Y, pa(R_Y) \\ Z", f_.z_set, f_.r_z, cond, f_.slice);
      if (!ob.verdict.holds()) continue;
      auto app = base(Theorem::T4, f_.slice);
      app.obligations = {ob};
      app.w_set = w;
      const ProbExpr n = expr::product({
          expr::term(refs_in(f_.z_set, {}),
                     concat({refs_in(w, {}), {free_ref(f_.target)}, refs_in(rest(), f_.slice), ones(f_.r_z)})),
          expr::term(concat({refs_in(w, {}), {free_ref(f_.target)}, refs_in(rest(), f_.slice)})),
      });
      std::vector<std::string> over(w.begin(), w.end());
      std::vector<std::string> over_y = over;
      over_y.push_back(f_.target);
      app.functional = expr::quotient(expr::sum(over, n), expr::sum(over_y, n));
      return app;
    }
    return std::nullopt;
  }

  std::optional<TheoremApplication> t5() {
    const MDag& g = *f_.g;
    VertexSet pool;
    for (const auto& x : set_difference(g.partials(), f_.pa)) {
      if (x == g.variable_of(f_.target)) continue;
      auto pinned = f_.slice.find(g.indicator_of(x));
      if (pinned != f_.slice.end() && pinned->second == 0) continue;
      pool.insert(x);
    }
    for (const auto& w : subsets_by_size(pool)) {
      const VertexSet r_w = g.indicators_of(w);
      const VertexSet r_w_in = set_intersection(r_w, f_.pa);
      const VertexSet r_w_out = set_difference(r_w, f_.pa);
      Assignment slice = f_.slice;
      for (const auto& r : r_w_in) slice[r] = 1;

      VertexSet cond1 = set_union(rest(), w);
      cond1.insert(f_.target);
      auto ob1 = check("Z _||_ R_Z, R_W \\ pa(R_Y) | W, R_Y, pa(R_Y) \\ Z", f_.z_set, set_union(f_.r_z, r_w_out), cond1, slice);
      if (!ob1.verdict.holds()) continue;
      VertexSet cond2 = rest();
      cond2.insert(f_.target);
      auto ob2 = check("W _||_ R_W \\ pa(R_Y) | R_Y, pa(R_Y) \\ Z", w, r_w_out, cond2, slice);
      if (!ob2.verdict.holds()) continue;

      auto app = base(Theorem::T5, slice);
      app.obligations = {ob1, ob2};
      app.w_set = w;
      app.d_set = f_.c_set;
      for (const auto& x : w) {
        if (r_w_in.count(g.indicator_of(x))) app.d_set.insert(x);
      }
      const VertexSet rest_w = set_difference(rest(), r_w);
      std::vector<ProbExpr> q{
          expr::term(refs_in(f_.z_set, {}),
                     concat({refs_in(w, {}), ones(f_.r_z), ones(r_w), {free_ref(f_.target)}, refs_in(rest_w, slice)})),
      };
      if (r_w_out.empty()) {
        q.push_back(expr::term(concat({{free_ref(f_.target)}, refs_in(w, {}), refs_in(rest(), slice)})));
      } else {
        q.push_back(expr::term(refs_in(w, {}), concat({ones(r_w), {free_ref(f_.target)}, refs_in(rest_w, slice)})));
        q.push_back(expr::term(concat({{free_ref(f_.target)}, refs_in(rest(), slice)})));
      }
      const ProbExpr qe = expr::product(std::move(q));
      std::vector<std::string> over(w.begin(), w.end());
      std::vector<std::string> over_y = over;
      over_y.push_back(f_.target);
      app.functional = expr::quotient(expr::sum(over, qe), expr::sum(over_y, qe));
      return app;
    }
    return std::nullopt;
  }

  const Frame& f_;
  std::vector<CiObligation> failed_;
};

inline bool colluder_is_monotone(const MonotoneSpec& mono, const MDag& g, const MaximalColluder& c) {
  if (c.empty()) return false;
  const auto closure = mono.closure();
  for (const auto& x : c.c_set) {
    if (!closure.count({g.indicator_of(x), c.target})) return false;
  }
  return true;
}

// Parents of r that bound it from above, directly or through the closure.
inline VertexSet monotone_parents(const MDag& g, const MonotoneSpec& mono, const std::string& r) {
  VertexSet out;
  for (const auto& [upper, lower] : mono.closure()) {
    if (lower == r && g.has_edge(upper, r)) out.insert(upper);
  }
  return out;
}

inline Assignment all_one(const VertexSet& names) {
  Assignment out;
  for (const auto& n : names) out[n] = 1;
  return out;
}

// Assignments of `names` with at least one zero.
inline std::vector<Assignment> min_zero_assignments(const VertexSet& names) {
  const std::vector<std::string> items(names.begin(), names.end());
  std::vector<Assignment> out;
  for_each_assignment(std::vector<int>(items.size(), 2), [&](const std::vector<int>& values) {
    if (std::find(values.begin(), values.end(), 0) == values.end()) return;
    Assignment a;
    for (std::size_t i = 0; i < items.size(); ++i) a[items[i]] = values[i];
    out.push_back(std::move(a));
  });
  return out;
}

inline ProbExpr violation_functional(const std::string& target) {
  return expr::cases({{{{target, 1}}, expr::constant(0)}}, expr::constant(1));
}

}  // namespace detail

// T1 piece: p(R_Y | pa) wherever min R_C = 0.
inline TheoremApplication identify_violation_part(const MDag& g, const MonotoneSpec& mono, const std::string& r_y) {
  const auto c = find_maximal_colluder(g, r_y);
  if (!detail::colluder_is_monotone(mono, g, c)) {
    throw Error(ErrorCode::NotApplicable, r_y + " has no maximal colluder with min R_C >= " + r_y);
  }
  TheoremApplication app;
  app.theorem = app.shape = Theorem::T1;
  app.target = r_y;
  app.c_set = c.c_set;
  app.region = detail::min_zero_assignments(g.indicators_of(c.c_set));
  app.functional = detail::violation_functional(r_y);
  app.query = expr::term({detail::free_ref(r_y)}, detail::refs_in(g.parents(r_y), {}));
  return app;
}

// Theorems 2-5 on the slice R_C = 1, tried in that order.
inline TheoremApplication identify_colluded_at_one(const MDag& g, const MonotoneSpec& mono, const std::string& r_y,
                                                   std::vector<CiObligation>* failed = nullptr) {
  const auto c = find_maximal_colluder(g, r_y);
  if (!detail::colluder_is_monotone(mono, g, c)) {
    throw Error(ErrorCode::NotApplicable, r_y + " has no maximal colluder with min R_C >= " + r_y);
  }
  const auto frame = detail::make_frame(g, mono, r_y, c.c_set, detail::all_one(g.indicators_of(c.c_set)));
  detail::TheoremSearch search(frame);
  auto app = search.run();
  if (failed) *failed = search.failed();
  if (!app) throw Error(ErrorCode::NoApplicableTheorem, "no theorem identifies p(" + r_y + " | pa) at R_C = 1");
  return *app;
}

// Non-colluded indicator at (pa ∩ R) = 1, Theorem-2-shaped first and then
// the remaining shapes without the colluder premise.
inline TheoremApplication identify_indicator_fallback(const MDag& g, const MonotoneSpec& mono, const std::string& r_k,
                                                      std::vector<CiObligation>* failed = nullptr) {
  if (!g.is_indicator(r_k)) throw Error(ErrorCode::NotIndicator, "'" + r_k + "' is not a response indicator");
  Assignment slice;
  for (const auto& p : g.parents(r_k)) {
    if (g.is_indicator(p)) slice[p] = 1;
  }
  const auto frame = detail::make_frame(g, mono, r_k, {}, slice);
  detail::TheoremSearch search(frame);
  auto app = search.run();
  if (failed) *failed = search.failed();
  if (!app) throw Error(ErrorCode::NoApplicableTheorem, "fallback cannot identify p(" + r_k + " | pa) at (pa ∩ R) = 1");
  app->theorem = Theorem::Fallback;
  return *app;
}

namespace detail {

// Applications whose slices partition the assignments of the indicator
// parents extending `slice`; nullopt when some part is not identified.
inline std::optional<std::vector<TheoremApplication>> cover(const MDag& g, const MonotoneSpec& mono, const std::string& r,
                                                            const VertexSet& c_set, bool colluded, const Assignment& slice,
                                                            std::vector<CiObligation>& failed) {
  const auto frame = make_frame(g, mono, r, c_set, slice);
  TheoremSearch search(frame);
  auto app = search.run();
  if (app) {
    if (!colluded) app->theorem = Theorem::Fallback;
    std::vector<TheoremApplication> out{*app};
    // T5 may fix further indicators to 1; cover the rest of the slice.
    VertexSet extra;
    for (const auto& [k, v] : app->slice) {
      if (!slice.count(k)) extra.insert(k);
    }
    for (const auto& a : min_zero_assignments(extra)) {
      Assignment sub = slice;
      sub.insert(a.begin(), a.end());
      auto more = cover(g, mono, r, c_set, colluded, sub, failed);
      if (!more) return std::nullopt;
      out.insert(out.end(), more->begin(), more->end());
    }
    return out;
  }
  failed.insert(failed.end(), search.failed().begin(), search.failed().end());
  for (const auto& p : g.parents(r)) {
    if (!g.is_indicator(p) || slice.count(p)) continue;
    std::vector<TheoremApplication> out;
    for (int v : {1, 0}) {
      Assignment sub = slice;
      sub[p] = v;
      auto part = cover(g, mono, r, c_set, colluded, sub, failed);
      if (!part) return std::nullopt;
      out.insert(out.end(), part->begin(), part->end());
    }
    return out;
  }
  return std::nullopt;
}

struct IndicatorPlan {
  ProbExpr expression;
  std::vector<TheoremApplication> apps;
};

// p(R_k | pa(R_k)) as a piecewise functional over all parent values.
inline std::optional<IndicatorPlan> plan_indicator(const MDag& g, const MonotoneSpec& mono, const std::string& r,
                                                   std::vector<CiObligation>& failed) {
  const auto c = find_maximal_colluder(g, r);
  const bool colluded = !c.empty();
  const VertexSet forced = monotone_parents(g, mono, r);
  auto apps = cover(g, mono, r, c.c_set, colluded, all_one(forced), failed);
  if (!apps) return std::nullopt;

  IndicatorPlan plan;
  ProbExpr at_one;
  if (apps->size() == 1) {
    at_one = apps->front().functional;
  } else {
    std::vector<std::pair<Assignment, ProbExpr>> branches;
    for (const auto& a : *apps) branches.emplace_back(a.slice, a.functional);
    at_one = expr::cases(std::move(branches), expr::constant(0));
  }
  if (forced.empty()) {
    plan.expression = at_one;
  } else {
    TheoremApplication t1;
    t1.theorem = t1.shape = Theorem::T1;
    t1.target = r;
    t1.c_set = c.c_set;
    t1.d_set = g.indicators_of(c.c_set);
    t1.region = min_zero_assignments(forced);
    t1.functional = violation_functional(r);
    t1.query = expr::term({free_ref(r)}, refs_in(g.parents(r), {}));
    plan.apps.push_back(t1);
    plan.expression = expr::cases({{all_one(forced), at_one}}, t1.functional);
  }
  plan.apps.insert(plan.apps.end(), apps->begin(), apps->end());
  return plan;
}

inline std::optional<IdentifyResult> refuse_structures(const MDag& g, const MonotoneSpec& mono) {
  const auto sc = find_self_censoring(g, mono);
  IdentifyResult r;
  if (!sc.edges.empty()) {
    r.status = IdentifyStatus::NotIdentifiable;
    r.reason = Reason::SelfCensoringEdge;
    r.witness_edges = sc.edges;
    r.message = "self-censoring edge " + sc.edges.front().first + " -> " + sc.edges.front().second;
    return r;
  }
  for (const auto& p : sc.paths) {
    if (p.length() >= 2) r.witness_paths.push_back(p);
  }
  if (!r.witness_paths.empty()) {
    r.status = IdentifyStatus::NotIdentifiable;
    r.reason = Reason::SelfCensoringPath;
    const auto& p = r.witness_paths.front();
    r.message = "self-censoring path " + p.variable;
    for (const auto& i : p.indicator_chain) r.message += " -> " + i;
    return r;
  }
  return std::nullopt;
}

inline std::vector<std::string> non_indicators(const MDag& g) {
  std::vector<std::string> out;
  for (const auto& v : g.vertices()) {
    if (!g.is_indicator(v)) out.push_back(v);
  }
  return out;
}

}  // namespace detail

// p(O, X(1), R) = p(O, X(1), R=1) / p(R=1 | O, X(1)) * p(R | O, X(1)), with
// p(R | O, X(1)) the product of the identified indicator conditionals.
inline IdentifyResult identify_full_law(const MDag& g, const MonotoneSpec& mono) {
  require_valid(g, mono);
  IdentifyResult result;
  result.query = full_law_query(g);
  if (auto refusal = detail::refuse_structures(g, mono)) {
    refusal->query = result.query;
    return *refusal;
  }

  for (const auto& r : g.ordered_of_kind(VertexKind::Indicator)) {
    const auto c = find_maximal_colluder(g, r);
    if (c.empty() || detail::colluder_is_monotone(mono, g, c)) continue;
    for (const auto& x : c.c_set) result.witness_colluders.push_back({x, g.indicator_of(x), r});
  }
  if (!result.witness_colluders.empty()) {
    const auto& w = result.witness_colluders.front();
    result.reason = Reason::Colluder;
    result.message = "colluder " + w.collider_var + " -> " + w.target + " <- " + w.collider_ind + " without monotonicity";
    // Without any monotone pair the classical result applies; with other
    // monotone pairs present it is no longer a proof.
    result.status = mono.empty() ? IdentifyStatus::NotIdentifiable : IdentifyStatus::Unknown;
    return result;
  }

  std::vector<ProbExpr> pieces;
  for (const auto& r : g.ordered_of_kind(VertexKind::Indicator)) {
    std::vector<CiObligation> failed;
    auto plan = detail::plan_indicator(g, mono, r, failed);
    if (!plan) {
      result.status = IdentifyStatus::Unknown;
      result.reason = Reason::NoApplicableTheorem;
      result.message = "no theorem identifies p(" + r + " | pa(" + r + "))";
      result.failed_obligations = std::move(failed);
      result.provenance.clear();
      return result;
    }
    pieces.push_back(plan->expression);
    result.provenance.insert(result.provenance.end(), plan->apps.begin(), plan->apps.end());
  }

  const auto indicators = g.indicators();
  const ProbExpr complete = expr::joint(detail::non_indicators(g), detail::all_one(indicators));
  const ProbExpr mechanism = expr::product(pieces);
  std::vector<ProbExpr> factors{expr::quotient(complete, expr::restrict(detail::all_one(indicators), mechanism))};
  factors.insert(factors.end(), pieces.begin(), pieces.end());
  result.functional = expr::product(std::move(factors));
  result.status = IdentifyStatus::Identified;
  result.message = "identified through the missingness mechanism";
  return result;
}

// Target law by the criterion that no partially observed variable is an
// ancestor of its own indicator.
inline IdentifyResult identify_target_law_mohan(const MDag& g, const MonotoneSpec& mono = {}) {
  require_valid(g, mono);
  IdentifyResult result;
  result.query = target_law_query(g);
  for (const auto& x : g.ordered_of_kind(VertexKind::Partial)) {
    if (ancestors(g, g.indicator_of(x)).count(x)) {
      result.status = IdentifyStatus::Unknown;
      result.reason = Reason::NoApplicableTheorem;
      result.message = x + " is an ancestor of " + g.indicator_of(x) + "; the criterion does not apply";
      return result;
    }
  }
  std::vector<ProbExpr> factors;
  for (const auto& v : detail::non_indicators(g)) {
    VertexSet pa;
    for (const auto& p : g.parents(v)) {
      if (!g.is_indicator(p)) pa.insert(p);
    }
    VertexSet responding;
    if (g.is_partial(v)) responding.insert(g.indicator_of(v));
    for (const auto& p : pa) {
      if (g.is_partial(p)) responding.insert(g.indicator_of(p));
    }
    factors.push_back(expr::term({detail::free_ref(v)}, detail::concat({detail::refs_in(pa, {}), detail::ones(responding)})));
  }
  TheoremApplication app;
  app.theorem = app.shape = Theorem::Mohan;
  app.functional = expr::product(factors);
  app.query = result.query;
  result.functional = app.functional;
  result.provenance.push_back(std::move(app));
  result.status = IdentifyStatus::Identified;
  result.message = "no partially observed variable is an ancestor of its own indicator";
  return result;
}

// Target law: the ancestral criterion first, then p(O, X(1), R=1) divided by
// the identified p(R=1 | O, X(1)).
inline IdentifyResult identify_target_law(const MDag& g, const MonotoneSpec& mono) {
  require_valid(g, mono);
  if (auto refusal = detail::refuse_structures(g, mono)) {
    refusal->query = target_law_query(g);
    return *refusal;
  }
  auto mohan = identify_target_law_mohan(g, mono);
  if (mohan.identified()) return mohan;

  auto full = identify_full_law(g, mono);
  full.query = target_law_query(g);
  if (!full.identified()) {
    if (full.status == IdentifyStatus::NotIdentifiable && full.reason == Reason::Colluder) {
      // A colluder blocks the full law, not necessarily the target law.
      full.status = IdentifyStatus::Unknown;
    }
    return full;
  }
  const auto* prod = full.functional->as<Product>();
  full.functional = prod->factors.front();
  full.message = "identified through p(R=1 | O, X(1))";
  return full;
}

}  // namespace mdmono
