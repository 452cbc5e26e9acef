#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdmono/evaluate.hpp"
#include "mdmono/model.hpp"
#include "mdmono/structures.hpp"

namespace mdmono {

struct CellDifference {
  Assignment at;
  Rational first;
  Rational second;
};

// Cells where two tables over the same variables disagree.
inline std::vector<CellDifference> law_differences(const Table& a, const Table& b) {
  if (a.vars() != b.vars()) throw Error(ErrorCode::BadInput, "tables have different variables");
  std::vector<CellDifference> out;
  for (std::size_t off = 0; off < a.size(); ++off) {
    if (a.at(off) == b.at(off)) continue;
    const auto values = a.decode(off);
    Assignment at;
    for (std::size_t i = 0; i < values.size(); ++i) at[a.vars()[i].name] = values[i];
    out.push_back({std::move(at), a.at(off), b.at(off)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two models along a monotone self-censoring path X_k -> R_1 -> ... -> R_k.

struct Thm6Construction {
  std::size_t k = 0;
  Rational gamma;
  SelfCensoringPath path;
  std::vector<DiscreteModel> models;
  bool observed_equal = false;
  // p_i(X_k = 0) for i = 1, 2.
  Rational p_first;
  Rational p_second;
};

// Number of chain edges whose parent indicator is 1; each contributes 1/2.
inline int thm6_c(const std::vector<int>& r) {
  int c = 0;
  for (std::size_t j = 0; j + 1 < r.size(); ++j) c += r[j];
  return c;
}

// f*_i(x, r_1..r_k) by cases; i is 1 or 2.
inline Rational thm6_fstar(int i, const Rational& gamma, int x, const std::vector<int>& r) {
  for (std::size_t j = 0; j + 1 < r.size(); ++j) {
    if (r[j] < r[j + 1]) return 0;
  }
  if (r.front() == 1) return gamma * (1 - gamma);
  const bool small = (i == 1) == (x == 0);
  return small ? gamma * gamma : (1 - gamma) * (1 - gamma);
}

inline Rational thm6_f(int i, const Rational& gamma, int x, const std::vector<int>& r) {
  Rational scale = 1;
  for (int c = thm6_c(r); c > 0; --c) scale /= 2;
  return scale * thm6_fstar(i, gamma, x, r);
}

// sum over r of f*_i(x, r).
inline Rational thm6_marginal_shape(int i, const Rational& gamma, std::size_t k, int x) {
  const bool small = (i == 1) == (x == 0);
  const Rational sq = small ? gamma * gamma : (1 - gamma) * (1 - gamma);
  return sq + Rational(static_cast<long long>(k)) * gamma * (1 - gamma);
}

inline Thm6Construction thm6_pair(std::size_t k, const Rational& gamma, const MDag& g, const MonotoneSpec& mono) {
  if (gamma <= 0 || gamma >= 1 || gamma == Rational(1, 2)) {
    throw Error(ErrorCode::BadGamma, "gamma must lie in (0, 1) and differ from 1/2, got " + to_string(gamma));
  }
  require_valid(g, mono);
  const auto sc = find_self_censoring(g, mono);
  std::optional<SelfCensoringPath> path;
  for (const auto& p : sc.paths) {
    if (p.length() == k) {
      path = p;
      break;
    }
  }
  if (!path) throw Error(ErrorCode::MissingPath, "no monotone self-censoring path of length " + std::to_string(k));

  Thm6Construction out;
  out.k = k;
  out.gamma = gamma;
  out.path = *path;
  const std::string& xk = path->variable;
  const auto& chain = path->indicator_chain;
  const auto closure = mono.closure();

  auto forced_zero = [&](const std::string& v, const std::map<std::string, int>& pa) {
    for (const auto& [p, value] : pa) {
      if (value == 0 && closure.count({p, v})) return true;
    }
    return false;
  };

  for (int i : {1, 2}) {
    DiscreteModel m(g, mono);
    for (const auto& v : g.vertices()) {
      const auto pos = std::find(chain.begin(), chain.end(), v);
      m.set_cpt(v, [&, i](const std::map<std::string, int>& pa, int value) -> Rational {
        Rational p0;  // probability of value 0
        if (v == xk) {
          p0 = i == 1 ? gamma : 1 - gamma;
        } else if (pos == chain.begin()) {
          const bool low = (i == 1) == (pa.at(xk) == 0);
          p0 = low ? gamma : 1 - gamma;
          if (forced_zero(v, pa)) p0 = 1;
        } else if (pos != chain.end()) {
          p0 = pa.at(*(pos - 1)) == 0 || forced_zero(v, pa) ? Rational(1) : Rational(1, 2);
        } else if (g.is_indicator(v) && forced_zero(v, pa)) {
          p0 = 1;
        } else {
          return Rational(1, m.card(v));
        }
        if (m.card(v) != 2) throw Error(ErrorCode::BadInput, "path vertex '" + v + "' must be binary");
        return value == 0 ? p0 : 1 - p0;
      });
    }
    out.models.push_back(std::move(m));
  }

  out.observed_equal = observed_law(out.models[0]) == observed_law(out.models[1]);
  const ProbExpr marginal = expr::joint({}, {{xk, 0}});
  out.p_first = query_value(out.models[0], marginal);
  out.p_second = query_value(out.models[1], marginal);
  if (!out.observed_equal) throw Error(ErrorCode::ConstructionFailed, "observed laws of the two models differ");
  if (out.p_first == out.p_second) throw Error(ErrorCode::ConstructionFailed, "p(" + xk + ") agrees between the models");
  return out;
}

// X_k -> R_1 -> ... -> R_k with X_1 -> ... -> X_k and a monotone chain.
inline std::pair<MDag, MonotoneSpec> self_censoring_chain_graph(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::BadInput, "chain length must be positive");
  MDag g;
  MonotoneSpec mono;
  auto x = [](std::size_t j) { return "X" + std::to_string(j); };
  for (std::size_t j = 1; j <= k; ++j) g.add_partial(x(j));
  for (std::size_t j = 1; j < k; ++j) g.add_edge(x(j), x(j + 1));
  g.add_edge(x(k), g.indicator_of(x(1)));
  for (std::size_t j = 2; j <= k; ++j) {
    g.add_edge(g.indicator_of(x(j - 1)), g.indicator_of(x(j)));
    mono.add(g.indicator_of(x(j - 1)), g.indicator_of(x(j)));
  }
  return {g, mono};
}

// ---------------------------------------------------------------------------
// Bivariate construction on X -> Y -> R_X -> R_Y with R_X >= R_Y.

struct AppendixObserved {
  Rational p11, p10, p01, p00, p1na, p0na;

  Rational pnana() const { return 1 - (p11 + p10 + p01 + p00 + p1na + p0na); }

  static AppendixObserved reference() {
    return {Rational(1, 5), Rational(1, 10), Rational(1, 10), Rational(1, 5), Rational(1, 20), Rational(1, 10)};
  }
};

struct AppendixParams {
  Rational a, b, c, d, e, f;
  friend bool operator==(const AppendixParams&, const AppendixParams&) = default;
};

struct AppendixModel {
  AppendixParams params;
  DiscreteModel model;
};

struct AppendixNames {
  std::string x = "X";
  std::string y = "Y";
};

inline std::pair<MDag, MonotoneSpec> appendix_graph(const AppendixNames& names = {}) {
  MDag g;
  g.add_partial(names.x);
  g.add_partial(names.y);
  g.add_edge(names.x, names.y);
  g.add_edge(names.y, g.indicator_of(names.x));
  g.add_edge(g.indicator_of(names.x), g.indicator_of(names.y));
  MonotoneSpec mono{{g.indicator_of(names.x), g.indicator_of(names.y)}};
  return {g, mono};
}

// Names when (g, mono) is exactly the bivariate graph up to renaming.
inline std::optional<AppendixNames> match_appendix_shape(const MDag& g, const MonotoneSpec& mono) {
  const auto partials = g.ordered_of_kind(VertexKind::Partial);
  if (partials.size() != 2 || !g.observed().empty()) return std::nullopt;
  for (int flip : {0, 1}) {
    AppendixNames n{partials[flip], partials[1 - flip]};
    auto [ref, ref_mono] = appendix_graph(n);
    std::set<Edge> have(g.edges().begin(), g.edges().end());
    std::set<Edge> want(ref.edges().begin(), ref.edges().end());
    if (have == want && mono == ref_mono) return n;
  }
  return std::nullopt;
}

namespace detail {

inline void check_observed(const AppendixObserved& o) {
  for (const auto* p : {&o.p11, &o.p10, &o.p01, &o.p00, &o.p1na, &o.p0na}) {
    if (*p <= 0) throw Error(ErrorCode::BadInput, "observed probabilities must be positive");
  }
  if (o.pnana() <= 0) throw Error(ErrorCode::BadInput, "observed probabilities leave no mass for p_NA,NA");
  if (o.p11 * o.p00 == o.p10 * o.p01) throw Error(ErrorCode::BadInput, "gamma_0 equals gamma_1; the system is singular");
}

// alpha * a + beta > 0
struct Linear {
  Rational alpha, beta;
};

}  // namespace detail

// Solves (b, d) from the two odds equations, then f, c, e, and checks that
// every parameter lies strictly inside (0, 1).
inline AppendixParams appendix_solve(const AppendixObserved& o, const Rational& a) {
  detail::check_observed(o);
  const Rational g1 = o.p11 / o.p01;
  const Rational g0 = o.p10 / o.p00;
  auto reject = [&](const std::string& why) -> AppendixParams {
    throw Error(ErrorCode::InfeasibleA, "a = " + to_string(a) + ": " + why);
  };
  if (a <= 0 || a >= 1) reject("a must lie in (0, 1)");
  const Rational t = a / (1 - a);
  if (!(std::min(g0, g1) < t && t < std::max(g0, g1))) reject("a/(1-a) is outside (min(gamma), max(gamma))");

  AppendixParams p;
  p.a = a;
  p.b = g1 * (t - g0) / (t * (g1 - g0));
  p.d = t * p.b / g1;
  const Rational complete = o.p11 + o.p10 + o.p01 + o.p00;
  p.f = complete / (complete + o.p1na + o.p0na);
  p.c = o.p11 / (a * p.b * p.f);
  p.e = o.p10 / (a * (1 - p.b) * p.f);
  const std::pair<const char*, const Rational*> named[] = {{"b", &p.b}, {"c", &p.c}, {"d", &p.d}, {"e", &p.e}, {"f", &p.f}};
  for (const auto& [name, value] : named) {
    if (*value <= 0 || *value >= 1) reject(std::string(name) + " = " + to_string(*value) + " is outside (0, 1)");
  }
  return p;
}

inline DiscreteModel appendix_model(const AppendixParams& p, const AppendixNames& names = {}) {
  auto [g, mono] = appendix_graph(names);
  DiscreteModel m(g, mono);
  const std::string rx = g.indicator_of(names.x);
  const std::string ry = g.indicator_of(names.y);
  auto bernoulli = [](const Rational& p1, int value) { return value == 1 ? p1 : 1 - p1; };
  m.set_cpt(names.x, [&](const auto&, int v) { return bernoulli(p.a, v); });
  m.set_cpt(names.y, [&](const auto& pa, int v) { return bernoulli(pa.at(names.x) == 1 ? p.b : p.d, v); });
  m.set_cpt(rx, [&](const auto& pa, int v) { return bernoulli(pa.at(names.y) == 1 ? p.c : p.e, v); });
  m.set_cpt(ry, [&](const auto& pa, int v) { return bernoulli(pa.at(rx) == 1 ? p.f : Rational(0), v); });
  return m;
}

// True when the model's observed law reproduces every observed quantity.
// Only the sum p_1NA + p_0NA is checked: the split is fixed by the other
// entries and f.
inline bool appendix_reproduces(const DiscreteModel& m, const AppendixObserved& o, const AppendixNames& names = {}) {
  const auto law = observed_law(m);
  const Evaluator ev = Evaluator::observed(law);
  const std::string rx = m.graph().indicator_of(names.x);
  const std::string ry = m.graph().indicator_of(names.y);
  auto cell = [&](int x, int y) { return ev.joint({{names.x, x}, {names.y, y}, {rx, 1}, {ry, 1}}); };
  return cell(1, 1) == o.p11 && cell(1, 0) == o.p10 && cell(0, 1) == o.p01 && cell(0, 0) == o.p00 &&
         ev.joint({{rx, 1}, {ry, 0}}) == o.p1na + o.p0na && ev.joint({{rx, 0}, {ry, 0}}) == o.pnana() &&
         ev.joint({{rx, 0}, {ry, 1}}) == 0;
}

inline std::vector<AppendixModel> appendix_pair(const AppendixObserved& o, const std::vector<Rational>& a_values,
                                                const AppendixNames& names = {}) {
  std::vector<AppendixModel> out;
  for (const auto& a : a_values) {
    const auto params = appendix_solve(o, a);
    auto model = appendix_model(params, names);
    if (!appendix_reproduces(model, o, names)) {
      throw Error(ErrorCode::ConstructionFailed, "model at a = " + to_string(a) + " does not reproduce the observed law");
    }
    out.push_back({params, std::move(model)});
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(observed_law(out[i].model) == observed_law(out[0].model))) {
      throw Error(ErrorCode::ConstructionFailed, "observed laws differ between reconstructed models");
    }
  }
  return out;
}

// Open interval of feasible a. Every constraint is linear in a once
// written in terms of ab = gamma_1 ((1 + gamma_0) a - gamma_0) / (gamma_1 - gamma_0).
inline std::pair<Rational, Rational> appendix_feasible_interval(const AppendixObserved& o) {
  detail::check_observed(o);
  const Rational g1 = o.p11 / o.p01;
  const Rational g0 = o.p10 / o.p00;
  const Rational complete = o.p11 + o.p10 + o.p01 + o.p00;
  const Rational f = complete / (complete + o.p1na + o.p0na);
  const Rational k = g1 / (g1 - g0);
  const detail::Linear ab{k * (1 + g0), -k * g0};
  const std::vector<detail::Linear> constraints{
      {1, 0},                                        // a > 0
      {-1, 1},                                       // a < 1
      ab,                                            // b > 0
      {1 - ab.alpha, -ab.beta},                      // b < 1
      {ab.alpha / g1, ab.beta / g1},                 // d > 0
      {-1 - ab.alpha / g1, 1 - ab.beta / g1},        // d < 1
      {ab.alpha, ab.beta - o.p11 / f},               // c < 1
      {1 - ab.alpha, -ab.beta - o.p10 / f},          // e < 1
  };
  Rational lo = 0;
  Rational hi = 1;
  for (const auto& [alpha, beta] : constraints) {
    if (alpha > 0) lo = std::max(lo, -beta / alpha);
    else if (alpha < 0) hi = std::min(hi, -beta / alpha);
    else if (beta <= 0) throw Error(ErrorCode::InfeasibleA, "no feasible a");
  }
  if (lo >= hi) throw Error(ErrorCode::InfeasibleA, "no feasible a");
  return {lo, hi};
}

}  // namespace mdmono
