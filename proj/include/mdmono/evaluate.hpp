#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdmono/expr.hpp"
#include "mdmono/expr_text.hpp"
#include "mdmono/model.hpp"

namespace mdmono {

// Exact evaluation of ProbExpr against a full law p(O, X(1), R) or an
// observed law p(O, X, R). Against an observed law, a term may mention a
// partially observed variable only when the same term fixes its indicator
// to 1; the proxy column then carries the substantive value.
//
// Not thread-safe (marginal cache); use one evaluator per thread.
class Evaluator {
 public:
  static Evaluator full(MDag g, Table law) { return Evaluator(std::move(g), std::move(law), false); }
  static Evaluator full(const DiscreteModel& m) { return full(m.graph(), m.full_law()); }
  static Evaluator observed(const ObservedLaw& law) { return Evaluator(law.graph, law.table, true); }

  bool is_observed() const { return observed_; }
  const MDag& graph() const { return graph_; }

  // Substantive domain size; NA is never enumerated.
  int domain(const std::string& v) const {
    const int c = table_.vars().at(table_.require(v)).card;
    return observed_ && graph_.is_partial(v) ? c - 1 : c;
  }

  Rational operator()(const ProbExpr& e, const Assignment& a) const { return eval(e, a); }

  // p(event) for a conjunction of (variable, value) pairs; no observability check.
  Rational joint(const std::vector<std::pair<std::string, int>>& event) const {
    std::map<std::size_t, int> by_pos;
    for (const auto& [name, value] : event) {
      const std::size_t pos = table_.require(name);
      if (value < 0 || value >= domain(name)) {
        throw Error(ErrorCode::BadInput, "value " + std::to_string(value) + " outside the domain of '" + name + "'");
      }
      auto [it, fresh] = by_pos.emplace(pos, value);
      if (!fresh && it->second != value) return Rational(0);
    }
    std::vector<std::size_t> keep;
    std::vector<int> values;
    for (const auto& [pos, value] : by_pos) {
      keep.push_back(pos);
      values.push_back(value);
    }
    if (keep.empty()) return table_.total();
    auto it = cache_.find(keep);
    if (it == cache_.end()) it = cache_.emplace(keep, table_.marginal(keep)).first;
    return it->second.at(values);
  }

 private:
  Evaluator(MDag g, Table law, bool observed) : graph_(std::move(g)), table_(std::move(law)), observed_(observed) {}

  using Event = std::vector<std::pair<std::string, int>>;

  static std::string describe(const Assignment& a) {
    std::string out = "{";
    for (const auto& [k, v] : a) out += (out.size() > 1 ? ", " : "") + k + "=" + std::to_string(v);
    return out + "}";
  }

  Event resolve(const std::vector<VarRef>& refs, const Assignment& a) const {
    Event out;
    for (const auto& r : refs) {
      if (r.value) {
        out.emplace_back(r.name, *r.value);
        continue;
      }
      auto it = a.find(r.name);
      if (it == a.end()) throw Error(ErrorCode::UnboundVariable, "variable '" + r.name + "' is not bound");
      out.emplace_back(r.name, it->second);
    }
    return out;
  }

  void check_observable(const ProbTerm& t, const Event& all) const {
    for (const auto& [name, value] : all) {
      if (!graph_.is_partial(name)) continue;
      const std::string& ind = graph_.indicator_of(name);
      bool responding = false;
      for (const auto& [other, v] : all) {
        if (other == ind) {
          responding = v == 1;
          if (!responding) break;
        }
      }
      if (!responding) {
        throw Error(ErrorCode::NotObservable,
                    "term " + render(ProbExpr(t)) + " reads " + name + " without " + ind + "=1");
      }
    }
  }

  Rational eval_term(const ProbTerm& t, const Assignment& a) const {
    const Event targets = resolve(t.targets, a);
    const Event given = resolve(t.given, a);
    for (const auto& side : {&targets, &given}) {
      for (const auto& [name, value] : *side) table_.require(name);
    }
    if (observed_) {
      Event all = targets;
      all.insert(all.end(), given.begin(), given.end());
      check_observable(t, all);
    }
    const Rational den = given.empty() ? Rational(1) : joint(given);
    if (den == 0) {
      throw Error(ErrorCode::ConditioningOnNull,
                  "conditioning event of " + render(ProbExpr(t)) + " has probability zero at " + describe(a));
    }
    Event both = given;
    both.insert(both.end(), targets.begin(), targets.end());
    return joint(both) / den;
  }

  Rational eval(const ProbExpr& e, const Assignment& a) const {
    if (const auto* t = e.as<ProbTerm>()) return eval_term(*t, a);
    if (const auto* c = e.as<Constant>()) return c->value;
    if (const auto* p = e.as<Product>()) {
      // An exact zero factor decides the product even if another factor is
      // undefined at this assignment.
      Rational out = 1;
      std::optional<Error> deferred;
      for (const auto& f : p->factors) {
        try {
          const Rational v = eval(f, a);
          if (v == 0) return Rational(0);
          out *= v;
        } catch (const Error& err) {
          if (!deferred) deferred = err;
        }
      }
      if (deferred) throw *deferred;
      return out;
    }
    if (const auto* q = e.as<Quotient>()) {
      const Rational den = eval(*q->den, a);
      if (den == 0) throw Error(ErrorCode::ZeroDenominator, "denominator " + render(*q->den) + " is zero at " + describe(a));
      return eval(*q->num, a) / den;
    }
    if (const auto* s = e.as<MarginalSum>()) {
      Assignment inner = a;
      std::vector<int> cards;
      for (const auto& v : s->over) cards.push_back(domain(v));
      Rational total = 0;
      for_each_assignment(cards, [&](const std::vector<int>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) inner[s->over[i]] = values[i];
        total += eval(*s->body, inner);
      });
      return total;
    }
    if (const auto* r = e.as<Restriction>()) {
      Assignment inner = a;
      for (const auto& [k, v] : r->pins) inner[k] = v;
      return eval(*r->body, inner);
    }
    if (const auto* c = e.as<Cases>()) {
      for (const auto& [when, then] : c->branches) {
        bool match = true;
        for (const auto& [k, v] : when) {
          auto it = a.find(k);
          if (it == a.end()) throw Error(ErrorCode::UnboundVariable, "case variable '" + k + "' is not bound");
          if (it->second != v) {
            match = false;
            break;
          }
        }
        if (match) return eval(then, a);
      }
      return eval(*c->otherwise, a);
    }
    throw Error(ErrorCode::BadInput, "unhandled expression node");
  }

  MDag graph_;
  Table table_;
  bool observed_;
  mutable std::map<std::vector<std::size_t>, Table> cache_;
};

inline Rational evaluate(const ProbExpr& e, const DiscreteModel& m, const Assignment& a) { return Evaluator::full(m)(e, a); }
inline Rational evaluate(const ProbExpr& e, const ObservedLaw& law, const Assignment& a) { return Evaluator::observed(law)(e, a); }

// Value of a query at every joint value of its free variables. Cells whose
// conditioning event is null are reported as nullopt.
struct QueryTable {
  std::vector<std::string> vars;
  std::vector<std::pair<Assignment, std::optional<Rational>>> rows;

  std::optional<Rational> at(const Assignment& a) const {
    for (const auto& [key, value] : rows) {
      if (key == a) return value;
    }
    throw Error(ErrorCode::BadInput, "assignment not in query table");
  }
};

inline QueryTable query_eval(const Evaluator& ev, const ProbExpr& query) {
  QueryTable out;
  const auto free = free_variables(query);
  out.vars.assign(free.begin(), free.end());
  std::vector<int> cards;
  for (const auto& v : out.vars) cards.push_back(ev.domain(v));
  for_each_assignment(cards, [&](const std::vector<int>& values) {
    Assignment a;
    for (std::size_t i = 0; i < values.size(); ++i) a[out.vars[i]] = values[i];
    std::optional<Rational> value;
    try {
      value = ev(query, a);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ConditioningOnNull) throw;
    }
    out.rows.emplace_back(std::move(a), std::move(value));
  });
  return out;
}

inline QueryTable query_eval(const DiscreteModel& m, const ProbExpr& query) { return query_eval(Evaluator::full(m), query); }

// Single query cell; throws ConditioningOnNull instead of returning nullopt.
inline Rational query_value(const DiscreteModel& m, const ProbExpr& query, const Assignment& a = {}) {
  return Evaluator::full(m)(query, a);
}

// The full law p(O, X(1), R) and target law p(O, X(1)) as query terms.
inline ProbExpr full_law_query(const MDag& g) { return expr::joint(g.vertices()); }

inline ProbExpr target_law_query(const MDag& g) {
  std::vector<std::string> vars;
  for (const auto& v : g.vertices()) {
    if (!g.is_indicator(v)) vars.push_back(v);
  }
  return expr::joint(vars);
}

}  // namespace mdmono
