#pragma once

// JSON forms of graphs, laws, models, expressions and engine reports.
// Every probability is an exact "num/den" string.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "mdmono/constructions.hpp"
#include "mdmono/identify.hpp"
#include "mdmono/or_factorization.hpp"
#include "mdmono/verify.hpp"

namespace mdmono {

using Json = nlohmann::ordered_json;

namespace json {

inline Json rational(const Rational& r) { return to_string(r); }

inline Json optional_rational(const std::optional<Rational>& r) { return r ? rational(*r) : Json(nullptr); }

inline Json names(const VertexSet& s) { return Json(std::vector<std::string>(s.begin(), s.end())); }

inline Json assignment(const Assignment& a) {
  Json out = Json::object();
  for (const auto& [k, v] : a) out[k] = v;
  return out;
}

inline Json edges(const std::vector<Edge>& es) {
  Json out = Json::array();
  for (const auto& [a, b] : es) out.push_back(Json::array({a, b}));
  return out;
}

inline Json graph(const MDag& g, const MonotoneSpec& mono) {
  Json vs = Json::array();
  for (const auto& v : g.vertices()) {
    Json item{{"name", v}, {"kind", std::string(to_string(g.kind(v)))}};
    if (g.is_partial(v)) item["indicator"] = g.indicator_of(v);
    vs.push_back(item);
  }
  Json m = Json::array();
  for (const auto& [u, l] : mono.pairs()) m.push_back(Json::array({u, l}));
  return {{"vertices", vs}, {"edges", edges(g.edges())}, {"mono", m}};
}

inline Json table(const Table& t) {
  Json vars = Json::array();
  for (const auto& v : t.vars()) vars.push_back({{"name", v.name}, {"card", v.card}});
  Json cells = Json::array();
  for (const auto& c : t.cells()) cells.push_back(rational(c));
  return {{"variables", vars}, {"cells", cells}};
}

// Proxy columns carry the variable's name; value `na` encodes NA.
inline Json observed_law(const ObservedLaw& law) {
  Json out = table(law.table);
  for (auto& v : out["variables"]) {
    const std::string name = v["name"];
    v["na"] = law.graph.is_partial(name) ? Json(law.na_value(name)) : Json(nullptr);
  }
  return out;
}

inline Json model(const DiscreteModel& m) {
  Json cpts = Json::array();
  for (const auto& v : m.graph().vertices()) {
    if (!m.has_cpt(v)) continue;
    const auto& cpt = m.cpt(v);
    Json rows = Json::array();
    for (const auto& row : cpt.rows) {
      Json r = Json::array();
      for (const auto& p : row) r.push_back(rational(p));
      rows.push_back(r);
    }
    cpts.push_back({{"vertex", v}, {"parents", cpt.parents}, {"rows", rows}});
  }
  Json cards = Json::object();
  for (const auto& v : m.graph().vertices()) cards[v] = m.card(v);
  return {{"graph", graph(m.graph(), m.mono())}, {"cardinalities", cards}, {"cpts", cpts}};
}

inline Json var_refs(const std::vector<VarRef>& refs) {
  Json out = Json::array();
  for (const auto& r : refs) {
    Json item{{"name", r.name}};
    if (r.value) item["value"] = *r.value;
    out.push_back(item);
  }
  return out;
}

inline Json expr_tree(const ProbExpr& e) {
  if (const auto* t = e.as<ProbTerm>()) return {{"type", "term"}, {"targets", var_refs(t->targets)}, {"given", var_refs(t->given)}};
  if (const auto* c = e.as<Constant>()) return {{"type", "constant"}, {"value", rational(c->value)}};
  if (const auto* p = e.as<Product>()) {
    Json fs = Json::array();
    for (const auto& f : p->factors) fs.push_back(expr_tree(f));
    return {{"type", "product"}, {"factors", fs}};
  }
  if (const auto* q = e.as<Quotient>()) return {{"type", "quotient"}, {"num", expr_tree(*q->num)}, {"den", expr_tree(*q->den)}};
  if (const auto* s = e.as<MarginalSum>()) return {{"type", "sum"}, {"over", s->over}, {"body", expr_tree(*s->body)}};
  if (const auto* r = e.as<Restriction>()) return {{"type", "restriction"}, {"pins", assignment(r->pins)}, {"body", expr_tree(*r->body)}};
  const auto& c = *e.as<Cases>();
  Json bs = Json::array();
  for (const auto& [when, then] : c.branches) bs.push_back({{"when", assignment(when)}, {"then", expr_tree(then)}});
  return {{"type", "cases"}, {"branches", bs}, {"otherwise", expr_tree(*c.otherwise)}};
}

inline Json expr(const ProbExpr& e) { return {{"text", render(e)}, {"tree", expr_tree(e)}}; }

namespace detail {

inline std::vector<VarRef> read_refs(const Json& j) {
  std::vector<VarRef> out;
  for (const auto& item : j) {
    VarRef r{item.at("name").get<std::string>(), std::nullopt};
    if (item.contains("value")) r.value = item.at("value").get<int>();
    out.push_back(r);
  }
  return out;
}

inline Assignment read_assignment(const Json& j) {
  Assignment out;
  for (const auto& [k, v] : j.items()) out[k] = v.get<int>();
  return out;
}

}  // namespace detail

// Inverse of expr_tree.
inline ProbExpr expr_from_tree(const Json& j) {
  try {
    const std::string type = j.at("type");
    if (type == "term") return expr::term(detail::read_refs(j.at("targets")), detail::read_refs(j.at("given")));
    if (type == "constant") return expr::constant(parse_rational(j.at("value").get<std::string>()));
    if (type == "product") {
      std::vector<ProbExpr> fs;
      for (const auto& f : j.at("factors")) fs.push_back(expr_from_tree(f));
      return expr::product(std::move(fs));
    }
    if (type == "quotient") return expr::quotient(expr_from_tree(j.at("num")), expr_from_tree(j.at("den")));
    if (type == "sum") return expr::sum(j.at("over").get<std::vector<std::string>>(), expr_from_tree(j.at("body")));
    if (type == "restriction") return expr::restrict(detail::read_assignment(j.at("pins")), expr_from_tree(j.at("body")));
    if (type == "cases") {
      std::vector<std::pair<Assignment, ProbExpr>> bs;
      for (const auto& b : j.at("branches")) bs.emplace_back(detail::read_assignment(b.at("when")), expr_from_tree(b.at("then")));
      return expr::cases(std::move(bs), expr_from_tree(j.at("otherwise")));
    }
    throw Error(ErrorCode::BadInput, "unknown expression node type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed expression tree: ") + e.what());
  }
}

inline std::pair<MDag, MonotoneSpec> graph_from_json(const Json& j) {
  try {
    MDag g;
    for (const auto& v : j.at("vertices")) {
      const std::string kind = v.at("kind");
      const std::string name = v.at("name");
      if (kind == "observed") g.add_observed(name);
      else if (kind == "partial") g.add_partial(name, v.at("indicator").get<std::string>());
      else if (kind != "indicator") throw Error(ErrorCode::BadInput, "unknown vertex kind '" + kind + "'");
    }
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    MonotoneSpec mono;
    for (const auto& m : j.at("mono")) mono.add(m.at(0).get<std::string>(), m.at(1).get<std::string>());
    return {g, mono};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed graph: ") + e.what());
  }
}

inline Table table_from_json(const Json& j) {
  try {
    std::vector<Variable> vars;
    for (const auto& v : j.at("variables")) vars.push_back({v.at("name").get<std::string>(), v.at("card").get<int>()});
    Table t(vars);
    const auto& cells = j.at("cells");
    if (cells.size() != t.size()) throw Error(ErrorCode::BadInput, "cell count does not match the variables");
    for (std::size_t i = 0; i < t.size(); ++i) t.at(i) = parse_rational(cells[i].get<std::string>());
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed table: ") + e.what());
  }
}

inline ObservedLaw observed_law_from_json(const Json& j, const MDag& g) { return {g, table_from_json(j)}; }

inline DiscreteModel model_from_json(const Json& j) {
  try {
    auto [g, mono] = graph_from_json(j.at("graph"));
    Cardinalities cards;
    for (const auto& [k, v] : j.at("cardinalities").items()) cards[k] = v.get<int>();
    DiscreteModel m(g, mono, cards);
    for (const auto& c : j.at("cpts")) {
      Cpt cpt{c.at("vertex").get<std::string>(), c.at("parents").get<std::vector<std::string>>(), {}};
      for (const auto& row : c.at("rows")) {
        std::vector<Rational> r;
        for (const auto& p : row) r.push_back(parse_rational(p.get<std::string>()));
        cpt.rows.push_back(std::move(r));
      }
      m.set_cpt(std::move(cpt));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed model: ") + e.what());
  }
}

inline Json validation(const ValidationReport& r) {
  Json vs = Json::array();
  for (const auto& v : r.violations) {
    vs.push_back({{"kind", std::string(to_string(v.kind))}, {"vertices", v.vertices}, {"message", v.message}});
  }
  return {{"valid", r.valid()}, {"violations", vs}};
}

inline Json colluder(const Colluder& c) {
  return {{"collider_var", c.collider_var}, {"collider_ind", c.collider_ind}, {"target", c.target}};
}

inline Json path(const SelfCensoringPath& p) {
  return {{"variable", p.variable}, {"indicator_chain", p.indicator_chain}, {"length", p.length()}};
}

inline Json structures(const MDag& g, const MonotoneSpec& mono) {
  Json colluders = Json::array();
  for (const auto& c : find_colluders(g)) colluders.push_back(colluder(c));
  Json maximal = Json::array();
  for (const auto& r : g.ordered_of_kind(VertexKind::Indicator)) {
    const auto m = find_maximal_colluder(g, r);
    if (!m.empty()) maximal.push_back({{"target", m.target}, {"c_set", names(m.c_set)}});
  }
  const auto sc = find_self_censoring(g, mono);
  Json paths = Json::array();
  for (const auto& p : sc.paths) paths.push_back(path(p));
  return {{"colluders", colluders},
          {"maximal_colluders", maximal},
          {"self_censoring_edges", edges(sc.edges)},
          {"self_censoring_paths", paths}};
}

inline Json obligation(const CiObligation& o) {
  return {{"label", o.label},
          {"a", names(o.a)},
          {"b", names(o.b)},
          {"z", names(o.z)},
          {"context", assignment(o.ctx)},
          {"verdict", {{"status", std::string(to_string(o.verdict.status))}, {"reason", o.verdict.reason}}}};
}

inline Json application(const TheoremApplication& app) {
  Json obs = Json::array();
  for (const auto& o : app.obligations) obs.push_back(obligation(o));
  Json region = Json::array();
  for (const auto& a : app.region) region.push_back(assignment(a));
  return {{"theorem", std::string(to_string(app.theorem))},
          {"shape", std::string(to_string(app.shape))},
          {"target", app.target},
          {"c_set", names(app.c_set)},
          {"z_set", names(app.z_set)},
          {"r_prime", names(app.r_prime)},
          {"w_set", names(app.w_set)},
          {"d_set", names(app.d_set)},
          {"slice", assignment(app.slice)},
          {"region", region},
          {"obligations", obs},
          {"functional", expr(app.functional)},
          {"query", expr(app.query)}};
}

inline Json identify_result(const IdentifyResult& r) {
  Json prov = Json::array();
  for (const auto& a : r.provenance) prov.push_back(application(a));
  Json paths = Json::array();
  for (const auto& p : r.witness_paths) paths.push_back(path(p));
  Json colls = Json::array();
  for (const auto& c : r.witness_colluders) colls.push_back(colluder(c));
  Json failed = Json::array();
  for (const auto& o : r.failed_obligations) failed.push_back(obligation(o));
  return {{"status", std::string(to_string(r.status))},
          {"reason", std::string(to_string(r.reason))},
          {"message", r.message},
          {"query", expr(r.query)},
          {"functional", r.functional ? expr(*r.functional) : Json(nullptr)},
          {"provenance", prov},
          {"witnesses", {{"self_censoring_edges", edges(r.witness_edges)}, {"self_censoring_paths", paths}, {"colluders", colls}}},
          {"failed_obligations", failed}};
}

inline Json verify_report(const VerifyReport& r) {
  Json fs = Json::array();
  for (const auto& f : r.failures) {
    fs.push_back({{"seed", f.seed},
                  {"at", assignment(f.at)},
                  {"expected", rational(f.expected)},
                  {"actual", optional_rational(f.actual)},
                  {"error", f.error}});
  }
  return {{"models", r.models},
          {"passed", r.passed},
          {"cells", r.cells},
          {"ok", r.ok()},
          {"warning", r.warning.empty() ? Json(nullptr) : Json(r.warning)},
          {"failures", fs}};
}

inline Json or_report(const OrReport& r) {
  Json mismatch = nullptr;
  if (r.mismatch) {
    mismatch = {{"at", assignment(r.mismatch->at)},
                {"expected", rational(r.mismatch->expected)},
                {"numeric", optional_rational(r.mismatch->numeric)},
                {"symbolic", optional_rational(r.mismatch->symbolic)}};
  }
  return {{"ordering", r.ordering},
          {"cells", r.cells},
          {"exact", r.exact},
          {"symbolic_agrees", r.symbolic_agrees},
          {"zero_terms", r.zero_terms},
          {"mismatch", mismatch}};
}

inline Json differences(const std::vector<CellDifference>& ds) {
  Json out = Json::array();
  for (const auto& d : ds) out.push_back({{"at", assignment(d.at)}, {"first", rational(d.first)}, {"second", rational(d.second)}});
  return out;
}

inline Json appendix_params(const AppendixParams& p) {
  return {{"a", rational(p.a)}, {"b", rational(p.b)}, {"c", rational(p.c)},
          {"d", rational(p.d)}, {"e", rational(p.e)}, {"f", rational(p.f)}};
}

}  // namespace json
}  // namespace mdmono
