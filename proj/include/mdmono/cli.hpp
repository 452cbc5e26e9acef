#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mdmono/graph_spec.hpp"
#include "mdmono/serialize.hpp"

namespace mdmono::cli {

enum ExitCode { Success = 0, Refused = 1, InputError = 2 };

struct Options {
  std::string command;
  std::string spec_path;
  std::string output = "json";
  std::size_t n = 100;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  bool mohan = false;
  std::string expr_text;
  std::string query_text;
  std::string kind;
  std::size_t k = 0;
  std::string gamma = "1/4";
  std::vector<std::string> a_values;
  std::string observed;
  std::vector<std::string> orders;
};

struct Outcome {
  int code = Success;
  Json doc;
  std::string text;
};

namespace detail {

inline std::string read_source(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::BadInput, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

inline Json error_doc(const std::string& command, const Error& e) {
  Json diags = Json::array();
  if (const auto* se = dynamic_cast<const SpecError*>(&e)) {
    for (const auto& d : se->diagnostics()) {
      diags.push_back({{"line", d.loc.line}, {"column", d.loc.column}, {"message", d.message}, {"rendered", d.render()}});
    }
  }
  return {{"command", command},
          {"error", {{"code", std::string(to_string(e.code()))}, {"message", e.detail()}, {"diagnostics", diags}}}};
}

inline int exit_for(const IdentifyResult& r) { return r.identified() ? Success : Refused; }

inline std::string identify_text(const IdentifyResult& r) {
  std::string out = "status: " + std::string(to_string(r.status)) + "\n";
  if (r.reason != Reason::None) out += "reason: " + std::string(to_string(r.reason)) + "\n";
  if (!r.message.empty()) out += "message: " + r.message + "\n";
  out += "query: " + render(r.query) + "\n";
  if (r.functional) out += "functional: " + render(*r.functional) + "\n";
  for (const auto& app : r.provenance) {
    out += "  " + std::string(to_string(app.theorem)) + " for " + app.target;
    if (!app.slice.empty()) out += " at " + mdmono::detail::render_assign(app.slice);
    out += "\n";
  }
  return out;
}

inline Outcome validate(const Options& o, const std::string& src) {
  const GraphSpec spec = parse_graph_spec(src);
  const auto report = validate_mdag(spec.graph, spec.mono);
  Outcome out;
  out.code = report.valid() ? Success : Refused;
  out.doc = {{"command", o.command}, {"graph", json::graph(spec.graph, spec.mono)}, {"report", json::validation(report)}};
  out.text = report.valid() ? "valid\n" : "invalid\n";
  for (const auto& v : report.violations) out.text += "  " + std::string(to_string(v.kind)) + ": " + v.message + "\n";
  return out;
}

inline Outcome detect(const Options& o, const GraphSpec& spec) {
  Outcome out;
  out.doc = {{"command", o.command}, {"structures", json::structures(spec.graph, spec.mono)}};
  const auto& s = out.doc["structures"];
  out.text = "colluders: " + std::to_string(s["colluders"].size()) + "\n";
  for (const auto& c : s["colluders"]) {
    out.text += "  " + c["collider_var"].get<std::string>() + " -> " + c["target"].get<std::string>() + " <- " +
                c["collider_ind"].get<std::string>() + "\n";
  }
  out.text += "self-censoring edges: " + std::to_string(s["self_censoring_edges"].size()) + "\n";
  out.text += "self-censoring paths: " + std::to_string(s["self_censoring_paths"].size()) + "\n";
  for (const auto& p : s["self_censoring_paths"]) {
    out.text += "  " + p["variable"].get<std::string>() + " -> " + join(p["indicator_chain"].get<std::vector<std::string>>(), " -> ") + "\n";
  }
  return out;
}

inline Outcome identify(const Options& o, const GraphSpec& spec) {
  IdentifyResult r;
  if (o.command == "identify-full") r = identify_full_law(spec.graph, spec.mono);
  else if (o.mohan) r = identify_target_law_mohan(spec.graph, spec.mono);
  else r = identify_target_law(spec.graph, spec.mono);
  return {exit_for(r), {{"command", o.command}, {"result", json::identify_result(r)}}, identify_text(r)};
}

inline Outcome verify(const Options& o, const GraphSpec& spec) {
  Outcome out;
  out.doc = {{"command", o.command}};
  ProbExpr functional;
  ProbExpr query;
  if (!o.expr_text.empty()) {
    functional = parse_expr(o.expr_text);
    query = o.query_text.empty() ? full_law_query(spec.graph) : parse_expr(o.query_text);
    out.doc["functional"] = json::expr(functional);
    out.doc["query"] = json::expr(query);
  } else {
    if (!o.query_text.empty()) throw Error(ErrorCode::BadInput, "--query requires --expr");
    const auto r = identify_full_law(spec.graph, spec.mono);
    out.doc["identify"] = json::identify_result(r);
    if (!r.identified()) {
      out.code = Refused;
      out.doc["report"] = nullptr;
      out.text = identify_text(r) + "nothing to verify\n";
      return out;
    }
    functional = *r.functional;
    query = r.query;
  }
  const auto report = verify_functional(spec.graph, spec.mono, functional, query, o.n, o.seed, spec.cards, o.workers);
  out.doc["report"] = json::verify_report(report);
  out.code = report.ok() ? Success : Refused;
  out.text = std::string(report.ok() ? "PASS" : "FAIL") + ": " + std::to_string(report.passed) + "/" + std::to_string(report.models) +
             " models, " + std::to_string(report.cells) + " cells\n";
  if (!report.warning.empty()) out.text += "warning: " + report.warning + "\n";
  for (const auto& f : report.failures) {
    out.text += "  seed " + std::to_string(f.seed) + " at " + mdmono::detail::render_assign(f.at) + ": " + f.error + "\n";
  }
  return out;
}

inline Outcome counterexample_thm6(const Options& o, const GraphSpec& spec) {
  std::size_t k = o.k;
  if (k == 0) {
    // Longest available path.
    for (const auto& p : find_self_censoring(spec.graph, spec.mono).paths) k = std::max(k, p.length());
    if (k == 0) throw Error(ErrorCode::MissingPath, "the graph has no monotone self-censoring path");
  }
  const auto c = thm6_pair(k, parse_rational(o.gamma), spec.graph, spec.mono);
  const auto diffs = law_differences(c.models[0].full_law(), c.models[1].full_law());
  Outcome out;
  out.doc = {{"command", o.command},
             {"kind", "thm6"},
             {"k", c.k},
             {"gamma", json::rational(c.gamma)},
             {"path", json::path(c.path)},
             {"models", Json::array({json::model(c.models[0]), json::model(c.models[1])})},
             {"observed_equal", c.observed_equal},
             {"observed_law", json::observed_law(observed_law(c.models[0]))},
             {"marginal", {{"event", {{c.path.variable, 0}}}, {"values", Json::array({json::rational(c.p_first), json::rational(c.p_second)})}}},
             {"full_law_differences", json::differences(diffs)}};
  out.text = "path: " + c.path.variable + " -> " + join(c.path.indicator_chain, " -> ") + "\nobserved laws equal: " +
             (c.observed_equal ? "yes" : "no") + "\np(" + c.path.variable + "=0): " + to_string(c.p_first) + " vs " +
             to_string(c.p_second) + "\nfull-law cells differing: " + std::to_string(diffs.size()) + "\n";
  return out;
}

inline Outcome counterexample_appendix(const Options& o, const GraphSpec& spec) {
  const auto names = match_appendix_shape(spec.graph, spec.mono);
  if (!names) throw Error(ErrorCode::NotApplicable, "the appendix construction needs the graph X -> Y -> R_X -> R_Y with R_X >= R_Y");
  AppendixObserved obs = AppendixObserved::reference();
  if (!o.observed.empty()) {
    const auto parts = split(o.observed, ',');
    if (parts.size() != 6) throw Error(ErrorCode::BadInput, "--observed takes six values p11,p10,p01,p00,p1NA,p0NA");
    obs = {parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2]),
           parse_rational(parts[3]), parse_rational(parts[4]), parse_rational(parts[5])};
  }
  std::vector<Rational> as;
  for (const auto& a : o.a_values) as.push_back(parse_rational(a));
  if (as.empty()) as = {Rational(7, 15), Rational(8, 15)};
  const auto pair = appendix_pair(obs, as, *names);

  Json models = Json::array();
  Json params = Json::array();
  Json marginals = Json::array();
  for (const auto& m : pair) {
    models.push_back(json::model(m.model));
    params.push_back(json::appendix_params(m.params));
    marginals.push_back(json::rational(query_value(m.model, expr::joint({}, {{names->x, 1}}))));
  }
  Json diffs = Json::array();
  std::string text;
  for (std::size_t i = 1; i < pair.size(); ++i) {
    const auto d = law_differences(pair[0].model.full_law(), pair[i].model.full_law());
    diffs.push_back({{"models", Json::array({0, i})}, {"cells", json::differences(d)}});
    text += "models 0 and " + std::to_string(i) + " differ on " + std::to_string(d.size()) + " full-law cells\n";
    for (const auto& c : d) text += "  " + mdmono::detail::render_assign(c.at) + ": " + to_string(c.first) + " vs " + to_string(c.second) + "\n";
  }
  Outcome out;
  out.doc = {{"command", o.command},
             {"kind", "appendix"},
             {"observed_input",
              {json::rational(obs.p11), json::rational(obs.p10), json::rational(obs.p01), json::rational(obs.p00),
               json::rational(obs.p1na), json::rational(obs.p0na), json::rational(obs.pnana())}},
             {"parameters", params},
             {"models", models},
             {"observed_equal", true},
             {"observed_law", json::observed_law(observed_law(pair[0].model))},
             {"marginal", {{"event", {{names->x, 1}}}, {"values", marginals}}},
             {"full_law_differences", diffs}};
  for (std::size_t i = 0; i < pair.size(); ++i) {
    const auto& p = pair[i].params;
    text = "model " + std::to_string(i) + ": a=" + to_string(p.a) + " b=" + to_string(p.b) + " c=" + to_string(p.c) + " d=" +
           to_string(p.d) + " e=" + to_string(p.e) + " f=" + to_string(p.f) + "\n" + text;
  }
  out.text = "observed laws equal: yes\n" + text;
  return out;
}

inline Outcome or_check(const Options& o, const GraphSpec& spec) {
  std::vector<std::vector<std::string>> orders;
  for (const auto& s : o.orders) orders.push_back(split(s, ','));
  if (orders.empty()) {
    auto r = spec.graph.ordered_of_kind(VertexKind::Indicator);
    orders.push_back(r);
    if (r.size() > 1) orders.emplace_back(r.rbegin(), r.rend());
  }
  Json runs = Json::array();
  std::size_t exact = 0;
  std::size_t total = 0;
  std::optional<Json> first_failure;
  for (std::size_t i = 0; i < o.n; ++i) {
    const auto m = random_model(spec.graph, spec.mono, o.seed + i, spec.cards);
    for (const auto& ord : orders) {
      const auto rep = or_diagnose(m, ord);
      ++total;
      if (rep.exact) ++exact;
      else if (!first_failure) first_failure = Json{{"seed", o.seed + i}, {"report", json::or_report(rep)}};
    }
  }
  Outcome out;
  out.code = exact == total ? Success : Refused;
  Json ords = Json::array();
  for (const auto& ord : orders) ords.push_back(ord);
  out.doc = {{"command", o.command},
             {"models", o.n},
             {"orderings", ords},
             {"checks", total},
             {"exact", exact},
             {"ok", exact == total},
             {"first_failure", first_failure ? *first_failure : Json(nullptr)}};
  out.text = std::string(exact == total ? "PASS" : "FAIL") + ": " + std::to_string(exact) + "/" + std::to_string(total) + " exact\n";
  if (first_failure) {
    for (const auto& t : (*first_failure)["report"]["zero_terms"]) out.text += "  zero: " + t.get<std::string>() + "\n";
  }
  return out;
}

inline Outcome dispatch(const Options& o, std::istream& in) {
  const std::string src = read_source(o.spec_path, in);
  if (o.command == "validate") return validate(o, src);
  const GraphSpec spec = parse_mdag_file(src);
  if (o.command == "detect") return detect(o, spec);
  if (o.command == "identify-full" || o.command == "identify-target") return identify(o, spec);
  if (o.command == "verify") return verify(o, spec);
  if (o.command == "or-check") return or_check(o, spec);
  if (o.kind == "thm6") return counterexample_thm6(o, spec);
  return counterexample_appendix(o, spec);
}

// Codes that describe the input rather than a property of the graph.
inline bool input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidGraph:
    case ErrorCode::MissingPath:
    case ErrorCode::ConstructionFailed:
    case ErrorCode::NotApplicable:
    case ErrorCode::NoApplicableTheorem:
      return false;
    default:
      return true;
  }
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in = std::cin) {
  Options o;
  CLI::App app{"Identification under monotone missingness in missing-data DAGs"};
  app.name("mdmono");
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("spec", o.spec_path, "graph spec file, or - for stdin")->required();
    sub->add_option("--output", o.output, "output format")->check(CLI::IsMember({"json", "text"}));
  };
  auto seeded = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "number of random models");
    sub->add_option("--seed", o.seed, "first seed");
  };

  common(app.add_subcommand("validate", "check m-DAG validity"));
  common(app.add_subcommand("detect", "list colluders and self-censoring structures"));
  common(app.add_subcommand("identify-full", "identify the full law"));
  auto* target = app.add_subcommand("identify-target", "identify the target law");
  common(target);
  target->add_flag("--mohan", o.mohan, "use only the ancestor criterion");
  auto* verify = app.add_subcommand("verify", "check a functional against random models");
  common(verify);
  seeded(verify);
  verify->add_option("--workers", o.workers, "worker threads (0 = hardware)");
  verify->add_option("--expr", o.expr_text, "functional to check instead of the identified full law");
  verify->add_option("--query", o.query_text, "what the functional should equal (default: full law)");
  auto* counter = app.add_subcommand("counterexample", "build two models with equal observed laws");
  common(counter);
  counter->add_option("--kind", o.kind, "construction")->required()->check(CLI::IsMember({"thm6", "appendix"}));
  counter->add_option("--k", o.k, "self-censoring path length (thm6)");
  counter->add_option("--gamma", o.gamma, "gamma in (0,1), not 1/2 (thm6)");
  counter->add_option("--a", o.a_values, "value of p(X=1), repeatable (appendix)");
  counter->add_option("--observed", o.observed, "p11,p10,p01,p00,p1NA,p0NA (appendix)");
  auto* orc = app.add_subcommand("or-check", "check the odds-ratio factorization on random models");
  common(orc);
  seeded(orc);
  orc->add_option("--order", o.orders, "comma-separated indicator ordering, repeatable");

  std::vector<const char*> argv{"mdmono"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return Success;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return Success;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return InputError;
  }
  o.command = app.get_subcommands().front()->get_name();

  Outcome result;
  try {
    result = detail::dispatch(o, in);
  } catch (const Error& e) {
    result.code = detail::input_error(e.code()) ? InputError : Refused;
    result.doc = detail::error_doc(o.command, e);
    // The rendered error goes to stderr only.
    result.text.clear();
    err << e.what() << "\n";
  }
  result.doc["exit_code"] = result.code;
  if (o.output == "json") out << result.doc.dump(2) << "\n";
  else out << result.text;
  return result.code;
}

}  // namespace mdmono::cli
