#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "mdmono/cli.hpp"
#include "mdmono/reference_graphs.hpp"

using namespace mdmono;

namespace {

std::string graph_file(const std::string& name) { return std::string(MDMONO_GRAPHS_DIR) + "/" + name + ".mdag"; }

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  Json doc;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::ostringstream out, err;
  std::istringstream in(stdin_text);
  const int code = cli::run_cli(args, out, err, in);
  Run r{code, nullptr, out.str(), err.str()};
  if (std::find(args.begin(), args.end(), "text") == args.end() && !r.out.empty() && r.out.front() == '{') r.doc = Json::parse(r.out);
  return r;
}

}  // namespace

TEST(SpecParser, Figure1File) {
  const auto spec = parse_mdag_file("var X partial\nvar Y partial\nedge X -> Y\nedge X -> R_Y\nedge R_X -> R_Y\nmono R_X >= R_Y\n");
  const auto f = figures::fig1();
  EXPECT_EQ(spec.graph, f.graph);
  EXPECT_EQ(spec.mono, f.mono);
}

TEST(SpecParser, SyntaxErrorHasCaret) {
  try {
    parse_mdag_file("var X partial\nvar Y partial\nedg X -> Y\n");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    ASSERT_EQ(e.diagnostics().size(), 1U);
    const auto& d = e.diagnostics().front();
    EXPECT_EQ(d.loc.line, 3U);
    EXPECT_EQ(d.loc.column, 1U);
    const std::string r = d.render();
    EXPECT_NE(r.find("edg X -> Y"), std::string::npos);
    EXPECT_NE(r.find("\n  ^"), std::string::npos) << r;
  }
}

TEST(SpecParser, CaretPointsAtBadToken) {
  try {
    parse_mdag_file("var X partial\nedge X => R_X\n");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.diagnostics().front().loc.line, 2U);
    EXPECT_EQ(e.diagnostics().front().loc.column, 8U);
  }
}

TEST(SpecParser, MonoOnNonIndicator) {
  try {
    parse_mdag_file("var X partial\nvar Y partial\nedge X -> R_Y\nmono X >= R_Y\n");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SemanticError);
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_NE(e.diagnostics().front().message.find("mono endpoint is not a response indicator"), std::string::npos);
    EXPECT_EQ(e.diagnostics().front().loc.line, 4U);
  }
}

TEST(SpecParser, SemanticErrorsCollected) {
  try {
    parse_mdag_file("var X partial\nvar X observed\nedge X -> Q\nedge X -> X\ncard R_X 2\n");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SemanticError);
    EXPECT_GE(e.diagnostics().size(), 3U);
    for (const auto& d : e.diagnostics()) EXPECT_GT(d.loc.line, 0U);
  }
}

TEST(SpecParser, IndicatorNameCollision) {
  EXPECT_THROW(parse_mdag_file("var X partial\nvar R_X observed\n"), SpecError);
}

TEST(SpecParser, InvalidGraphLocatesDeclaration) {
  try {
    parse_mdag_file("var X partial\nvar Y partial\nedge R_X -> Y\n");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidGraph);
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_EQ(e.diagnostics().front().loc.line, 3U);
  }
}

TEST(SpecParser, CommentsAndCards) {
  const auto spec = parse_mdag_file("# header\nvar W observed  # proxy\nvar X partial\ncard W 3\nedge W -> X\n");
  EXPECT_EQ(spec.cards.at("W"), 3);
  EXPECT_TRUE(spec.graph.has_edge("W", "X"));
}

TEST(SpecParser, CanonicalRoundTrip) {
  for (const auto& f : figures::all()) {
    const std::string text = render_graph_spec(f.graph, f.mono, {{f.graph.vertices().front(), 3}});
    const auto spec = parse_mdag_file(text);
    EXPECT_EQ(render_graph_spec(spec), text) << f.name;
    EXPECT_EQ(parse_mdag_file(render_graph_spec(spec)), spec);
  }
}

TEST(SpecParser, GraphFilesMatchFigures) {
  for (const auto& base : figures::all()) {
    for (const auto& f : {base, figures::without_mono(base)}) {
      const auto spec = parse_mdag_file(slurp(graph_file(f.name)));
      EXPECT_EQ(spec.graph, f.graph) << f.name;
      EXPECT_EQ(spec.mono, f.mono) << f.name;
    }
  }
}

TEST(Cli, IdentifyFigure1) {
  const auto r = run({"identify-full", graph_file("fig1")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.doc["exit_code"], 0);
  EXPECT_EQ(r.doc["result"]["status"], "Identified");
  std::set<std::string> theorems;
  for (const auto& a : r.doc["result"]["provenance"]) theorems.insert(a["theorem"].get<std::string>());
  EXPECT_TRUE(theorems.count("T1"));
  EXPECT_TRUE(theorems.count("T2"));
}

TEST(Cli, IdentifyFigure2aRefused) {
  const auto r = run({"identify-full", graph_file("fig2a")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.doc["result"]["status"], "NotIdentifiable");
  EXPECT_EQ(r.doc["result"]["reason"], "SelfCensoringPath");
  EXPECT_EQ(run({"identify-full", graph_file("fig2a-nomono")}).code, 0);
}

TEST(Cli, IdentifyTargetMohan) {
  EXPECT_EQ(run({"identify-target", graph_file("fig1"), "--mohan"}).code, 0);
  const auto r = run({"identify-target", graph_file("fig2a"), "--mohan"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.doc["result"]["status"], "Unknown");
}

TEST(Cli, ValidateAndStdin) {
  EXPECT_EQ(run({"validate", graph_file("fig3e")}).code, 0);
  const auto bad = run({"validate", "-"}, "var X partial\nvar Y partial\nedge R_X -> Y\n");
  EXPECT_EQ(bad.code, 1);
  EXPECT_FALSE(bad.doc["report"]["valid"].get<bool>());
  const auto text = run({"validate", "-", "--output", "text"}, "var X partial\n");
  EXPECT_EQ(text.out, "valid\n");
}

TEST(Cli, InputErrors) {
  const auto syntax = run({"detect", "-"}, "edg X -> Y\n");
  EXPECT_EQ(syntax.code, 2);
  EXPECT_EQ(syntax.doc["error"]["code"], "SyntaxError");
  EXPECT_EQ(syntax.doc["error"]["diagnostics"][0]["line"], 1);
  EXPECT_NE(syntax.err.find("^"), std::string::npos);
  EXPECT_EQ(run({"detect", "/nonexistent/file.mdag"}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"verify", graph_file("fig1"), "--n", "abc"}).code, 2);
  EXPECT_EQ(run({"counterexample", graph_file("fig2b"), "--kind", "thm6", "--gamma", "1/2"}).code, 2);
  const auto text = run({"detect", "-", "--output", "text"}, "edg X -> Y\n");
  EXPECT_TRUE(text.out.empty());
}

TEST(Cli, DetectEdgeless) {
  const auto r = run({"detect", "-"}, "var X partial\nvar Y partial\nvar A observed\n");
  EXPECT_EQ(r.code, 0);
  for (const char* key : {"colluders", "maximal_colluders", "self_censoring_edges", "self_censoring_paths"}) {
    EXPECT_TRUE(r.doc["structures"][key].empty()) << key;
  }
}

TEST(Cli, Verify) {
  const auto ok = run({"verify", graph_file("fig1"), "--n", "5"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.doc["report"]["passed"], 5);
  const auto bad = run({"verify", graph_file("fig2a"), "--n", "3", "--expr", "p(X, Y | R_X=1, R_Y=1) * p(R_X, R_Y)"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_FALSE(bad.doc["report"]["failures"].empty());
  EXPECT_EQ(run({"verify", graph_file("fig2a"), "--n", "3"}).code, 1);
}

TEST(Cli, CounterexampleAppendix) {
  const auto r = run({"counterexample", graph_file("fig2a"), "--kind", "appendix", "--a", "7/15", "--a", "8/15"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc["parameters"][0]["c"], "15/16");
  EXPECT_EQ(r.doc["parameters"][1]["d"], "3/7");
  const auto& cells = r.doc["full_law_differences"][0]["cells"];
  ASSERT_EQ(cells.size(), 4U);
  for (const auto& c : cells) {
    EXPECT_EQ(c["at"]["R_X"], 0);
    EXPECT_EQ(c["at"]["R_Y"], 0);
  }
  EXPECT_EQ(run({"counterexample", graph_file("fig2a"), "--kind", "appendix", "--a", "2/5"}).code, 2);
  EXPECT_EQ(run({"counterexample", graph_file("fig1"), "--kind", "appendix"}).code, 1);
}

TEST(Cli, CounterexampleThm6) {
  const auto r = run({"counterexample", graph_file("fig2b"), "--kind", "thm6", "--gamma", "1/3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc["k"], 4);
  EXPECT_TRUE(r.doc["observed_equal"].get<bool>());
  EXPECT_EQ(r.doc["marginal"]["values"][0], "1/3");
  EXPECT_EQ(r.doc["marginal"]["values"][1], "2/3");
  EXPECT_EQ(run({"counterexample", graph_file("fig1"), "--kind", "thm6"}).code, 1);
}

TEST(Cli, OrCheck) {
  const auto ok = run({"or-check", graph_file("fig3a-nomono"), "--n", "3", "--order", "R_Z,R_Y,R_X"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.doc["checks"], 3);
  const auto mono = run({"or-check", graph_file("fig1"), "--n", "2"});
  EXPECT_EQ(mono.code, 1);
  EXPECT_FALSE(mono.doc["first_failure"]["report"]["zero_terms"].empty());
  EXPECT_EQ(run({"or-check", graph_file("fig1"), "--order", "R_X"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("identify-full"), std::string::npos);
}
