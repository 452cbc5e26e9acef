// Acceptance run: one line per criterion, nonzero exit if any fails.
//   acceptance [--criterion N]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "mdmono/cli.hpp"
#include "mdmono/constructions.hpp"
#include "mdmono/identify.hpp"
#include "mdmono/or_factorization.hpp"
#include "mdmono/reference_graphs.hpp"
#include "mdmono/structures.hpp"
#include "mdmono/verify.hpp"

using namespace mdmono;

namespace {

// Pinned thresholds.
constexpr double kLimitMs1 = 1000, kLimitMs2 = 1000, kLimitMs3 = 10000, kLimitMs4 = 60000;
constexpr double kLimitMs5 = 10000, kLimitMs6 = 10000;
constexpr std::size_t kModels3 = 100, kModels4 = 50, kModels7 = 50;
constexpr std::size_t kMinPositive6 = 100, kMinOrderings6 = 2, kMinMonotone6 = 20;
constexpr int kMaxDen2 = 60;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string str(const Rational& r) { return to_string(r); }

std::string graph_path(const std::string& name) { return std::string(MDMONO_GRAPHS_DIR) + "/" + name + ".mdag"; }

GraphSpec load(const std::string& name) {
  std::ifstream f(graph_path(name));
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_mdag_file(ss.str());
}

std::optional<ErrorCode> error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

Outcome criterion1() {
  Outcome o;
  const auto pair = appendix_pair(AppendixObserved::reference(), {Rational(7, 15), Rational(8, 15)});
  const AppendixParams m1{Rational(7, 15), Rational(4, 7), Rational(15, 16), Rational(1, 4), Rational(5, 8), Rational(4, 5)};
  const AppendixParams m2{Rational(8, 15), Rational(3, 4), Rational(5, 8), Rational(9, 21), Rational(15, 16), Rational(4, 5)};
  if (pair.size() != 2) return o.fail("expected two models"), o;
  if (!(pair[0].params == m1)) o.fail("first parameter column differs");
  if (!(pair[1].params == m2)) o.fail("second parameter column differs");
  if (!(observed_law(pair[0].model) == observed_law(pair[1].model))) o.fail("observed laws differ");
  for (const auto& m : pair) {
    if (!appendix_reproduces(m.model, AppendixObserved::reference())) o.fail("model does not reproduce the observed input");
  }
  const std::map<std::pair<int, int>, std::pair<Rational, Rational>> expected{
      {{1, 1}, {Rational(1, 60), Rational(3, 20)}},
      {{1, 0}, {Rational(3, 40), Rational(1, 120)}},
      {{0, 1}, {Rational(1, 120), Rational(3, 40)}},
      {{0, 0}, {Rational(3, 20), Rational(1, 60)}},
  };
  const auto diffs = law_differences(pair[0].model.full_law(), pair[1].model.full_law());
  if (diffs.size() != 4) o.fail("full laws differ on " + std::to_string(diffs.size()) + " cells, expected 4");
  for (const auto& d : diffs) {
    if (d.at.at("R_X") != 0 || d.at.at("R_Y") != 0) {
      o.fail("full laws differ outside (R_X, R_Y) = (0, 0)");
      continue;
    }
    const auto& [first, second] = expected.at({d.at.at("X"), d.at.at("Y")});
    if (d.first != first || d.second != second) o.fail("difference cell value " + str(d.first) + " vs " + str(d.second));
  }
  const auto px1 = expr::joint({}, {{"X", 1}});
  const Rational p1 = query_value(pair[0].model, px1), p2 = query_value(pair[1].model, px1);
  if (p1 != Rational(7, 15) || p2 != Rational(8, 15)) o.fail("p(X=1) = " + str(p1) + " vs " + str(p2));
  if (o.pass) o.detail = "parameters, observed equality and 4 differing cells exact";
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (const Rational& a : {Rational(2, 5), Rational(3, 5)}) {
    const auto code = error_of([&] { appendix_solve(AppendixObserved::reference(), a); });
    if (code != ErrorCode::InfeasibleA) o.fail("a = " + str(a) + " not rejected with InfeasibleA");
  }
  const Rational lo(9, 20), hi(11, 20);
  std::size_t accepted = 0, rejected = 0;
  std::string first_rejected;
  for (int den = 2; den <= kMaxDen2; ++den) {
    for (int num = 1; num < den; ++num) {
      const Rational a(num, den);
      if (std::gcd(num, den) != 1 || !(lo < a && a < hi)) continue;
      try {
        const auto p = appendix_solve(AppendixObserved::reference(), a);
        if (!appendix_reproduces(appendix_model(p), AppendixObserved::reference())) {
          o.fail("a = " + str(a) + " accepted but does not reproduce the observed law");
        }
        ++accepted;
      } catch (const Error& e) {
        if (rejected++ == 0) first_rejected = str(a) + " (" + std::string(to_string(e.code())) + ")";
      }
    }
  }
  if (rejected > 0) {
    o.fail(std::to_string(rejected) + " of " + std::to_string(accepted + rejected) + " values in (9/20, 11/20) rejected, first " +
           first_rejected);
  }
  if (o.pass) o.detail = std::to_string(accepted) + " values accepted and reconstructed";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto spec = load("fig1");
  const auto r = identify_full_law(spec.graph, spec.mono);
  if (!r.identified()) return o.fail("full law not identified: " + r.message), o;
  const auto report = verify_functional(spec.graph, spec.mono, *r.functional, r.query, kModels3, 1);
  if (report.models != kModels3 || !report.ok()) {
    o.fail(std::to_string(report.passed) + "/" + std::to_string(report.models) + " models passed");
  }
  if (o.pass) o.detail = std::to_string(report.passed) + " models, " + std::to_string(report.cells) + " cells exact";
  return o;
}

Outcome criterion4() {
  Outcome o;
  const std::vector<std::pair<std::string, Theorem>> cases{
      {"fig3a", Theorem::T2}, {"fig3b", Theorem::T3}, {"fig3c", Theorem::T4}, {"fig3d", Theorem::T5}, {"fig3e", Theorem::T5}};
  std::size_t models = 0;
  for (const auto& [name, want] : cases) {
    const auto spec = load(name);
    try {
      const auto app = identify_colluded_at_one(spec.graph, spec.mono, "R_Y");
      if (app.theorem != want) {
        o.fail(name + " selected " + std::string(to_string(app.theorem)) + ", expected " + std::string(to_string(want)));
        continue;
      }
      const auto report = verify_functional(spec.graph, spec.mono, app.functional, app.query, kModels4, 1);
      models += report.models;
      if (report.models != kModels4 || !report.ok()) {
        o.fail(name + ": " + std::to_string(report.passed) + "/" + std::to_string(report.models) + " models passed");
      }
    } catch (const Error& e) {
      o.fail(name + ": " + e.what());
    }
  }
  if (o.pass) o.detail = "T2 T3 T4 T5 T5 selected, " + std::to_string(models) + " models exact";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::size_t pairs = 0;
  for (std::size_t k : {2U, 3U, 4U}) {
    const auto [g, mono] = self_censoring_chain_graph(k);
    for (const Rational& gamma : {Rational(1, 4), Rational(1, 3), Rational(2, 5)}) {
      const std::string tag = "k=" + std::to_string(k) + " gamma=" + str(gamma);
      try {
        const auto c = thm6_pair(k, gamma, g, mono);
        if (c.models.size() != 2 || !c.observed_equal || !(observed_law(c.models[0]) == observed_law(c.models[1]))) {
          o.fail(tag + ": observed laws differ");
        }
        if (c.p_first == c.p_second) o.fail(tag + ": target marginals equal");
        ++pairs;
      } catch (const Error& e) {
        o.fail(tag + ": " + e.what());
      }
    }
    if (error_of([&] { thm6_pair(k, Rational(1, 2), g, mono); }) != ErrorCode::BadGamma) o.fail("gamma = 1/2 accepted");
  }
  if (o.pass) o.detail = std::to_string(pairs) + " pairs observationally equal with distinct marginals, gamma=1/2 rejected";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::size_t positive = 0, checks = 0, monotone = 0;
  const std::vector<std::string> names{"fig1", "fig2a", "fig3a", "fig3b"};
  for (const auto& name : names) {
    const auto spec = load(name + "-nomono");
    auto fwd = spec.graph.ordered_of_kind(VertexKind::Indicator);
    auto rev = fwd;
    std::reverse(rev.begin(), rev.end());
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      const auto m = random_model(spec.graph, {}, seed);
      const auto law = m.full_law();
      for (std::size_t off = 0; off < law.size(); ++off) {
        if (law.at(off) <= 0) {
          o.fail(name + " seed " + std::to_string(seed) + " is not positive");
          break;
        }
      }
      for (const auto& order : {fwd, rev}) {
        try {
          const auto r = or_reconstruct(m, order);
          if (!r.exact || !r.symbolic_agrees) o.fail(name + " seed " + std::to_string(seed) + ": reconstruction not exact");
        } catch (const Error& e) {
          o.fail(name + " seed " + std::to_string(seed) + ": " + e.what());
        }
        ++checks;
      }
      ++positive;
    }
    const auto mono_spec = load(name);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto m = random_model(mono_spec.graph, mono_spec.mono, seed);
      if (error_of([&] { or_reconstruct(m, fwd); }) != ErrorCode::ZeroDenominator) {
        o.fail(name + " monotone seed " + std::to_string(seed) + ": no ZeroDenominator");
      }
      ++monotone;
    }
  }
  if (positive < kMinPositive6 || checks < kMinOrderings6 * positive || monotone < kMinMonotone6) o.fail("too few models");
  if (o.pass) {
    o.detail = std::to_string(positive) + " positive models x 2 orderings exact, " + std::to_string(monotone) + " monotone models ZeroDenominator";
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (const std::string name : {"fig1", "fig3a"}) {
    for (const std::string variant : {"", "-nomono"}) {
      const auto spec = load(name + variant);
      const auto r = identify_target_law_mohan(spec.graph, spec.mono);
      if (!r.identified()) {
        o.fail(name + variant + ": " + std::string(to_string(r.status)) + " (" + r.message + ")");
        continue;
      }
      const auto report = verify_functional(spec.graph, spec.mono, *r.functional, r.query, kModels7, 1);
      if (report.models != kModels7 || !report.ok()) {
        o.fail(name + variant + ": " + std::to_string(report.passed) + "/" + std::to_string(report.models) + " models passed");
      }
    }
  }
  const auto spec = load("fig2a");
  const auto r = identify_target_law_mohan(spec.graph, spec.mono);
  if (r.status != IdentifyStatus::Unknown) o.fail("fig2a: " + std::string(to_string(r.status)) + ", expected Unknown");
  if (o.pass) o.detail = "fig1 and fig3a identified and verified, fig2a Unknown";
  return o;
}

Outcome criterion8() {
  Outcome o;
  struct Expected {
    std::vector<Colluder> colluders;
    std::vector<std::pair<std::string, VertexSet>> maximal;
    std::vector<Edge> edges;
    std::vector<SelfCensoringPath> paths;
  };
  const Colluder xry{"X", "R_X", "R_Y"};
  const std::pair<std::string, VertexSet> max_ry{"R_Y", {"X"}};
  const std::map<std::string, Expected> expected{
      {"fig1", {{xry}, {max_ry}, {}, {}}},
      {"fig2a", {{}, {}, {}, {{"Y", {"R_X", "R_Y"}}}}},
      {"fig2b", {{}, {}, {}, {{"X4", {"R_X1", "R_X2", "R_X3", "R_X4"}}}}},
      {"fig3a", {{xry}, {max_ry}, {}, {}}},
      {"fig3b", {{xry}, {max_ry}, {}, {}}},
      {"fig3c", {{xry}, {max_ry}, {}, {}}},
      {"fig3d", {{xry}, {max_ry}, {}, {}}},
      {"fig3e", {{xry}, {max_ry}, {}, {}}},
  };
  for (const auto& [name, e] : expected) {
    const auto spec = load(name);
    if (find_colluders(spec.graph) != e.colluders) o.fail(name + ": colluders differ");
    std::vector<std::pair<std::string, VertexSet>> maximal;
    for (const auto& r : spec.graph.ordered_of_kind(VertexKind::Indicator)) {
      const auto m = find_maximal_colluder(spec.graph, r);
      if (!m.c_set.empty()) maximal.emplace_back(r, m.c_set);
    }
    if (maximal != e.maximal) o.fail(name + ": maximal colluders differ");
    const auto sc = find_self_censoring(spec.graph, spec.mono);
    if (sc.edges != e.edges) o.fail(name + ": self-censoring edges differ");
    if (sc.paths != e.paths) o.fail(name + ": self-censoring paths differ");
  }
  if (o.pass) o.detail = std::to_string(expected.size()) + " figure graphs match";
  return o;
}

// Shells out to the schema checker; there is no C++ validator in the build.
std::string schema_check(const std::string& schema, const std::string& json_text) {
  const std::string python = MDMONO_PYTHON;
  if (python.empty()) return "no Python interpreter configured for schema validation";
  const auto tmp = std::filesystem::temp_directory_path() / ("mdmono-acceptance-" + std::to_string(::getpid()) + ".json");
  std::ofstream(tmp) << json_text;
  const std::string cmd = "\"" + python + "\" \"" + MDMONO_CHECK_SCRIPT + "\" --validate \"" + std::string(MDMONO_SCHEMAS_DIR) + "/" +
                          schema + ".schema.json\" \"" + tmp.string() + "\" > \"" + tmp.string() + ".log\" 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream log(tmp.string() + ".log");
  std::stringstream ss;
  ss << log.rdbuf();
  std::filesystem::remove(tmp);
  std::filesystem::remove(tmp.string() + ".log");
  if (rc != 0) return "schema validation failed: " + ss.str().substr(0, 300);
  return "";
}

Outcome criterion9() {
  Outcome o;
  std::ostringstream out, err;
  std::istringstream in;
  const int code = cli::run_cli({"identify-full", graph_path("fig1")}, out, err, in);
  if (code != 0) o.fail("fig1 exit code " + std::to_string(code));
  try {
    const auto doc = Json::parse(out.str());
    if (doc.at("exit_code") != 0 || doc.at("result").at("status") != "Identified") o.fail("fig1 document not Identified");
    if (const auto why = schema_check("identify", out.str()); !why.empty()) o.fail("fig1: " + why);
  } catch (const std::exception& e) {
    o.fail(std::string("fig1 output is not JSON: ") + e.what());
  }
  std::ostringstream out2, err2;
  const int code2 = cli::run_cli({"identify-full", graph_path("fig2a")}, out2, err2, in);
  if (code2 != 1) o.fail("fig2a exit code " + std::to_string(code2));
  try {
    const auto doc = Json::parse(out2.str());
    if (doc.at("result").at("reason") != "SelfCensoringPath") o.fail("fig2a reason " + doc.at("result").at("reason").dump());
    if (const auto why = schema_check("identify", out2.str()); !why.empty()) o.fail("fig2a: " + why);
  } catch (const std::exception& e) {
    o.fail(std::string("fig2a output is not JSON: ") + e.what());
  }
  if (o.pass) o.detail = "fig1 exit 0 schema-valid, fig2a exit 1 SelfCensoringPath";
  return o;
}

struct Criterion {
  int id;
  std::function<Outcome()> run;
  double limit_ms;  // 0: no limit
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, criterion1, kLimitMs1}, {2, criterion2, kLimitMs2}, {3, criterion3, kLimitMs3},
      {4, criterion4, kLimitMs4}, {5, criterion5, kLimitMs5}, {6, criterion6, kLimitMs6},
      {7, criterion7, 0},         {8, criterion8, 0},         {9, criterion9, 0},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    only = std::atoi(argv[2]);
    if (only < 1 || only > 9) {
      std::cerr << "criterion must be 1..9\n";
      return 2;
    }
  } else if (argc != 1) {
    std::cerr << "usage: acceptance [--criterion N]\n";
    return 2;
  }
  int failed = 0;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("unexpected exception: ") + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_ms > 0 && ms > c.limit_ms) o.fail("runtime " + std::to_string(static_cast<long>(ms)) + " ms over limit; " + o.detail);
    std::printf("criterion %d: %s %s (%.0f ms)\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), ms);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
