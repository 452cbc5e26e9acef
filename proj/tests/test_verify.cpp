#include <gtest/gtest.h>

#include "mdmono/expr_text.hpp"
#include "mdmono/identify.hpp"
#include "mdmono/reference_graphs.hpp"
#include "mdmono/verify.hpp"

using namespace mdmono;

TEST(Verify, Figure1FullLawPasses) {
  const auto f = figures::fig1();
  const auto r = identify_full_law(f.graph, f.mono);
  ASSERT_TRUE(r.identified());
  const auto report = verify_functional(f.graph, f.mono, *r.functional, r.query, 30, 7);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.models, 30U);
  EXPECT_EQ(report.passed, 30U);
  EXPECT_EQ(report.cells, 30U * 16U);
  EXPECT_TRUE(report.warning.empty());
}

TEST(Verify, CompleteCaseCandidateFailsOnFigure2a) {
  const auto f = figures::fig2a();
  const auto candidate = parse_expr("p(X, Y | R_X=1, R_Y=1) * p(R_X, R_Y)");
  const auto report = verify_functional(f.graph, f.mono, candidate, full_law_query(f.graph), 5, 1);
  EXPECT_FALSE(report.ok());
  ASSERT_FALSE(report.failures.empty());
  const auto& w = report.failures.front();
  EXPECT_EQ(w.seed, 1U);
  EXPECT_FALSE(w.at.empty());
  ASSERT_TRUE(w.actual.has_value());
  EXPECT_NE(*w.actual, w.expected);
}

TEST(Verify, UndefinedFunctionalIsReported) {
  const auto f = figures::fig1();
  // Conditions on a probability-zero event wherever R_X = 0.
  const auto bad = parse_expr("p(Y | X, R_X=0, R_Y=1)");
  const auto report = verify_functional(f.graph, f.mono, bad, parse_expr("p(Y | X)"), 3, 1);
  EXPECT_FALSE(report.ok());
  ASSERT_FALSE(report.failures.empty());
  EXPECT_FALSE(report.failures.front().actual.has_value());
  EXPECT_FALSE(report.failures.front().error.empty());
}

TEST(Verify, ZeroModelsWarns) {
  const auto f = figures::fig1();
  const auto r = identify_full_law(f.graph, f.mono);
  const auto report = verify_functional(f.graph, f.mono, *r.functional, r.query, 0, 1);
  EXPECT_FALSE(report.warning.empty());
  EXPECT_EQ(report.models, 0U);
}

TEST(Verify, ReportIndependentOfWorkerCount) {
  const auto f = figures::fig2a();
  const auto candidate = parse_expr("p(X, Y | R_X=1, R_Y=1) * p(R_X, R_Y)");
  const auto one = verify_functional(f.graph, f.mono, candidate, full_law_query(f.graph), 12, 3, {}, 1);
  for (unsigned w : {2U, 4U, 7U}) {
    const auto many = verify_functional(f.graph, f.mono, candidate, full_law_query(f.graph), 12, 3, {}, w);
    EXPECT_EQ(many.passed, one.passed);
    EXPECT_EQ(many.cells, one.cells);
    ASSERT_EQ(many.failures.size(), one.failures.size());
    for (std::size_t i = 0; i < one.failures.size(); ++i) {
      EXPECT_EQ(many.failures[i].seed, one.failures[i].seed);
      EXPECT_EQ(many.failures[i].at, one.failures[i].at);
      EXPECT_EQ(many.failures[i].expected, one.failures[i].expected);
    }
  }
}

TEST(Verify, NonBinaryCardinalities) {
  const auto f = figures::fig3c();
  const auto app = identify_colluded_at_one(f.graph, f.mono, "R_Y");
  const auto report = verify_functional(f.graph, f.mono, app.functional, app.query, 5, 1, {{"W", 3}, {"Z", 3}});
  EXPECT_TRUE(report.ok());
}
