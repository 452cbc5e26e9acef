#include <gtest/gtest.h>

#include "mdmono/constructions.hpp"
#include "mdmono/evaluate.hpp"
#include "mdmono/reference_graphs.hpp"

using namespace mdmono;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::BadInput;
}

Rational pow2_inv(int n) {
  Rational out = 1;
  for (int i = 0; i < n; ++i) out /= 2;
  return out;
}

}  // namespace

TEST(Theorem6, FullLawMatchesClosedForm) {
  for (std::size_t k : {2U, 3U, 4U}) {
    const auto [g, mono] = self_censoring_chain_graph(k);
    for (const Rational& gamma : {Rational(1, 4), Rational(1, 3), Rational(2, 5)}) {
      const auto c = thm6_pair(k, gamma, g, mono);
      ASSERT_EQ(c.models.size(), 2U);
      for (int i : {1, 2}) {
        const auto law = c.models[static_cast<std::size_t>(i - 1)].full_law();
        std::vector<std::size_t> r_pos;
        for (std::size_t j = 1; j <= k; ++j) r_pos.push_back(law.require("R_X" + std::to_string(j)));
        const std::size_t xk = law.require("X" + std::to_string(k));
        for (std::size_t off = 0; off < law.size(); ++off) {
          const auto v = law.decode(off);
          std::vector<int> r;
          for (auto p : r_pos) r.push_back(v[p]);
          // X1..X_{k-1} are uniform, so alpha = 2^-(k-1).
          EXPECT_EQ(law.at(off), pow2_inv(static_cast<int>(k) - 1) * thm6_f(i, gamma, v[xk], r)) << k << " " << gamma;
        }
      }
    }
  }
}

TEST(Theorem6, ObservedEqualMarginalsDiffer) {
  for (std::size_t k : {2U, 3U, 4U}) {
    const auto [g, mono] = self_censoring_chain_graph(k);
    for (const Rational& gamma : {Rational(1, 4), Rational(1, 3), Rational(2, 5)}) {
      const auto c = thm6_pair(k, gamma, g, mono);
      EXPECT_TRUE(c.observed_equal);
      EXPECT_EQ(observed_law(c.models[0]), observed_law(c.models[1]));
      EXPECT_EQ(c.p_first, gamma);
      EXPECT_EQ(c.p_second, 1 - gamma);
      EXPECT_EQ(c.path.length(), k);
      EXPECT_EQ(c.path.variable, "X" + std::to_string(k));
    }
  }
}

// Summing f* over monotone r reproduces the closed-form shape.
TEST(Theorem6, MarginalShape) {
  for (std::size_t k : {2U, 3U, 5U}) {
    for (int i : {1, 2}) {
      for (int x : {0, 1}) {
        Rational total = 0;
        for_each_assignment(std::vector<int>(k, 2), [&](const std::vector<int>& r) { total += thm6_fstar(i, Rational(1, 3), x, r); });
        EXPECT_EQ(total, thm6_marginal_shape(i, Rational(1, 3), k, x));
      }
    }
  }
}

TEST(Theorem6, BadGammaAndMissingPath) {
  const auto [g, mono] = self_censoring_chain_graph(3);
  for (const Rational& gamma : {Rational(1, 2), Rational(0), Rational(1), Rational(3, 2)}) {
    EXPECT_EQ(code_of([&] { thm6_pair(3, gamma, g, mono); }), ErrorCode::BadGamma);
  }
  EXPECT_EQ(code_of([&] { thm6_pair(2, Rational(1, 4), g, mono); }), ErrorCode::MissingPath);
  const auto f = figures::without_mono(figures::fig2a());
  EXPECT_EQ(code_of([&] { thm6_pair(2, Rational(1, 4), f.graph, f.mono); }), ErrorCode::MissingPath);
}

TEST(Theorem6, WorksOnFigure2aAndWithExtraVertices) {
  const auto f = figures::fig2a();
  const auto c = thm6_pair(2, Rational(1, 4), f.graph, f.mono);
  EXPECT_EQ(c.path.variable, "Y");
  EXPECT_NE(c.p_first, c.p_second);

  // An extra observed vertex and a dangling partial variable.
  auto [g, mono] = self_censoring_chain_graph(2);
  g.add_observed("A");
  g.add_partial("B");
  g.add_edge("A", "X1");
  g.add_edge("R_X2", "R_B");
  mono.add("R_X2", "R_B");
  const auto c2 = thm6_pair(2, Rational(1, 3), g, mono);
  EXPECT_TRUE(c2.observed_equal);
  EXPECT_EQ(c2.models[0].full_law().total(), 1);
}

TEST(Appendix, ParametersMatchTable) {
  const auto pair = appendix_pair(AppendixObserved::reference(), {Rational(7, 15), Rational(8, 15)});
  ASSERT_EQ(pair.size(), 2U);
  EXPECT_EQ(pair[0].params, (AppendixParams{Rational(7, 15), Rational(4, 7), Rational(15, 16), Rational(1, 4), Rational(5, 8), Rational(4, 5)}));
  EXPECT_EQ(pair[1].params, (AppendixParams{Rational(8, 15), Rational(3, 4), Rational(5, 8), Rational(9, 21), Rational(15, 16), Rational(4, 5)}));
}

TEST(Appendix, FullLawsDifferOnlyWhereBothMissing) {
  const auto pair = appendix_pair(AppendixObserved::reference(), {Rational(7, 15), Rational(8, 15)});
  EXPECT_EQ(observed_law(pair[0].model), observed_law(pair[1].model));
  const auto diffs = law_differences(pair[0].model.full_law(), pair[1].model.full_law());
  ASSERT_EQ(diffs.size(), 4U);
  const std::map<std::pair<int, int>, std::pair<Rational, Rational>> expected{
      {{1, 1}, {Rational(1, 60), Rational(3, 20)}},
      {{1, 0}, {Rational(3, 40), Rational(1, 120)}},
      {{0, 1}, {Rational(1, 120), Rational(3, 40)}},
      {{0, 0}, {Rational(3, 20), Rational(1, 60)}},
  };
  for (const auto& d : diffs) {
    EXPECT_EQ(d.at.at("R_X"), 0);
    EXPECT_EQ(d.at.at("R_Y"), 0);
    const auto& [first, second] = expected.at({d.at.at("X"), d.at.at("Y")});
    EXPECT_EQ(d.first, first);
    EXPECT_EQ(d.second, second);
  }
  EXPECT_EQ(query_value(pair[0].model, expr::joint({}, {{"X", 1}})), Rational(7, 15));
  EXPECT_EQ(query_value(pair[1].model, expr::joint({}, {{"X", 1}})), Rational(8, 15));
}

TEST(Appendix, InfeasibleA) {
  for (const Rational& a : {Rational(2, 5), Rational(3, 5), Rational(0), Rational(1), Rational(-1, 2)}) {
    EXPECT_EQ(code_of([&] { appendix_solve(AppendixObserved::reference(), a); }), ErrorCode::InfeasibleA) << a;
  }
}

TEST(Appendix, FeasibleInterval) {
  const auto [lo, hi] = appendix_feasible_interval(AppendixObserved::reference());
  EXPECT_EQ(lo, Rational(11, 24));
  EXPECT_EQ(hi, Rational(13, 24));
}

// The closed-form interval agrees with trying every a of small denominator.
TEST(Appendix, IntervalAgreesWithSolver) {
  const auto o = AppendixObserved::reference();
  const auto [lo, hi] = appendix_feasible_interval(o);
  for (int den = 2; den <= 120; ++den) {
    for (int num = 1; num < den; ++num) {
      const Rational a(num, den);
      bool ok = true;
      try {
        const auto p = appendix_solve(o, a);
        EXPECT_TRUE(appendix_reproduces(appendix_model(p), o)) << a;
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InfeasibleA);
        ok = false;
      }
      EXPECT_EQ(ok, lo < a && a < hi) << a;
    }
  }
}

TEST(Appendix, BadObservedInput) {
  auto o = AppendixObserved::reference();
  o.p11 = 0;
  EXPECT_EQ(code_of([&] { appendix_solve(o, Rational(1, 2)); }), ErrorCode::BadInput);
  o = AppendixObserved::reference();
  o.p0na = Rational(1, 2);
  EXPECT_EQ(code_of([&] { appendix_solve(o, Rational(1, 2)); }), ErrorCode::BadInput);
  o = AppendixObserved::reference();
  o.p10 = o.p11;
  o.p00 = o.p01;
  EXPECT_EQ(code_of([&] { appendix_solve(o, Rational(1, 2)); }), ErrorCode::BadInput);
}

TEST(Appendix, RenamedVariables) {
  const AppendixNames names{"Hobby", "Score"};
  const auto pair = appendix_pair(AppendixObserved::reference(), {Rational(7, 15), Rational(1, 2)}, names);
  EXPECT_TRUE(pair[1].model.graph().contains("R_Score"));
  auto [g, mono] = appendix_graph(names);
  const auto match = match_appendix_shape(g, mono);
  ASSERT_TRUE(match.has_value());
  EXPECT_EQ(match->x, "Hobby");
  EXPECT_FALSE(match_appendix_shape(figures::fig1().graph, figures::fig1().mono).has_value());
}
