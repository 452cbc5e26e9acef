#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mdmono/evaluate.hpp"
#include "mdmono/model.hpp"

namespace mdmono {

struct VerifyFailure {
  std::uint64_t seed = 0;
  Assignment at;
  Rational expected;
  std::optional<Rational> actual;
  std::string error;
};

struct VerifyReport {
  std::size_t models = 0;
  std::size_t passed = 0;
  std::size_t cells = 0;
  // One entry per failing model, its first counterexample cell.
  std::vector<VerifyFailure> failures;
  std::string warning;

  bool ok() const { return failures.empty() && passed == models; }
};

namespace detail {

inline std::vector<std::string> domain_vars(const ProbExpr& functional, const ProbExpr& query) {
  auto vars = free_variables(query);
  auto more = free_variables(functional);
  vars.insert(more.begin(), more.end());
  return {vars.begin(), vars.end()};
}

// Compares the functional on the observed law with the query on the full
// law at every cell where the query is defined.
inline std::pair<std::size_t, std::optional<VerifyFailure>> verify_model(const DiscreteModel& m, const ProbExpr& functional,
                                                                          const ProbExpr& query, std::uint64_t seed) {
  const Evaluator truth = Evaluator::full(m);
  const Evaluator observed = Evaluator::observed(observed_law(m));
  const auto vars = domain_vars(functional, query);
  std::vector<int> cards;
  for (const auto& v : vars) cards.push_back(m.card(v));
  std::size_t cells = 0;
  std::optional<VerifyFailure> failure;
  for_each_assignment(cards, [&](const std::vector<int>& values) {
    if (failure) return;
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = values[i];
    Rational expected;
    try {
      expected = truth(query, a);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::ConditioningOnNull) return;
      throw;
    }
    ++cells;
    try {
      const Rational actual = observed(functional, a);
      if (actual != expected) failure = VerifyFailure{seed, a, expected, actual, "value mismatch"};
    } catch (const Error& err) {
      failure = VerifyFailure{seed, a, expected, std::nullopt, err.what()};
    }
  });
  return {cells, failure};
}

}  // namespace detail

// Checks functional == query on n random models with seeds seed, seed+1, ...
// Seeds are spread over worker threads; the report is independent of the
// thread count.
inline VerifyReport verify_functional(const MDag& g, const MonotoneSpec& mono, const ProbExpr& functional, const ProbExpr& query,
                                      std::size_t n, std::uint64_t seed, const Cardinalities& cards = {}, unsigned workers = 0) {
  VerifyReport report;
  report.models = n;
  if (n == 0) {
    report.warning = "no models checked; the pass is vacuous";
    return report;
  }
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

  std::vector<std::optional<VerifyFailure>> failures(n);
  std::vector<std::size_t> cells(n, 0);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        const auto m = random_model(g, mono, seed + i, cards);
        auto [c, f] = detail::verify_model(m, functional, query, seed + i);
        cells[i] = c;
        failures[i] = std::move(f);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < n; ++i) {
    report.cells += cells[i];
    if (!errors[i].empty()) {
      report.failures.push_back({seed + i, {}, Rational(0), std::nullopt, errors[i]});
    } else if (failures[i]) {
      report.failures.push_back(*failures[i]);
    } else {
      ++report.passed;
    }
  }
  return report;
}

}  // namespace mdmono
