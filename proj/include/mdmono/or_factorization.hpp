#pragma once

// Odds-ratio factorization of the missingness mechanism,
//
//   p(R | O, X) = 1/Z * prod_k p(R_k | R_-k = 1, O, X)
//                     * prod_{k>=2} OR(R_k, R_<k | R_>k = 1, O, X),
//
// computed twice: numerically from the full law, and as a ProbExpr
// evaluated by the generic evaluator. Both must agree with the true
// mechanism cell by cell.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mdmono/evaluate.hpp"

namespace mdmono {

struct OrMismatch {
  Assignment at;
  Rational expected;
  std::optional<Rational> numeric;
  std::optional<Rational> symbolic;
};

struct OrReport {
  std::vector<std::string> ordering;
  std::size_t cells = 0;
  bool exact = false;
  bool symbolic_agrees = false;
  std::vector<std::string> zero_terms;
  std::optional<OrMismatch> mismatch;
};

namespace detail {

inline std::vector<std::string> substantive(const MDag& g) {
  std::vector<std::string> out;
  for (const auto& v : g.vertices()) {
    if (!g.is_indicator(v)) out.push_back(v);
  }
  return out;
}

inline void check_ordering(const MDag& g, const std::vector<std::string>& ordering) {
  const VertexSet given(ordering.begin(), ordering.end());
  if (given.size() != ordering.size() || given != g.indicators()) {
    throw Error(ErrorCode::BadInput, "ordering must list every response indicator exactly once");
  }
}

inline std::string render_cond(const std::string& rk, const std::string& rk_value, const std::vector<std::pair<std::string, int>>& given,
                               const std::vector<std::string>& ox, const std::vector<int>& ox_values) {
  std::string out = "p(" + rk + rk_value + " | ";
  bool first = true;
  for (const auto& [n, v] : given) {
    out += (first ? "" : ", ") + n + "=" + std::to_string(v);
    first = false;
  }
  for (std::size_t i = 0; i < ox.size(); ++i) {
    out += (first ? "" : ", ") + ox[i] + "=" + std::to_string(ox_values[i]);
    first = false;
  }
  return out + ")";
}

// Numeric route. With `strict`, the first zero denominator throws; otherwise
// zero terms are collected and the affected (o, x) strata are skipped.
class OrNumeric {
 public:
  OrNumeric(const DiscreteModel& m, std::vector<std::string> ordering, bool strict)
      : ordering_(std::move(ordering)), strict_(strict), law_(m.full_law()), ox_(substantive(m.graph())) {
    for (const auto& v : ox_) ox_pos_.push_back(law_.require(v));
    for (const auto& r : ordering_) r_pos_.push_back(law_.require(r));
    for (const auto& v : ox_) ox_cards_.push_back(m.card(v));
  }

  // Reconstructed mechanism and the truth per (o, x, r) cell.
  struct Cell {
    Assignment at;
    Rational truth;
    std::optional<Rational> value;
  };

  std::vector<Cell> run() {
    std::vector<Cell> out;
    const std::size_t K = ordering_.size();
    for_each_assignment(ox_cards_, [&](const std::vector<int>& ox) {
      ox_values_ = ox;
      // p(r | o, x) over r in mixed radix order, R_1 slowest.
      std::vector<Rational> mech(std::size_t{1} << K, Rational(0));
      Rational p_ox = 0;
      std::vector<int> values(law_.vars().size(), 0);
      for (std::size_t i = 0; i < ox_pos_.size(); ++i) values[ox_pos_[i]] = ox[i];
      for (std::size_t r = 0; r < mech.size(); ++r) {
        for (std::size_t k = 0; k < K; ++k) values[r_pos_[k]] = bit(r, k);
        mech[r] = law_.at(values);
        p_ox += mech[r];
      }
      if (p_ox == 0) return;
      for (auto& c : mech) c /= p_ox;
      mech_ = &mech;

      std::vector<std::optional<Rational>> unnorm(mech.size());
      bool failed = false;
      for (std::size_t r = 0; r < mech.size() && !failed; ++r) {
        auto u = unnormalized(r);
        if (!u) failed = true;
        unnorm[r] = u;
      }
      Rational z = 0;
      if (!failed) {
        for (const auto& u : unnorm) z += *u;
      }
      for (std::size_t r = 0; r < mech.size(); ++r) {
        Cell cell;
        for (std::size_t i = 0; i < ox_.size(); ++i) cell.at[ox_[i]] = ox[i];
        for (std::size_t k = 0; k < K; ++k) cell.at[ordering_[k]] = bit(r, k);
        cell.truth = mech[r];
        if (!failed && z != 0) cell.value = *unnorm[r] / z;
        out.push_back(std::move(cell));
      }
    });
    return out;
  }

  const std::vector<std::string>& zero_terms() const { return zero_terms_; }

 private:
  int bit(std::size_t r, std::size_t k) const { return static_cast<int>((r >> (ordering_.size() - 1 - k)) & 1U); }

  // p(R_k = value | fixed) within the current (o, x) stratum.
  std::optional<Rational> cond(std::size_t k, int value, const std::vector<std::pair<std::size_t, int>>& fixed, bool is_denominator) {
    Rational num = 0;
    Rational den = 0;
    for (std::size_t r = 0; r < mech_->size(); ++r) {
      bool ok = true;
      for (const auto& [j, v] : fixed) ok = ok && bit(r, j) == v;
      if (!ok) continue;
      den += (*mech_)[r];
      if (bit(r, k) == value) num += (*mech_)[r];
    }
    if (den == 0) {
      report(k, value, fixed, true);
      return std::nullopt;
    }
    const Rational out = num / den;
    if (is_denominator && out == 0) {
      report(k, value, fixed, false);
      return std::nullopt;
    }
    return out;
  }

  void report(std::size_t k, int value, const std::vector<std::pair<std::size_t, int>>& fixed, bool null_condition) {
    std::vector<std::pair<std::string, int>> given;
    for (const auto& [j, v] : fixed) given.emplace_back(ordering_[j], v);
    const std::string term = render_cond(ordering_[k], "=" + std::to_string(value), given, ox_, ox_values_) +
                             (null_condition ? " (conditioning event has probability zero)" : " = 0");
    if (strict_) throw Error(ErrorCode::ZeroDenominator, term);
    if (std::find(zero_terms_.begin(), zero_terms_.end(), term) == zero_terms_.end()) zero_terms_.push_back(term);
  }

  std::optional<Rational> unnormalized(std::size_t r) {
    const std::size_t K = ordering_.size();
    Rational out = 1;
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<std::pair<std::size_t, int>> others;
      for (std::size_t j = 0; j < K; ++j) {
        if (j != k) others.emplace_back(j, 1);
      }
      const int rk = bit(r, k);
      auto base = cond(k, rk, others, false);
      if (!base) return std::nullopt;
      out *= *base;
      if (k == 0) continue;

      std::vector<std::pair<std::size_t, int>> mixed;
      for (std::size_t j = 0; j < K; ++j) {
        if (j < k) mixed.emplace_back(j, bit(r, j));
        if (j > k) mixed.emplace_back(j, 1);
      }
      auto a = cond(k, rk, mixed, false);
      auto b = cond(k, 1, mixed, true);
      auto c = cond(k, 1, others, false);
      auto d = cond(k, rk, others, true);
      if (!a || !b || !c || !d) return std::nullopt;
      out *= (*a / *b) * (*c / *d);
    }
    return out;
  }

  std::vector<std::string> ordering_;
  bool strict_;
  Table law_;
  std::vector<std::string> ox_;
  std::vector<std::size_t> ox_pos_;
  std::vector<std::size_t> r_pos_;
  std::vector<int> ox_cards_;
  std::vector<int> ox_values_;
  const std::vector<Rational>* mech_ = nullptr;
  std::vector<std::string> zero_terms_;
};

}  // namespace detail

// The factorization as an expression with free variables O, X(1), R.
inline ProbExpr or_factorization_expr(const MDag& g, const std::vector<std::string>& ordering) {
  detail::check_ordering(g, ordering);
  const auto ox = detail::substantive(g);
  const std::size_t K = ordering.size();
  std::vector<ProbExpr> factors;
  for (std::size_t k = 0; k < K; ++k) {
    Assignment rest_one;
    for (std::size_t j = 0; j < K; ++j) {
      if (j != k) rest_one[ordering[j]] = 1;
    }
    factors.push_back(expr::cond({ordering[k]}, ox, rest_one));
  }
  for (std::size_t k = 1; k < K; ++k) {
    Assignment rest_one;
    Assignment later_one;
    std::vector<std::string> given = ox;
    for (std::size_t j = 0; j < K; ++j) {
      if (j != k) rest_one[ordering[j]] = 1;
      if (j > k) later_one[ordering[j]] = 1;
      if (j < k) given.push_back(ordering[j]);
    }
    auto pinned = [&](const std::vector<std::string>& free, const Assignment& fixed) { return expr::refs(free, fixed); };
    const ProbExpr mixed = expr::term(expr::refs({ordering[k]}), pinned(given, later_one));
    const ProbExpr mixed_one = expr::term({{ordering[k], 1}}, pinned(given, later_one));
    const ProbExpr base_one = expr::term({{ordering[k], 1}}, pinned(ox, rest_one));
    const ProbExpr base = expr::term(expr::refs({ordering[k]}), pinned(ox, rest_one));
    factors.push_back(expr::product({expr::quotient(mixed, mixed_one), expr::quotient(base_one, base)}));
  }
  const ProbExpr unnorm = expr::product(factors);
  return expr::quotient(unnorm, expr::sum(ordering, unnorm));
}

// The true mechanism p(R | O, X(1)) as an expression.
inline ProbExpr mechanism_query(const MDag& g) {
  auto r = g.ordered_of_kind(VertexKind::Indicator);
  return expr::cond(r, detail::substantive(g));
}

namespace detail {

inline OrReport or_check(const DiscreteModel& m, const std::vector<std::string>& ordering, bool strict) {
  check_ordering(m.graph(), ordering);
  OrNumeric numeric(m, ordering, strict);
  const auto cells = numeric.run();
  OrReport report;
  report.ordering = ordering;
  report.zero_terms = numeric.zero_terms();
  report.cells = cells.size();
  report.exact = report.zero_terms.empty();
  report.symbolic_agrees = true;

  const Evaluator ev = Evaluator::full(m);
  const ProbExpr symbolic = or_factorization_expr(m.graph(), ordering);
  for (const auto& cell : cells) {
    std::optional<Rational> sym;
    try {
      sym = ev(symbolic, cell.at);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ZeroDenominator && err.code() != ErrorCode::ConditioningOnNull) throw;
    }
    const bool numeric_ok = cell.value && *cell.value == cell.truth;
    const bool symbolic_ok = sym && *sym == cell.truth;
    if (sym != cell.value) report.symbolic_agrees = false;
    if (!numeric_ok || !symbolic_ok) {
      report.exact = false;
      if (!report.mismatch) report.mismatch = OrMismatch{cell.at, cell.truth, cell.value, sym};
    }
  }
  return report;
}

}  // namespace detail

// Throws ZeroDenominator naming the first vanishing denominator term.
inline OrReport or_reconstruct(const DiscreteModel& m, const std::vector<std::string>& ordering) {
  return detail::or_check(m, ordering, true);
}

// Same check without throwing; vanishing terms are listed in the report.
inline OrReport or_diagnose(const DiscreteModel& m, const std::vector<std::string>& ordering) {
  return detail::or_check(m, ordering, false);
}

}  // namespace mdmono
