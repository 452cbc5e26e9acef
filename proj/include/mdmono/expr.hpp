#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mdmono/rational.hpp"

namespace mdmono {

using Assignment = std::map<std::string, int>;

// A variable inside a probability term, optionally pinned to a value.
struct VarRef {
  std::string name;
  std::optional<int> value;
  friend bool operator==(const VarRef&, const VarRef&) = default;
};

class ProbExpr;

// p(targets | given); an empty `given` is a joint probability.
struct ProbTerm {
  std::vector<VarRef> targets;
  std::vector<VarRef> given;
  friend bool operator==(const ProbTerm&, const ProbTerm&) = default;
};

struct Product {
  std::vector<ProbExpr> factors;
  friend bool operator==(const Product&, const Product&);
};

struct Quotient {
  std::shared_ptr<const ProbExpr> num;
  std::shared_ptr<const ProbExpr> den;
  friend bool operator==(const Quotient&, const Quotient&);
};

struct MarginalSum {
  std::vector<std::string> over;
  std::shared_ptr<const ProbExpr> body;
  friend bool operator==(const MarginalSum&, const MarginalSum&);
};

struct Constant {
  Rational value;
  friend bool operator==(const Constant&, const Constant&) = default;
};

// body|_{pins}: evaluates body with the pinned values overriding the
// surrounding assignment.
struct Restriction {
  Assignment pins;
  std::shared_ptr<const ProbExpr> body;
  friend bool operator==(const Restriction&, const Restriction&);
};

// First branch whose condition matches the assignment, else `otherwise`.
struct Cases {
  std::vector<std::pair<Assignment, ProbExpr>> branches;
  std::shared_ptr<const ProbExpr> otherwise;
  friend bool operator==(const Cases&, const Cases&);
};

using ExprNode = std::variant<ProbTerm, Product, Quotient, MarginalSum, Constant, Restriction, Cases>;

// Immutable expression handle; copies share the node.
class ProbExpr {
 public:
  ProbExpr() : node_(std::make_shared<const ExprNode>(Constant{Rational(1)})) {}
  ProbExpr(ExprNode node) : node_(std::make_shared<const ExprNode>(std::move(node))) {}

  const ExprNode& node() const { return *node_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(node_.get());
  }

  friend bool operator==(const ProbExpr& a, const ProbExpr& b) { return a.node_ == b.node_ || *a.node_ == *b.node_; }

 private:
  std::shared_ptr<const ExprNode> node_;
};

namespace detail {
inline bool same(const std::shared_ptr<const ProbExpr>& a, const std::shared_ptr<const ProbExpr>& b) {
  if (!a || !b) return a == b;
  return *a == *b;
}
}  // namespace detail

inline bool operator==(const Product& a, const Product& b) { return a.factors == b.factors; }
inline bool operator==(const Quotient& a, const Quotient& b) { return detail::same(a.num, b.num) && detail::same(a.den, b.den); }
inline bool operator==(const MarginalSum& a, const MarginalSum& b) { return a.over == b.over && detail::same(a.body, b.body); }
inline bool operator==(const Restriction& a, const Restriction& b) { return a.pins == b.pins && detail::same(a.body, b.body); }
inline bool operator==(const Cases& a, const Cases& b) { return a.branches == b.branches && detail::same(a.otherwise, b.otherwise); }

// Builders.
namespace expr {

inline std::shared_ptr<const ProbExpr> box(ProbExpr e) { return std::make_shared<const ProbExpr>(std::move(e)); }

inline ProbExpr constant(Rational value) { return ProbExpr(Constant{std::move(value)}); }

inline std::vector<VarRef> refs(const std::vector<std::string>& free, const Assignment& fixed = {}) {
  std::vector<VarRef> out;
  for (const auto& f : free) out.push_back({f, std::nullopt});
  for (const auto& [name, value] : fixed) out.push_back({name, value});
  return out;
}

inline ProbExpr term(std::vector<VarRef> targets, std::vector<VarRef> given = {}) {
  return ProbExpr(ProbTerm{std::move(targets), std::move(given)});
}

// p(targets | given_free, given_fixed)
inline ProbExpr cond(const std::vector<std::string>& targets, const std::vector<std::string>& given_free, const Assignment& given_fixed = {}) {
  return term(refs(targets), refs(given_free, given_fixed));
}

// p(free, fixed)
inline ProbExpr joint(const std::vector<std::string>& free, const Assignment& fixed = {}) { return term(refs(free, fixed)); }

inline ProbExpr product(std::vector<ProbExpr> factors) { return ProbExpr(Product{std::move(factors)}); }
inline ProbExpr quotient(ProbExpr num, ProbExpr den) { return ProbExpr(Quotient{box(std::move(num)), box(std::move(den))}); }
inline ProbExpr sum(std::vector<std::string> over, ProbExpr body) { return ProbExpr(MarginalSum{std::move(over), box(std::move(body))}); }
inline ProbExpr restrict(Assignment pins, ProbExpr body) { return ProbExpr(Restriction{std::move(pins), box(std::move(body))}); }
inline ProbExpr cases(std::vector<std::pair<Assignment, ProbExpr>> branches, ProbExpr otherwise) {
  return ProbExpr(Cases{std::move(branches), box(std::move(otherwise))});
}

}  // namespace expr

// Variables an assignment must bind for the expression to evaluate.
inline std::set<std::string> free_variables(const ProbExpr& e) {
  struct Visitor {
    std::set<std::string> operator()(const ProbTerm& t) const {
      std::set<std::string> out;
      for (const auto* side : {&t.targets, &t.given}) {
        for (const auto& r : *side) {
          if (!r.value) out.insert(r.name);
        }
      }
      return out;
    }
    std::set<std::string> operator()(const Product& p) const {
      std::set<std::string> out;
      for (const auto& f : p.factors) {
        auto s = free_variables(f);
        out.insert(s.begin(), s.end());
      }
      return out;
    }
    std::set<std::string> operator()(const Quotient& q) const {
      auto out = free_variables(*q.num);
      auto d = free_variables(*q.den);
      out.insert(d.begin(), d.end());
      return out;
    }
    std::set<std::string> operator()(const MarginalSum& s) const {
      auto out = free_variables(*s.body);
      for (const auto& v : s.over) out.erase(v);
      return out;
    }
    std::set<std::string> operator()(const Constant&) const { return {}; }
    std::set<std::string> operator()(const Restriction& r) const {
      auto out = free_variables(*r.body);
      for (const auto& [v, value] : r.pins) out.erase(v);
      return out;
    }
    std::set<std::string> operator()(const Cases& c) const {
      auto out = free_variables(*c.otherwise);
      for (const auto& [when, then] : c.branches) {
        for (const auto& [v, value] : when) out.insert(v);
        auto s = free_variables(then);
        out.insert(s.begin(), s.end());
      }
      return out;
    }
  };
  return std::visit(Visitor{}, e.node());
}

}  // namespace mdmono
