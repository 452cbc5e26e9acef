#pragma once

// Text form of ProbExpr.
//
//   expr        := factor ('*' factor)*
//   factor      := unary ('/' unary)?
//   unary       := atom ('|_{' assigns '}')*
//   atom        := term | NUMBER | sum | cases | prod | '(' expr ')'
//   term        := 'p(' vars ('|' vars)? ')'
//   vars        := var (',' var)*          var := IDENT ('=' INT)?
//   sum         := 'sum_{' IDENT (',' IDENT)* '}' atom
//   cases       := 'cases{' (assigns ':' expr ';')* 'otherwise' ':' expr '}'
//   prod        := 'prod{' (expr (';' expr)*)? '}'
//   assigns     := IDENT '=' INT (',' IDENT '=' INT)*
//
// NUMBER is an integer or "num/den" written without spaces; the quotient
// operator is always surrounded by spaces in rendered output.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

#include "mdmono/expr.hpp"

namespace mdmono {

namespace detail {

inline std::string render_vars(const std::vector<VarRef>& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += vars[i].name;
    if (vars[i].value) out += "=" + std::to_string(*vars[i].value);
  }
  return out;
}

inline std::string render_assign(const Assignment& a) {
  std::string out;
  bool first = true;
  for (const auto& [k, v] : a) {
    if (!first) out += ", ";
    first = false;
    out += k + "=" + std::to_string(v);
  }
  return out;
}

inline bool is_atomic(const ProbExpr& e) {
  if (e.as<ProbTerm>() || e.as<Constant>() || e.as<Cases>() || e.as<MarginalSum>()) return true;
  if (const auto* p = e.as<Product>()) return p->factors.size() <= 1;
  return false;
}

inline bool is_unary(const ProbExpr& e) { return is_atomic(e) || e.as<Restriction>(); }

std::string render_expr(const ProbExpr& e);

inline std::string render_atom(const ProbExpr& e) { return is_atomic(e) ? render_expr(e) : "(" + render_expr(e) + ")"; }
inline std::string render_unary(const ProbExpr& e) { return is_unary(e) ? render_expr(e) : "(" + render_expr(e) + ")"; }

inline std::string render_expr(const ProbExpr& e) {
  struct Visitor {
    std::string operator()(const ProbTerm& t) const {
      std::string out = "p(" + render_vars(t.targets);
      if (!t.given.empty()) out += " | " + render_vars(t.given);
      return out + ")";
    }
    std::string operator()(const Product& p) const {
      if (p.factors.size() <= 1) return "prod{" + (p.factors.empty() ? std::string() : render_expr(p.factors[0])) + "}";
      std::string out;
      for (std::size_t i = 0; i < p.factors.size(); ++i) {
        if (i) out += " * ";
        const auto& f = p.factors[i];
        // Quotients are factors in the grammar; nested products keep their parentheses.
        out += (f.as<Quotient>() ? render_expr(f) : render_unary(f));
      }
      return out;
    }
    std::string operator()(const Quotient& q) const { return render_unary(*q.num) + " / " + render_unary(*q.den); }
    std::string operator()(const MarginalSum& s) const {
      std::string over;
      for (std::size_t i = 0; i < s.over.size(); ++i) over += (i ? ", " : "") + s.over[i];
      return "sum_{" + over + "} " + render_atom(*s.body);
    }
    std::string operator()(const Constant& c) const { return to_string(c.value); }
    std::string operator()(const Restriction& r) const { return render_atom(*r.body) + "|_{" + render_assign(r.pins) + "}"; }
    std::string operator()(const Cases& c) const {
      std::string out = "cases{";
      for (const auto& [when, then] : c.branches) out += render_assign(when) + " : " + render_expr(then) + " ; ";
      return out + "otherwise : " + render_expr(*c.otherwise) + "}";
    }
  };
  return std::visit(Visitor{}, e.node());
}

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  ProbExpr parse_all() {
    ProbExpr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::SyntaxError, what + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view s) {
    skip_ws();
    return text_.substr(pos_, s.size()) == s;
  }

  bool accept(std::string_view s) {
    if (!peek(s)) return false;
    pos_ += s.size();
    return true;
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::string(text_.substr(start, pos_ - start));
  }

  int integer() {
    skip_ws();
    return std::stoi(digits());
  }

  // Keyword immediately followed by a delimiter, e.g. "p(" or "sum_{".
  bool keyword(std::string_view kw) {
    skip_ws();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    pos_ += kw.size();
    return true;
  }

  Assignment assigns(std::string_view closer) {
    Assignment out;
    if (peek(closer)) return out;
    do {
      const std::string name = ident();
      expect("=");
      out[name] = integer();
    } while (accept(","));
    return out;
  }

  std::vector<VarRef> vars() {
    std::vector<VarRef> out;
    do {
      VarRef r{ident(), std::nullopt};
      if (accept("=")) r.value = integer();
      out.push_back(std::move(r));
    } while (accept(","));
    return out;
  }

  ProbExpr parse_expr() {
    std::vector<ProbExpr> factors{parse_factor()};
    while (accept("*")) factors.push_back(parse_factor());
    if (factors.size() == 1) return factors[0];
    return expr::product(std::move(factors));
  }

  ProbExpr parse_factor() {
    ProbExpr num = parse_unary();
    if (accept("/")) return expr::quotient(std::move(num), parse_unary());
    return num;
  }

  ProbExpr parse_unary() {
    ProbExpr e = parse_atom();
    while (accept("|_{")) {
      Assignment pins = assigns("}");
      expect("}");
      e = expr::restrict(std::move(pins), std::move(e));
    }
    return e;
  }

  ProbExpr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        ++pos_;
        num += "/" + digits();
      }
      return expr::constant(parse_rational(num));
    }
    if (accept("(")) {
      ProbExpr e = parse_expr();
      expect(")");
      return e;
    }
    if (keyword("p(")) {
      std::vector<VarRef> targets = vars();
      std::vector<VarRef> given;
      if (accept("|")) given = vars();
      expect(")");
      return expr::term(std::move(targets), std::move(given));
    }
    if (keyword("sum_{")) {
      std::vector<std::string> over;
      do over.push_back(ident());
      while (accept(","));
      expect("}");
      return expr::sum(std::move(over), parse_atom());
    }
    if (keyword("prod{")) {
      std::vector<ProbExpr> factors;
      if (!peek("}")) {
        do factors.push_back(parse_expr());
        while (accept(";"));
      }
      expect("}");
      return expr::product(std::move(factors));
    }
    if (keyword("cases{")) {
      std::vector<std::pair<Assignment, ProbExpr>> branches;
      while (true) {
        if (keyword("otherwise")) {
          expect(":");
          ProbExpr other = parse_expr();
          expect("}");
          return expr::cases(std::move(branches), std::move(other));
        }
        Assignment when = assigns(":");
        expect(":");
        ProbExpr then = parse_expr();
        expect(";");
        branches.emplace_back(std::move(when), std::move(then));
      }
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string render(const ProbExpr& e) { return detail::render_expr(e); }
inline ProbExpr parse_expr(std::string_view text) { return detail::ExprParser(text).parse_all(); }

}  // namespace mdmono
