#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mdmono/error.hpp"
#include "mdmono/rational.hpp"

namespace mdmono {

struct Variable {
  std::string name;
  int card = 2;
  friend bool operator==(const Variable&, const Variable&) = default;
};

// Calls fn(values) for every joint value of the given cardinalities, last
// position varying fastest.
inline void for_each_assignment(const std::vector<int>& cards, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> values(cards.size(), 0);
  for (int c : cards) {
    if (c <= 0) return;
  }
  while (true) {
    fn(values);
    std::size_t i = values.size();
    while (i > 0) {
      --i;
      if (++values[i] < cards[i]) break;
      values[i] = 0;
      if (i == 0) return;
    }
    if (values.empty()) return;
  }
}

// Dense joint table of exact rationals in mixed radix.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<Variable> vars) : vars_(std::move(vars)) {
    strides_.assign(vars_.size(), 1);
    std::size_t size = 1;
    for (std::size_t i = vars_.size(); i-- > 0;) {
      strides_[i] = size;
      size *= static_cast<std::size_t>(vars_[i].card);
    }
    cells_.assign(size, Rational(0));
  }

  const std::vector<Variable>& vars() const { return vars_; }
  std::size_t size() const { return cells_.size(); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].name == name) return i;
    }
    return std::nullopt;
  }

  std::size_t require(const std::string& name) const {
    auto i = index_of(name);
    if (!i) throw Error(ErrorCode::UnknownVertex, "table has no variable '" + name + "'");
    return *i;
  }

  std::size_t offset(const std::vector<int>& values) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < values.size(); ++i) off += strides_[i] * static_cast<std::size_t>(values[i]);
    return off;
  }

  std::vector<int> decode(std::size_t off) const {
    std::vector<int> values(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      values[i] = static_cast<int>(off / strides_[i]);
      off %= strides_[i];
    }
    return values;
  }

  Rational& at(std::size_t off) { return cells_[off]; }
  const Rational& at(std::size_t off) const { return cells_[off]; }
  Rational& at(const std::vector<int>& values) { return cells_[offset(values)]; }
  const Rational& at(const std::vector<int>& values) const { return cells_[offset(values)]; }
  const std::vector<Rational>& cells() const { return cells_; }

  Rational total() const {
    Rational sum = 0;
    for (const auto& c : cells_) sum += c;
    return sum;
  }

  // Marginal over the listed variable positions, in the listed order.
  Table marginal(const std::vector<std::size_t>& keep) const {
    std::vector<Variable> vars;
    for (auto i : keep) vars.push_back(vars_.at(i));
    Table out(std::move(vars));
    std::vector<int> sub(keep.size());
    for (std::size_t off = 0; off < cells_.size(); ++off) {
      if (cells_[off] == 0) continue;
      for (std::size_t k = 0; k < keep.size(); ++k) sub[k] = static_cast<int>((off / strides_[keep[k]]) % vars_[keep[k]].card);
      out.at(sub) += cells_[off];
    }
    return out;
  }

  friend bool operator==(const Table&, const Table&) = default;

 private:
  std::vector<Variable> vars_;
  std::vector<std::size_t> strides_;
  std::vector<Rational> cells_;
};

}  // namespace mdmono
