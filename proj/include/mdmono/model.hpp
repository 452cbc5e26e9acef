#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mdmono/graph.hpp"
#include "mdmono/table.hpp"

namespace mdmono {

using Cardinalities = std::map<std::string, int>;

// Conditional table p(vertex | parents). Row index is the mixed-radix code of
// the parent values (parents in lexicographic order, last fastest).
struct Cpt {
  std::string vertex;
  std::vector<std::string> parents;
  std::vector<std::vector<Rational>> rows;
  friend bool operator==(const Cpt&, const Cpt&) = default;
};

class DiscreteModel {
 public:
  DiscreteModel(MDag graph, MonotoneSpec mono, Cardinalities cards = {})
      : graph_(std::move(graph)), mono_(std::move(mono)) {
    for (const auto& v : graph_.vertices()) {
      int c = 2;
      if (auto it = cards.find(v); it != cards.end()) c = it->second;
      if (graph_.is_indicator(v) && c != 2) throw Error(ErrorCode::BadInput, "indicator '" + v + "' must be binary");
      if (c < 2) throw Error(ErrorCode::BadInput, "cardinality of '" + v + "' must be at least 2");
      cards_[v] = c;
    }
    for (const auto& [v, c] : cards) graph_.require(v);
  }

  const MDag& graph() const { return graph_; }
  const MonotoneSpec& mono() const { return mono_; }
  const Cardinalities& cardinalities() const { return cards_; }
  int card(const std::string& v) const { return cards_.at(v); }

  std::vector<int> parent_cards(const std::string& v) const {
    std::vector<int> out;
    for (const auto& p : graph_.parents(v)) out.push_back(card(p));
    return out;
  }

  std::size_t row_count(const std::string& v) const {
    std::size_t n = 1;
    for (int c : parent_cards(v)) n *= static_cast<std::size_t>(c);
    return n;
  }

  void set_cpt(Cpt cpt) {
    graph_.require(cpt.vertex);
    const auto& pa = graph_.parents(cpt.vertex);
    if (std::vector<std::string>(pa.begin(), pa.end()) != cpt.parents) {
      throw Error(ErrorCode::BadInput, "CPT parents of '" + cpt.vertex + "' do not match the graph");
    }
    if (cpt.rows.size() != row_count(cpt.vertex)) throw Error(ErrorCode::BadInput, "CPT of '" + cpt.vertex + "' has wrong row count");
    for (const auto& row : cpt.rows) {
      if (static_cast<int>(row.size()) != card(cpt.vertex)) throw Error(ErrorCode::BadInput, "CPT row width mismatch for '" + cpt.vertex + "'");
      Rational sum = 0;
      for (const auto& p : row) {
        if (p < 0) throw Error(ErrorCode::BadInput, "negative probability in CPT of '" + cpt.vertex + "'");
        sum += p;
      }
      if (sum != 1) throw Error(ErrorCode::BadInput, "CPT row of '" + cpt.vertex + "' does not sum to 1");
    }
    cpts_[cpt.vertex] = std::move(cpt);
  }

  // Builds the CPT of v from fn(parent values, value) -> probability.
  void set_cpt(const std::string& v, const std::function<Rational(const std::map<std::string, int>&, int)>& fn) {
    Cpt cpt{v, {}, {}};
    const auto& pa = graph_.parents(v);
    cpt.parents.assign(pa.begin(), pa.end());
    for_each_assignment(parent_cards(v), [&](const std::vector<int>& pv) {
      std::map<std::string, int> pmap;
      for (std::size_t i = 0; i < cpt.parents.size(); ++i) pmap[cpt.parents[i]] = pv[i];
      std::vector<Rational> row;
      for (int x = 0; x < card(v); ++x) row.push_back(fn(pmap, x));
      cpt.rows.push_back(std::move(row));
    });
    set_cpt(std::move(cpt));
  }

  bool has_cpt(const std::string& v) const { return cpts_.count(v) != 0; }
  const Cpt& cpt(const std::string& v) const {
    auto it = cpts_.find(v);
    if (it == cpts_.end()) throw Error(ErrorCode::BadInput, "no CPT for '" + v + "'");
    return it->second;
  }
  const std::map<std::string, Cpt>& cpts() const { return cpts_; }

  std::vector<Variable> variables() const {
    std::vector<Variable> out;
    for (const auto& v : graph_.vertices()) out.push_back({v, card(v)});
    return out;
  }

  // p(O, X(1), R) by the product of all CPTs.
  Table full_law() const {
    Table law(variables());
    const auto& names = graph_.vertices();
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < names.size(); ++i) pos[names[i]] = i;
    struct Lookup {
      const Cpt* cpt;
      std::size_t self;
      std::vector<std::size_t> parent_pos;
      std::vector<std::size_t> parent_stride;
    };
    std::vector<Lookup> lookups;
    for (const auto& v : names) {
      Lookup l{&cpt(v), pos[v], {}, {}};
      std::size_t stride = 1;
      for (auto it = l.cpt->parents.rbegin(); it != l.cpt->parents.rend(); ++it) {
        l.parent_pos.insert(l.parent_pos.begin(), pos[*it]);
        l.parent_stride.insert(l.parent_stride.begin(), stride);
        stride *= static_cast<std::size_t>(card(*it));
      }
      lookups.push_back(std::move(l));
    }
    for (std::size_t off = 0; off < law.size(); ++off) {
      const auto values = law.decode(off);
      Rational p = 1;
      for (const auto& l : lookups) {
        std::size_t row = 0;
        for (std::size_t i = 0; i < l.parent_pos.size(); ++i) row += l.parent_stride[i] * static_cast<std::size_t>(values[l.parent_pos[i]]);
        p *= l.cpt->rows[row][static_cast<std::size_t>(values[l.self])];
        if (p == 0) break;
      }
      law.at(off) = p;
    }
    return law;
  }

  friend bool operator==(const DiscreteModel&, const DiscreteModel&) = default;

 private:
  MDag graph_;
  MonotoneSpec mono_;
  Cardinalities cards_;
  std::map<std::string, Cpt> cpts_;
};

// True when the indicator assignment in `values` (table order) violates a
// monotone pair.
inline bool violates_monotonicity(const MonotoneSpec& mono, const Table& table, const std::vector<int>& values) {
  for (const auto& [u, l] : mono.pairs()) {
    auto iu = table.index_of(u);
    auto il = table.index_of(l);
    if (iu && il && values[*iu] < values[*il]) return true;
  }
  return false;
}

namespace detail {

// Row with a positivity floor of 1/64 on every cell.
template <class Rng>
std::vector<Rational> random_row(Rng& rng, int card) {
  std::uniform_int_distribution<int> draw(1, 32);
  std::vector<int> nums(static_cast<std::size_t>(card));
  int total = 0;
  for (auto& n : nums) {
    n = draw(rng);
    total += n;
  }
  const Rational floor(1, 64);
  const Rational free_mass = 1 - floor * card;
  std::vector<Rational> row;
  for (int n : nums) row.push_back(floor + free_mass * Rational(n, total));
  return row;
}

}  // namespace detail

// Random model factorizing over g with monotone-forced zeros: an indicator
// whose monotone parent is 0 is 0 with probability one. All other cells are
// strictly positive. Deterministic in the seed.
inline DiscreteModel random_model(const MDag& g, const MonotoneSpec& mono, std::uint64_t seed, const Cardinalities& cards = {}) {
  require_valid(g, mono);
  DiscreteModel m(g, mono, cards);
  for (const auto& [v, c] : m.cardinalities()) {
    if (c > 63) throw Error(ErrorCode::BadInput, "cardinality of '" + v + "' exceeds 63");
  }
  std::mt19937_64 rng(seed);
  for (const auto& v : g.vertices()) {
    const VertexSet uppers = mono.uppers_of(v);
    m.set_cpt(v, [&, cache = std::map<std::map<std::string, int>, std::vector<Rational>>{}](const std::map<std::string, int>& pa, int x) mutable {
      auto it = cache.find(pa);
      if (it == cache.end()) {
        bool forced = false;
        for (const auto& u : uppers) forced |= pa.at(u) == 0;
        std::vector<Rational> row = forced ? std::vector<Rational>{Rational(1), Rational(0)} : detail::random_row(rng, m.card(v));
        it = cache.emplace(pa, std::move(row)).first;
      }
      return it->second[static_cast<std::size_t>(x)];
    });
  }
  return m;
}

// Observed data law over O, proxies and indicators. A proxy column has the
// substantive domain plus NA as its last value.
struct ObservedLaw {
  MDag graph;
  Table table;

  int domain_size(const std::string& v) const {
    const int c = table.vars().at(table.require(v)).card;
    return graph.is_partial(v) ? c - 1 : c;
  }
  int na_value(const std::string& proxy) const { return domain_size(proxy); }

  friend bool operator==(const ObservedLaw&, const ObservedLaw&) = default;
};

// Replaces X(1) by NA wherever R_X = 0 and aggregates the collapsed cells.
inline ObservedLaw observed_law_from(const MDag& g, const Table& full) {
  std::vector<Variable> vars;
  for (const auto& v : full.vars()) vars.push_back({v.name, g.is_partial(v.name) ? v.card + 1 : v.card});
  ObservedLaw out{g, Table(vars)};
  std::vector<std::pair<std::size_t, std::size_t>> masks;  // (proxy position, indicator position)
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (g.is_partial(vars[i].name)) masks.emplace_back(i, full.require(g.indicator_of(vars[i].name)));
  }
  for (std::size_t off = 0; off < full.size(); ++off) {
    if (full.at(off) == 0) continue;
    auto values = full.decode(off);
    for (auto [proxy, ind] : masks) {
      if (values[ind] == 0) values[proxy] = vars[proxy].card - 1;
    }
    out.table.at(values) += full.at(off);
  }
  return out;
}

inline ObservedLaw observed_law(const DiscreteModel& m) { return observed_law_from(m.graph(), m.full_law()); }

}  // namespace mdmono
