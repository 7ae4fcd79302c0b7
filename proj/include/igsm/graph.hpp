#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <tuple>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "igsm/config.hpp"
#include "igsm/core.hpp"
#include "igsm/semantics.hpp"

namespace igsm {

//---------------------------------------------------------------------------
// Structure graph
//---------------------------------------------------------------------------

// An edge connects item `from` of layer `layer` to item `to` of layer+1.
struct Edge {
  int layer = 0;
  int from = 0;
  int to = 0;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

struct StructureGraph {
  std::array<VocabularyLayer, kLayerCount> layers;
  std::vector<Edge> edges;  // sorted, unique

  std::vector<int> children(int layer, int item) const {
    std::vector<int> out;
    for (const auto& e : edges) {
      if (e.layer == layer && e.from == item) out.push_back(e.to);
    }
    return out;
  }

  bool has_edge(int layer, int from, int to) const {
    return std::binary_search(edges.begin(), edges.end(), Edge{layer, from, to});
  }

  void validate() const {
    std::set<std::string> names;
    for (const auto& l : layers) {
      if (l.items.empty()) throw ConfigError("structure graph layer '" + l.category + "' has no items");
      if (!names.insert(l.category).second) throw ConfigError("duplicate name '" + l.category + "'");
      for (const auto& i : l.items) {
        if (!names.insert(i).second) throw ConfigError("duplicate name '" + i + "'");
      }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      if (e.layer < 0 || e.layer + 1 >= static_cast<int>(kLayerCount) || e.from < 0 || e.to < 0 ||
          e.from >= static_cast<int>(layers[e.layer].items.size()) ||
          e.to >= static_cast<int>(layers[e.layer + 1].items.size())) {
        throw ConfigError("edge does not connect adjacent-layer items");
      }
      if (i > 0 && !(edges[i - 1] < e)) throw ConfigError("edges must be sorted and unique");
    }
  }

  friend bool operator==(const StructureGraph& a, const StructureGraph& b) {
    for (std::size_t i = 0; i < kLayerCount; ++i) {
      if (a.layers[i].category != b.layers[i].category || a.layers[i].items != b.layers[i].items) return false;
    }
    return a.edges == b.edges;
  }
};

inline StructureGraph sample_structure_graph(const GenConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(derive_seed(seed, 0x5347ull));
  const auto packs = config.selected_packs();
  const VocabularyPack& pack = *packs[rng.below(packs.size())];

  StructureGraph sg;
  for (std::size_t l = 0; l < kLayerCount; ++l) {
    const auto& range = config.items_per_layer[l];
    const int n = rng.between(range.min, range.max);
    const auto& pool = pack.layers[l].items;
    if (static_cast<std::size_t>(n) > pool.size()) {
      throw ConfigError("vocabulary pack '" + pack.name + "' has " + std::to_string(pool.size()) + " items in layer " +
                        std::to_string(l) + " but " + std::to_string(n) + " were requested");
    }
    std::vector<std::string> items = pool;
    rng.shuffle(items);
    items.resize(static_cast<std::size_t>(n));
    sg.layers[l] = VocabularyLayer{pack.layers[l].category, std::move(items)};
  }

  std::set<Edge> edges;
  for (int l = 0; l + 1 < static_cast<int>(kLayerCount); ++l) {
    const int up = static_cast<int>(sg.layers[l].items.size());
    const int down = static_cast<int>(sg.layers[l + 1].items.size());
    for (int a = 0; a < up; ++a) {
      for (int b = 0; b < down; ++b) {
        if (rng.bernoulli(config.edge_probability)) edges.insert(Edge{l, a, b});
      }
    }
    // Connectivity repair: every item gets a parent and a child.
    for (int b = 0; b < down; ++b) {
      bool has_parent = false;
      for (int a = 0; a < up; ++a) has_parent = has_parent || edges.count(Edge{l, a, b});
      if (!has_parent) edges.insert(Edge{l, static_cast<int>(rng.below(static_cast<std::uint64_t>(up))), b});
    }
    for (int a = 0; a < up; ++a) {
      bool has_child = false;
      for (int b = 0; b < down; ++b) has_child = has_child || edges.count(Edge{l, a, b});
      if (!has_child) edges.insert(Edge{l, a, static_cast<int>(rng.below(static_cast<std::uint64_t>(down)))});
    }
  }
  sg.edges.assign(edges.begin(), edges.end());
  sg.validate();
  return sg;
}

//---------------------------------------------------------------------------
// Dependency graph
//---------------------------------------------------------------------------

enum class ParamKind { instance, abstract };

struct Parameter {
  ParamKind kind = ParamKind::instance;
  int layer = 0;   // owner item's layer
  int owner = 0;   // owner item index
  int target = 0;  // instance: item index in layer+1; abstract: target layer
  std::string name;
  Rule rule;
  ModValue value;
};

class DependencyGraph {
 public:
  DependencyGraph() = default;

  // Enumerates every parameter the structure graph supports: one instance
  // parameter per edge (in edge order) and one abstract parameter per
  // (item, deeper layer) pair reachable through edges. Abstract rules are
  // derived from the edges; instance rules start as the constant 0.
  static DependencyGraph from_structure(StructureGraph sg) {
    sg.validate();
    DependencyGraph g;
    g.structure_ = std::move(sg);
    const auto& S = g.structure_;

    std::map<Edge, ParamId> instance_of;
    for (const auto& e : S.edges) {
      Parameter p;
      p.kind = ParamKind::instance;
      p.layer = e.layer;
      p.owner = e.from;
      p.target = e.to;
      p.name = S.layers[e.layer].items[e.from] + "'s " + S.layers[e.layer + 1].items[e.to];
      p.rule = Rule::make_constant(0);
      instance_of[e] = g.add(std::move(p));
    }

    // reach[l][x][t]: item x of layer l has a downward path to layer t.
    std::array<std::vector<std::array<bool, kLayerCount>>, kLayerCount> reach;
    for (int l = static_cast<int>(kLayerCount) - 1; l >= 0; --l) {
      reach[l].assign(S.layers[l].items.size(), {});
      if (l + 1 == static_cast<int>(kLayerCount)) continue;
      for (int x = 0; x < static_cast<int>(S.layers[l].items.size()); ++x) {
        for (int c : S.children(l, x)) {
          reach[l][x][l + 1] = true;
          for (std::size_t t = l + 2; t < kLayerCount; ++t) reach[l][x][t] = reach[l][x][t] || reach[l + 1][c][t];
        }
      }
    }

    // Abstract parameters, built deepest-first so subtotals already exist.
    std::map<std::tuple<int, int, int>, ParamId> abstract_of;
    for (int l = static_cast<int>(kLayerCount) - 2; l >= 0; --l) {
      for (int x = 0; x < static_cast<int>(S.layers[l].items.size()); ++x) {
        for (int t = l + 1; t < static_cast<int>(kLayerCount); ++t) {
          if (!reach[l][x][t]) continue;
          Parameter p;
          p.kind = ParamKind::abstract;
          p.layer = l;
          p.owner = x;
          p.target = t;
          p.name = S.layers[l].items[x] + "'s " + S.layers[t].category;
          p.rule.kind = RuleKind::aggregate;
          for (int c : S.children(l, x)) {
            AggregateTerm term{instance_of.at(Edge{l, x, c}), std::nullopt};
            if (t > l + 1) {
              if (!reach[l + 1][c][t]) continue;
              term.subtotal = abstract_of.at({l + 1, c, t});
            }
            p.rule.terms.push_back(term);
          }
          abstract_of[{l, x, t}] = g.add(std::move(p));
        }
      }
    }
    g.finalize();
    return g;
  }

  const StructureGraph& structure() const noexcept { return structure_; }
  std::size_t size() const noexcept { return params_.size(); }
  std::span<const Parameter> parameters() const noexcept { return params_; }

  const Parameter& at(ParamId id) const {
    if (id.index >= params_.size()) throw LookupError("unknown parameter id #" + std::to_string(id.index));
    return params_[id.index];
  }

  std::optional<ParamId> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }
  ParamId lookup(std::string_view name) const {
    auto id = find(name);
    if (!id) throw LookupError("unknown parameter '" + std::string(name) + "'");
    return *id;
  }

  ParamId query() const noexcept { return query_; }
  int op() const noexcept { return op_; }

  std::vector<ParamId> instance_parameters() const {
    std::vector<ParamId> out;
    for (std::uint32_t i = 0; i < params_.size(); ++i) {
      if (params_[i].kind == ParamKind::instance) out.push_back(ParamId{i});
    }
    return out;
  }

  // Replaces an instance parameter's rule. Call finalize() afterwards.
  void set_rule(ParamId id, Rule rule) {
    auto& p = mutable_at(id);
    if (p.kind != ParamKind::instance) throw ConfigError("abstract parameter rules are derived from the structure");
    if (rule.kind == RuleKind::aggregate) throw ConfigError("instance parameters cannot use an aggregate rule");
    for (auto d : rule.dependencies()) at(d);
    p.rule = std::move(rule);
  }

  void set_query(ParamId id) {
    at(id);
    query_ = id;
    op_ = closure_cost(id);
  }

  // Checks acyclicity, evaluates every parameter and recomputes op.
  void finalize() {
    const std::size_t n = params_.size();
    std::vector<int> indegree(n, 0);
    std::vector<std::vector<std::uint32_t>> dependents(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      for (auto d : params_[i].rule.dependencies()) {
        ++indegree[i];
        dependents[d.index].push_back(i);
      }
    }
    topo_.clear();
    std::vector<std::uint32_t> ready;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (indegree[i] == 0) ready.push_back(i);
    }
    for (std::size_t head = 0; head < ready.size(); ++head) {
      const auto u = ready[head];
      topo_.push_back(ParamId{u});
      for (auto v : dependents[u]) {
        if (--indegree[v] == 0) ready.push_back(v);
      }
    }
    if (topo_.size() != n) throw ConfigError("parameter rules form a dependency cycle");

    for (auto id : topo_) {
      auto& p = params_[id.index];
      p.value = p.rule.evaluate([&](ParamId d) { return params_[d.index].value; });
    }
    closures_.assign(n, ParamSet(n));
    costs_.assign(n, 0);
    for (auto id : topo_) {
      auto& c = closures_[id.index];
      c.insert(id);
      for (auto d : params_[id.index].rule.dependencies()) c |= closures_[d.index];
      int cost = 0;
      for (auto m : c.ids()) cost += params_[m.index].rule.op_cost();
      costs_[id.index] = cost;
    }
    if (n > 0) op_ = costs_[std::min<std::size_t>(query_.index, n - 1)];
  }

  // Parameters in a fixed topological order.
  const std::vector<ParamId>& topological_order() const noexcept { return topo_; }

  // Minimal ancestor closure of `id`, including itself.
  const ParamSet& closure(ParamId id) const {
    at(id);
    return closures_[id.index];
  }

  // Clauses needed to evaluate every parameter in closure(id).
  int closure_cost(ParamId id) const {
    at(id);
    return costs_[id.index];
  }

  // "How many <target> does <owner> have?" into its parts.
  std::string owner_name(ParamId id) const {
    const auto& p = at(id);
    return structure_.layers[p.layer].items[p.owner];
  }
  std::string target_name(ParamId id) const {
    const auto& p = at(id);
    return p.kind == ParamKind::instance ? structure_.layers[p.layer + 1].items[p.target]
                                         : structure_.layers[p.target].category;
  }

 private:
  ParamId add(Parameter p) {
    const ParamId id{static_cast<std::uint32_t>(params_.size())};
    if (!by_name_.emplace(p.name, id).second) throw ConfigError("duplicate parameter name '" + p.name + "'");
    params_.push_back(std::move(p));
    return id;
  }
  Parameter& mutable_at(ParamId id) {
    at(id);
    return params_[id.index];
  }

  StructureGraph structure_;
  std::vector<Parameter> params_;
  std::unordered_map<std::string, ParamId> by_name_;
  std::vector<ParamId> topo_;
  std::vector<ParamSet> closures_;
  std::vector<int> costs_;
  ParamId query_{};
  int op_ = 0;
};

//---------------------------------------------------------------------------
// Operations
//---------------------------------------------------------------------------

// Parameters a shortest solution must define.
inline ParamSet necessary_set(const DependencyGraph& g) { return g.closure(g.query()); }

// True iff `a` is not yet computed and every operand of its rule is.
inline bool can_next(const DependencyGraph& g, const ParamSet& computed, ParamId a) {
  const auto& p = g.at(a);
  if (computed.contains(a)) return false;
  for (auto d : p.rule.dependencies()) {
    if (!computed.contains(d)) return false;
  }
  return true;
}

namespace detail {

inline Rule sample_instance_rule(const GenConfig& config, Rng& rng, const std::vector<ParamId>& available) {
  const auto& w = config.rule_weights;
  const std::array<double, 4> weights{w.constant, w.copy, w.sum, w.difference};
  const std::size_t kind = rng.weighted(weights);

  std::size_t needed = 0;
  if (kind == 1) needed = 1;
  if (kind == 3) needed = 2;
  if (kind == 2) needed = 2 + rng.weighted(config.sum_arity_weights);
  if (kind == 0 || available.size() < std::max<std::size_t>(needed, 1)) {
    return Rule::make_constant(static_cast<int>(rng.below(kModulus)));
  }
  if (kind == 2 && needed > available.size()) needed = available.size();
  if (kind == 3 && available.size() < 2) return Rule::make_constant(static_cast<int>(rng.below(kModulus)));

  // Distinct operands, uniformly without replacement.
  std::vector<ParamId> pool = available;
  std::vector<ParamId> ops;
  for (std::size_t i = 0; i < needed; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    ops.push_back(pool[i]);
  }

  Modifier mod = Modifier::none;
  int k = 0;
  if (rng.bernoulli(config.modifier_probability)) {
    const std::array<double, 2> mw{config.plus_weight, config.times_weight};
    if (rng.weighted(mw) == 0) {
      mod = Modifier::plus;
      k = rng.between(1, kModulus - 1);
    } else {
      mod = Modifier::times;
      k = rng.between(2, kModulus - 1);
    }
  }
  switch (kind) {
    case 1: return Rule::make_copy(ops[0], mod, k);
    case 2:
      if (ops.size() < 2) return Rule::make_copy(ops[0], mod, k);
      return Rule::make_sum(std::move(ops), mod, k);
    default: return Rule::make_difference(ops[0], ops[1], mod, k);
  }
}

// Assigns a random rule to every instance parameter such that the whole
// parameter graph stays acyclic: each instance parameter may only read
// parameters that were already fully determined when it was visited.
inline void sample_rules(DependencyGraph& g, const GenConfig& config, Rng& rng) {
  std::vector<ParamId> order = g.instance_parameters();
  rng.shuffle(order);

  std::vector<int> missing(g.size(), 0);
  std::vector<std::vector<ParamId>> dependents(g.size());
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    const auto& p = g.parameters()[i];
    if (p.kind != ParamKind::abstract) continue;
    for (auto d : p.rule.dependencies()) {
      ++missing[i];
      dependents[d.index].push_back(ParamId{i});
    }
  }

  std::vector<ParamId> available;
  std::vector<ParamId> stack;
  for (auto id : order) {
    g.set_rule(id, sample_instance_rule(config, rng, available));
    stack.push_back(id);
    while (!stack.empty()) {
      const ParamId done = stack.back();
      stack.pop_back();
      available.push_back(done);
      for (auto a : dependents[done.index]) {
        if (--missing[a.index] == 0) stack.push_back(a);
      }
    }
  }
}

}  // namespace detail

// Samples rules over `sg` until some non-constant parameter has exactly
// `op_target` clauses in its shortest solution, then queries it.
inline DependencyGraph sample_dependency_graph(const StructureGraph& sg, int op_target, std::uint64_t seed,
                                               const GenConfig& config = preset_config("med")) {
  if (op_target < 1) throw ConfigError("op_target must be at least 1");
  if (op_target > static_cast<int>(kLetterPool.size())) {
    throw InfeasibleError("op " + std::to_string(op_target) + " exceeds the " + std::to_string(kLetterPool.size()) +
                          "-letter naming pool");
  }
  DependencyGraph g = DependencyGraph::from_structure(sg);
  for (int attempt = 0; attempt < config.attempt_budget; ++attempt) {
    Rng rng(derive_seed(seed, 0x4447ull, static_cast<std::uint64_t>(attempt)));
    detail::sample_rules(g, config, rng);
    g.finalize();
    std::vector<ParamId> hits;
    for (std::uint32_t i = 0; i < g.size(); ++i) {
      const ParamId id{i};
      if (g.at(id).rule.kind != RuleKind::constant && g.closure_cost(id) == op_target) hits.push_back(id);
    }
    if (!hits.empty()) {
      g.set_query(rng.pick(hits));
      return g;
    }
  }
  throw InfeasibleError("no query with op=" + std::to_string(op_target) + " found within " +
                        std::to_string(config.attempt_budget) + " attempts");
}

// Same parameters and structure, a freshly drawn query; op follows the new
// query. Constant parameters, and queries whose solution would need more
// letters than the pool holds, are never drawn.
inline DependencyGraph reask(const DependencyGraph& g, std::uint64_t seed) {
  std::vector<ParamId> candidates;
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    const ParamId id{i};
    if (id == g.query() || g.at(id).rule.kind == RuleKind::constant) continue;
    if (g.closure_cost(id) > static_cast<int>(kLetterPool.size())) continue;
    candidates.push_back(id);
  }
  if (candidates.empty()) throw InfeasibleError("reask: no alternative query exists");
  Rng rng(derive_seed(seed, 0x5241ull));
  DependencyGraph out = g;
  out.set_query(rng.pick(candidates));
  return out;
}

}  // namespace igsm
