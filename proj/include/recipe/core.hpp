#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "recipe/error.hpp"
#include "recipe/ids.hpp"
#include "recipe/typekb.hpp"

namespace recipe {

struct Arc {
  NodeId from;
  NodeId to;

  friend auto operator<=>(const Arc&, const Arc&) = default;
  friend bool operator==(const Arc&, const Arc&) = default;
};

using NodeSet = std::set<NodeId>;
using Typing = std::map<NodeId, TypeId>;

/// (C, A, E): comestible nodes, action nodes, directed arcs. Plain data; use
/// validate_recipe_graph to check the recipe-graph conditions.
struct RecipeGraph {
  NodeSet comestibles;
  NodeSet actions;
  std::set<Arc> arcs;

  std::optional<Kind> kind_of(const NodeId& n) const {
    if (comestibles.count(n)) return Kind::comestible;
    if (actions.count(n)) return Kind::action;
    return std::nullopt;
  }

  std::size_t node_count() const noexcept { return comestibles.size() + actions.size(); }

  friend bool operator==(const RecipeGraph&, const RecipeGraph&) = default;
};

/// One failed recipe-graph condition (numbered 1-5) with the nodes involved.
struct GraphViolation {
  int condition = 0;
  std::string detail;
  std::vector<NodeId> nodes;
};

namespace detail {

inline std::string join(const std::vector<NodeId>& nodes, const char* sep = ", ") {
  std::string out;
  for (const auto& n : nodes) out += (out.empty() ? "" : sep) + n.value;
  return out;
}

}  // namespace detail

/// Checks conditions 1-5: non-empty node sets, bipartite arcs, connected and
/// acyclic, every action has an input and an output, every comestible has at
/// most one producer. Returns every violation found.
inline std::vector<GraphViolation> validate_recipe_graph(const RecipeGraph& g) {
  std::vector<GraphViolation> out;
  if (g.comestibles.empty()) out.push_back({1, "no comestible nodes", {}});
  if (g.actions.empty()) out.push_back({1, "no action nodes", {}});

  for (const auto& n : g.comestibles)
    if (g.actions.count(n)) out.push_back({2, "node is both a comestible and an action", {n}});

  std::map<NodeId, std::vector<NodeId>> succ, pred;
  for (const auto& arc : g.arcs) {
    const auto k1 = g.kind_of(arc.from), k2 = g.kind_of(arc.to);
    if (!k1 || !k2) {
      out.push_back({2, "arc endpoint is not a node of the graph", {arc.from, arc.to}});
      continue;
    }
    if (*k1 == *k2) {
      out.push_back({2, "arc joins two " + std::string(to_string(*k1)) + " nodes", {arc.from, arc.to}});
      continue;
    }
    succ[arc.from].push_back(arc.to);
    pred[arc.to].push_back(arc.from);
  }

  std::vector<NodeId> all;
  all.insert(all.end(), g.comestibles.begin(), g.comestibles.end());
  all.insert(all.end(), g.actions.begin(), g.actions.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  if (!all.empty()) {
    std::set<NodeId> seen{all.front()};
    std::vector<NodeId> stack{all.front()};
    while (!stack.empty()) {
      const NodeId cur = stack.back();
      stack.pop_back();
      for (const auto* adj : {&succ, &pred})
        if (auto it = adj->find(cur); it != adj->end())
          for (const auto& next : it->second)
            if (seen.insert(next).second) stack.push_back(next);
    }
    if (seen.size() != all.size()) {
      std::vector<NodeId> unreached;
      for (const auto& n : all)
        if (!seen.count(n)) unreached.push_back(n);
      out.push_back({3, "graph is not connected; unreachable from " + all.front().value + ": " +
                            detail::join(unreached),
                     unreached});
    }
  }

  {
    std::map<NodeId, int> colour;
    std::vector<NodeId> path;
    std::optional<std::vector<NodeId>> cycle;
    std::function<void(const NodeId&)> dfs = [&](const NodeId& v) {
      colour[v] = 1;
      path.push_back(v);
      if (auto it = succ.find(v); it != succ.end())
        for (const auto& w : it->second) {
          if (cycle) break;
          if (colour[w] == 1) {
            auto start = std::find(path.begin(), path.end(), w);
            cycle = std::vector<NodeId>(start, path.end());
            cycle->push_back(w);
          } else if (colour[w] == 0) {
            dfs(w);
          }
        }
      path.pop_back();
      colour[v] = 2;
    };
    for (const auto& n : all)
      if (!cycle && colour[n] == 0) dfs(n);
    if (cycle) out.push_back({3, "graph has a directed cycle: " + detail::join(*cycle, " -> "), *cycle});
  }

  for (const auto& a : g.actions) {
    if (g.comestibles.count(a)) continue;
    if (!pred.count(a)) out.push_back({4, "action has no input comestible", {a}});
    if (!succ.count(a)) out.push_back({4, "action has no output comestible", {a}});
  }

  for (const auto& c : g.comestibles) {
    auto it = pred.find(c);
    if (it != pred.end() && it->second.size() > 1) {
      std::vector<NodeId> nodes{c};
      nodes.insert(nodes.end(), it->second.begin(), it->second.end());
      out.push_back({5, "comestible is produced by several actions: " + detail::join(it->second), nodes});
    }
  }
  return out;
}

struct TypingViolation {
  ErrorCode code;
  std::string detail;
  std::vector<NodeId> nodes;
  std::vector<TypeId> types;
};

/// Typing conditions: total on the graph's nodes, kind-respecting, and no two
/// distinct comestible nodes with comparable types.
inline std::vector<TypingViolation> check_typing(const RecipeGraph& g, const Typing& typing,
                                                 const Hierarchies& h) {
  std::vector<TypingViolation> out;
  for (const auto& [node, type] : typing)
    if (!g.kind_of(node))
      out.push_back({ErrorCode::unknown_node, "typed node " + node.value + " is not in the graph", {node}, {type}});

  auto check_kind = [&](const NodeSet& nodes, Kind kind) {
    for (const auto& n : nodes) {
      auto it = typing.find(n);
      if (it == typing.end()) {
        out.push_back({ErrorCode::untyped_node, "node " + n.value + " has no type", {n}, {}});
      } else if (!h.of(kind).contains(it->second)) {
        out.push_back({ErrorCode::kind_mismatch,
                       "node " + n.value + " is a " + std::string(to_string(kind)) + " but '" +
                           it->second.value + "' is not a " + std::string(to_string(kind)) + " type",
                       {n},
                       {it->second}});
      }
    }
  };
  check_kind(g.comestibles, Kind::comestible);
  check_kind(g.actions, Kind::action);

  std::vector<std::pair<NodeId, TypeId>> typed;
  for (const auto& c : g.comestibles)
    if (auto it = typing.find(c); it != typing.end() && h.comestible.contains(it->second))
      typed.emplace_back(c, it->second);
  for (std::size_t i = 0; i < typed.size(); ++i)
    for (std::size_t j = i + 1; j < typed.size(); ++j)
      if (h.comestible.comparable(typed[i].second, typed[j].second))
        out.push_back({ErrorCode::comparable_comestible_pair,
                       "comestibles " + typed[i].first.value + " ('" + typed[i].second.value + "') and " +
                           typed[j].first.value + " ('" + typed[j].second.value + "') have comparable types",
                       {typed[i].first, typed[j].first},
                       {typed[i].second, typed[j].second}});
  return out;
}

struct RoleSets {
  NodeSet inputs;
  NodeSet outputs;
  NodeSet mids;
};

/// A recipe graph with its typing function. Immutable value; equality is
/// component-wise on (C, A, E, F).
class Recipe {
 public:
  Recipe() = default;

  /// Wraps graph and typing without validation. Callers that cannot vouch for
  /// the input should go through make_recipe.
  static Recipe unchecked(RecipeGraph graph, Typing typing) {
    Recipe r;
    r.graph_ = std::move(graph);
    r.typing_ = std::move(typing);
    for (const auto& arc : r.graph_.arcs) {
      r.succ_[arc.from].push_back(arc.to);
      r.pred_[arc.to].push_back(arc.from);
    }
    return r;
  }

  const RecipeGraph& graph() const noexcept { return graph_; }
  const Typing& typing() const noexcept { return typing_; }
  const NodeSet& coms() const noexcept { return graph_.comestibles; }
  const NodeSet& acts() const noexcept { return graph_.actions; }
  const std::set<Arc>& arcs() const noexcept { return graph_.arcs; }

  NodeSet nodes() const {
    NodeSet out = graph_.comestibles;
    out.insert(graph_.actions.begin(), graph_.actions.end());
    return out;
  }

  std::size_t node_count() const noexcept { return graph_.node_count(); }
  bool contains(const NodeId& n) const { return graph_.kind_of(n).has_value(); }
  std::optional<Kind> kind_of(const NodeId& n) const { return graph_.kind_of(n); }
  bool has_arc(const NodeId& from, const NodeId& to) const { return graph_.arcs.count(Arc{from, to}) > 0; }

  const TypeId& type_of(const NodeId& n) const {
    auto it = typing_.find(n);
    if (it == typing_.end()) throw Error(ErrorCode::unknown_node, "node " + n.value + " is not typed in this recipe");
    return it->second;
  }

  const std::vector<NodeId>& successors(const NodeId& n) const { return lookup(succ_, n); }
  const std::vector<NodeId>& predecessors(const NodeId& n) const { return lookup(pred_, n); }
  std::size_t in_degree(const NodeId& n) const { return predecessors(n).size(); }
  std::size_t out_degree(const NodeId& n) const { return successors(n).size(); }

  NodeSet inputs() const { return select([&](const NodeId& c) { return in_degree(c) == 0; }); }
  NodeSet outputs() const { return select([&](const NodeId& c) { return out_degree(c) == 0; }); }
  NodeSet mids() const {
    return select([&](const NodeId& c) { return in_degree(c) > 0 && out_degree(c) > 0; });
  }

  RoleSets roles() const { return {inputs(), outputs(), mids()}; }

  std::set<TypeId> input_types() const { return types_of(inputs()); }
  std::set<TypeId> output_types() const { return types_of(outputs()); }

  bool is_atomic() const noexcept { return graph_.actions.size() == 1; }

  friend bool operator==(const Recipe& a, const Recipe& b) {
    return a.graph_ == b.graph_ && a.typing_ == b.typing_;
  }
  friend bool operator<(const Recipe& a, const Recipe& b) {
    return std::tie(a.graph_.comestibles, a.graph_.actions, a.graph_.arcs, a.typing_) <
           std::tie(b.graph_.comestibles, b.graph_.actions, b.graph_.arcs, b.typing_);
  }

 private:
  static const std::vector<NodeId>& lookup(const std::map<NodeId, std::vector<NodeId>>& m, const NodeId& n) {
    static const std::vector<NodeId> none;
    auto it = m.find(n);
    return it == m.end() ? none : it->second;
  }

  template <typename Pred>
  NodeSet select(Pred pred) const {
    NodeSet out;
    for (const auto& c : graph_.comestibles)
      if (pred(c)) out.insert(c);
    return out;
  }

  std::set<TypeId> types_of(const NodeSet& nodes) const {
    std::set<TypeId> out;
    for (const auto& n : nodes) out.insert(type_of(n));
    return out;
  }

  RecipeGraph graph_;
  Typing typing_;
  std::map<NodeId, std::vector<NodeId>> succ_;
  std::map<NodeId, std::vector<NodeId>> pred_;
};

/// Why a graph plus typing is not a recipe. Structural problems are reported
/// alone; typing is only checked on a valid recipe graph.
struct RecipeViolations {
  std::vector<GraphViolation> structural;
  std::vector<TypingViolation> typing;

  bool empty() const noexcept { return structural.empty() && typing.empty(); }

  std::string describe() const {
    std::ostringstream os;
    for (const auto& v : structural) os << "condition " << v.condition << " violated: " << v.detail << "\n";
    for (const auto& v : typing) os << to_string(v.code) << ": " << v.detail << "\n";
    return os.str();
  }
};

inline RecipeViolations check_recipe(const RecipeGraph& graph, const Typing& typing, const Hierarchies& h) {
  RecipeViolations v;
  v.structural = validate_recipe_graph(graph);
  if (v.structural.empty()) v.typing = check_typing(graph, typing, h);
  return v;
}

inline Expected<Recipe, RecipeViolations> make_recipe(RecipeGraph graph, Typing typing, const Hierarchies& h) {
  auto violations = check_recipe(graph, typing, h);
  if (!violations.empty()) return violations;
  return Recipe::unchecked(std::move(graph), std::move(typing));
}

/// make_recipe for callers that treat an invalid recipe as an input error.
inline Recipe require_recipe(RecipeGraph graph, Typing typing, const Hierarchies& h) {
  auto r = make_recipe(std::move(graph), std::move(typing), h);
  if (!r) throw Error(ErrorCode::invalid_recipe, r.error().describe());
  return std::move(r).value();
}

inline bool is_valid_recipe(const Recipe& r, const Hierarchies& h) {
  return check_recipe(r.graph(), r.typing(), h).empty();
}

/// n ≤ n': n = n' or a directed path leads from n to n'.
inline bool leq(const Recipe& r, const NodeId& from, const NodeId& to) {
  for (const auto* n : {&from, &to})
    if (!r.contains(*n)) throw Error(ErrorCode::unknown_node, "node " + n->value + " is not in the recipe");
  if (from == to) return true;
  std::set<NodeId> seen{from};
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    for (const auto& next : r.successors(cur)) {
      if (next == to) return true;
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  return false;
}

/// Dense ≤ relation over a recipe's nodes, indexed in sorted node order.
class Reachability {
 public:
  explicit Reachability(const Recipe& r) {
    const NodeSet all = r.nodes();
    nodes_.assign(all.begin(), all.end());
    const std::size_t n = nodes_.size();
    std::map<NodeId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[nodes_[i]] = i;
    reach_.assign(n, std::vector<char>(n, 0));
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> stack{s};
      reach_[s][s] = 1;
      while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        for (const auto& next : r.successors(nodes_[cur])) {
          const std::size_t j = index.at(next);
          if (!reach_[s][j]) {
            reach_[s][j] = 1;
            stack.push_back(j);
          }
        }
      }
    }
  }

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool leq(std::size_t i, std::size_t j) const { return reach_[i][j] != 0; }

  std::size_t index_of(const NodeId& n) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), n);
    if (it == nodes_.end() || *it != n) throw Error(ErrorCode::unknown_node, "node " + n.value + " is not in the recipe");
    return static_cast<std::size_t>(it - nodes_.begin());
  }

 private:
  std::vector<NodeId> nodes_;
  std::vector<std::vector<char>> reach_;
};

}  // namespace recipe
