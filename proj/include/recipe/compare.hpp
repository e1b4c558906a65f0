#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "recipe/budget.hpp"
#include "recipe/core.hpp"
#include "recipe/typekb.hpp"

namespace recipe {

/// Kind- and arc-preserving bijection Nodes(R1) -> Nodes(R2).
using NodeBijection = std::map<NodeId, NodeId>;
/// Total map Nodes(R1) -> Nodes(R2) that preserves ≤.
using OrderMap = std::map<NodeId, NodeId>;

/// Decides whether node n1 of R1 may be mapped to node n2 of R2 on labels alone.
using NodeCompat = std::function<bool(const NodeId& n1, const NodeId& n2)>;

namespace detail {

/// Undirected BFS order so each node after the first tends to have an
/// already-mapped neighbour to prune against.
inline std::vector<NodeId> connected_order(const Recipe& r) {
  std::vector<NodeId> order;
  std::set<NodeId> seen;
  for (const auto& start : r.nodes()) {
    if (seen.count(start)) continue;
    seen.insert(start);
    order.push_back(start);
    for (std::size_t i = order.size() - 1; i < order.size(); ++i) {
      std::vector<NodeId> adj = r.successors(order[i]);
      adj.insert(adj.end(), r.predecessors(order[i]).begin(), r.predecessors(order[i]).end());
      std::sort(adj.begin(), adj.end());
      for (const auto& n : adj)
        if (seen.insert(n).second) order.push_back(n);
    }
  }
  return order;
}

}  // namespace detail

/// Backtracking search for an arc- and kind-preserving bijection accepted by
/// `compat` on every node. Candidates are pruned by (kind, in-degree,
/// out-degree) and by consistency with neighbours already mapped. Candidates
/// are tried in sorted order, so the witness is deterministic.
inline std::optional<NodeBijection> find_bijection(const Recipe& r1, const Recipe& r2, const NodeCompat& compat,
                                                   Budget budget = {}) {
  if (r1.coms().size() != r2.coms().size() || r1.acts().size() != r2.acts().size() ||
      r1.arcs().size() != r2.arcs().size())
    return std::nullopt;

  BudgetCounter counter(budget, "isomorphism search");
  const std::vector<NodeId> order = detail::connected_order(r1);
  const NodeSet targets = r2.nodes();
  NodeBijection forward;
  std::set<NodeId> used;

  std::function<bool(std::size_t)> extend = [&](std::size_t depth) -> bool {
    if (depth == order.size()) return true;
    const NodeId& n = order[depth];
    for (const auto& m : targets) {
      if (used.count(m)) continue;
      counter.spend();
      if (r1.kind_of(n) != r2.kind_of(m) || r1.in_degree(n) != r2.in_degree(m) ||
          r1.out_degree(n) != r2.out_degree(m) || !compat(n, m))
        continue;
      bool consistent = true;
      for (const auto& [p, q] : forward) {
        if (r1.has_arc(n, p) != r2.has_arc(m, q) || r1.has_arc(p, n) != r2.has_arc(q, m)) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;
      forward.emplace(n, m);
      used.insert(m);
      if (extend(depth + 1)) return true;
      forward.erase(n);
      used.erase(m);
    }
    return false;
  };
  if (extend(0)) return forward;
  return std::nullopt;
}

inline std::optional<NodeBijection> isomorphic(const Recipe& r1, const Recipe& r2, Budget budget = {}) {
  return find_bijection(r1, r2, [](const NodeId&, const NodeId&) { return true; }, budget);
}

/// Isomorphic with a bijection that preserves every type exactly.
inline std::optional<NodeBijection> equivalent(const Recipe& r1, const Recipe& r2, Budget budget = {}) {
  return find_bijection(
      r1, r2, [&](const NodeId& a, const NodeId& b) { return r1.type_of(a) == r2.type_of(b); }, budget);
}

/// R1 is more specific than R2: isomorphic via b with F1(n) ⪯ F2(b(n)), so
/// every label of R1 sits at or below the matching label of R2.
inline std::optional<NodeBijection> more_specific(const Recipe& r1, const Recipe& r2, const Hierarchies& h,
                                                  Budget budget = {}) {
  return find_bijection(
      r1, r2,
      [&](const NodeId& a, const NodeId& b) {
        const auto kind = r1.kind_of(a);
        return kind && h.of(*kind).is_subtype(r1.type_of(a), r2.type_of(b));
      },
      budget);
}

/// R' ⊑ R: node sets contained, arcs exactly the induced ones, types agree.
inline bool is_subrecipe(const Recipe& sub, const Recipe& r) {
  if (!std::includes(r.coms().begin(), r.coms().end(), sub.coms().begin(), sub.coms().end())) return false;
  if (!std::includes(r.acts().begin(), r.acts().end(), sub.acts().begin(), sub.acts().end())) return false;
  std::set<Arc> induced;
  for (const auto& arc : r.arcs()) {
    const bool forward = sub.coms().count(arc.from) && sub.acts().count(arc.to);
    const bool backward = sub.acts().count(arc.from) && sub.coms().count(arc.to);
    if (forward || backward) induced.insert(arc);
  }
  if (induced != sub.arcs()) return false;
  for (const auto& [node, type] : sub.typing()) {
    auto it = r.typing().find(node);
    if (it == r.typing().end() || it->second != type) return false;
  }
  return true;
}

/// R1 ≡io R2: same input and output node ids, with the same types on them.
inline bool in_out_aligned(const Recipe& r1, const Recipe& r2) {
  const auto in1 = r1.inputs(), out1 = r1.outputs();
  if (in1 != r2.inputs() || out1 != r2.outputs()) return false;
  for (const auto* set : {&in1, &out1})
    for (const auto& c : *set)
      if (r1.type_of(c) != r2.type_of(c)) return false;
  return true;
}

struct FinerGrainedOptions {
  /// Additionally require g(n) = n on In(R1) ∪ Out(R1).
  bool fix_in_out = false;
};

/// R1 is finer-grained than R2: R1 ≡io R2 and some total g: Nodes(R1) ->
/// Nodes(R2) has n ≤ n' implies g(n) ≤ g(n'). Exhaustive backtracking in
/// topological order; throws budget_exceeded when inconclusive. Without
/// fix_in_out a constant map always qualifies, so the answer reduces to ≡io;
/// the search still prefers same-id, then same-kind images.
inline std::optional<OrderMap> finer_grained(const Recipe& r1, const Recipe& r2, FinerGrainedOptions options = {},
                                             Budget budget = {}) {
  if (!in_out_aligned(r1, r2)) return std::nullopt;

  const Reachability reach1(r1), reach2(r2);
  const std::size_t n1 = reach1.size(), n2 = reach2.size();
  NodeSet fixed;
  if (options.fix_in_out) {
    fixed = r1.inputs();
    const auto outs = r1.outputs();
    fixed.insert(outs.begin(), outs.end());
  }

  // Topological order (fewer ancestors first): predecessors are assigned first.
  std::vector<std::size_t> order(n1), ancestors(n1, 0);
  for (std::size_t a = 0; a < n1; ++a) {
    order[a] = a;
    for (std::size_t b = 0; b < n1; ++b)
      if (a != b && reach1.leq(b, a)) ++ancestors[a];
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ancestors[a] < ancestors[b]; });

  BudgetCounter counter(budget, "finer-grained search");
  std::vector<std::size_t> g(n1, 0);
  std::function<bool(std::size_t)> extend = [&](std::size_t depth) -> bool {
    if (depth == n1) return true;
    const std::size_t n = order[depth];
    const NodeId& node = reach1.nodes()[n];
    std::vector<std::size_t> candidates;
    if (fixed.count(node)) {
      candidates.push_back(reach2.index_of(node));
    } else {
      // Same id first, then same kind, so R vs R yields the identity.
      const auto kind = r1.kind_of(node);
      if (r2.contains(node)) candidates.push_back(reach2.index_of(node));
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t m = 0; m < n2; ++m) {
          const NodeId& target = reach2.nodes()[m];
          if (target == node || (r2.kind_of(target) == kind) != (pass == 0)) continue;
          candidates.push_back(m);
        }
    }
    for (std::size_t m : candidates) {
      counter.spend();
      bool ok = true;
      for (std::size_t k = 0; k < depth && ok; ++k) {
        const std::size_t p = order[k];
        if (reach1.leq(p, n) && !reach2.leq(g[p], m)) ok = false;
        if (reach1.leq(n, p) && !reach2.leq(m, g[p])) ok = false;
      }
      if (!ok) continue;
      g[n] = m;
      if (extend(depth + 1)) return true;
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;

  OrderMap out;
  for (std::size_t i = 0; i < n1; ++i) out.emplace(reach1.nodes()[i], reach2.nodes()[g[i]]);
  return out;
}

}  // namespace recipe
