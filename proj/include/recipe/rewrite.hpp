#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "recipe/acceptability.hpp"
#include "recipe/budget.hpp"
#include "recipe/compare.hpp"
#include "recipe/compose.hpp"
#include "recipe/core.hpp"
#include "recipe/typekb.hpp"

namespace recipe {

namespace detail {

inline NodeSet front_of(const Recipe& r, const Recipe& sub) {
  NodeSet out = minus(sub.outputs(), r.outputs());
  const NodeSet in = minus(sub.inputs(), r.inputs());
  out.insert(in.begin(), in.end());
  return out;
}

}  // namespace detail

/// Comestibles where `sub` meets the rest of `r`: inputs or outputs of sub
/// that are not inputs or outputs of r.
inline NodeSet front(const Recipe& r, const Recipe& sub) {
  if (!is_subrecipe(sub, r)) throw Error(ErrorCode::not_subrecipe, "front is only defined for a subrecipe");
  return detail::front_of(r, sub);
}

/// sub ⊑* r: a subrecipe that keeps every comestible adjacent to its actions.
inline bool is_untrimmed_subrecipe(const Recipe& sub, const Recipe& r) {
  if (!is_subrecipe(sub, r)) return false;
  for (const auto& a : sub.acts()) {
    for (const auto& c : r.predecessors(a))
      if (!sub.contains(c)) return false;
    for (const auto& c : r.successors(a))
      if (!sub.contains(c)) return false;
  }
  return true;
}

/// Front nodes at which `r1` and `r2` disagree on arc direction. Empty means
/// r1 is parallel to r2 w.r.t. r.
inline std::vector<NodeId> non_parallel_nodes(const Recipe& r1, const Recipe& r2, const Recipe& r) {
  std::vector<NodeId> out;
  for (const auto& c : detail::front_of(r, r1)) {
    const bool consumes_ok = r1.out_degree(c) == 0 || (r2.contains(c) && r2.out_degree(c) > 0);
    const bool produces_ok = r1.in_degree(c) == 0 || (r2.contains(c) && r2.in_degree(c) > 0);
    if (!consumes_ok || !produces_ok) out.push_back(c);
  }
  return out;
}

inline bool is_parallel(const Recipe& r1, const Recipe& r2, const Recipe& r) {
  return non_parallel_nodes(r1, r2, r).empty();
}

struct RewriteViolation {
  /// "i" .. "v", "front" (empty front refused by option) or "result".
  std::string condition;
  std::string detail;
  std::vector<NodeId> nodes;
};

struct RewriteFailure {
  std::vector<RewriteViolation> violated;

  std::vector<std::string> conditions() const {
    std::vector<std::string> out;
    for (const auto& v : violated) out.push_back(v.condition);
    return out;
  }

  std::string describe() const {
    std::string out;
    for (const auto& v : violated) {
      if (!out.empty()) out += "; ";
      out += "condition (" + v.condition + ") violated: " + v.detail;
    }
    return out;
  }
};

struct RewriteOptions {
  /// Refuse replacements whose front is empty (whole-recipe replacement).
  bool require_nonempty_front = false;
};

/// R[R1/R2]. All side conditions are checked and every failure reported.
/// Condition (v) compares comestible types only; see README.
inline Expected<Recipe, RewriteFailure> structural_substitute(const Recipe& r, const Recipe& r1, const Recipe& r2,
                                                             const Hierarchies& h, RewriteOptions options = {}) {
  RewriteFailure failure;
  const NodeSet fr = detail::front_of(r, r1);

  if (options.require_nonempty_front && fr.empty())
    failure.violated.push_back({"front", "the front is empty and empty fronts are disabled", {}});

  std::vector<NodeId> unmatched;
  const NodeSet in2 = r2.inputs(), out2 = r2.outputs();
  for (const auto& c : fr)
    if (!in2.count(c) && !out2.count(c)) unmatched.push_back(c);
  if (!unmatched.empty())
    failure.violated.push_back(
        {"i", "front nodes not inputs or outputs of the replacement: " + detail::join(unmatched), unmatched});

  if (auto bad = non_parallel_nodes(r1, r2, r); !bad.empty())
    failure.violated.push_back({"ii", "replacement does not connect to front nodes in the same direction: " +
                                          detail::join(bad),
                                bad});

  if (!is_subrecipe(r1, r)) {
    failure.violated.push_back({"iii", "the removed recipe is not a subrecipe", {}});
  } else if (!is_untrimmed_subrecipe(r1, r)) {
    std::vector<NodeId> missing;
    for (const auto& a : r1.acts()) {
      for (const auto* adj : {&r.predecessors(a), &r.successors(a)})
        for (const auto& c : *adj)
          if (!r1.contains(c)) missing.push_back(c);
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    failure.violated.push_back(
        {"iii", "the removed recipe is trimmed; missing adjacent comestibles " + detail::join(missing), missing});
  }

  const NodeSet kept = detail::minus(r.nodes(), r1.nodes());
  if (auto clash = detail::intersect(kept, r2.nodes()); !clash.empty())
    failure.violated.push_back({"iv", "kept nodes reused by the replacement: " + detail::join(clash), clash});

  std::vector<NodeId> comparable;
  std::string comparable_detail;
  for (const auto& n : detail::minus(r.coms(), r1.coms()))
    for (const auto& m : r2.coms()) {
      if (n == m) continue;
      if (h.comestible.comparable(r.type_of(n), r2.type_of(m))) {
        comparable.push_back(n);
        comparable.push_back(m);
        comparable_detail += (comparable_detail.empty() ? "" : "; ") + n.value + " ('" + r.type_of(n).value +
                             "') vs " + m.value + " ('" + r2.type_of(m).value + "')";
      }
    }
  if (!comparable.empty())
    failure.violated.push_back({"v", "comparable types: " + comparable_detail, comparable});

  if (!failure.violated.empty()) return failure;

  // Kept arcs into removed nodes that R2 does not bring back, e.g. an input of
  // R shared between R1 and a kept action. (i)-(v) do not exclude this.
  std::vector<NodeId> dangling;
  for (const auto& arc : r.arcs()) {
    if (r1.arcs().count(arc)) continue;
    for (const auto& end : {arc.from, arc.to})
      if (r1.contains(end) && !r2.contains(end)) dangling.push_back(end);
  }
  std::sort(dangling.begin(), dangling.end());
  dangling.erase(std::unique(dangling.begin(), dangling.end()), dangling.end());
  if (!dangling.empty()) {
    failure.violated.push_back(
        {"result", "removed nodes still joined to kept actions: " + detail::join(dangling), dangling});
    return failure;
  }

  RecipeGraph g;
  g.comestibles = detail::minus(r.coms(), r1.coms());
  g.comestibles.insert(r2.coms().begin(), r2.coms().end());
  g.actions = detail::minus(r.acts(), r1.acts());
  g.actions.insert(r2.acts().begin(), r2.acts().end());
  std::set_difference(r.arcs().begin(), r.arcs().end(), r1.arcs().begin(), r1.arcs().end(),
                      std::inserter(g.arcs, g.arcs.end()));
  g.arcs.insert(r2.arcs().begin(), r2.arcs().end());

  Typing typing;
  for (const auto& n : g.comestibles) typing.emplace(n, r2.contains(n) ? r2.type_of(n) : r.type_of(n));
  for (const auto& n : g.actions) typing.emplace(n, r2.contains(n) ? r2.type_of(n) : r.type_of(n));

  auto violations = check_recipe(g, typing, h);
  if (!violations.empty()) {
    failure.violated.push_back({"result", "the rewritten graph is not a recipe: " + violations.describe(), {}});
    return failure;
  }
  return Recipe::unchecked(std::move(g), std::move(typing));
}

struct RewriteStep {
  Recipe remove;
  Recipe insert;
};

struct SequenceFailure {
  std::size_t step = 0;
  RewriteFailure failure;
};

/// Left-to-right fold of structural_substitute; stops at the first failing step.
inline Expected<Recipe, SequenceFailure> apply_sequence(const Recipe& r, const std::vector<RewriteStep>& steps,
                                                        const Hierarchies& h, RewriteOptions options = {}) {
  Recipe current = r;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto next = structural_substitute(current, steps[i].remove, steps[i].insert, h, options);
    if (!next) return SequenceFailure{i, next.error()};
    current = std::move(next).value();
  }
  return current;
}

struct SequenceVerdict {
  bool ok = false;
  std::optional<Recipe> result;
  std::optional<SequenceFailure> failure;
  std::vector<AcceptViolation> unacceptable;
};

/// Runs primary then secondary steps and checks the outcome against X.
inline SequenceVerdict verify_secondary_sequence(const Recipe& r, const std::vector<RewriteStep>& primary,
                                                 const std::vector<RewriteStep>& secondary,
                                                 const AcceptabilitySet& x, const Hierarchies& h,
                                                 RewriteOptions options = {}) {
  std::vector<RewriteStep> steps = primary;
  steps.insert(steps.end(), secondary.begin(), secondary.end());
  SequenceVerdict verdict;
  auto out = apply_sequence(r, steps, h, options);
  if (!out) {
    verdict.failure = out.error();
    return verdict;
  }
  verdict.result = std::move(out).value();
  verdict.unacceptable = acceptability_violations(*verdict.result, x, h);
  verdict.ok = verdict.unacceptable.empty();
  return verdict;
}

struct StructuralCostOptions {
  double edit_weight = 1.0;
  DistanceModel distance;
  Budget budget;
};

struct StructuralCost {
  double value = 0.0;
  /// Matched node pairs (R1 node -> R2 node) of one optimal matching.
  std::map<NodeId, NodeId> matching;
  /// This measure is a placeholder edit distance, not a defined quantity.
  bool normative = false;
};

/// Edit-distance style cost between two recipes: edit_weight per unmatched
/// node and per arc not preserved by the matching, plus the type distance of
/// every matched pair. Minimised by branch and bound over partial same-kind
/// matchings.
inline StructuralCost structural_cost(const Recipe& r1, const Recipe& r2, const Hierarchies& h,
                                      const StructuralCostOptions& options = {}) {
  const NodeSet left_set = r1.nodes();
  const std::vector<NodeId> left(left_set.begin(), left_set.end());
  const NodeSet right_set = r2.nodes();
  const std::vector<NodeId> right(right_set.begin(), right_set.end());
  const double w = options.edit_weight;
  BudgetCounter counter(options.budget, "structural cost search");

  std::map<NodeId, NodeId> match;
  std::set<NodeId> used;
  double best = std::numeric_limits<double>::infinity();
  std::map<NodeId, NodeId> best_match;

  auto type_cost = [&](const NodeId& a, const NodeId& b) {
    const Kind kind = *r1.kind_of(a);
    return options.distance.distance(h.of(kind), r1.type_of(a), r2.type_of(b));
  };

  // Arcs of r1 with both ends decided and `n` as the later one.
  auto arc_cost = [&](std::size_t i) {
    double c = 0.0;
    const NodeId& n = left[i];
    auto decided = [&](const NodeId& m) { return std::find(left.begin(), left.begin() + i, m) != left.begin() + i; };
    auto preserved = [&](const NodeId& from, const NodeId& to) {
      auto f = match.find(from), t = match.find(to);
      return f != match.end() && t != match.end() && r2.has_arc(f->second, t->second);
    };
    for (const auto& s : r1.successors(n))
      if (decided(s) && !preserved(n, s)) c += w;
    for (const auto& p : r1.predecessors(n))
      if (decided(p) && !preserved(p, n)) c += w;
    return c;
  };

  auto finish = [&](double partial) {
    double c = partial + w * static_cast<double>(right.size() - used.size());
    std::size_t kept_arcs = 0;
    for (const auto& arc : r1.arcs()) {
      auto f = match.find(arc.from), t = match.find(arc.to);
      if (f != match.end() && t != match.end() && r2.has_arc(f->second, t->second)) ++kept_arcs;
    }
    c += w * static_cast<double>(r2.arcs().size() - kept_arcs);
    return c;
  };

  std::function<void(std::size_t, double)> extend = [&](std::size_t i, double partial) {
    counter.spend();
    if (partial >= best) return;
    if (i == left.size()) {
      const double c = finish(partial);
      if (c < best) {
        best = c;
        best_match = match;
      }
      return;
    }
    const NodeId& n = left[i];
    for (const auto& m : right) {
      if (used.count(m) || r1.kind_of(n) != r2.kind_of(m)) continue;
      match.emplace(n, m);
      used.insert(m);
      extend(i + 1, partial + type_cost(n, m) + arc_cost(i));
      match.erase(n);
      used.erase(m);
    }
    extend(i + 1, partial + w + arc_cost(i));
  };
  extend(0, 0.0);
  return {best, best_match, false};
}

}  // namespace recipe
