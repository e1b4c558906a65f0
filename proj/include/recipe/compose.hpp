#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "recipe/core.hpp"
#include "recipe/typekb.hpp"

namespace recipe {

/// Component-wise union of two bipartite graphs. The result need not be a
/// recipe graph; callers re-validate.
inline RecipeGraph bipartite_union(const RecipeGraph& g1, const RecipeGraph& g2) {
  for (const auto& [cs, as] : {std::pair{&g1.comestibles, &g2.actions}, std::pair{&g2.comestibles, &g1.actions}})
    for (const auto& n : *cs)
      if (as->count(n))
        throw Error(ErrorCode::kind_conflict, "node " + n.value + " is a comestible in one graph and an action in the other");
  RecipeGraph out = g1;
  out.comestibles.insert(g2.comestibles.begin(), g2.comestibles.end());
  out.actions.insert(g2.actions.begin(), g2.actions.end());
  out.arcs.insert(g2.arcs.begin(), g2.arcs.end());
  return out;
}

/// One failed side-condition of composition. Conditions 1-6 are the
/// composition conditions; condition 0 means all six held but the union still
/// failed recipe validation.
struct ConditionViolation {
  int condition = 0;
  std::string detail;
  std::vector<NodeId> nodes;
};

inline constexpr int kResultNotRecipe = 0;

struct CompositionFailure {
  std::vector<ConditionViolation> violated;

  std::vector<int> conditions() const {
    std::vector<int> out;
    for (const auto& v : violated)
      if (out.empty() || out.back() != v.condition) out.push_back(v.condition);
    return out;
  }
};

struct ComposeOptions {
  /// Let shared nodes match by subtype instead of equal type. Not supported;
  /// setting it is rejected.
  bool subtype_matching = false;
};

namespace detail {

inline std::vector<NodeId> intersect(const NodeSet& a, const NodeSet& b) {
  std::vector<NodeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline NodeSet minus(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

}  // namespace detail

/// R1 ⊕ R2: glue R1's outputs onto R2's inputs. Checks all six conditions
/// and reports every one that fails; on success the union is returned after
/// full recipe validation.
inline Expected<Recipe, CompositionFailure> compose(const Recipe& r1, const Recipe& r2, const Hierarchies& h,
                                                    ComposeOptions options = {}) {
  if (options.subtype_matching)
    throw Error(ErrorCode::schema_error, "subtype matching of shared nodes is not supported by composition");

  const auto in1 = r1.inputs(), out1 = r1.outputs(), mid1 = r1.mids();
  const auto in2 = r2.inputs(), out2 = r2.outputs(), mid2 = r2.mids();
  CompositionFailure failure;

  const auto shared = detail::intersect(out1, in2);
  if (shared.empty()) failure.violated.push_back({1, "no output of the first recipe is an input of the second", {}});

  if (auto both = detail::intersect(mid1, mid2); !both.empty())
    failure.violated.push_back({2, "intermediate nodes shared: " + detail::join(both), both});

  if (auto both = detail::intersect(r1.acts(), r2.acts()); !both.empty())
    failure.violated.push_back({3, "action nodes shared: " + detail::join(both), both});

  if (auto back = detail::intersect(out2, in1); !back.empty())
    failure.violated.push_back({4, "outputs of the second recipe feed the first: " + detail::join(back), back});

  std::vector<NodeId> mistyped;
  for (const auto& n : shared)
    if (r1.type_of(n) != r2.type_of(n)) mistyped.push_back(n);
  if (!mistyped.empty())
    failure.violated.push_back({5, "shared nodes typed differently: " + detail::join(mistyped), mistyped});

  std::vector<NodeId> clash;
  std::string clash_detail;
  for (const auto& n : detail::minus(r1.coms(), out1))
    for (const auto& m : detail::minus(r2.coms(), in2))
      if (h.comestible.comparable(r1.type_of(n), r2.type_of(m))) {
        clash.push_back(n);
        clash.push_back(m);
        clash_detail += (clash_detail.empty() ? "" : "; ") + n.value + " ('" + r1.type_of(n).value + "') vs " +
                        m.value + " ('" + r2.type_of(m).value + "')";
      }
  if (!clash.empty()) failure.violated.push_back({6, "comparable types: " + clash_detail, clash});

  if (!failure.violated.empty()) return failure;

  RecipeGraph g = bipartite_union(r1.graph(), r2.graph());
  Typing typing = r1.typing();
  typing.insert(r2.typing().begin(), r2.typing().end());
  auto violations = check_recipe(g, typing, h);
  if (!violations.empty()) {
    failure.violated.push_back({kResultNotRecipe, "union is not a recipe: " + violations.describe(), {}});
    return failure;
  }
  return Recipe::unchecked(std::move(g), std::move(typing));
}

struct ClosureLimits {
  std::size_t max_recipes = 10'000;
  std::size_t max_nodes = 1'000;
};

struct ClosureResult {
  /// Canonically ordered, duplicate-free.
  std::vector<Recipe> recipes;
  /// Set when a limit stopped the worklist; `recipes` is then a partial closure.
  bool truncated = false;
  std::string reason;
};

/// Least set containing the seeds and closed under successful ⊕. Duplicates
/// are detected by structural equality.
inline ClosureResult compose_closure(const std::vector<Recipe>& seeds, const Hierarchies& h,
                                     ClosureLimits limits = {}) {
  for (const auto& s : seeds)
    if (!is_valid_recipe(s, h)) throw Error(ErrorCode::invalid_recipe, "closure seed is not a valid recipe");

  ClosureResult result;
  std::set<Recipe> all(seeds.begin(), seeds.end());
  std::vector<Recipe> work(all.begin(), all.end());

  // false once max_recipes stops the search
  auto admit = [&](Recipe r) {
    if (all.count(r)) return true;
    if (r.node_count() > limits.max_nodes) {
      result.truncated = true;
      result.reason = "a composition exceeded max_nodes=" + std::to_string(limits.max_nodes);
      return true;
    }
    if (all.size() >= limits.max_recipes) {
      result.truncated = true;
      result.reason = "closure reached max_recipes=" + std::to_string(limits.max_recipes);
      return false;
    }
    all.insert(r);
    work.push_back(std::move(r));
    return true;
  };

  auto attempt = [&](const Recipe& left, const Recipe& right) {
    auto c = compose(left, right, h);
    return !c || admit(std::move(c).value());
  };

  while (!work.empty()) {
    const Recipe x = work.back();
    work.pop_back();
    const std::vector<Recipe> snapshot(all.begin(), all.end());
    for (const auto& y : snapshot) {
      if (!attempt(x, y) || (!(x == y) && !attempt(y, x))) {
        result.recipes.assign(all.begin(), all.end());
        return result;
      }
    }
  }
  result.recipes.assign(all.begin(), all.end());
  return result;
}

/// The atomic subrecipe induced by one action and its adjacent comestibles.
inline Recipe atomic_around(const Recipe& r, const NodeId& action) {
  RecipeGraph g;
  g.actions.insert(action);
  for (const auto& c : r.predecessors(action)) {
    g.comestibles.insert(c);
    g.arcs.insert({c, action});
  }
  for (const auto& c : r.successors(action)) {
    g.comestibles.insert(c);
    g.arcs.insert({action, c});
  }
  Typing typing;
  typing.emplace(action, r.type_of(action));
  for (const auto& c : g.comestibles) typing.emplace(c, r.type_of(c));
  return Recipe::unchecked(std::move(g), std::move(typing));
}

/// One atomic subrecipe per action, ordered by action id.
inline std::vector<Recipe> decompose(const Recipe& r) {
  std::vector<Recipe> out;
  for (const auto& a : r.acts()) out.push_back(atomic_around(r, a));
  return out;
}

}  // namespace recipe
