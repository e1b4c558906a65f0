#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "recipe/acceptability.hpp"
#include "recipe/budget.hpp"
#include "recipe/compare.hpp"
#include "recipe/core.hpp"
#include "recipe/typekb.hpp"

namespace recipe {

struct Binding {
  NodeId node;
  TypeId type;

  friend auto operator<=>(const Binding&, const Binding&) = default;
  friend bool operator==(const Binding&, const Binding&) = default;
};

/// Functional node -> type rebinding: at most one binding per node.
using SubstitutionSet = std::map<NodeId, TypeId>;

inline SubstitutionSet make_substitution(const std::vector<Binding>& bindings) {
  SubstitutionSet out;
  for (const auto& b : bindings)
    if (!out.emplace(b.node, b.type).second && out.at(b.node) != b.type)
      throw Error(ErrorCode::schema_error, "node " + b.node.value + " is bound twice");
  return out;
}

/// True when every binding of `small` is also in `big`.
inline bool is_subset(const SubstitutionSet& small, const SubstitutionSet& big) {
  for (const auto& [n, t] : small) {
    auto it = big.find(n);
    if (it == big.end() || it->second != t) return false;
  }
  return true;
}

struct SubstitutionPair {
  SubstitutionSet primary;
  SubstitutionSet secondary;

  SubstitutionSet combined() const {
    SubstitutionSet out = primary;
    for (const auto& [n, t] : secondary)
      if (!out.emplace(n, t).second)
        throw Error(ErrorCode::schema_error, "node " + n.value + " is bound by both primary and secondary sets");
    return out;
  }

  friend bool operator==(const SubstitutionPair&, const SubstitutionPair&) = default;
};

/// F ⊗ T without validation: bound nodes of R take the new type; bindings
/// for nodes outside R are ignored. The graph is untouched.
inline Recipe retype(const Recipe& r, const SubstitutionSet& t) {
  Typing typing = r.typing();
  for (const auto& [n, type] : t)
    if (auto it = typing.find(n); it != typing.end()) it->second = type;
  return Recipe::unchecked(r.graph(), std::move(typing));
}

/// R ⊗ T, re-checked against the typing conditions (kinds, comparable
/// comestibles). Violations are returned rather than thrown.
inline Expected<Recipe, std::vector<TypingViolation>> apply_substitution(const Recipe& r, const SubstitutionSet& t,
                                                                         const Hierarchies& h) {
  Recipe out = retype(r, t);
  auto violations = check_typing(out.graph(), out.typing(), h);
  if (!violations.empty()) return violations;
  return out;
}

/// T with F1 ⊗ T matching F2 along the witness b: one binding per node whose
/// type differs from its image's.
inline SubstitutionSet substitution_to(const Recipe& r1, const Recipe& r2,
                                       std::optional<NodeBijection> witness = std::nullopt, Budget budget = {}) {
  if (!witness) witness = isomorphic(r1, r2, budget);
  if (!witness) throw Error(ErrorCode::not_isomorphic, "the recipe graphs are not isomorphic");
  SubstitutionSet out;
  for (const auto& [n, m] : *witness)
    if (r1.type_of(n) != r2.type_of(m)) out.emplace(n, r2.type_of(m));
  return out;
}

enum class Aggregation { sum, max };

struct CostModel {
  DistanceModel distance;
  Aggregation aggregation = Aggregation::sum;
};

/// Aggregated distance d(F(n), t) over all bindings of a set, in node order.
inline double cost(const SubstitutionSet& bindings, const Recipe& r, const CostModel& model, const Hierarchies& h) {
  double total = 0.0;
  for (const auto& [n, t] : bindings) {
    const auto kind = r.kind_of(n);
    if (!kind) throw Error(ErrorCode::unknown_node, "binding for node " + n.value + " outside the recipe");
    const double d = model.distance.distance(h.of(*kind), r.type_of(n), t);
    total = model.aggregation == Aggregation::sum ? total + d : std::max(total, d);
  }
  return total;
}

inline double cost(const SubstitutionPair& pair, const Recipe& r, const CostModel& model, const Hierarchies& h) {
  return cost(pair.combined(), r, model, h);
}

/// Alternative types per node.
using Candidates = std::map<NodeId, std::vector<TypeId>>;

/// Default alternatives: types seen in the matching slot of the expanded
/// acceptability set, plus hierarchy relatives within `radius` hops. A node's
/// own type is never a candidate.
inline Candidates default_candidates(const Recipe& r, const AcceptabilitySet& x, const Hierarchies& h,
                                     int radius = 2) {
  const AcceptabilitySet expanded = expand_tuples(x, h);
  std::set<TypeId> in_slot, action_slot, out_slot;
  for (const auto& t : expanded.tuples) {
    in_slot.insert(t.input);
    action_slot.insert(t.action);
    out_slot.insert(t.output);
  }
  Candidates out;
  for (const auto& n : r.nodes()) {
    const Kind kind = *r.kind_of(n);
    std::set<TypeId> types;
    if (kind == Kind::action) {
      types = action_slot;
    } else {
      if (r.out_degree(n) > 0) types.insert(in_slot.begin(), in_slot.end());
      if (r.in_degree(n) > 0) types.insert(out_slot.begin(), out_slot.end());
    }
    for (const auto& t : h.of(kind).neighbourhood(r.type_of(n), radius)) types.insert(t);
    types.erase(r.type_of(n));
    std::erase_if(types, [&](const TypeId& t) { return !h.of(kind).contains(t); });
    out[n].assign(types.begin(), types.end());
  }
  return out;
}

struct SecondaryOptions {
  Budget budget;
  /// Largest secondary set considered; 0 means no limit.
  std::size_t max_size = 0;
  /// When set, solutions are ordered by this cost model (then canonically).
  std::optional<CostModel> cost_model;
};

namespace detail {

/// R ⊗ T is a recipe and acceptable w.r.t. X.
inline bool restores(const Recipe& r, const SubstitutionSet& t, const AcceptabilitySet& x, const Hierarchies& h) {
  const Recipe out = retype(r, t);
  for (const auto& [n, type] : out.typing())
    if (!h.of(*out.kind_of(n)).contains(type)) return false;
  if (!check_typing(out.graph(), out.typing(), h).empty()) return false;
  return is_acceptable(out, x, h);
}

using Domains = std::map<NodeId, std::set<TypeId>>;

/// Arc consistency over arc triples: drops every type that no licensed tuple
/// supports given the other two domains of some triple it sits in. Sound:
/// an acceptable typing only uses surviving types. False when a domain empties.
inline bool prune_domains(const Recipe& r, Domains& domains, const std::set<AcceptTuple>& licensed) {
  const auto triples = arc_triples(r);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [c, a, c2] : triples) {
      std::set<TypeId> in, act, out;
      const auto &dc = domains[c], &da = domains[a], &dc2 = domains[c2];
      for (const auto& t : licensed)
        if (dc.count(t.input) && da.count(t.action) && dc2.count(t.output)) {
          in.insert(t.input);
          act.insert(t.action);
          out.insert(t.output);
        }
      for (auto [node, kept] : {std::pair{&c, &in}, std::pair{&a, &act}, std::pair{&c2, &out}}) {
        auto& d = domains[*node];
        if (d.size() != kept->size()) {
          d = std::move(*kept);
          changed = true;
        }
        if (d.empty()) return false;
      }
    }
  }
  return true;
}

/// Domains for a search: fixed nodes hold one type, the others their current
/// type plus candidates.
inline Domains initial_domains(const Recipe& base, const SubstitutionSet& fixed, const Candidates& candidates) {
  Domains d;
  for (const auto& n : base.nodes()) {
    auto& dom = d[n];
    dom.insert(base.type_of(n));
    if (fixed.count(n)) continue;
    if (auto it = candidates.find(n); it != candidates.end()) dom.insert(it->second.begin(), it->second.end());
  }
  return d;
}

struct SecondarySearch {
  const Recipe& r;
  const AcceptabilitySet& x;
  const Hierarchies& h;
  const Candidates& candidates;
  const SecondaryOptions& options;
  std::set<AcceptTuple> licensed;

  SecondarySearch(const Recipe& r_, const AcceptabilitySet& x_, const Hierarchies& h_, const Candidates& c_,
                  const SecondaryOptions& o_)
      : r(r_), x(x_), h(h_), candidates(c_), options(o_), licensed(expand_tuples(x_, h_).tuples) {}

  std::vector<SubstitutionSet> run(const SubstitutionSet& primary, BudgetCounter& counter) const {
    const Recipe base = retype(r, primary);
    Domains domains = initial_domains(base, primary, candidates);
    counter.spend();
    if (!prune_domains(base, domains, licensed)) return {};

    // Free nodes may change; a node whose own type did not survive must change.
    std::vector<NodeId> free;
    std::map<NodeId, std::vector<TypeId>> choices;
    std::vector<std::vector<NodeId>> must_touch;
    for (const auto& [n, dom] : domains) {
      if (primary.count(n)) continue;
      std::vector<TypeId> types;
      for (const auto& t : dom)
        if (t != base.type_of(n)) types.push_back(t);
      if (types.empty()) continue;
      if (!dom.count(base.type_of(n))) must_touch.push_back({n});
      free.push_back(n);
      choices[n] = std::move(types);
    }

    // Every broken triple and comparable pair must touch a rebound node.
    for (const auto& v : acceptability_violations(base, x, h)) must_touch.push_back({v.input, v.action, v.output});
    for (const auto& v : check_typing(base.graph(), base.typing(), h)) must_touch.push_back(v.nodes);

    std::vector<SubstitutionSet> found;
    const std::size_t limit = options.max_size == 0 ? free.size() : std::min(options.max_size, free.size());

    std::vector<std::size_t> pick;
    std::function<void(std::size_t, SubstitutionSet&)> choose_types = [&](std::size_t i, SubstitutionSet& s) {
      if (i == pick.size()) {
        counter.spend();
        for (const auto& f : found)
          if (is_subset(f, s)) return;
        SubstitutionSet all = primary;
        all.insert(s.begin(), s.end());
        if (restores(r, all, x, h)) found.push_back(s);
        return;
      }
      const NodeId& n = free[pick[i]];
      for (const auto& t : choices.at(n)) {
        s[n] = t;
        choose_types(i + 1, s);
        s.erase(n);
      }
    };

    std::function<void(std::size_t, std::size_t)> choose_nodes = [&](std::size_t start, std::size_t remaining) {
      if (remaining == 0) {
        std::set<NodeId> chosen;
        for (auto i : pick) chosen.insert(free[i]);
        for (const auto& group : must_touch)
          if (std::none_of(group.begin(), group.end(), [&](const NodeId& n) { return chosen.count(n) > 0; }))
            return;
        SubstitutionSet s;
        choose_types(0, s);
        return;
      }
      for (std::size_t i = start; i + remaining <= free.size(); ++i) {
        counter.spend();
        pick.push_back(i);
        choose_nodes(i + 1, remaining - 1);
        pick.pop_back();
      }
    };

    for (std::size_t k = 0; k <= limit; ++k) {
      choose_nodes(0, k);
      if (k == 0 && !found.empty()) break;  // ∅ is the only minimal set
    }

    auto key = [&](const SubstitutionSet& s) {
      const double c = options.cost_model ? cost(s, base, *options.cost_model, h) : 0.0;
      return std::make_tuple(c, s.size(), s);
    };
    std::sort(found.begin(), found.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    return found;
  }
};

}  // namespace detail

/// All subset-minimal secondary sets S (disjoint from dom(P)) such that
/// R ⊗ (P ∪ S) is a recipe acceptable w.r.t. X. Candidate types are first
/// narrowed by arc consistency against the licensed tuples; then sets are
/// enumerated by increasing |S| with hitting-set pruning over the violations
/// P leaves behind. An empty result means no solution exists in the
/// candidate space; running out of budget throws budget_exceeded.
inline std::vector<SubstitutionSet> find_secondary(const Recipe& r, const SubstitutionSet& primary,
                                                   const AcceptabilitySet& x, const Hierarchies& h,
                                                   const Candidates& candidates, SecondaryOptions options = {}) {
  BudgetCounter counter(options.budget, "secondary substitution search");
  return detail::SecondarySearch(r, x, h, candidates, options).run(primary, counter);
}

/// What the cook lacks: specific nodes, or every node typed with a given type.
struct Unavailable {
  NodeSet nodes;
  std::set<TypeId> types;
};

struct PlanOptions {
  Budget budget;
  std::size_t max_secondary_size = 0;
};

/// Cheapest substitution pair whose primary set rebinds exactly the
/// unavailable nodes to available candidate types. Branch and bound over
/// primary assignments (cheapest candidates first, pruning on partial cost);
/// each complete assignment is finished with its minimal secondary sets.
/// Ties go to the lexicographically smallest bindings. nullopt when no
/// acceptable pair exists in the candidate space.
inline std::optional<SubstitutionPair> preferred_pair(const Recipe& r, const Unavailable& unavailable,
                                                      const AcceptabilitySet& x, const CostModel& model,
                                                      const Hierarchies& h, const Candidates& candidates,
                                                      PlanOptions options = {}) {
  BudgetCounter counter(options.budget, "substitution planning");
  for (const auto& n : unavailable.nodes)
    if (!r.contains(n)) throw Error(ErrorCode::unknown_node, "node " + n.value + " is not in the recipe");

  std::vector<NodeId> targets;
  for (const auto& n : r.nodes())
    if (unavailable.nodes.count(n) || unavailable.types.count(r.type_of(n))) targets.push_back(n);

  SecondaryOptions secondary_options;
  secondary_options.max_size = options.max_secondary_size;
  secondary_options.cost_model = model;
  const detail::SecondarySearch search(r, x, h, candidates, secondary_options);

  // Primary options: available candidates that survive arc consistency.
  detail::Domains domains = detail::initial_domains(r, {}, candidates);
  for (const auto& n : targets) {
    auto& dom = domains[n];
    dom.erase(r.type_of(n));
    std::erase_if(dom, [&](const TypeId& t) { return unavailable.types.count(t) || !h.of(*r.kind_of(n)).contains(t); });
  }
  if (!detail::prune_domains(r, domains, search.licensed)) return std::nullopt;

  std::vector<std::vector<std::pair<double, TypeId>>> options_per_target;
  for (const auto& n : targets) {
    const Kind kind = *r.kind_of(n);
    std::vector<std::pair<double, TypeId>> opts;
    for (const auto& t : domains[n]) opts.emplace_back(model.distance.distance(h.of(kind), r.type_of(n), t), t);
    std::sort(opts.begin(), opts.end());
    if (opts.empty()) return std::nullopt;
    options_per_target.push_back(std::move(opts));
  }

  std::optional<SubstitutionPair> best;
  double best_cost = 0.0;
  auto better = [&](double c, const SubstitutionPair& p) {
    if (!best) return true;
    if (c != best_cost) return c < best_cost;
    return std::make_tuple(p.combined(), p.primary) < std::make_tuple(best->combined(), best->primary);
  };
  auto combine = [&](double acc, double d) { return model.aggregation == Aggregation::sum ? acc + d : std::max(acc, d); };

  SubstitutionSet primary;
  std::function<void(std::size_t, double)> assign = [&](std::size_t i, double partial) {
    if (best && partial > best_cost) return;
    if (i == targets.size()) {
      for (auto& s : search.run(primary, counter)) {
        SubstitutionPair pair{primary, std::move(s)};
        const double c = cost(pair, r, model, h);
        if (better(c, pair)) {
          best = pair;
          best_cost = c;
        }
      }
      return;
    }
    for (const auto& [d, t] : options_per_target[i]) {
      counter.spend();
      primary[targets[i]] = t;
      assign(i + 1, combine(partial, d));
      primary.erase(targets[i]);
    }
  };
  assign(0, 0.0);
  return best;
}

}  // namespace recipe
