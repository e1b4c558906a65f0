#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <vector>

#include "recipe/core.hpp"
#include "recipe/typekb.hpp"

namespace recipe {

/// (input comestible type, action type, output comestible type)
struct AcceptTuple {
  TypeId input;
  TypeId action;
  TypeId output;

  friend auto operator<=>(const AcceptTuple&, const AcceptTuple&) = default;
  friend bool operator==(const AcceptTuple&, const AcceptTuple&) = default;
};

enum class ExpansionPolicy { exact, path_comparable };

inline std::string_view to_string(ExpansionPolicy p) {
  return p == ExpansionPolicy::exact ? "exact" : "path-comparable";
}

/// Which tuple positions may be generalised or specialised during expansion.
struct SlotMask {
  bool input = true;
  bool action = true;
  bool output = true;

  friend bool operator==(const SlotMask&, const SlotMask&) = default;
};

struct AcceptabilitySet {
  std::set<AcceptTuple> tuples;
  ExpansionPolicy policy = ExpansionPolicy::exact;
  int depth_limit = 1;
  SlotMask slots;

  friend bool operator==(const AcceptabilitySet&, const AcceptabilitySet&) = default;
};

/// An arc pair (c, a), (a, c') whose typed triple is not licensed.
struct AcceptViolation {
  NodeId input;
  NodeId action;
  NodeId output;
  AcceptTuple typed;
};

namespace detail {

inline bool slot_matches(const TypeHierarchy& h, const TypeId& have, const TypeId& licensed, bool expand,
                         int depth_limit) {
  if (have == licensed) return true;
  if (!expand || !h.contains(have) || !h.contains(licensed)) return false;
  auto d = h.comparable_distance(have, licensed);
  return d && *d <= depth_limit;
}

}  // namespace detail

/// True when `triple` is in X, or under the path-comparable policy when some
/// tuple of X is comparable with it slot by slot within X.depth_limit steps.
inline bool licenses(const AcceptabilitySet& x, const Hierarchies& h, const AcceptTuple& triple) {
  if (x.tuples.count(triple)) return true;
  if (x.policy == ExpansionPolicy::exact) return false;
  for (const auto& t : x.tuples) {
    if (detail::slot_matches(h.comestible, triple.input, t.input, x.slots.input, x.depth_limit) &&
        detail::slot_matches(h.action, triple.action, t.action, x.slots.action, x.depth_limit) &&
        detail::slot_matches(h.comestible, triple.output, t.output, x.slots.output, x.depth_limit))
      return true;
  }
  return false;
}

/// Every (c, a, c') with arcs (c, a) and (a, c'), in canonical order.
inline std::vector<std::array<NodeId, 3>> arc_triples(const Recipe& r) {
  std::vector<std::array<NodeId, 3>> out;
  for (const auto& a : r.acts())
    for (const auto& c : r.predecessors(a))
      for (const auto& c2 : r.successors(a)) out.push_back({c, a, c2});
  std::sort(out.begin(), out.end());
  return out;
}

/// Lists every unlicensed arc triple; an empty result means R is acceptable.
inline std::vector<AcceptViolation> acceptability_violations(const Recipe& r, const AcceptabilitySet& x,
                                                             const Hierarchies& h) {
  std::vector<AcceptViolation> out;
  for (const auto& [c, a, c2] : arc_triples(r)) {
    AcceptTuple typed{r.type_of(c), r.type_of(a), r.type_of(c2)};
    if (!licenses(x, h, typed)) out.push_back({c, a, c2, typed});
  }
  return out;
}

inline bool is_acceptable(const Recipe& r, const AcceptabilitySet& x, const Hierarchies& h) {
  for (const auto& [c, a, c2] : arc_triples(r))
    if (!licenses(x, h, {r.type_of(c), r.type_of(a), r.type_of(c2)})) return false;
  return true;
}

/// Materialises the tuples licensed under `policy`. The result is tagged
/// exact so it is not expanded a second time.
inline AcceptabilitySet expand_tuples(const AcceptabilitySet& x, const Hierarchies& h, ExpansionPolicy policy,
                                      int depth_limit, SlotMask slots = {}) {
  for (const auto& t : x.tuples) {
    h.comestible.resolve(t.input.value);
    h.action.resolve(t.action.value);
    h.comestible.resolve(t.output.value);
  }
  if (policy == ExpansionPolicy::exact) return x;

  AcceptabilitySet out;
  out.policy = ExpansionPolicy::exact;
  out.depth_limit = depth_limit;
  out.slots = slots;
  auto related = [&](const TypeHierarchy& th, const TypeId& t, bool expand) {
    return expand ? th.comparable_within(t, depth_limit) : std::vector<TypeId>{t};
  };
  for (const auto& t : x.tuples) {
    out.tuples.insert(t);
    for (const auto& i : related(h.comestible, t.input, slots.input))
      for (const auto& a : related(h.action, t.action, slots.action))
        for (const auto& o : related(h.comestible, t.output, slots.output)) out.tuples.insert({i, a, o});
  }
  return out;
}

inline AcceptabilitySet expand_tuples(const AcceptabilitySet& x, const Hierarchies& h) {
  return expand_tuples(x, h, x.policy, x.depth_limit, x.slots);
}

}  // namespace recipe
