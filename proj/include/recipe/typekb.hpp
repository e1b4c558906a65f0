#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "recipe/error.hpp"
#include "recipe/ids.hpp"

namespace recipe {

struct TypeDecl {
  TypeId id;
  std::vector<TypeId> parents;
  std::vector<std::string> aliases;
};

/// Structured form of a hierarchy document, before validation.
struct HierarchyDoc {
  Kind kind = Kind::comestible;
  TypeId root;
  std::vector<TypeDecl> types;
};

/// Rooted DAG of types. Edges run child -> parent; every type reaches the root.
/// Immutable once built; all queries are const and thread-safe.
class TypeHierarchy {
 public:
  TypeHierarchy() = default;

  Kind kind() const noexcept { return kind_; }
  const TypeId& root() const noexcept { return names_.at(root_); }
  std::size_t size() const noexcept { return names_.size(); }

  bool contains(const TypeId& t) const { return index_.count(t.value) > 0; }

  /// Canonical id for a canonical name or any of its aliases.
  std::optional<TypeId> find(std::string_view text) const {
    if (auto it = index_.find(std::string(text)); it != index_.end()) return names_[it->second];
    if (auto it = aliases_.find(std::string(text)); it != aliases_.end()) return names_[it->second];
    return std::nullopt;
  }

  TypeId resolve(std::string_view text) const {
    if (auto t = find(text)) return *t;
    throw Error(ErrorCode::unknown_type,
                "'" + std::string(text) + "' is not a " + std::string(to_string(kind_)) + " type");
  }

  /// t1 ⪯ t2: equal, or t2 is reachable from t1 along parent edges.
  bool is_subtype(const TypeId& t1, const TypeId& t2) const { return up_[at(t1)][at(t2)] >= 0; }

  /// t1 ≃ t2: one is a subtype of the other.
  bool comparable(const TypeId& t1, const TypeId& t2) const {
    const int a = at(t1), b = at(t2);
    return up_[a][b] >= 0 || up_[b][a] >= 0;
  }

  /// Fewest parent steps from t1 up to t2, if t1 ⪯ t2.
  std::optional<int> up_distance(const TypeId& t1, const TypeId& t2) const {
    const int d = up_[at(t1)][at(t2)];
    return d < 0 ? std::nullopt : std::optional<int>(d);
  }

  /// Fewest steps between comparable types in either direction.
  std::optional<int> comparable_distance(const TypeId& t1, const TypeId& t2) const {
    const int a = at(t1), b = at(t2);
    if (up_[a][b] >= 0) return up_[a][b];
    if (up_[b][a] >= 0) return up_[b][a];
    return std::nullopt;
  }

  /// Every type comparable with t within max_steps parent/child steps (t included).
  std::vector<TypeId> comparable_within(const TypeId& t, int max_steps) const {
    const int a = at(t);
    std::vector<TypeId> out;
    for (std::size_t b = 0; b < names_.size(); ++b) {
      const int d = up_[a][b] >= 0 ? up_[a][b] : up_[b][a];
      if (d >= 0 && d <= max_steps) out.push_back(names_[b]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Types within `radius` hops of t when edges are read undirected (t excluded).
  std::vector<TypeId> neighbourhood(const TypeId& t, int radius) const {
    std::vector<int> dist(names_.size(), -1);
    std::deque<int> queue{at(t)};
    dist[at(t)] = 0;
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      if (dist[cur] == radius) continue;
      auto visit = [&](int next) {
        if (dist[next] < 0) {
          dist[next] = dist[cur] + 1;
          queue.push_back(next);
        }
      };
      for (int p : parents_[cur]) visit(p);
      for (int c : children_[cur]) visit(c);
    }
    std::vector<TypeId> out;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (dist[i] > 0) out.push_back(names_[i]);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Longest shortest-path from any type to the root.
  int depth() const noexcept { return depth_; }

  std::vector<TypeId> types() const {
    std::vector<TypeId> out(names_.begin(), names_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<TypeId> parents(const TypeId& t) const {
    std::vector<TypeId> out;
    for (int p : parents_[at(t)]) out.push_back(names_[p]);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::string> aliases_of(const TypeId& t) const {
    const int a = at(t);
    std::vector<std::string> out;
    for (const auto& [alias, idx] : aliases_)
      if (idx == a) out.push_back(alias);
    return out;  // std::map keeps them sorted
  }

  /// Canonical document: types sorted by id, parents and aliases sorted.
  HierarchyDoc to_doc() const {
    HierarchyDoc doc{kind_, root(), {}};
    for (const auto& t : types()) doc.types.push_back({t, parents(t), aliases_of(t)});
    return doc;
  }

  friend TypeHierarchy load_hierarchy(const HierarchyDoc& doc);

 private:
  int at(const TypeId& t) const {
    auto it = index_.find(t.value);
    if (it == index_.end())
      throw Error(ErrorCode::unknown_type,
                  "'" + t.value + "' is not a " + std::string(to_string(kind_)) + " type");
    return it->second;
  }

  Kind kind_ = Kind::comestible;
  int root_ = 0;
  int depth_ = 0;
  std::vector<TypeId> names_;
  std::map<std::string, int> index_;
  std::map<std::string, int> aliases_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  // up_[a][b] = fewest parent steps from a to b, or -1
  std::vector<std::vector<int>> up_;
};

/// Validates a hierarchy document: acyclic, a single parentless root, no
/// dangling parents, aliases unambiguous. The root may be omitted from the
/// type list.
inline TypeHierarchy load_hierarchy(const HierarchyDoc& doc) {
  TypeHierarchy h;
  h.kind_ = doc.kind;
  const std::string kind_name(to_string(doc.kind));
  if (doc.root.empty()) throw Error(ErrorCode::no_root, kind_name + " hierarchy declares no root");

  auto add = [&](const TypeId& t) {
    if (t.empty()) throw Error(ErrorCode::schema_error, kind_name + " hierarchy has an empty type id");
    auto [it, inserted] = h.index_.emplace(t.value, static_cast<int>(h.names_.size()));
    if (inserted) h.names_.push_back(t);
    return inserted;
  };
  for (const auto& decl : doc.types)
    if (!add(decl.id))
      throw Error(ErrorCode::schema_error, "type '" + decl.id.value + "' declared twice");
  add(doc.root);

  const std::size_t n = h.names_.size();
  h.parents_.assign(n, {});
  h.children_.assign(n, {});
  for (const auto& decl : doc.types) {
    const int child = h.index_.at(decl.id.value);
    for (const auto& parent : decl.parents) {
      auto it = h.index_.find(parent.value);
      if (it == h.index_.end())
        throw Error(ErrorCode::dangling_edge,
                    "'" + decl.id.value + "' names unknown parent '" + parent.value + "'");
      if (std::find(h.parents_[child].begin(), h.parents_[child].end(), it->second) ==
          h.parents_[child].end()) {
        h.parents_[child].push_back(it->second);
        h.children_[it->second].push_back(child);
      }
    }
  }

  // Cycle check by DFS colouring; reports the cycle it walks into.
  {
    std::vector<int> colour(n, 0);
    std::vector<int> on_path;
    std::function<void(int)> dfs = [&](int v) {
      colour[v] = 1;
      on_path.push_back(v);
      for (int p : h.parents_[v]) {
        if (colour[p] == 1) {
          std::string cycle;
          auto start = std::find(on_path.begin(), on_path.end(), p);
          for (auto it = start; it != on_path.end(); ++it) cycle += h.names_[*it].value + " -> ";
          cycle += h.names_[p].value;
          throw Error(ErrorCode::cycle_detected, kind_name + " hierarchy cycle: " + cycle);
        }
        if (colour[p] == 0) dfs(p);
      }
      on_path.pop_back();
      colour[v] = 2;
    };
    for (std::size_t v = 0; v < n; ++v)
      if (colour[v] == 0) dfs(static_cast<int>(v));
  }

  std::vector<std::string> parentless;
  for (std::size_t v = 0; v < n; ++v)
    if (h.parents_[v].empty()) parentless.push_back(h.names_[v].value);
  if (parentless.empty()) throw Error(ErrorCode::no_root, kind_name + " hierarchy has no parentless type");
  if (parentless.size() > 1) {
    std::string list;
    for (const auto& p : parentless) list += (list.empty() ? "" : ", ") + p;
    throw Error(ErrorCode::multiple_roots, kind_name + " hierarchy has several roots: " + list);
  }
  h.root_ = h.index_.at(doc.root.value);
  if (parentless.front() != doc.root.value)
    throw Error(ErrorCode::no_root, "declared root '" + doc.root.value + "' has parents; the parentless type is '" +
                                        parentless.front() + "'");

  for (const auto& decl : doc.types) {
    const int target = h.index_.at(decl.id.value);
    for (const auto& alias : decl.aliases) {
      if (alias == decl.id.value) continue;
      if (h.index_.count(alias) || h.aliases_.count(alias))
        throw Error(ErrorCode::duplicate_alias, "alias '" + alias + "' is ambiguous");
      h.aliases_.emplace(alias, target);
    }
  }

  h.up_.assign(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < n; ++s) {
    auto& row = h.up_[s];
    std::deque<int> queue{static_cast<int>(s)};
    row[s] = 0;
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      for (int p : h.parents_[cur])
        if (row[p] < 0) {
          row[p] = row[cur] + 1;
          queue.push_back(p);
        }
    }
    h.depth_ = std::max(h.depth_, row[h.root_]);
  }
  return h;
}

struct Hierarchies {
  TypeHierarchy action;
  TypeHierarchy comestible;

  const TypeHierarchy& of(Kind kind) const { return kind == Kind::action ? action : comestible; }
};

/// Symmetric, non-negative distance on types. Explicit table entries win;
/// otherwise the hierarchy fallback applies: through the common ancestor that
/// minimises it, every step costs `step_cost` and every step of imbalance
/// between the two sides (net generalisation) additionally costs
/// `generalization_penalty`; the sum is divided by the hierarchy depth.
class DistanceModel {
 public:
  double generalization_penalty = 2.0;
  double step_cost = 1.0;

  void set(const TypeId& t1, const TypeId& t2, double d) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw Error(ErrorCode::schema_error, "distance between '" + t1.value + "' and '" + t2.value +
                                               "' must be finite and non-negative");
    if (t1 == t2) return;
    table_[key(t1, t2)] = d;
  }

  std::optional<double> lookup(const TypeId& t1, const TypeId& t2) const {
    if (t1 == t2) return 0.0;
    auto it = table_.find(key(t1, t2));
    return it == table_.end() ? std::nullopt : std::optional<double>(it->second);
  }

  double distance(const TypeHierarchy& h, const TypeId& t1, const TypeId& t2) const {
    if (!h.contains(t1)) h.resolve(t1.value);
    if (!h.contains(t2)) h.resolve(t2.value);
    if (auto d = lookup(t1, t2)) return *d;
    return fallback(h, t1, t2);
  }

  double fallback(const TypeHierarchy& h, const TypeId& t1, const TypeId& t2) const {
    if (t1 == t2) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : h.types()) {
      auto u = h.up_distance(t1, a);
      auto v = h.up_distance(t2, a);
      if (!u || !v) continue;
      const double cost = step_cost * (*u + *v) + generalization_penalty * std::abs(*u - *v);
      best = std::min(best, cost);
    }
    return best / std::max(h.depth(), 1);
  }

  const std::map<std::pair<TypeId, TypeId>, double>& table() const noexcept { return table_; }

 private:
  static std::pair<TypeId, TypeId> key(const TypeId& a, const TypeId& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  std::map<std::pair<TypeId, TypeId>, double> table_;
};

}  // namespace recipe
