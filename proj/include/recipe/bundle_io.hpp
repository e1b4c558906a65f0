#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "recipe/acceptability.hpp"
#include "recipe/core.hpp"
#include "recipe/typekb.hpp"

namespace recipe {

using json = nlohmann::json;

/// A recipe as stored in a bundle: kept as written, validated on demand.
struct RecipeEntry {
  std::string id;
  RecipeGraph graph;
  Typing typing;

  Recipe unchecked() const { return Recipe::unchecked(graph, typing); }
  friend bool operator==(const RecipeEntry&, const RecipeEntry&) = default;
};

struct WorkspaceBundle {
  Hierarchies hierarchies;
  std::map<NodeId, Kind> registry;
  /// Sorted by id.
  std::vector<RecipeEntry> recipes;
  std::map<std::string, AcceptabilitySet> acceptability;
  DistanceModel distances;

  const RecipeEntry* find_recipe(std::string_view id) const {
    for (const auto& r : recipes)
      if (r.id == id) return &r;
    return nullptr;
  }

  const RecipeEntry& entry(std::string_view id) const {
    if (const auto* r = find_recipe(id)) return *r;
    throw Error(ErrorCode::unknown_reference, "no recipe '" + std::string(id) + "' in the bundle");
  }

  /// The stored recipe after full validation (throws invalid_recipe).
  Recipe recipe(std::string_view id) const {
    const auto& e = entry(id);
    return require_recipe(e.graph, e.typing, hierarchies);
  }

  const AcceptabilitySet& accept(std::string_view name) const {
    auto it = acceptability.find(std::string(name));
    if (it == acceptability.end())
      throw Error(ErrorCode::unknown_reference, "no acceptability set '" + std::string(name) + "' in the bundle");
    return it->second;
  }

  /// Adds or replaces a recipe, registering its nodes.
  void put_recipe(const std::string& id, const Recipe& r) {
    for (const auto& n : r.nodes()) {
      const Kind kind = *r.kind_of(n);
      auto [it, inserted] = registry.emplace(n, kind);
      if (!inserted && it->second != kind)
        throw Error(ErrorCode::kind_conflict, "node " + n.value + " is registered as " +
                                                  std::string(to_string(it->second)));
    }
    RecipeEntry e{id, r.graph(), r.typing()};
    auto pos = std::lower_bound(recipes.begin(), recipes.end(), id,
                                [](const RecipeEntry& a, const std::string& b) { return a.id < b; });
    if (pos != recipes.end() && pos->id == id)
      *pos = std::move(e);
    else
      recipes.insert(pos, std::move(e));
  }
};

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& reason) {
  throw Error(ErrorCode::schema_error, path + ": " + reason);
}

inline const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_fail(path, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) schema_fail(path, "expected a string");
  return j.get<std::string>();
}

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array");
  return j;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

inline std::vector<std::string> strings(const json& j, const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const auto& e : array(j, path)) out.push_back(text(e, path + "[" + std::to_string(i++) + "]"));
  return out;
}

inline TypeId resolve_ref(const TypeHierarchy& h, const std::string& name, const std::string& path) {
  if (auto t = h.find(name)) return *t;
  throw Error(ErrorCode::unknown_reference, path + ": '" + name + "' is not a " + std::string(to_string(h.kind())) +
                                                " type");
}

inline HierarchyDoc hierarchy_doc_from_json(const json& j, const std::string& path, Kind kind) {
  HierarchyDoc doc;
  doc.kind = kind;
  if (auto it = j.find("kind"); it != j.end() && text(*it, path + ".kind") != to_string(kind))
    schema_fail(path + ".kind", "expected '" + std::string(to_string(kind)) + "'");
  doc.root = TypeId(text(field(j, path, "root"), path + ".root"));
  const json& types = array(field(j, path, "types"), path + ".types");
  for (std::size_t i = 0; i < types.size(); ++i) {
    const std::string p = path + ".types[" + std::to_string(i) + "]";
    TypeDecl decl;
    decl.id = TypeId(text(field(types[i], p, "id"), p + ".id"));
    if (auto it = types[i].find("parents"); it != types[i].end())
      for (auto& s : strings(*it, p + ".parents")) decl.parents.emplace_back(s);
    if (auto it = types[i].find("aliases"); it != types[i].end()) decl.aliases = strings(*it, p + ".aliases");
    doc.types.push_back(std::move(decl));
  }
  return doc;
}

inline json hierarchy_to_json(const TypeHierarchy& h) {
  json types = json::array();
  for (const auto& decl : h.to_doc().types) {
    json t = {{"id", decl.id.value}};
    json parents = json::array();
    for (const auto& p : decl.parents) parents.push_back(p.value);
    t["parents"] = parents;
    if (!decl.aliases.empty()) t["aliases"] = decl.aliases;
    types.push_back(std::move(t));
  }
  return {{"kind", std::string(to_string(h.kind()))}, {"root", h.root().value}, {"types", types}};
}

}  // namespace detail

/// Loads a hierarchy from its JSON document form.
inline TypeHierarchy hierarchy_from_json(const json& j, Kind kind, const std::string& path = "$") {
  return load_hierarchy(detail::hierarchy_doc_from_json(j, path, kind));
}

inline AcceptTuple tuple_from_json(const json& j, const Hierarchies& h, const std::string& path) {
  if (!j.is_array() || j.size() != 3) detail::schema_fail(path, "expected [input, action, output]");
  return {detail::resolve_ref(h.comestible, detail::text(j[0], path + "[0]"), path + "[0]"),
          detail::resolve_ref(h.action, detail::text(j[1], path + "[1]"), path + "[1]"),
          detail::resolve_ref(h.comestible, detail::text(j[2], path + "[2]"), path + "[2]")};
}

/// Accepts a bare tuple array or an object {policy, depth_limit, slots, tuples}.
inline AcceptabilitySet acceptability_from_json(const json& j, const Hierarchies& h, const std::string& path = "$") {
  AcceptabilitySet x;
  const json* tuples = &j;
  if (j.is_object()) {
    tuples = &detail::field(j, path, "tuples");
    if (auto it = j.find("policy"); it != j.end()) {
      const std::string p = detail::text(*it, path + ".policy");
      if (p == "exact")
        x.policy = ExpansionPolicy::exact;
      else if (p == "path-comparable")
        x.policy = ExpansionPolicy::path_comparable;
      else
        detail::schema_fail(path + ".policy", "expected 'exact' or 'path-comparable'");
    }
    if (auto it = j.find("depth_limit"); it != j.end()) {
      if (!it->is_number_integer() || it->get<int>() < 0)
        detail::schema_fail(path + ".depth_limit", "expected a non-negative integer");
      x.depth_limit = it->get<int>();
    }
    if (auto it = j.find("slots"); it != j.end()) {
      x.slots = {false, false, false};
      for (const auto& s : detail::strings(*it, path + ".slots")) {
        if (s == "input")
          x.slots.input = true;
        else if (s == "action")
          x.slots.action = true;
        else if (s == "output")
          x.slots.output = true;
        else
          detail::schema_fail(path + ".slots", "unknown slot '" + s + "'");
      }
    }
  }
  const std::string tpath = j.is_object() ? path + ".tuples" : path;
  const json& arr = detail::array(*tuples, tpath);
  for (std::size_t i = 0; i < arr.size(); ++i)
    x.tuples.insert(tuple_from_json(arr[i], h, tpath + "[" + std::to_string(i) + "]"));
  return x;
}

inline json acceptability_to_json(const AcceptabilitySet& x) {
  json tuples = json::array();
  for (const auto& t : x.tuples) tuples.push_back({t.input.value, t.action.value, t.output.value});
  json slots = json::array();
  if (x.slots.input) slots.push_back("input");
  if (x.slots.action) slots.push_back("action");
  if (x.slots.output) slots.push_back("output");
  return {{"policy", std::string(to_string(x.policy))},
          {"depth_limit", x.depth_limit},
          {"slots", slots},
          {"tuples", tuples}};
}

/// {"generalization_penalty", "step_cost", "table": [[t1, t2, d], ...]}.
/// Table types are looked up in the comestible hierarchy, then the action one.
inline DistanceModel distances_from_json(const json& j, const Hierarchies& h, const std::string& path = "$") {
  DistanceModel d;
  if (!j.is_object()) detail::schema_fail(path, "expected an object");
  if (auto it = j.find("generalization_penalty"); it != j.end())
    d.generalization_penalty = detail::number(*it, path + ".generalization_penalty");
  if (auto it = j.find("step_cost"); it != j.end()) d.step_cost = detail::number(*it, path + ".step_cost");
  if (!(d.generalization_penalty >= 0.0) || !(d.step_cost >= 0.0))
    detail::schema_fail(path, "distance parameters must be non-negative");
  auto resolve = [&](const std::string& name, const std::string& p) {
    if (auto t = h.comestible.find(name)) return *t;
    if (auto t = h.action.find(name)) return *t;
    throw Error(ErrorCode::unknown_reference, p + ": '" + name + "' is not a known type");
  };
  if (auto it = j.find("table"); it != j.end()) {
    const std::string tp = path + ".table";
    const json& arr = detail::array(*it, tp);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = tp + "[" + std::to_string(i) + "]";
      if (!arr[i].is_array() || arr[i].size() != 3) detail::schema_fail(p, "expected [type, type, distance]");
      const TypeId a = resolve(detail::text(arr[i][0], p + "[0]"), p + "[0]");
      const TypeId b = resolve(detail::text(arr[i][1], p + "[1]"), p + "[1]");
      const double v = detail::number(arr[i][2], p + "[2]");
      if (!(v >= 0.0)) detail::schema_fail(p + "[2]", "distance must be non-negative");
      d.set(a, b, v);
    }
  }
  return d;
}

inline json distances_to_json(const DistanceModel& d) {
  json table = json::array();
  for (const auto& [key, v] : d.table()) table.push_back({key.first.value, key.second.value, v});
  return {{"generalization_penalty", d.generalization_penalty}, {"step_cost", d.step_cost}, {"table", table}};
}

/// {"comestibles": [...], "actions": [...], "arcs": [[from, to]], "types": {node: type}}.
/// Types are resolved through aliases to canonical ids. When `registry` is
/// given, every node must be registered with the matching kind.
inline RecipeEntry recipe_from_json(const json& j, const Hierarchies& h, const std::string& path = "$",
                                    const std::map<NodeId, Kind>* registry = nullptr) {
  RecipeEntry e;
  if (auto it = j.find("id"); it != j.end()) e.id = detail::text(*it, path + ".id");
  auto nodes = [&](const char* key, Kind kind, NodeSet& into) {
    const std::string p = path + "." + key;
    for (auto& s : detail::strings(detail::field(j, path, key), p)) {
      NodeId n(s);
      if (registry) {
        auto it = registry->find(n);
        if (it == registry->end()) throw Error(ErrorCode::unknown_reference, p + ": node '" + s + "' is not registered");
        if (it->second != kind)
          throw Error(ErrorCode::kind_mismatch, p + ": node '" + s + "' is registered as " +
                                                    std::string(to_string(it->second)));
      }
      if (!into.insert(n).second) detail::schema_fail(p, "node '" + s + "' listed twice");
    }
  };
  nodes("comestibles", Kind::comestible, e.graph.comestibles);
  nodes("actions", Kind::action, e.graph.actions);
  for (const auto& c : e.graph.comestibles)
    if (e.graph.actions.count(c)) detail::schema_fail(path, "node '" + c.value + "' is both comestible and action");

  const std::string ap = path + ".arcs";
  const json& arcs = detail::array(detail::field(j, path, "arcs"), ap);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const std::string p = ap + "[" + std::to_string(i) + "]";
    if (!arcs[i].is_array() || arcs[i].size() != 2) detail::schema_fail(p, "expected [from, to]");
    e.graph.arcs.insert({NodeId(detail::text(arcs[i][0], p + "[0]")), NodeId(detail::text(arcs[i][1], p + "[1]"))});
  }

  const std::string tp = path + ".types";
  const json& types = detail::field(j, path, "types");
  if (!types.is_object()) detail::schema_fail(tp, "expected an object");
  for (auto it = types.begin(); it != types.end(); ++it) {
    NodeId n(it.key());
    const auto kind = e.graph.kind_of(n);
    if (!kind) throw Error(ErrorCode::unknown_reference, tp + ": '" + it.key() + "' is not a node of this recipe");
    e.typing.emplace(n, detail::resolve_ref(h.of(*kind), detail::text(it.value(), tp + "." + it.key()),
                                            tp + "." + it.key()));
  }
  return e;
}

inline json recipe_to_json(const RecipeGraph& g, const Typing& typing) {
  json coms = json::array(), acts = json::array(), arcs = json::array(), types = json::object();
  for (const auto& c : g.comestibles) coms.push_back(c.value);
  for (const auto& a : g.actions) acts.push_back(a.value);
  for (const auto& arc : g.arcs) arcs.push_back({arc.from.value, arc.to.value});
  for (const auto& [n, t] : typing) types[n.value] = t.value;
  return {{"comestibles", coms}, {"actions", acts}, {"arcs", arcs}, {"types", types}};
}

inline json recipe_to_json(const Recipe& r) { return recipe_to_json(r.graph(), r.typing()); }

inline WorkspaceBundle bundle_from_json(const json& j) {
  if (!j.is_object()) detail::schema_fail("$", "expected an object");
  WorkspaceBundle ws;
  const json& hs = detail::field(j, "$", "hierarchies");
  ws.hierarchies.action = hierarchy_from_json(detail::field(hs, "$.hierarchies", "action"), Kind::action,
                                              "$.hierarchies.action");
  ws.hierarchies.comestible = hierarchy_from_json(detail::field(hs, "$.hierarchies", "comestible"), Kind::comestible,
                                                  "$.hierarchies.comestible");

  if (auto it = j.find("nodes"); it != j.end()) {
    for (Kind kind : {Kind::action, Kind::comestible}) {
      const std::string key(to_string(kind));
      auto k = it->find(key);
      if (k == it->end()) continue;
      for (auto& s : detail::strings(*k, "$.nodes." + key))
        if (!ws.registry.emplace(NodeId(s), kind).second)
          detail::schema_fail("$.nodes." + key, "node '" + s + "' registered twice");
    }
  }

  if (auto it = j.find("recipes"); it != j.end()) {
    const json& arr = detail::array(*it, "$.recipes");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = "$.recipes[" + std::to_string(i) + "]";
      RecipeEntry e = recipe_from_json(arr[i], ws.hierarchies, p, &ws.registry);
      if (e.id.empty()) detail::schema_fail(p, "missing field 'id'");
      if (ws.find_recipe(e.id)) detail::schema_fail(p, "recipe id '" + e.id + "' used twice");
      ws.recipes.push_back(std::move(e));
    }
    std::sort(ws.recipes.begin(), ws.recipes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  }

  if (auto it = j.find("acceptability"); it != j.end()) {
    if (!it->is_object()) detail::schema_fail("$.acceptability", "expected an object");
    for (auto a = it->begin(); a != it->end(); ++a)
      ws.acceptability.emplace(a.key(), acceptability_from_json(a.value(), ws.hierarchies, "$.acceptability." + a.key()));
  }

  if (auto it = j.find("distances"); it != j.end())
    ws.distances = distances_from_json(*it, ws.hierarchies, "$.distances");
  return ws;
}

inline json bundle_to_json(const WorkspaceBundle& ws) {
  json nodes = {{"action", json::array()}, {"comestible", json::array()}};
  for (const auto& [n, kind] : ws.registry) nodes[std::string(to_string(kind))].push_back(n.value);
  json recipes = json::array();
  for (const auto& e : ws.recipes) {
    json r = recipe_to_json(e.graph, e.typing);
    r["id"] = e.id;
    recipes.push_back(std::move(r));
  }
  json accept = json::object();
  for (const auto& [name, x] : ws.acceptability) accept[name] = acceptability_to_json(x);
  return {{"hierarchies",
           {{"action", detail::hierarchy_to_json(ws.hierarchies.action)},
            {"comestible", detail::hierarchy_to_json(ws.hierarchies.comestible)}}},
          {"nodes", nodes},
          {"recipes", recipes},
          {"acceptability", accept},
          {"distances", distances_to_json(ws.distances)}};
}

inline json parse_json_text(std::string_view text, const std::string& what = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::schema_error, what + " is not valid JSON: " + e.what());
  }
}

inline WorkspaceBundle parse_bundle(std::string_view text) { return bundle_from_json(parse_json_text(text, "bundle")); }

/// Canonical text: keys and every id-keyed collection sorted, two-space
/// indent, trailing newline.
inline std::string serialize_bundle(const WorkspaceBundle& ws) { return bundle_to_json(ws).dump(2) + "\n"; }

namespace detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\')
      out += '\\', out += ch;
    else if (ch == '\n')
      out += "\\n";
    else
      out += ch;
  }
  return out + "\"";
}

}  // namespace detail

/// Graphviz digraph: comestibles as rounded boxes, actions as plain boxes,
/// labels "<id>: <type>".
inline std::string export_dot(const Recipe& r, std::string_view name = "recipe") {
  std::ostringstream out;
  out << "digraph " << detail::dot_quote(name) << " {\n";
  out << "  rankdir=TB;\n";
  auto label = [&](const NodeId& n) {
    auto it = r.typing().find(n);
    return detail::dot_quote(n.value + ": " + (it == r.typing().end() ? std::string("?") : it->second.value));
  };
  for (const auto& c : r.coms())
    out << "  " << detail::dot_quote(c.value) << " [shape=box, style=rounded, label=" << label(c) << "];\n";
  for (const auto& a : r.acts()) out << "  " << detail::dot_quote(a.value) << " [shape=box, label=" << label(a) << "];\n";
  for (const auto& arc : r.arcs())
    out << "  " << detail::dot_quote(arc.from.value) << " -> " << detail::dot_quote(arc.to.value) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace recipe
