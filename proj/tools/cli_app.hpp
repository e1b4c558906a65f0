#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "recipe/all.hpp"

namespace recipe::cli {

enum Exit : int { ok = 0, negative = 1, input_error = 2, exhausted = 3 };

struct Settings {
  std::string bundle_path;
  std::string format = "human";
  std::size_t budget = 1'000'000;
  std::vector<std::string> argv;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::schema_error, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string join(const std::vector<std::string>& xs, const char* sep = ", ") {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : sep) + x;
  return out;
}

inline std::vector<std::string> ids(const NodeSet& nodes) {
  std::vector<std::string> out;
  for (const auto& n : nodes) out.push_back(n.value);
  return out;
}

inline json node_map(const std::map<NodeId, NodeId>& m) {
  json out = json::object();
  for (const auto& [a, b] : m) out[a.value] = b.value;
  return out;
}

inline json bindings(const SubstitutionSet& s) {
  json out = json::object();
  for (const auto& [n, t] : s) out[n.value] = t.value;
  return out;
}

inline std::string human_bindings(const SubstitutionSet& s) {
  std::vector<std::string> parts;
  for (const auto& [n, t] : s) parts.push_back("(" + n.value + ", " + t.value + ")");
  return "{" + join(parts) + "}";
}

inline std::string human_recipe(const Recipe& r) {
  std::ostringstream out;
  for (const auto& n : r.nodes()) {
    auto it = r.typing().find(n);
    out << "  " << n.value << " [" << to_string(*r.kind_of(n)) << "]: "
        << (it == r.typing().end() ? std::string("?") : it->second.value) << "\n";
  }
  std::vector<std::string> arcs;
  for (const auto& a : r.arcs()) arcs.push_back(a.from.value + "->" + a.to.value);
  out << "  arcs: " << join(arcs) << "\n";
  return out.str();
}

}  // namespace detail

/// Holds parsed state for one invocation and runs the chosen subcommand.
class Runner {
 public:
  Runner(Settings settings, std::ostream& out, std::ostream& err)
      : s_(std::move(settings)), out_(out), err_(err) {}

  const WorkspaceBundle& bundle() {
    if (!bundle_) {
      if (s_.bundle_path.empty()) throw Error(ErrorCode::schema_error, "this command needs --bundle");
      bundle_ = parse_bundle(detail::read_file(s_.bundle_path));
    }
    return *bundle_;
  }

  const Hierarchies& h() { return bundle().hierarchies; }
  Budget budget() const { return Budget{s_.budget}; }

  /// A bundle recipe id, or a path to a recipe JSON file.
  Recipe recipe_ref(const std::string& ref) {
    if (bundle().find_recipe(ref)) return bundle().recipe(ref);
    std::ifstream probe(ref);
    if (!probe) throw Error(ErrorCode::unknown_reference, "'" + ref + "' is neither a bundle recipe nor a readable file");
    const auto e = recipe_from_json(parse_json_text(detail::read_file(ref), ref), h(), ref);
    return require_recipe(e.graph, e.typing, h());
  }

  Recipe recipe_value(const json& j, const std::string& path) {
    if (j.is_string()) return recipe_ref(j.get<std::string>());
    const auto e = recipe_from_json(j, h(), path);
    return require_recipe(e.graph, e.typing, h());
  }

  /// A bundle acceptability set name, or a path to an acceptability JSON file.
  AcceptabilitySet accept_ref(const std::string& ref) {
    if (bundle().acceptability.count(ref)) return bundle().accept(ref);
    std::ifstream probe(ref);
    if (!probe)
      throw Error(ErrorCode::unknown_reference, "'" + ref + "' is neither a bundle acceptability set nor a readable file");
    return acceptability_from_json(parse_json_text(detail::read_file(ref), ref), h(), ref);
  }

  /// Type name with aliases; underscores stand for spaces when the literal name is unknown.
  TypeId type_ref(const TypeHierarchy& th, const std::string& text) {
    if (auto t = th.find(text)) return *t;
    std::string spaced = text;
    std::replace(spaced.begin(), spaced.end(), '_', ' ');
    return th.resolve(spaced);
  }

  void emit(const std::string& subcommand, const json& result, const std::string& human) {
    if (s_.format == "json") {
      json report = {{"invocation", {{"subcommand", subcommand}, {"argv", s_.argv}}}, {"result", result}};
      out_ << report.dump(2) << "\n";
    } else {
      out_ << human;
    }
  }

  void require_not_dot(const std::string& subcommand) {
    if (s_.format == "dot")
      throw Error(ErrorCode::schema_error, "--format dot is not available for '" + subcommand + "'");
  }

  int emit_recipes(const std::string& subcommand, const std::vector<std::pair<std::string, Recipe>>& rs,
                   json extra = json::object(), std::string human_head = "") {
    if (s_.format == "dot") {
      for (const auto& [name, r] : rs) out_ << export_dot(r, name);
      return ok;
    }
    json list = json::array();
    std::string human = human_head;
    for (const auto& [name, r] : rs) {
      json j = recipe_to_json(r);
      j["id"] = name;
      list.push_back(j);
      human += name + ":\n" + detail::human_recipe(r);
    }
    extra["recipes"] = list;
    emit(subcommand, extra, human);
    return ok;
  }

  int validate(const std::vector<std::string>& which) {
    require_not_dot("validate");
    std::vector<std::string> targets = which;
    if (targets.empty())
      for (const auto& e : bundle().recipes) targets.push_back(e.id);
    json results = json::array();
    std::string human;
    bool all_ok = true;
    for (const auto& id : targets) {
      const auto& e = bundle().entry(id);
      const auto v = check_recipe(e.graph, e.typing, h());
      json item = {{"id", id}, {"valid", v.empty()}};
      json structural = json::array(), typing = json::array();
      for (const auto& g : v.structural)
        structural.push_back({{"condition", g.condition}, {"detail", g.detail}, {"nodes", detail::ids({g.nodes.begin(), g.nodes.end()})}});
      for (const auto& t : v.typing) typing.push_back({{"code", std::string(to_string(t.code))}, {"detail", t.detail}});
      item["structural"] = structural;
      item["typing"] = typing;
      results.push_back(item);
      if (v.empty()) {
        human += id + ": valid recipe\n";
      } else {
        all_ok = false;
        human += id + ": not a recipe\n" + v.describe();
      }
    }
    emit("validate", {{"recipes", results}, {"valid", all_ok}}, human);
    return all_ok ? ok : input_error;
  }

  int roles(const std::string& id) {
    require_not_dot("roles");
    const Recipe r = bundle().recipe(id);
    const auto roles = r.roles();
    json j = {{"id", id},
              {"in", detail::ids(roles.inputs)},
              {"out", detail::ids(roles.outputs)},
              {"mid", detail::ids(roles.mids)},
              {"atomic", r.is_atomic()}};
    emit("roles", j,
         "In: " + detail::join(detail::ids(roles.inputs)) + "\nOut: " + detail::join(detail::ids(roles.outputs)) +
             "\nMid: " + detail::join(detail::ids(roles.mids)) + "\n");
    return ok;
  }

  int compare(const std::string& relation, const std::string& a, const std::string& b, bool fix_in_out) {
    require_not_dot("compare");
    const Recipe r1 = bundle().recipe(a), r2 = bundle().recipe(b);
    std::optional<std::map<NodeId, NodeId>> witness;
    bool holds = false;
    if (relation == "iso") {
      witness = isomorphic(r1, r2, budget());
    } else if (relation == "equiv") {
      witness = equivalent(r1, r2, budget());
    } else if (relation == "specific") {
      witness = more_specific(r1, r2, h(), budget());
    } else if (relation == "finer") {
      witness = finer_grained(r1, r2, FinerGrainedOptions{fix_in_out}, budget());
    } else if (relation == "sub") {
      holds = is_subrecipe(r1, r2);
    } else if (relation == "io") {
      holds = in_out_aligned(r1, r2);
    } else {
      throw Error(ErrorCode::schema_error, "unknown relation '" + relation + "'");
    }
    if (witness) holds = true;
    json j = {{"relation", relation}, {"left", a}, {"right", b}, {"holds", holds}};
    std::string human = a + " " + relation + " " + b + ": " + (holds ? "yes" : "no") + "\n";
    if (witness) {
      j["witness"] = detail::node_map(*witness);
      for (const auto& [x, y] : *witness) human += "  " + x.value + " -> " + y.value + "\n";
    }
    emit("compare", j, human);
    return holds ? ok : negative;
  }

  int compose_cmd(const std::string& a, const std::string& b) {
    const Recipe r1 = bundle().recipe(a), r2 = bundle().recipe(b);
    auto result = compose(r1, r2, h());
    if (!result) {
      require_not_dot("compose (failed)");
      json violated = json::array();
      std::string human = a + " (+) " + b + " failed\n";
      for (const auto& v : result.error().violated) {
        violated.push_back({{"condition", v.condition}, {"detail", v.detail}});
        human += "  condition " + std::to_string(v.condition) + " violated: " + v.detail + "\n";
      }
      emit("compose", {{"composed", false}, {"violated", violated}}, human);
      return negative;
    }
    return emit_recipes("compose", {{a + "+" + b, *result}}, {{"composed", true}});
  }

  int closure(const std::vector<std::string>& which, std::size_t max_recipes, std::size_t max_nodes) {
    std::vector<std::string> targets = which;
    if (targets.empty())
      for (const auto& e : bundle().recipes) targets.push_back(e.id);
    std::vector<Recipe> seeds;
    for (const auto& id : targets) seeds.push_back(bundle().recipe(id));
    const auto result = compose_closure(seeds, h(), {max_recipes, max_nodes});
    std::vector<std::pair<std::string, Recipe>> named;
    for (std::size_t i = 0; i < result.recipes.size(); ++i) named.emplace_back("closure" + std::to_string(i + 1), result.recipes[i]);
    if (result.truncated) err_ << "closure truncated: " << result.reason << "\n";
    emit_recipes("closure", named, {{"count", result.recipes.size()}, {"truncated", result.truncated}},
                 std::to_string(result.recipes.size()) + " recipes\n");
    return result.truncated ? exhausted : ok;
  }

  int decompose_cmd(const std::string& id) {
    const Recipe r = bundle().recipe(id);
    std::vector<std::pair<std::string, Recipe>> named;
    for (const auto& part : decompose(r)) named.emplace_back(id + "/" + part.acts().begin()->value, part);
    return emit_recipes("decompose", named);
  }

  int accept(const std::string& id, const std::string& x_ref) {
    require_not_dot("accept");
    const Recipe r = bundle().recipe(id);
    const auto x = accept_ref(x_ref);
    const auto violations = acceptability_violations(r, x, h());
    json list = json::array();
    std::string human = id + (violations.empty() ? " is acceptable\n" : " is not acceptable\n");
    for (const auto& v : violations) {
      list.push_back({{"nodes", {v.input.value, v.action.value, v.output.value}},
                      {"types", {v.typed.input.value, v.typed.action.value, v.typed.output.value}}});
      human += "  unlicensed (" + v.input.value + ", " + v.action.value + ", " + v.output.value + "): (" +
               v.typed.input.value + ", " + v.typed.action.value + ", " + v.typed.output.value + ")\n";
    }
    emit("accept", {{"acceptable", violations.empty()}, {"violations", list}}, human);
    return violations.empty() ? ok : negative;
  }

  SubstitutionSet parse_binds(const Recipe& r, const std::vector<std::string>& binds) {
    std::vector<Binding> out;
    for (const auto& b : binds) {
      const auto eq = b.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::schema_error, "binding '" + b + "' is not node=type");
      const NodeId n(b.substr(0, eq));
      const auto kind = r.kind_of(n);
      if (!kind) throw Error(ErrorCode::unknown_node, "node " + n.value + " is not in the recipe");
      out.push_back({n, type_ref(h().of(*kind), b.substr(eq + 1))});
    }
    return make_substitution(out);
  }

  int substitute(const std::string& id, const std::vector<std::string>& binds, const std::string& x_ref) {
    const Recipe r = bundle().recipe(id);
    const auto t = parse_binds(r, binds);
    auto result = apply_substitution(r, t, h());
    if (!result) {
      require_not_dot("substitute (failed)");
      json list = json::array();
      std::string human = "substitution " + detail::human_bindings(t) + " does not give a recipe\n";
      for (const auto& v : result.error()) {
        list.push_back({{"code", std::string(to_string(v.code))}, {"detail", v.detail}});
        human += "  " + std::string(to_string(v.code)) + ": " + v.detail + "\n";
      }
      emit("substitute", {{"recipe", false}, {"violations", list}}, human);
      return negative;
    }
    json extra = {{"bindings", detail::bindings(t)}};
    bool acceptable = true;
    std::string head;
    if (!x_ref.empty()) {
      const auto violations = acceptability_violations(*result, accept_ref(x_ref), h());
      acceptable = violations.empty();
      extra["acceptable"] = acceptable;
      head = std::string(acceptable ? "acceptable" : "not acceptable") + "\n";
    }
    emit_recipes("substitute", {{id, *result}}, extra, head);
    return acceptable ? ok : negative;
  }

  int plan(const std::string& id, const std::vector<std::string>& missing, const std::string& x_ref,
           const std::string& distances_path, const std::string& aggregation, int radius, std::size_t max_secondary) {
    require_not_dot("plan");
    const Recipe r = bundle().recipe(id);
    const AcceptabilitySet x = accept_ref(x_ref);
    CostModel model;
    model.distance = distances_path.empty()
                         ? bundle().distances
                         : distances_from_json(parse_json_text(detail::read_file(distances_path), distances_path), h(),
                                               distances_path);
    if (aggregation == "max")
      model.aggregation = Aggregation::max;
    else if (aggregation != "sum")
      throw Error(ErrorCode::schema_error, "aggregation must be 'sum' or 'max'");

    Unavailable unavailable;
    for (const auto& m : missing) {
      if (r.contains(NodeId(m))) {
        unavailable.nodes.insert(NodeId(m));
      } else if (auto t = h().comestible.find(m)) {
        unavailable.types.insert(*t);
      } else if (auto a = h().action.find(m)) {
        unavailable.types.insert(*a);
      } else {
        std::string spaced = m;
        std::replace(spaced.begin(), spaced.end(), '_', ' ');
        auto c = h().comestible.find(spaced);
        auto act = h().action.find(spaced);
        if (!c && !act) throw Error(ErrorCode::unknown_type, "'" + m + "' is neither a node of " + id + " nor a type");
        unavailable.types.insert(c ? *c : *act);
      }
    }
    const auto candidates = default_candidates(r, x, h(), radius);
    const auto pair = preferred_pair(r, unavailable, x, model, h(), candidates, {budget(), max_secondary});
    if (!pair) {
      emit("plan", {{"found", false}}, "no acceptable substitution pair within the candidate space\n");
      return negative;
    }
    const double c = cost(*pair, r, model, h());
    json j = {{"found", true},
              {"primary", detail::bindings(pair->primary)},
              {"secondary", detail::bindings(pair->secondary)},
              {"cost", c},
              {"aggregation", aggregation},
              {"recipe", recipe_to_json(retype(r, pair->combined()))}};
    std::ostringstream human;
    human << "primary: " << detail::human_bindings(pair->primary) << "\n"
          << "secondary: " << detail::human_bindings(pair->secondary) << "\n"
          << "cost: " << c << "\n";
    emit("plan", j, human.str());
    return ok;
  }

  int rewrite(const std::string& id, const std::string& remove, const std::string& insert, bool nonempty_front) {
    const Recipe r = bundle().recipe(id);
    const Recipe r1 = recipe_ref(remove), r2 = recipe_ref(insert);
    auto result = structural_substitute(r, r1, r2, h(), {nonempty_front});
    if (!result) {
      require_not_dot("rewrite (failed)");
      emit("rewrite", {{"rewritten", false}, {"violated", failure_json(result.error())}},
           "rewrite failed: " + result.error().describe() + "\n");
      return negative;
    }
    return emit_recipes("rewrite", {{id, *result}}, {{"rewritten", true}});
  }

  json failure_json(const RewriteFailure& f) {
    json out = json::array();
    for (const auto& v : f.violated) out.push_back({{"condition", v.condition}, {"detail", v.detail}});
    return out;
  }

  std::vector<RewriteStep> steps(const json& j, const std::string& path) {
    std::vector<RewriteStep> out;
    if (!j.is_array()) throw Error(ErrorCode::schema_error, path + ": expected an array of steps");
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      if (!j[i].is_object() || !j[i].contains("remove") || !j[i].contains("insert"))
        throw Error(ErrorCode::schema_error, p + ": expected {remove, insert}");
      out.push_back({recipe_value(j[i]["remove"], p + ".remove"), recipe_value(j[i]["insert"], p + ".insert")});
    }
    return out;
  }

  int rewrite_seq(const std::string& id, const std::string& plan_path, const std::string& x_ref) {
    const Recipe r = bundle().recipe(id);
    const json plan = parse_json_text(detail::read_file(plan_path), plan_path);
    if (!plan.is_object()) throw Error(ErrorCode::schema_error, plan_path + ": expected an object");
    const auto primary = steps(plan.value("primary", json::array()), "$.primary");
    const auto secondary = steps(plan.value("secondary", json::array()), "$.secondary");
    const auto verdict = verify_secondary_sequence(r, primary, secondary, accept_ref(x_ref), h());
    if (verdict.failure) {
      require_not_dot("rewrite-seq (failed)");
      emit("rewrite-seq",
           {{"ok", false}, {"failed_step", verdict.failure->step}, {"violated", failure_json(verdict.failure->failure)}},
           "step " + std::to_string(verdict.failure->step) + " failed: " + verdict.failure->failure.describe() + "\n");
      return negative;
    }
    if (s_.format == "dot") {
      out_ << export_dot(*verdict.result, id);
      return verdict.ok ? ok : negative;
    }
    json unlicensed = json::array();
    for (const auto& v : verdict.unacceptable) unlicensed.push_back({v.input.value, v.action.value, v.output.value});
    emit("rewrite-seq", {{"ok", verdict.ok}, {"unlicensed", unlicensed}, {"recipe", recipe_to_json(*verdict.result)}},
         std::string(verdict.ok ? "sequence applies and the result is acceptable\n"
                                : "sequence applies but the result is not acceptable\n") +
             detail::human_recipe(*verdict.result));
    return verdict.ok ? ok : negative;
  }

  int structural_cost_cmd(const std::string& a, const std::string& b, double weight) {
    require_not_dot("structural-cost");
    const Recipe r1 = recipe_ref(a), r2 = recipe_ref(b);
    StructuralCostOptions options;
    options.edit_weight = weight;
    options.distance = bundle().distances;
    options.budget = budget();
    const auto c = structural_cost(r1, r2, h(), options);
    std::ostringstream human;
    human << "structural cost (non-normative): " << c.value << "\n";
    emit("structural-cost", {{"cost", c.value}, {"normative", c.normative}, {"matching", detail::node_map(c.matching)}},
         human.str());
    return ok;
  }

  int export_dot_cmd(const std::string& id) {
    out_ << export_dot(bundle().recipe(id), id);
    return ok;
  }

  int fmt(const std::string& output) {
    const std::string text = serialize_bundle(bundle());
    if (output.empty()) {
      out_ << text;
    } else {
      std::ofstream f(output, std::ios::binary);
      if (!f) throw Error(ErrorCode::schema_error, "cannot write '" + output + "'");
      f << text;
    }
    return ok;
  }

 private:
  Settings s_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<WorkspaceBundle> bundle_;
};

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Settings s;
  for (int i = 1; i < argc; ++i) s.argv.emplace_back(argv[i]);

  CLI::App app{"Recipe graph toolkit: validation, comparison, composition and substitution"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-b,--bundle", s.bundle_path, "Workspace bundle (JSON)");
  app.add_option("-f,--format", s.format, "Output format")->check(CLI::IsMember({"human", "json", "dot"}));
  app.add_option("--budget", s.budget, "Search budget in node expansions")->capture_default_str();

  std::vector<std::string> ids;
  std::string id, id2, relation, x_ref, distances, aggregation = "sum", remove, insert, plan_path, output;
  std::vector<std::string> binds, missing;
  bool fix_in_out = false, nonempty_front = false;
  std::size_t max_recipes = 10'000, max_nodes = 1'000, max_secondary = 0;
  int radius = 2;
  double weight = 1.0;

  auto* validate = app.add_subcommand("validate", "Check recipes against the recipe conditions");
  validate->add_option("ids", ids, "Recipe ids (default: all)");

  auto* roles = app.add_subcommand("roles", "Input, output and intermediate comestibles");
  roles->add_option("id", id)->required();

  auto* compare = app.add_subcommand("compare", "Decide a relation between two recipes");
  compare->add_option("--relation", relation, "iso | sub | equiv | io | finer | specific")
      ->required()
      ->check(CLI::IsMember({"iso", "sub", "equiv", "io", "finer", "specific"}));
  compare->add_flag("--fix-in-out", fix_in_out, "finer: map inputs and outputs to themselves");
  compare->add_option("left", id)->required();
  compare->add_option("right", id2)->required();

  auto* compose_cmd = app.add_subcommand("compose", "Compose two recipes");
  compose_cmd->add_option("left", id)->required();
  compose_cmd->add_option("right", id2)->required();

  auto* closure = app.add_subcommand("closure", "All recipes composable from the seeds");
  closure->add_option("ids", ids, "Seed recipe ids (default: all)");
  closure->add_option("--max-recipes", max_recipes)->capture_default_str();
  closure->add_option("--max-nodes", max_nodes)->capture_default_str();

  auto* decompose_cmd = app.add_subcommand("decompose", "Atomic subrecipes, one per action");
  decompose_cmd->add_option("id", id)->required();

  auto* accept = app.add_subcommand("accept", "Check a recipe against acceptability tuples");
  accept->add_option("id", id)->required();
  accept->add_option("--accept", x_ref, "Bundle acceptability set or JSON file")->required();

  auto* substitute = app.add_subcommand("substitute", "Apply a type substitution set");
  substitute->add_option("id", id)->required();
  substitute->add_option("--bind", binds, "node=type")->required();
  substitute->add_option("--accept", x_ref, "Also check acceptability");

  auto* plan = app.add_subcommand("plan", "Cheapest acceptable substitution pair");
  plan->add_option("id", id)->required();
  plan->add_option("--missing", missing, "Unavailable node ids or types");
  plan->add_option("--accept", x_ref)->required();
  plan->add_option("--distances", distances, "Distance file (default: the bundle's)");
  plan->add_option("--aggregation", aggregation)->check(CLI::IsMember({"sum", "max"}))->capture_default_str();
  plan->add_option("--radius", radius, "Hierarchy radius for candidate types")->capture_default_str();
  plan->add_option("--max-secondary", max_secondary, "Largest secondary set (0 = no limit)")->capture_default_str();

  auto* rewrite = app.add_subcommand("rewrite", "Structural substitution R[R1/R2]");
  rewrite->add_option("id", id)->required();
  rewrite->add_option("--remove", remove, "Bundle recipe id or JSON file")->required();
  rewrite->add_option("--insert", insert, "Bundle recipe id or JSON file")->required();
  rewrite->add_flag("--require-front", nonempty_front, "Refuse replacements with an empty front");

  auto* rewrite_seq = app.add_subcommand("rewrite-seq", "Apply primary and secondary rewrite steps");
  rewrite_seq->add_option("id", id)->required();
  rewrite_seq->add_option("plan", plan_path, "JSON {primary: [...], secondary: [...]}")->required();
  rewrite_seq->add_option("--accept", x_ref)->required();

  auto* scost = app.add_subcommand("structural-cost", "Edit-distance style cost between two recipes");
  scost->add_option("left", id)->required();
  scost->add_option("right", id2)->required();
  scost->add_option("--edit-weight", weight)->capture_default_str();

  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of a recipe");
  dot->add_option("id", id)->required();

  auto* fmt = app.add_subcommand("fmt", "Print the bundle in canonical form");
  fmt->add_option("-o,--output", output, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : input_error;
  }

  Runner runner(s, out, err);
  try {
    if (validate->parsed()) return runner.validate(ids);
    if (roles->parsed()) return runner.roles(id);
    if (compare->parsed()) return runner.compare(relation, id, id2, fix_in_out);
    if (compose_cmd->parsed()) return runner.compose_cmd(id, id2);
    if (closure->parsed()) return runner.closure(ids, max_recipes, max_nodes);
    if (decompose_cmd->parsed()) return runner.decompose_cmd(id);
    if (accept->parsed()) return runner.accept(id, x_ref);
    if (substitute->parsed()) return runner.substitute(id, binds, x_ref);
    if (plan->parsed()) return runner.plan(id, missing, x_ref, distances, aggregation, radius, max_secondary);
    if (rewrite->parsed()) return runner.rewrite(id, remove, insert, nonempty_front);
    if (rewrite_seq->parsed()) return runner.rewrite_seq(id, plan_path, x_ref);
    if (scost->parsed()) return runner.structural_cost_cmd(id, id2, weight);
    if (dot->parsed()) return runner.export_dot_cmd(id);
    if (fmt->parsed()) return runner.fmt(output);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::budget_exceeded ? exhausted : input_error;
  }
  return input_error;
}

}  // namespace recipe::cli
