// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace recipe;
using namespace recipe::literals;

namespace {

/// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

const WorkspaceBundle& ws() { return fixtures::bundle(); }
const Hierarchies& H() { return fixtures::h(); }
Recipe get(const std::string& id) { return fixtures::get(id); }

const Hierarchies& syn() {
  static const Hierarchies h = gen::synthetic_hierarchies();
  return h;
}

void figure_fixtures(Check& c) {
  const Recipe fig4 = get("fig4");
  c.expect(fig4.inputs() == NodeSet{"c0"_n, "c1"_n, "c3"_n, "c4"_n}, "fig4 inputs");
  c.expect(fig4.outputs() == NodeSet{"c6"_n, "c8"_n}, "fig4 outputs");
  c.expect(fig4.mids() == NodeSet{"c2"_n, "c5"_n, "c7"_n}, "fig4 intermediates");
  c.expect(get("fig3").is_atomic(), "fig3 atomic");
  c.expect(equivalent(get("fig5a"), get("fig5b")).has_value(), "fig5 equivalent");
  c.expect(in_out_aligned(fig4, get("fig6")), "fig4/fig6 in-out aligned");
  c.expect(finer_grained(fig4, get("fig6")).has_value(), "finer_grained(fig4, fig6) witness");
  c.expect(more_specific(get("fig7b"), get("fig7a"), H()).has_value(), "fig7 bottom more specific");
  c.expect(!more_specific(get("fig7a"), get("fig7b"), H()).has_value(), "fig7 top not more specific");
}

void negative_fixtures(Check& c) {
  const auto v = validate_recipe_graph(bipartite_union(get("fig9a").graph(), get("fig9b").graph()));
  c.expect(v.size() == 1 && v[0].condition == 3 && v[0].detail.find("cycle") != std::string::npos,
           "fig8 union fails with a cycle");

  auto conditions = [&](const Recipe& a, const Recipe& b) {
    auto r = compose(a, b, H());
    return r ? std::vector<int>{} : r.error().conditions();
  };
  c.expect(conditions(get("fig9a"), get("fig9b")) == std::vector<int>{4}, "fig9 fails exactly condition 4");

  const Recipe r1 = get("fig11r1"), r2 = get("fig11r2"), r3 = get("fig11r3");
  auto r23 = compose(r2, r3, H());
  c.expect(r23.has_value(), "fig11 R2+R3 succeeds");
  if (r23) c.expect(compose(r1, *r23, H()).has_value(), "fig11 R1+(R2+R3) succeeds");
  c.expect(!compose(r1, r2, H()).has_value(), "fig11 R1+R2 fails");

  auto p12 = compose(get("peas1"), get("peas2"), H());
  c.expect(p12.has_value(), "peas1+peas2 succeeds");
  if (!p12) return;
  auto p123 = compose(*p12, get("peas3"), H());
  c.expect(p123.has_value(), "peas chain to refrozen succeeds");
  if (p123) c.expect(conditions(*p123, get("peas4")) == std::vector<int>{6}, "peas extension fails condition 6");
}

void table_rows(Check& c) {
  const Recipe r = get("table1");
  const auto& x = ws().accept("table1");
  const Recipe f1 = retype(r, {{"c1"_n, "raw onion"_t}});
  const Recipe f2 = retype(f1, {{"c2"_n, "chopped onion"_t}});
  c.expect(f1.typing() == get("table1_row2").typing(), "row F' typing");
  c.expect(f2.typing() == get("table1_row3").typing(), "row F'' typing");
  c.expect(is_acceptable(r, x, H()), "row F acceptable");
  c.expect(!is_acceptable(f1, x, H()), "row F' not acceptable");
  c.expect(is_acceptable(f2, x, H()), "row F'' acceptable");
}

void rewrites(Check& c) {
  auto step = [&](const Recipe& r, const std::string& a, const std::string& b) -> std::optional<Recipe> {
    auto out = structural_substitute(r, get(a), get(b), H());
    if (!out) {
      c.expect(false, a + " -> " + b + ": " + out.error().describe());
      return std::nullopt;
    }
    c.expect(is_valid_recipe(*out, H()), a + " -> " + b + " result validates");
    return *out;
  };
  if (auto out = step(get("fig12r"), "fig12r1", "fig12r2")) c.expect(*out == get("fig12result"), "fig12 result");
  if (auto out = step(get("fig12r"), "fig13r1", "fig13r2")) c.expect(*out == get("fig13result"), "fig13 result");
  if (auto mid = step(get("fig4"), "fig14r1", "fig14r2"))
    if (auto out = step(*mid, "fig14r1s", "fig14r2s")) {
      c.expect(*out == get("fig14result"), "fig14 result");
      c.expect(is_acceptable(*out, ws().accept("bolognese"), H()), "fig14 result acceptable");
    }
}

void properties(Check& c) {
  std::mt19937_64 rng(20240601);
  int rewritten = 0, closed = 0;
  // Draw until 250 clean rewrite triples, each sample also feeding the
  // other laws; the cap keeps a broken generator from looping forever.
  for (int i = 0; i < 2000 && rewritten < 250; ++i) {
    const Recipe r = gen::random_recipe(rng);
    const std::string tag = "sample " + std::to_string(i) + ": ";
    c.expect(r.node_count() <= 12 && is_valid_recipe(r, syn()), tag + "generator");

    // substitution laws
    SubstitutionSet t1, t2;
    for (const auto& n : r.nodes()) {
      const bool act = r.kind_of(n) == Kind::action;
      auto type = [&] {
        return TypeId(act ? "y" + std::to_string(rng() % 18) : "k" + std::to_string(rng() % 60));
      };
      if (rng() % 3 == 0) t1[n] = type();
      if (rng() % 3 == 0) t2[n] = type();
    }
    SubstitutionSet merged = t1;
    for (const auto& [n, t] : t2) merged[n] = t;
    c.expect(retype(r, {}) == r, tag + "empty substitution");
    c.expect(retype(retype(r, t1), t2) == retype(r, merged), tag + "substitution associativity");
    NodeBijection identity;
    for (const auto& n : r.nodes()) identity[n] = n;
    const Recipe s = retype(r, t1);
    c.expect(retype(s, substitution_to(s, r, identity)) == r, tag + "substitution reversibility");
    c.expect(retype(r, substitution_to(r, r, identity)) == r, tag + "substitution reflexivity");

    // decomposition and composition
    // A comestible feeding two actions leaves atoms that share only inputs,
    // which composition cannot join, so only single-consumer recipes qualify.
    const auto parts = decompose(r);
    if (gen::single_consumer(r)) {
      const auto closure = compose_closure(parts, syn());
      c.expect(!closure.truncated && std::find(closure.recipes.begin(), closure.recipes.end(), r) != closure.recipes.end(),
               tag + "R in closure(decompose(R))");
      ++closed;
    }
    for (const auto& a : parts)
      for (const auto& b : parts) {
        auto ab = compose(a, b, syn());
        if (!ab) continue;
        c.expect(is_valid_recipe(*ab, syn()), tag + "composition validates");
        c.expect(!compose(b, a, syn()).has_value(), tag + "composition one-way");
      }

    // structural substitution
    auto sub = gen::induced_by_actions(r, gen::random_actions(rng, r), syn());
    if (!sub) continue;
    auto same = structural_substitute(r, *sub, *sub, syn());
    c.expect(same && *same == r, tag + "R[R1/R1] = R");
    const Recipe repl = gen::replacement_for(rng, r, *sub, "n");
    auto out = structural_substitute(r, *sub, repl, syn());
    if (!gen::cleanly_removable(r, *sub)) {
      c.expect(!out && out.error().violated.front().condition == "result", tag + "stranded arc refused");
      continue;
    }
    c.expect(out.has_value(), tag + "replacement applies");
    if (!out) continue;
    ++rewritten;
    c.expect(is_valid_recipe(*out, syn()), tag + "replacement validates");
    auto back = structural_substitute(*out, repl, *sub, syn());
    c.expect(back && *back == r, tag + "(R[R1/R2])[R2/R1] = R");
  }
  c.expect(rewritten == 250, "250 generated rewrite triples (got " + std::to_string(rewritten) + ")");
  c.expect(closed >= 100, "at least 100 closure round trips (got " + std::to_string(closed) + ")");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void oracles(Check& c) {
  std::mt19937_64 rng(7);
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 200; ++i) {
    const Recipe r = gen::random_recipe(rng, {.max_nodes = 8, .max_actions = 3});
    std::vector<std::pair<Recipe, Recipe>> pairs{{r, r}};
    if (auto m = gen::merge_step(rng, r, syn())) pairs.insert(pairs.end(), {{r, *m}, {*m, r}});
    if (auto s = gen::swap_producers(rng, r, syn())) pairs.insert(pairs.end(), {{r, *s}, {*s, r}});
    for (const auto& [a, b] : pairs)
      for (bool fix : {false, true})
        c.expect(finer_grained(a, b, {.fix_in_out = fix}).has_value() == oracle::finer_grained(a, b, fix),
                 "finer_grained disagreement on sample " + std::to_string(i));
  }
  c.expect(seconds_since(t0) < 60, "finer_grained oracle suite under 60 s");

  t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 300; ++i) {
    const Recipe a = gen::random_recipe(rng, {.max_nodes = 7, .max_actions = 3});
    const Recipe b = gen::random_recipe(rng, {.max_nodes = 7, .max_actions = 3});
    c.expect(isomorphic(a, b).has_value() == oracle::isomorphic(a, b), "isomorphism disagreement " + std::to_string(i));
    c.expect(isomorphic(a, a).has_value(), "isomorphism reflexive " + std::to_string(i));
  }
  c.expect(seconds_since(t0) < 60, "isomorphism oracle suite under 60 s");

  t0 = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 150; ++trial) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const Recipe r = gen::random_recipe(rng, {.max_nodes = 5, .max_actions = 2});
    Candidates candidates;
    for (const auto& n : r.nodes()) {
      std::set<TypeId> ts;
      const bool act = r.kind_of(n) == Kind::action;
      const int k = pick(1, 4);
      while (static_cast<int>(ts.size()) < k) {
        TypeId t(act ? "y" + std::to_string(pick(0, 17)) : "k" + std::to_string(pick(0, 59)));
        if (t != r.type_of(n)) ts.insert(t);
      }
      candidates[n].assign(ts.begin(), ts.end());
    }
    AcceptabilitySet x;
    const auto triples = arc_triples(r);
    auto any_type = [&](const NodeId& n) {
      const auto& cs = candidates[n];
      const int i = pick(0, static_cast<int>(cs.size()));
      return i == static_cast<int>(cs.size()) ? r.type_of(n) : cs[i];
    };
    for (int i = 0; i < 8; ++i) {
      const auto& [a, act, b] = triples[pick(0, static_cast<int>(triples.size()) - 1)];
      x.tuples.insert({any_type(a), any_type(act), any_type(b)});
    }
    CostModel model;
    for (const auto& [n, ts] : candidates)
      for (const auto& t : ts)
        if (pick(0, 1)) model.distance.set(r.type_of(n), t, pick(1, 9) / 10.0);
    const NodeSet node_set = r.nodes();
    std::vector<NodeId> nodes(node_set.begin(), node_set.end());
    std::shuffle(nodes.begin(), nodes.end(), rng);
    Unavailable missing;
    const int m = pick(1, std::min<int>(4, static_cast<int>(nodes.size())));
    for (int i = 0; i < m; ++i) missing.nodes.insert(nodes[i]);
    const std::vector<NodeId> targets(missing.nodes.begin(), missing.nodes.end());
    const auto truth = oracle::preferred_cost(r, targets, candidates, candidates, x, model, syn());
    const auto got = preferred_pair(r, missing, x, model, syn(), candidates);
    const std::string tag = "preferred_pair trial " + std::to_string(trial);
    c.expect(got.has_value() == truth.has_value(), tag + " existence");
    if (got && truth) c.expect(std::abs(cost(*got, r, model, syn()) - *truth) <= 1e-9, tag + " cost");
  }
  c.expect(seconds_since(t0) < 60, "preferred_pair oracle suite under 60 s");
}

void closures(Check& c) {
  const auto peas = compose_closure({get("peas1"), get("peas2"), get("peas3")}, H());
  c.expect(!peas.truncated && peas.recipes.size() == 6, "peas closure has 6 recipes");

  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    // atomics from two independent recipes sharing node ids, at most six in all
    std::vector<Recipe> seeds;
    for (const auto& r : {gen::random_recipe(rng, {.max_nodes = 12, .max_actions = 3}),
                          gen::random_recipe(rng, {.max_nodes = 12, .max_actions = 3})})
      for (const auto& a : decompose(r))
        if (seeds.size() < 6) seeds.push_back(a);
    const auto closure = compose_closure(seeds, syn());
    const std::set<Recipe> distinct(closure.recipes.begin(), closure.recipes.end());
    c.expect(!closure.truncated, "closure " + std::to_string(i) + " within limits");
    c.expect(distinct.size() == closure.recipes.size(), "closure " + std::to_string(i) + " duplicate-free");
  }
}

void round_trip(Check& c) {
  c.expect(serialize_bundle(parse_bundle(fixtures::bundle_text())) == fixtures::bundle_text(),
           "bundle serializes byte-identically");
  for (const char* id : {"fig3", "fig4"})
    c.expect(export_dot(get(id), id) == fixtures::read_text(std::string("tests/golden/") + id + ".dot"),
             std::string("DOT golden ") + id);
}

}  // namespace

int main(int argc, char** argv) {
  // --verbose lists every failed check instead of the first one
  const bool verbose = argc > 1 && std::string(argv[1]) == "--verbose";
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"1 figure fixtures", figure_fixtures},
      {"2 negative fixtures", negative_fixtures},
      {"3 substitution table rows", table_rows},
      {"4 structural substitutions", rewrites},
      {"5 property suites", properties},
      {"6 oracle equivalence", oracles},
      {"7 closure finiteness", closures},
      {"8 round-trip I/O", round_trip},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    std::cout << (c.failures.empty() ? "PASS" : "FAIL") << "  criterion " << name << "  (" << secs << " s)";
    if (!c.failures.empty()) {
      ++failed;
      std::cout << "  " << c.failures.size() << " failed check(s), first: " << c.failures.front();
      if (verbose)
        for (const auto& f : c.failures) std::cout << "\n    " << f;
    }
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
