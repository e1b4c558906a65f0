#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace recipe;
using namespace recipe::literals;

namespace {

const Hierarchies& syn() {
  static const Hierarchies h = gen::synthetic_hierarchies();
  return h;
}

/// Same recipe with node ids permuted.
Recipe relabel(std::mt19937_64& rng, const Recipe& r) {
  std::vector<NodeId> coms(r.coms().begin(), r.coms().end()), acts(r.acts().begin(), r.acts().end());
  auto shuffled_c = coms, shuffled_a = acts;
  std::shuffle(shuffled_c.begin(), shuffled_c.end(), rng);
  std::shuffle(shuffled_a.begin(), shuffled_a.end(), rng);
  std::map<NodeId, NodeId> to;
  for (std::size_t i = 0; i < coms.size(); ++i) to[coms[i]] = NodeId("p" + shuffled_c[i].value);
  for (std::size_t i = 0; i < acts.size(); ++i) to[acts[i]] = NodeId("p" + shuffled_a[i].value);
  RecipeGraph g;
  Typing t;
  for (const auto& c : coms) g.comestibles.insert(to[c]);
  for (const auto& a : acts) g.actions.insert(to[a]);
  for (const auto& arc : r.arcs()) g.arcs.insert({to[arc.from], to[arc.to]});
  for (const auto& [n, ty] : r.typing()) t[to[n]] = ty;
  return Recipe::unchecked(std::move(g), std::move(t));
}

std::string shape(const Recipe& r) {
  return std::to_string(r.coms().size()) + "/" + std::to_string(r.acts().size()) + "/" +
         std::to_string(r.arcs().size());
}

}  // namespace

TEST(Oracles, IsomorphismMatchesPermutationSearch) {
  std::mt19937_64 rng(21);
  std::map<std::string, std::vector<Recipe>> by_shape;
  for (int i = 0; i < 300; ++i) {
    Recipe r = gen::random_recipe(rng, {.max_nodes = 7, .max_actions = 3});
    by_shape[shape(r)].push_back(r);
  }
  int positives = 0, negatives = 0;
  for (const auto& [s, rs] : by_shape) {
    for (std::size_t i = 0; i < rs.size() && i < 8; ++i) {
      const Recipe moved = relabel(rng, rs[i]);
      EXPECT_TRUE(oracle::isomorphic(rs[i], moved));
      EXPECT_TRUE(isomorphic(rs[i], moved));
      for (std::size_t j = i + 1; j < rs.size() && j < 8; ++j) {
        const bool truth = oracle::isomorphic(rs[i], rs[j]);
        EXPECT_EQ(isomorphic(rs[i], rs[j]).has_value(), truth);
        (truth ? positives : negatives)++;
      }
    }
  }
  EXPECT_GT(positives, 0);
  EXPECT_GT(negatives, 0);
}

TEST(Oracles, FinerGrainedMatchesExhaustiveMaps) {
  std::mt19937_64 rng(22);
  int yes = 0, no = 0;
  for (int i = 0; i < 200; ++i) {
    const Recipe r = gen::random_recipe(rng, {.max_nodes = 8, .max_actions = 3});
    std::vector<std::pair<Recipe, Recipe>> pairs{{r, r}};
    if (auto m = gen::merge_step(rng, r, syn())) {
      pairs.emplace_back(r, *m);
      pairs.emplace_back(*m, r);
    }
    if (auto s = gen::swap_producers(rng, r, syn())) {
      pairs.emplace_back(r, *s);
      pairs.emplace_back(*s, r);
    }
    for (const auto& [a, b] : pairs)
      for (bool fix : {false, true}) {
        const bool truth = oracle::finer_grained(a, b, fix);
        const auto got = finer_grained(a, b, {.fix_in_out = fix});
        EXPECT_EQ(got.has_value(), truth);
        (truth ? yes : no)++;
      }
  }
  EXPECT_GT(yes, 0);
  EXPECT_GT(no, 0);
}

TEST(Oracles, PreferredPairMatchesExhaustiveSearch) {
  std::mt19937_64 rng(23);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int found = 0, none = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const Recipe r = gen::random_recipe(rng, {.max_nodes = 4, .max_actions = 1});
    // up to four alternative types per node, with an occasional inner type
    Candidates candidates;
    for (const auto& n : r.nodes()) {
      std::set<TypeId> ts;
      const bool act = r.kind_of(n) == Kind::action;
      const int k = pick(1, 4);
      while (static_cast<int>(ts.size()) < k) {
        TypeId t(act ? (pick(0, 5) == 0 ? "x" + std::to_string(pick(0, 5)) : "y" + std::to_string(pick(0, 17)))
                     : (pick(0, 5) == 0 ? "g" + std::to_string(pick(0, 4)) : "k" + std::to_string(pick(0, 59))));
        if (t != r.type_of(n)) ts.insert(t);
      }
      candidates[n].assign(ts.begin(), ts.end());
    }
    // licensed tuples drawn from the candidate space plus current types
    AcceptabilitySet x;
    const auto triples = arc_triples(r);
    auto any_type = [&](const NodeId& n) {
      const auto& c = candidates[n];
      const int i = pick(0, static_cast<int>(c.size()));
      return i == static_cast<int>(c.size()) ? r.type_of(n) : c[i];
    };
    for (int i = 0; i < 6; ++i) {
      const auto& [c, a, c2] = triples[pick(0, static_cast<int>(triples.size()) - 1)];
      x.tuples.insert({any_type(c), any_type(a), any_type(c2)});
    }
    CostModel model;
    model.aggregation = pick(0, 1) ? Aggregation::sum : Aggregation::max;
    for (const auto& [n, ts] : candidates)
      for (const auto& t : ts)
        if (pick(0, 1)) model.distance.set(r.type_of(n), t, pick(1, 9) / 10.0);

    // one or two unavailable nodes
    const NodeSet node_set = r.nodes();
    std::vector<NodeId> nodes(node_set.begin(), node_set.end());
    std::shuffle(nodes.begin(), nodes.end(), rng);
    Unavailable missing;
    const int m = pick(1, 2);
    for (int i = 0; i < m; ++i) missing.nodes.insert(nodes[i]);
    const std::vector<NodeId> targets(missing.nodes.begin(), missing.nodes.end());

    const auto truth = oracle::preferred_cost(r, targets, candidates, candidates, x, model, syn());
    const auto got = preferred_pair(r, missing, x, model, syn(), candidates);
    ASSERT_EQ(got.has_value(), truth.has_value()) << "trial " << trial;
    if (!got) {
      ++none;
      continue;
    }
    ++found;
    EXPECT_NEAR(cost(*got, r, model, syn()), *truth, 1e-9) << "trial " << trial;
    const Recipe out = retype(r, got->combined());
    EXPECT_TRUE(check_typing(out.graph(), out.typing(), syn()).empty());
    EXPECT_TRUE(is_acceptable(out, x, syn()));
    for (const auto& n : targets) EXPECT_TRUE(got->primary.count(n));
  }
  EXPECT_GT(found, 10);
  EXPECT_GT(none, 0);
}

TEST(Oracles, StructuralCostOfInstantMashSwap) {
  DistanceModel zero;
  zero.step_cost = 0;
  zero.generalization_penalty = 0;
  StructuralCostOptions options;
  options.distance = zero;
  const auto c = structural_cost(fixtures::get("fig12r1"), fixtures::get("fig12r2"), fixtures::h(), options);
  EXPECT_DOUBLE_EQ(c.value, 4.0);
  EXPECT_DOUBLE_EQ(oracle::structural_cost(fixtures::get("fig12r1"), fixtures::get("fig12r2"), fixtures::h(), 1.0, zero),
                   4.0);
}

TEST(Oracles, StructuralCostMatchesExhaustiveMatching) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 80; ++i) {
    const Recipe a = gen::random_recipe(rng, {.max_nodes = 5, .max_actions = 2}, "l");
    const Recipe b = gen::random_recipe(rng, {.max_nodes = 5, .max_actions = 2}, "r");
    StructuralCostOptions options;
    options.edit_weight = 0.5 + (i % 3);
    EXPECT_NEAR(structural_cost(a, b, syn(), options).value,
                oracle::structural_cost(a, b, syn(), options.edit_weight, options.distance), 1e-9);
  }
}

TEST(Oracles, ExpansionMatchesTripleEnumeration) {
  for (int depth : {0, 1, 2}) {
    for (SlotMask slots : {SlotMask{}, SlotMask{true, false, true}, SlotMask{false, true, false}}) {
      AcceptabilitySet x = fixtures::bundle().accept("salads");
      x.depth_limit = depth;
      x.slots = slots;
      EXPECT_EQ(expand_tuples(x, fixtures::h()).tuples, oracle::licensed_by_enumeration(x, fixtures::h()))
          << "depth " << depth;
    }
  }
}
