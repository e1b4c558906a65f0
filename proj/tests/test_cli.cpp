#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "cli_app.hpp"
#include "support/fixtures.hpp"

using namespace recipe;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args, bool with_bundle = true) {
  std::vector<std::string> all{"recipe"};
  if (with_bundle) {
    all.push_back("--bundle");
    all.push_back(fixtures::source_path("data/paper_bundle.json"));
  }
  all.insert(all.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : all) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json result_of(const Outcome& o) { return json::parse(o.out).at("result"); }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Cli, RolesAsJson) {
  const auto o = run_cli({"--format", "json", "roles", "fig4"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = json::parse(o.out);
  EXPECT_EQ(j["invocation"]["subcommand"], "roles");
  EXPECT_EQ(j["result"]["in"], json({"c0", "c1", "c3", "c4"}));
  EXPECT_EQ(j["result"]["out"], json({"c6", "c8"}));
  EXPECT_EQ(j["result"]["mid"], json({"c2", "c5", "c7"}));
}

TEST(Cli, GlobalOptionsMayFollowTheSubcommand) {
  const auto o = run_cli({"roles", "fig4", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(result_of(o)["atomic"], false);
}

TEST(Cli, ValidateReportsInvalidRecipe) {
  EXPECT_EQ(run_cli({"validate", "fig3", "fig4"}).code, 0);
  const auto bad = run_cli({"validate", "empty"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("condition 1"), std::string::npos);
}

TEST(Cli, CompareExitCodes) {
  EXPECT_EQ(run_cli({"compare", "--relation", "specific", "fig7b", "fig7a"}).code, 0);
  EXPECT_EQ(run_cli({"compare", "--relation", "specific", "fig7a", "fig7b"}).code, 1);
  const auto o = run_cli({"-f", "json", "compare", "--relation", "equiv", "fig5a", "fig5b"});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(result_of(o)["witness"]["c1"], "c7");
  EXPECT_EQ(run_cli({"compare", "--relation", "finer", "--fix-in-out", "fig13result", "fig12r"}).code, 0);
  EXPECT_EQ(run_cli({"compare", "--relation", "nonsense", "fig3", "fig3"}).code, 2);
}

TEST(Cli, ComposeFailureListsConditions) {
  const auto o = run_cli({"-f", "json", "compose", "fig9a", "fig9b"});
  EXPECT_EQ(o.code, 1);
  const auto v = result_of(o)["violated"];
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0]["condition"], 4);
  EXPECT_EQ(run_cli({"compose", "fig10a", "fig10b"}).code, 0);
}

TEST(Cli, ClosureAndTruncation) {
  const auto o = run_cli({"-f", "json", "closure", "peas1", "peas2", "peas3"});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(result_of(o)["recipes"].size(), 6u);
  EXPECT_EQ(run_cli({"closure", "peas1", "peas2", "peas3", "--max-recipes", "4"}).code, 3);
}

TEST(Cli, AcceptAndPlan) {
  EXPECT_EQ(run_cli({"accept", "fig4", "--accept", "spaghetti_pasata"}).code, 0);
  EXPECT_EQ(run_cli({"accept", "fig4", "--accept", "bolognese"}).code, 1);
  const auto o = run_cli({"-f", "json", "plan", "table1", "--missing", "c1", "--accept", "table1"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto r = result_of(o);
  EXPECT_EQ(r["primary"], json({{"c1", "raw onion"}}));
  EXPECT_EQ(r["secondary"], json({{"c2", "chopped onion"}}));
  EXPECT_NEAR(r["cost"].get<double>(), 0.8, 1e-9);
}

TEST(Cli, PlanBudgetExhaustion) {
  const auto o = run_cli({"--budget", "3", "plan", "soup_veg", "--missing", "raw carrot", "barley", "--accept", "veg_soup"});
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find("BudgetExceeded"), std::string::npos);
}

TEST(Cli, SubstituteChecksTyping) {
  EXPECT_EQ(run_cli({"substitute", "fig7a", "--bind", "a1=fry for 4 min"}).code, 0);
  EXPECT_EQ(run_cli({"substitute", "fig10result", "--bind", "c3=vegetable"}).code, 1);
  EXPECT_EQ(run_cli({"substitute", "fig7a", "--bind", "a1=unicorn"}).code, 2);
}

TEST(Cli, RewriteAndSequence) {
  const auto o = run_cli({"-f", "json", "rewrite", "fig12r", "--remove", "fig12r1", "--insert", "fig12r2"});
  ASSERT_EQ(o.code, 0) << o.err;
  json expected = recipe_to_json(fixtures::get("fig12result"));
  expected["id"] = "fig12r";
  EXPECT_EQ(result_of(o)["recipes"][0], expected);
  EXPECT_EQ(run_cli({"rewrite", "fig12r", "--remove", "fig12r1", "--insert", "fig14r2"}).code, 1);

  const auto plan = temp_file("recipe_cli_plan.json",
                              R"({"primary": [{"remove": "fig14r1", "insert": "fig14r2"}],
                                  "secondary": [{"remove": "fig14r1s", "insert": "fig14r2s"}]})");
  const auto seq = run_cli({"-f", "json", "rewrite-seq", "fig4", plan, "--accept", "bolognese"});
  ASSERT_EQ(seq.code, 0) << seq.err;
  EXPECT_EQ(result_of(seq)["ok"], true);
  std::filesystem::remove(plan);
}

TEST(Cli, ExportDotMatchesLibrary) {
  const auto o = run_cli({"export-dot", "fig3"});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(o.out, export_dot(fixtures::get("fig3"), "fig3"));
}

TEST(Cli, FmtReproducesBundle) {
  const auto o = run_cli({"fmt"});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(o.out, fixtures::bundle_text());
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run_cli({"roles", "nope"}).code, 2);
  EXPECT_EQ(run_cli({"roles", "fig4"}, false).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"--format", "dot", "roles", "fig4"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}
