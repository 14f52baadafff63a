#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "maid/core.hpp"
#include "maid/equilibrium.hpp"
#include "maid/templates.hpp"

using namespace maid;

namespace {

Maid matching_pennies() {
  Maid m;
  m.agents = {"A", "B"};
  Node da, db, ua, ub;
  da.id = "D_A";
  da.kind = NodeKind::Decision;
  da.owners = {"A"};
  da.domain = {"h", "t"};
  db = da;
  db.id = "D_B";
  db.owners = {"B"};
  ua.id = "U_A";
  ua.kind = NodeKind::Utility;
  ua.owners = {"A"};
  ua.parents = {"D_A", "D_B"};
  ua.table = {1, 0, 0, 1};  // matcher
  ub = ua;
  ub.id = "U_B";
  ub.owners = {"B"};
  ub.table = {0, 1, 1, 0};  // mismatcher
  m.nodes = {da, db, ua, ub};
  return build_maid(m);
}

double total_at(const Maid& m, const StrategyProfile& p) {
  double t = 0;
  std::set<std::string> seen;
  for (const auto& agent : m.agents) t += expected_utility(m, p, agent);
  return t;
}

}  // namespace

TEST_CASE("enumerate_rules: deterministic grid shape and order") {
  Maid m = tree_killer_maid();
  RuleGridConfig grid;
  auto rules = enumerate_rules(m, "PoisonTree", grid);  // no parents, binary
  REQUIRE(rules.size() == 2);
  CHECK(rules[0].table == std::vector<double>{1, 0});
  CHECK(rules[1].table == std::vector<double>{0, 1});

  auto rules2 = enumerate_rules(m, "TreeDoctor", grid);  // one binary parent
  REQUIRE(rules2.size() == 4);
  CHECK(rules2[0].table == std::vector<double>{1, 0, 1, 0});
  CHECK(rules2[3].table == std::vector<double>{0, 1, 0, 1});

  CHECK_THROWS_WITH_AS(enumerate_rules(m, "TreeSick", grid), doctest::Contains("NotADecision"),
                       MaidError);
  RuleGridConfig tiny;
  tiny.per_decision_cap = 3;
  CHECK_THROWS_WITH_AS(enumerate_rules(m, "TreeDoctor", tiny),
                       doctest::Contains("GridTooLarge"), MaidError);
}

TEST_CASE("enumerate_rules: simplex grid with mix_step") {
  Maid m = logistics_maid();
  RuleGridConfig grid;
  grid.mix_step = 0.5;
  auto rules = enumerate_rules(m, "D_A", grid);
  REQUIRE(rules.size() == 3);
  CHECK(rules[1].table == std::vector<double>{0.5, 0.5});
}

TEST_CASE("logistics: exactly two pure equilibria with totals 18 and 10") {
  Maid m = logistics_maid();
  RuleGridConfig grid;
  auto ns = enumerate_nash(m, grid);
  REQUIRE(ns.equilibria.size() == 2);
  REQUIRE(ns.weights.size() == 2);
  CHECK(ns.weights[0] == doctest::Approx(0.5));
  std::vector<double> totals;
  for (const auto& p : ns.equilibria) totals.push_back(total_at(m, p));
  std::sort(totals.begin(), totals.end());
  CHECK(totals[0] == doctest::Approx(10.0));
  CHECK(totals[1] == doctest::Approx(18.0));
  for (const auto& p : ns.equilibria) CHECK(is_nash(m, p, grid));
}

TEST_CASE("is_nash rejects non-equilibrium and partial profiles") {
  Maid m = logistics_maid();
  RuleGridConfig grid;
  StrategyProfile off;
  off.rules["D_A"] = {"D_A", {1, 0}};
  off.rules["D_B"] = {"D_B", {0, 1}};  // (space, speed) pays (3, 6): B deviates
  CHECK_FALSE(is_nash(m, off, grid));
  StrategyProfile partial;
  partial.rules["D_A"] = {"D_A", {1, 0}};
  CHECK_THROWS_WITH_AS(is_nash(m, partial, grid), doctest::Contains("PartialProfile"),
                       MaidError);
}

TEST_CASE("best_response is idempotent and keeps the other rules") {
  Maid m = logistics_maid();
  RuleGridConfig grid;
  StrategyProfile p;
  p.rules["D_A"] = {"D_A", {0, 1}};
  p.rules["D_B"] = {"D_B", {1, 0}};
  auto br = best_response(m, p, {"D_A"}, grid);
  CHECK(br.rules.at("D_A").table == std::vector<double>{1, 0});  // space vs space: 9 > 5...
  CHECK(br.rules.at("D_B").table == std::vector<double>{1, 0});
  auto again = best_response(m, br, {"D_A"}, grid);
  CHECK(again.rules.at("D_A").table == br.rules.at("D_A").table);

  CHECK_THROWS_WITH_AS(best_response(m, p, {"D_A", "D_B"}, grid),
                       doctest::Contains("MixedOwnership"), MaidError);
  StrategyProfile empty;
  CHECK_THROWS_WITH_AS(best_response(m, empty, {"D_A"}, grid),
                       doctest::Contains("IncompleteContext"), MaidError);
}

TEST_CASE("matching pennies: no pure equilibrium, mixed grid finds the fair coin") {
  Maid m = matching_pennies();
  RuleGridConfig det;
  CHECK(enumerate_nash(m, det).equilibria.empty());

  RuleGridConfig mixed;
  mixed.mix_step = 0.5;
  auto ns = enumerate_nash(m, mixed);
  REQUIRE(ns.equilibria.size() == 1);
  CHECK(ns.equilibria[0].rules.at("D_A").table == std::vector<double>{0.5, 0.5});
  CHECK(ns.equilibria[0].rules.at("D_B").table == std::vector<double>{0.5, 0.5});
}

TEST_CASE("backward induction solves the tree-killer diagram") {
  Maid m = tree_killer_maid();
  RuleGridConfig grid;
  auto profile = backward_induction(m, grid);
  CHECK(profile.covers(m));
  CHECK(is_nash(m, profile, grid));
}

TEST_CASE("backward induction is placeholder invariant on solvable diagrams") {
  Maid m = tree_killer_maid();
  RuleGridConfig grid;
  auto base = backward_induction(m, grid);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    std::map<std::string, DecisionRule> ph;
    for (const auto& d : m.decision_ids()) {
      auto rules = enumerate_rules(m, d, grid);
      ph[d] = rules[rng() % rules.size()];
    }
    auto alt = backward_induction(m, grid, ph);
    for (const auto& [d, rule] : base.rules) CHECK(alt.rules.at(d).table == rule.table);
  }
}

TEST_CASE("backward induction handles joint blocks in cyclic relevance graphs") {
  Maid m = logistics_maid();  // two-decision joint block
  RuleGridConfig grid;
  auto profile = backward_induction(m, grid);
  CHECK(is_nash(m, profile, grid));
  Maid pennies = matching_pennies();
  CHECK_THROWS_WITH_AS(backward_induction(pennies, grid),
                       doctest::Contains("NoEquilibriumFound"), MaidError);
}

TEST_CASE("enumerate_nash respects the profile cap") {
  Maid m = logistics_maid();
  RuleGridConfig grid;
  grid.profile_cap = 2;
  CHECK_THROWS_WITH_AS(enumerate_nash(m, grid), doctest::Contains("GridTooLarge"), MaidError);
}
