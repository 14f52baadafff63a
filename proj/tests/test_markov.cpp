#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "maid/core.hpp"
#include "maid/equilibrium.hpp"
#include "maid/graph.hpp"
#include "maid/markov.hpp"
#include "maid/templates.hpp"

using namespace maid;

namespace {

MarkovGame random_game(std::mt19937_64& rng, std::size_t n_agents, std::size_t max_states,
                       std::size_t max_actions, std::size_t max_horizon) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  MarkovGame g;
  for (std::size_t i = 0; i < n_agents; ++i) g.agents.push_back("ag" + std::to_string(i));
  std::size_t s = 1 + rng() % max_states;
  for (std::size_t i = 0; i < s; ++i) g.states.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < n_agents; ++i) {
    std::vector<std::string> acts;
    std::size_t k = 1 + rng() % max_actions;
    for (std::size_t a = 0; a < k; ++a) acts.push_back("a" + std::to_string(a));
    g.actions.push_back(acts);
  }
  g.horizon = 1 + rng() % max_horizon;
  std::size_t ja = g.joint_action_count();
  for (std::size_t r = 0; r < s * ja; ++r) {
    std::vector<double> row(s);
    double sum = 0;
    for (auto& v : row) sum += (v = u(rng));
    for (auto& v : row) g.transition.push_back(v / sum);
    g.reward.push_back(u(rng) * 10 - 5);
  }
  {
    std::vector<double> row(s);
    double sum = 0;
    for (auto& v : row) sum += (v = u(rng));
    for (auto& v : row) g.initial.push_back(v / sum);
  }
  return build_markov_game(g);
}

std::vector<std::vector<std::size_t>> random_policy(std::mt19937_64& rng, const MarkovGame& g) {
  std::vector<std::vector<std::size_t>> policy;
  for (std::size_t i = 0; i < g.agents.size(); ++i) {
    std::vector<std::size_t> per_state;
    for (std::size_t s = 0; s < g.states.size(); ++s) per_state.push_back(rng() % g.actions[i].size());
    policy.push_back(per_state);
  }
  return policy;
}

// Finite-horizon value iteration for a single-agent game; oracle for the
// backward-induction solve of the unrolled diagram.
double value_iteration(const MarkovGame& g) {
  const std::size_t s = g.states.size(), ja = g.joint_action_count();
  std::vector<double> v(s, 0.0);
  for (std::size_t t = g.horizon; t-- > 0;) {
    std::vector<double> nv(s, 0.0);
    for (std::size_t st = 0; st < s; ++st) {
      double best = -1e300;
      for (std::size_t a = 0; a < ja; ++a) {
        double q = g.reward[st * ja + a];
        for (std::size_t sn = 0; sn < s; ++sn)
          q += g.transition[(st * ja + a) * s + sn] * v[sn];
        best = std::max(best, q);
      }
      nv[st] = best;
    }
    v = std::move(nv);
  }
  double total = 0;
  for (std::size_t st = 0; st < s; ++st) total += g.initial[st] * v[st];
  return total;
}

}  // namespace

TEST_CASE("build_markov_game validates shapes and rows") {
  MarkovGame g = logistics_game();
  CHECK(g.joint_action_count() == 4);
  CHECK(g.joint_index({1, 0}) == 2);
  MarkovGame bad = g;
  bad.transition[0] = 0.5;
  CHECK_THROWS_WITH_AS(build_markov_game(bad), doctest::Contains("CptRowNotNormalized"),
                       MaidError);
  bad = g;
  bad.reward.pop_back();
  CHECK_THROWS_WITH_AS(build_markov_game(bad), doctest::Contains("MissingCptRow"), MaidError);
  bad = g;
  bad.horizon = 0;
  CHECK_THROWS_WITH_AS(build_markov_game(bad), doctest::Contains("BadDomain"), MaidError);
}

TEST_CASE("unroll produces (L+1) + nL + L nodes in layered order") {
  std::mt19937_64 rng(11);
  MarkovGame g = random_game(rng, 2, 2, 2, 1);
  g.horizon = 3;
  Maid m = unroll(g);
  CHECK(m.nodes.size() == (3 + 1) + 2 * 3 + 3);  // 13
  CHECK(m.has_node("S_t0"));
  CHECK(m.has_node("S_t3"));
  CHECK(m.has_node("D_ag0_t2"));
  CHECK(m.has_node("U_t0"));
  const Node& u = m.node("U_t1");
  CHECK(u.owners.size() == 2);  // team reward owned by everyone
  CHECK(u.parents.front() == "S_t1");
}

TEST_CASE("unroll enforces the outcome cap") {
  std::mt19937_64 rng(12);
  MarkovGame g = random_game(rng, 2, 3, 2, 3);
  UnrollOptions opts;
  opts.outcome_cap = 2;
  CHECK_THROWS_WITH_AS(unroll(g, opts), doctest::Contains("UnrollTooLarge"), MaidError);
}

TEST_CASE("unrolled value preservation: MAID expected utility equals trajectory return") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    MarkovGame g = random_game(rng, 2, 3, 2, 3);
    Maid m = unroll(g);
    auto policy = random_policy(rng, g);
    auto profile = stationary_profile(g, m, policy);
    double oracle = trajectory_expected_return(g, policy);
    for (const auto& agent : g.agents) {
      double eu = expected_utility(m, profile, agent);
      CHECK(std::abs(eu - oracle) < 1e-9);
    }
  }
}

TEST_CASE("single-agent solve of the unrolled diagram matches value iteration") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 6; ++trial) {
    MarkovGame g = random_game(rng, 1, 3, 2, 2);
    Maid m = unroll(g);
    RuleGridConfig grid;
    auto profile = backward_induction(m, grid);
    double eu = expected_utility(m, profile, g.agents[0]);
    CHECK(std::abs(eu - value_iteration(g)) < 1e-9);
  }
}

TEST_CASE("logistics as a Markov game: two equilibria with totals 18 and 10") {
  MarkovGame g = logistics_game();
  Maid m = unroll(g);
  RuleGridConfig grid;
  auto ns = enumerate_nash(m, grid);
  REQUIRE(ns.equilibria.size() == 2);
  std::vector<double> totals;
  for (const auto& p : ns.equilibria) totals.push_back(expected_utility(m, p, g.agents[0]));
  std::sort(totals.begin(), totals.end());
  CHECK(totals[0] == doctest::Approx(10.0));
  CHECK(totals[1] == doctest::Approx(18.0));
}

TEST_CASE("one-transition paradigms keep their relevance classification") {
  std::mt19937_64 rng(31);
  MarkovGame g = random_game(rng, 2, 2, 2, 1);
  g.agents = {"h", "a"};
  Maid base = unroll(g);

  Paradigm self_org;
  self_org.kind = ParadigmKind::SelfOrganization;
  auto rg1 = relevance_graph(apply_paradigm(base, self_org));
  CHECK(rg1.has_edge("D_h_t0", "D_a_t0"));
  CHECK(rg1.has_edge("D_a_t0", "D_h_t0"));
  CHECK(rg1.cyclic());

  Paradigm global;
  global.kind = ParadigmKind::GlobalIntervention;
  auto rg2 = relevance_graph(apply_paradigm(base, global));
  CHECK(rg2.edges.empty());

  Paradigm targeted;
  targeted.kind = ParadigmKind::TargetedIntervention;
  targeted.targeted = "h";
  Maid mt = apply_paradigm(base, targeted);
  auto rg3 = relevance_graph(mt);
  REQUIRE(rg3.edges.size() == 1);
  CHECK(rg3.has_edge("D_h_t0", "D_a_t0"));
  CHECK(mt.node("Z_t0").guidance);
  CHECK(mt.has_node("D_pre_t0"));

  Paradigm bad;
  bad.kind = ParadigmKind::TargetedIntervention;
  bad.targeted = "nobody";
  CHECK_THROWS_WITH_AS(apply_paradigm(base, bad), doctest::Contains("UnknownAgent"), MaidError);
}

TEST_CASE("sequential unroll inserts the information-set channel") {
  std::mt19937_64 rng(41);
  MarkovGame g = random_game(rng, 2, 2, 2, 1);
  UnrollOptions opts;
  opts.sequential = true;
  Maid m = unroll(g, opts);
  REQUIRE(m.has_node("I_t0"));
  const Node& second = m.node("D_" + g.agents[1] + "_t0");
  CHECK(std::count(second.parents.begin(), second.parents.end(), "I_t0") == 1);
  // the channel is a faithful copy of the first mover's choice
  const Node& info = m.node("I_t0");
  CHECK(info.parents == std::vector<std::string>{"D_" + g.agents[0] + "_t0"});
}
