#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "maid/core.hpp"
#include "maid/graph.hpp"
#include "maid/templates.hpp"

using namespace maid;

namespace {

Maid random_chance_network(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Maid m;
  m.agents = {"A"};
  for (int i = 0; i < n; ++i) {
    Node node;
    node.id = "N" + std::to_string(i);
    node.kind = NodeKind::Chance;
    node.domain = {"0", "1"};
    for (int j = 0; j < i; ++j)
      if (rng() % 3 == 0) node.parents.push_back("N" + std::to_string(j));
    std::size_t rows = std::size_t{1} << node.parents.size();
    for (std::size_t r = 0; r < rows; ++r) {
      double a = u(rng), b = u(rng);
      node.table.push_back(a / (a + b));
      node.table.push_back(b / (a + b));
    }
    m.nodes.push_back(std::move(node));
  }
  return build_maid(m);
}

// Exact conditional-independence oracle on the full joint: X ci Y | E iff
// P(x, y | e) == P(x | e) P(y | e) for every instantiation with P(e) > 0.
bool exact_ci(const Maid& m, const std::string& x, const std::string& y,
              const std::set<std::string>& evidence, double tol) {
  auto jd = joint_distribution(m);
  std::size_t xi = m.index_of(x), yi = m.index_of(y);
  std::vector<std::size_t> ei;
  for (const auto& e : evidence) ei.push_back(m.index_of(e));

  // marginals keyed by (evidence values, optional x, optional y)
  std::map<std::vector<std::size_t>, double> pe, pxe, pye, pxye;
  for (const auto& [a, p] : jd.support) {
    std::vector<std::size_t> key;
    for (auto i : ei) key.push_back(a[i]);
    pe[key] += p;
    auto kx = key;
    kx.push_back(a[xi]);
    pxe[kx] += p;
    auto ky = key;
    ky.push_back(a[yi]);
    pye[ky] += p;
    kx.push_back(a[yi]);
    pxye[kx] += p;
  }
  for (const auto& [ekey, pev] : pe) {
    if (pev <= tol) continue;
    for (std::size_t xv = 0; xv < 2; ++xv)
      for (std::size_t yv = 0; yv < 2; ++yv) {
        auto kx = ekey;
        kx.push_back(xv);
        auto ky = ekey;
        ky.push_back(yv);
        auto kxy = kx;
        kxy.push_back(yv);
        double pj = pxye.count(kxy) ? pxye[kxy] / pev : 0.0;
        double px = pxe.count(kx) ? pxe[kx] / pev : 0.0;
        double py = pye.count(ky) ? pye[ky] / pev : 0.0;
        if (std::abs(pj - px * py) > tol) return false;
      }
  }
  return true;
}

}  // namespace

TEST_CASE("d_separated agrees with the exact joint-distribution CI oracle") {
  std::mt19937_64 rng(1234);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 4 + static_cast<int>(rng() % 4);  // 4..7 nodes
    Maid m = random_chance_network(rng, n);
    for (int q = 0; q < 6; ++q) {
      std::size_t xi = rng() % n, yi = rng() % n;
      if (xi == yi) continue;
      std::set<std::string> evidence;
      for (int j = 0; j < n; ++j)
        if (static_cast<std::size_t>(j) != xi && static_cast<std::size_t>(j) != yi &&
            rng() % 4 == 0)
          evidence.insert("N" + std::to_string(j));
      std::string x = "N" + std::to_string(xi), y = "N" + std::to_string(yi);
      bool sep = d_separated(m, x, y, evidence);
      bool ci = exact_ci(m, x, y, evidence, 1e-10);
      if (sep) CHECK(ci);          // soundness: separation implies independence
      if (!ci) CHECK_FALSE(sep);   // contrapositive, same check from the data side
      ++checked;
    }
  }
  CHECK(checked > 600);
}

TEST_CASE("d_separated rejects malformed queries") {
  Maid m = logistics_maid();
  CHECK_THROWS_WITH_AS(d_separated(m, "D_A", "D_B", {"D_A"}),
                       doctest::Contains("NodeInEvidence"), MaidError);
  CHECK_THROWS_AS(d_separated(m, "D_A", "D_A", {}), MaidError);
}

TEST_CASE("is_active_path handles chains, forks, and colliders") {
  // X -> C <- Y with C -> W
  Maid m;
  m.agents = {"A"};
  auto bin = std::vector<std::string>{"0", "1"};
  Node x{"X", NodeKind::Chance, {}, false, {}, bin, {0.5, 0.5}};
  Node y{"Y", NodeKind::Chance, {}, false, {}, bin, {0.5, 0.5}};
  Node c{"C", NodeKind::Chance, {}, false, {"X", "Y"}, bin,
         {0.9, 0.1, 0.2, 0.8, 0.3, 0.7, 0.6, 0.4}};
  Node w{"W", NodeKind::Chance, {}, false, {"C"}, bin, {0.8, 0.2, 0.1, 0.9}};
  m.nodes = {x, y, c, w};
  m = build_maid(m);

  CHECK_FALSE(is_active_path(m, {"X", "C", "Y"}, {}));          // blocked collider
  CHECK(is_active_path(m, {"X", "C", "Y"}, {"C"}));             // opened by itself
  CHECK(is_active_path(m, {"X", "C", "Y"}, {"W"}));             // opened by a descendant
  CHECK(is_active_path(m, {"X", "C", "W"}, {}));                // chain
  CHECK_FALSE(is_active_path(m, {"X", "C", "W"}, {"C"}));       // chain blocked
  CHECK_THROWS_WITH_AS(is_active_path(m, {"X", "W"}, {}), doctest::Contains("NotAPath"),
                       MaidError);
}

TEST_CASE("tree killer: reliance structure") {
  Maid m = tree_killer_maid();
  // BuildPatio needs both upstream rules to infer the tree's fate
  CHECK(s_reachable(m, "BuildPatio", "PoisonTree"));
  CHECK(s_reachable(m, "BuildPatio", "TreeDoctor"));
  // TreeDoctor observes TreeSick, which screens off the poisoning rule, and
  // Bob's utilities do not depend on the patio
  CHECK_FALSE(s_reachable(m, "TreeDoctor", "PoisonTree"));
  CHECK_FALSE(s_reachable(m, "TreeDoctor", "BuildPatio"));
  // Alice's View utility couples her two decisions both ways
  CHECK(s_reachable(m, "PoisonTree", "BuildPatio"));
  CHECK(s_reachable(m, "PoisonTree", "TreeDoctor"));
  CHECK(relevance_graph(m).cyclic());
  CHECK_THROWS_WITH_AS(s_reachable(m, "TreeSick", "PoisonTree"),
                       doctest::Contains("NotADecision"), MaidError);
}

TEST_CASE("relevance graph edges follow s-reachability exactly") {
  for (const Maid& m : {tree_killer_maid(), logistics_maid(), logistics_intervention_maid()}) {
    auto rg = relevance_graph(m);
    for (const auto& d : rg.nodes)
      for (const auto& dp : rg.nodes) {
        if (d == dp) continue;
        CHECK(rg.has_edge(dp, d) == s_reachable(m, d, dp));
      }
  }
}

TEST_CASE("one-shot paradigm templates classify as expected") {
  for (bool sequential : {false, true}) {
    CAPTURE(sequential);
    Maid self_org = one_shot_paradigm(ParadigmKind::SelfOrganization, sequential);
    auto rg1 = relevance_graph(self_org);
    CHECK(rg1.cyclic());
    CHECK(rg1.has_edge("D_h", "D_a"));
    CHECK(rg1.has_edge("D_a", "D_h"));

    Maid global = one_shot_paradigm(ParadigmKind::GlobalIntervention, sequential);
    auto rg2 = relevance_graph(global);
    CHECK(rg2.edges.empty());
    CHECK_FALSE(rg2.cyclic());

    Maid targeted = one_shot_paradigm(ParadigmKind::TargetedIntervention, sequential);
    auto rg3 = relevance_graph(targeted);
    CHECK_FALSE(rg3.cyclic());
    REQUIRE(rg3.edges.size() == 1);
    CHECK(rg3.has_edge("D_h", "D_a"));
  }
}

TEST_CASE("component graph is an acyclic condensation in topological order") {
  Maid m = one_shot_paradigm(ParadigmKind::SelfOrganization);
  auto rg = relevance_graph(m);
  auto cg = component_graph(rg);
  REQUIRE(cg.components.size() == 1);
  CHECK(cg.components[0].size() == 2);
  CHECK(cg.edges.empty());

  Maid tk = tree_killer_maid();
  auto cgt = component_graph(relevance_graph(tk));
  // TreeDoctor is a singleton influencer; Alice's two decisions form a block
  REQUIRE(cgt.components.size() == 2);
  std::size_t total = 0;
  for (const auto& c : cgt.components) total += c.size();
  CHECK(total == 3);
  CHECK(cgt.components[0] == std::vector<std::string>{"TreeDoctor"});
  CHECK(cgt.components[1].size() == 2);
  for (const auto& [from, to] : cgt.edges) CHECK(from < to);

  Maid acyclic = one_shot_paradigm(ParadigmKind::TargetedIntervention);
  auto cga = component_graph(relevance_graph(acyclic));
  REQUIRE(cga.components.size() == 2);
  for (const auto& c : cga.components) CHECK(c.size() == 1);
  CHECK(cga.components[0] == std::vector<std::string>{"D_h"});
}

TEST_CASE("solvability classification and report text") {
  auto cyc = classify_solvability(one_shot_paradigm(ParadigmKind::SelfOrganization));
  CHECK(cyc.relevance_cyclic);
  CHECK_FALSE(cyc.il_solvable);
  REQUIRE(cyc.joint_blocks.size() == 1);
  CHECK(cyc.joint_blocks[0].size() == 2);

  auto solv = classify_solvability(one_shot_paradigm(ParadigmKind::TargetedIntervention));
  CHECK_FALSE(solv.relevance_cyclic);
  CHECK(solv.il_solvable);
  CHECK(solv.joint_blocks.empty());

  auto text = report_text(cyc);
  CHECK(text.find("relevance_cyclic=true") != std::string::npos);
  CHECK(text.find("il_solvable=false") != std::string::npos);
  auto text2 = report_text(solv);
  CHECK(text2.find("il_solvable=true") != std::string::npos);
}

TEST_CASE("DOT exports are well-formed and deterministic") {
  Maid m = tree_killer_maid();
  std::string d1 = to_dot(m), d2 = to_dot(m);
  CHECK(d1 == d2);
  CHECK(d1.rfind("digraph", 0) == 0);
  CHECK(d1.find("PoisonTree") != std::string::npos);
  CHECK(d1.find("->") != std::string::npos);
  auto rg = relevance_graph(m);
  CHECK(to_dot(rg).find("digraph") != std::string::npos);
  CHECK(to_dot(component_graph(rg)).find("digraph") != std::string::npos);
}
