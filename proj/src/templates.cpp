#include "maid/templates.hpp"

namespace maid {

namespace {

const std::vector<std::string> kBinary = {"0", "1"};

std::vector<double> identity_cpd(std::size_t k) {
  std::vector<double> t(k * k, 0.0);
  for (std::size_t v = 0; v < k; ++v) t[v * k + v] = 1.0;
  return t;
}

// 1 when both binary parents agree, else 0 (schematic coordination payoff).
const std::vector<double> kAgree = {1, 0, 0, 1};

Node chance(std::string id, std::vector<std::string> parents, std::vector<std::string> domain,
            std::vector<double> table, bool guidance = false) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::Chance;
  n.guidance = guidance;
  n.parents = std::move(parents);
  n.domain = std::move(domain);
  n.table = std::move(table);
  return n;
}

Node decision(std::string id, std::string owner, std::vector<std::string> parents,
              std::vector<std::string> domain) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::Decision;
  n.owners = {std::move(owner)};
  n.parents = std::move(parents);
  n.domain = std::move(domain);
  return n;
}

Node utility(std::string id, std::string owner, std::vector<std::string> parents,
             std::vector<double> table) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::Utility;
  n.owners = {std::move(owner)};
  n.parents = std::move(parents);
  n.table = std::move(table);
  return n;
}

}  // namespace

Maid one_shot_paradigm(ParadigmKind kind, bool sequential) {
  Maid m;
  m.agents = {"h", "a"};

  std::vector<std::string> h_parents;  // information parents of the second mover
  auto add_sequencing = [&] {
    // information-set node carrying a's move to h
    m.nodes.push_back(chance("I", {"D_a"}, kBinary, identity_cpd(2)));
    h_parents.push_back("I");
  };

  switch (kind) {
    case ParadigmKind::SelfOrganization:
      m.nodes.push_back(decision("D_a", "a", {}, kBinary));
      if (sequential) add_sequencing();
      m.nodes.push_back(decision("D_h", "h", h_parents, kBinary));
      m.nodes.push_back(chance("Z", {"D_a"}, kBinary, identity_cpd(2), true));
      m.nodes.push_back(utility("U_h", "h", {"D_h", "Z"}, kAgree));
      m.nodes.push_back(utility("U_a", "a", {"D_h", "D_a"}, kAgree));
      break;
    case ParadigmKind::GlobalIntervention:
      m.nodes.push_back(chance("Z", {}, kBinary, {0.5, 0.5}, true));
      m.nodes.push_back(decision("D_a", "a", {"Z"}, kBinary));
      if (sequential) add_sequencing();
      h_parents.insert(h_parents.begin(), "Z");
      m.nodes.push_back(decision("D_h", "h", h_parents, kBinary));
      m.nodes.push_back(utility("U_h", "h", {"D_h", "Z"}, kAgree));
      m.nodes.push_back(utility("U_a", "a", {"D_a", "Z"}, kAgree));
      break;
    case ParadigmKind::TargetedIntervention:
      m.nodes.push_back(chance("Z", {}, kBinary, {1.0, 0.0}, true));
      m.nodes.push_back(chance("D_pre", {"Z"}, kBinary, identity_cpd(2)));
      m.nodes.push_back(decision("D_a", "a", {}, kBinary));
      if (sequential) add_sequencing();
      h_parents.insert(h_parents.begin(), "D_pre");
      m.nodes.push_back(decision("D_h", "h", h_parents, kBinary));
      m.nodes.push_back(utility("U_h", "h", {"D_h", "Z"}, kAgree));
      m.nodes.push_back(utility("U_a", "a", {"D_h", "D_a"}, kAgree));
      break;
  }
  return build_maid(std::move(m));
}

Maid logistics_maid() {
  Maid m;
  m.agents = {"A", "B"};
  const std::vector<std::string> dom = {"space", "speed"};
  m.nodes.push_back(decision("D_A", "A", {}, dom));
  m.nodes.push_back(decision("D_B", "B", {}, dom));
  // rows over (D_A, D_B): (space,space) (space,speed) (speed,space) (speed,speed)
  m.nodes.push_back(utility("U_A", "A", {"D_A", "D_B"}, {9, 3, 6, 5}));
  m.nodes.push_back(utility("U_B", "B", {"D_A", "D_B"}, {9, 6, 3, 5}));
  return build_maid(std::move(m));
}

Maid logistics_intervention_maid() {
  Maid m;
  m.agents = {"A", "B"};
  const std::vector<std::string> dom = {"space", "speed"};
  // constant guidance signal encoding the desired joint outcome
  m.nodes.push_back(chance("Z", {}, dom, {1.0, 0.0}, true));
  m.nodes.push_back(decision("D_A", "A", {"Z"}, dom));
  m.nodes.push_back(decision("D_B", "B", {}, dom));
  m.nodes.push_back(utility("U_A", "A", {"D_A", "D_B"}, {9, 3, 6, 5}));
  m.nodes.push_back(utility("U_B", "B", {"D_A", "D_B"}, {9, 6, 3, 5}));
  return build_maid(std::move(m));
}

Maid tree_killer_maid() {
  Maid m;
  m.agents = {"Alice", "Bob"};
  m.nodes.push_back(decision("PoisonTree", "Alice", {}, {"poison", "refrain"}));
  m.nodes.push_back(chance("TreeSick", {"PoisonTree"}, {"sick", "healthy"},
                           {0.9, 0.1, 0.1, 0.9}));
  // Bob observes the tree deteriorating, not Alice's action.
  m.nodes.push_back(decision("TreeDoctor", "Bob", {"TreeSick"}, {"hire", "refrain"}));
  m.nodes.push_back(chance("TreeDead", {"TreeSick", "TreeDoctor"}, {"dead", "alive"},
                           {0.2, 0.8,     // sick, hire
                            0.9, 0.1,     // sick, refrain
                            0.05, 0.95,   // healthy, hire
                            0.1, 0.9}));  // healthy, refrain
  // Alice knows whether a doctor was hired but cannot observe the tree's
  // health; she conditions her patio rule on her poisoning *rule*, which is
  // exactly why PoisonTree stays strategically relevant here.
  m.nodes.push_back(decision("BuildPatio", "Alice", {"TreeDoctor"}, {"build", "refrain"}));
  m.nodes.push_back(utility("Effort", "Alice", {"PoisonTree"}, {-1, 0}));
  m.nodes.push_back(utility("Cost", "Bob", {"TreeDoctor"}, {-2, 0}));
  m.nodes.push_back(utility("Tree", "Bob", {"TreeDead"}, {0, 5}));
  // rows over (TreeDead, BuildPatio)
  m.nodes.push_back(utility("View", "Alice", {"TreeDead", "BuildPatio"}, {5, 0, 1, 0}));
  return build_maid(std::move(m));
}

MarkovGame logistics_game() {
  MarkovGame g;
  g.agents = {"A", "B"};
  g.states = {"depot"};
  g.actions = {{"space", "speed"}, {"space", "speed"}};
  g.transition = {1, 1, 1, 1};  // single state
  g.reward = {18, 9, 9, 10};    // team totals of the pairwise payoffs
  g.horizon = 1;
  g.initial = {1};
  return build_markov_game(std::move(g));
}

}  // namespace maid
