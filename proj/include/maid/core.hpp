#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace maid {

// Error type carrying a machine-parsable code (CycleDetected, CptRowNotNormalized, ...).
class MaidError : public std::runtime_error {
 public:
  MaidError(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

enum class NodeKind { Chance, Decision, Utility };

// One variable of the influence diagram.
//
// Chance/decision nodes enumerate their finite domain explicitly. A chance
// node's `table` is a row-major CPT: one row per parent instantiation (first
// declared parent is the slowest-varying index), one column per domain value.
// A utility node has no domain; `table` holds one deterministic value per
// parent instantiation. Decision nodes carry no table until a rule is assigned.
struct Node {
  std::string id;
  NodeKind kind = NodeKind::Chance;
  // Decisions: exactly one owner. Utilities: at least one (team utilities
  // produced by unrolling a Markov game are shared by all agents).
  std::set<std::string> owners;
  bool guidance = false;
  std::vector<std::string> parents;
  std::vector<std::string> domain;
  std::vector<double> table;
};

struct Maid {
  std::vector<std::string> agents;
  std::vector<Node> nodes;  // declaration order; validated acyclic

  const Node& node(const std::string& id) const;
  Node& node(const std::string& id);
  bool has_node(const std::string& id) const;
  std::size_t index_of(const std::string& id) const;

  std::vector<std::string> decision_ids() const;
  std::vector<std::string> utility_ids() const;
  std::vector<std::string> children_of(const std::string& id) const;
  // Node ids in a topological order (parents before children).
  std::vector<std::string> topo_order() const;

  // Number of parent instantiations (product of parent domain sizes).
  std::size_t context_count(const Node& n) const;
  // Domain size of a node as an outcome variable (utility nodes: 1, the
  // value is determined by the parents).
  std::size_t outcome_count(const Node& n) const;
};

// Decision rule delta: dom(Pa(D)) -> distribution over dom(D), stored with
// the same row-major layout as a chance CPT.
struct DecisionRule {
  std::string decision;
  std::vector<double> table;
};

struct StrategyProfile {
  std::map<std::string, DecisionRule> rules;

  bool covers(const Maid& m) const;
};

// Full instantiation: value index per node, in node declaration order.
// Utility nodes store the index into their per-context value; their numeric
// value is recovered with utility_value().
using Assignment = std::vector<std::size_t>;

struct JointDistribution {
  std::vector<std::pair<Assignment, double>> support;  // positive-probability outcomes

  double total() const;
};

inline constexpr double kProbTol = 1e-9;
inline constexpr double kRowTol = 1e-12;

// Validates structure and tables; throws MaidError with codes CycleDetected,
// UtilityHasChild, CptRowNotNormalized, MissingCptRow, UnknownParent,
// UnknownAgent, BadDomain.
Maid build_maid(Maid spec);

// Assigns decision rules: each assigned decision becomes a chance node with
// the rule as CPD. The profile may be partial. Input is unchanged.
Maid induce(const Maid& m, const StrategyProfile& profile);

// Exact joint over all variables; requires no remaining decision nodes.
JointDistribution joint_distribution(const Maid& m);

// Row index of a parent instantiation given value indices for each parent.
std::size_t context_index(const Maid& m, const Node& n,
                          const std::function<std::size_t(const std::string&)>& value_of);

// Value of a utility node under a full assignment.
double utility_value(const Maid& m, const Node& util, const Assignment& a);

// Expected sum of the agent's utility nodes under a full profile.
double expected_utility(const Maid& m, const StrategyProfile& profile,
                        const std::string& agent);

// Exact distribution of the sum of all utility node values under a full profile.
std::map<double, double> total_utility_distribution(const Maid& m,
                                                    const StrategyProfile& profile);

// P(sum of all utilities == target) within kProbTol on the utility axis.
double total_utility_prob(const Maid& m, const StrategyProfile& profile, double target);

}  // namespace maid
