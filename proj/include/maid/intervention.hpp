#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "maid/core.hpp"
#include "maid/equilibrium.hpp"

namespace maid {

// Pre-strategy intervention on one decision node: a chance node `pre_node_id`
// with parents Pa(target) + {guidance} and domain dom(target), wired as a new
// information parent of the target. `rule.table` is row-major over
// dom(Pa(target)) x dom(guidance). A default-constructed PreStrategy is the
// null (empty) intervention.
struct PreStrategy {
  bool null = true;
  std::string target;
  std::string pre_node_id = "D_pre";
  std::string guidance;
  DecisionRule rule;

  static PreStrategy none() { return {}; }
};

// Desired composite outcome: total-utility target u* (default: the maximum
// attainable total utility over the grid) and an optional split of utility
// nodes into task vs secondary for reporting.
struct OutcomeSpec {
  std::optional<double> u_star;
  std::set<std::string> secondary_utilities;
};

struct CausalEffectReport {
  double u_star = 0.0;
  double p_intervened = 0.0;
  double p_baseline = 0.0;
  double delta = 0.0;
  NashSet induced;   // NE set of the intervened MAID with its outcome measure
  NashSet baseline;  // NE set of the unintervened MAID, uniform measure
};

// Inserts the pre-strategy node; input unchanged. Null interventions return a
// plain copy. Throws TargetNotDecision, GuidanceNotFlagged, IdCollision.
Maid apply_pre_strategy(const Maid& m, const PreStrategy& pre);

// Maximum attainable total utility over all grid profiles, or the explicit
// override from the OutcomeSpec.
double resolve_u_star(const Maid& m, const OutcomeSpec& outcome, const RuleGridConfig& grid);

// Measure over the intervened MAID's equilibria: each NE is weighted by the
// probability that the target decision realizes the pre-node's recommendation
// under that NE's joint (a do() cannot create equilibria, only re-weight
// them); zero-weight equilibria are dropped and behaviorally identical ones
// (identical induced joints) are merged. Null interventions keep the uniform
// measure. Throws NoEquilibriumFound on an empty NE set.
NashSet intervened_nash_set(const Maid& m, const PreStrategy& pre, const RuleGridConfig& grid);

// P over the intervened NE measure of total utility hitting u*.
double interventional_outcome_prob(const Maid& m, const PreStrategy& pre,
                                   const OutcomeSpec& outcome, const RuleGridConfig& grid);

// Causal effect delta = p_intervened - p_baseline, both NE sets attached.
// The baseline NE set is cached per (MAID, grid) content hash.
CausalEffectReport causal_effect(const Maid& m, const PreStrategy& pre,
                                 const OutcomeSpec& outcome, const RuleGridConfig& grid);

// All candidate pre-strategies for (target, guidance) on the grid, the null
// intervention first.
std::vector<PreStrategy> enumerate_pre_strategies(const Maid& m, const std::string& target,
                                                  const std::string& guidance,
                                                  const RuleGridConfig& pre_grid);

// Exhaustive argmax of causal_effect over the pre-grid (ties: earliest);
// since the null intervention is included, the best delta is never negative.
std::pair<PreStrategy, CausalEffectReport> optimize_pre_strategy(
    const Maid& m, const std::string& target, const std::string& guidance,
    const OutcomeSpec& outcome, const RuleGridConfig& pre_grid, const RuleGridConfig& grid);

// Unnormalized posterior ranking of one profile: P(U_tot = u*) under the
// profile times its weight in the intervened NE measure (overridable).
double posterior_score(const Maid& m, const StrategyProfile& profile, const PreStrategy& pre,
                       const OutcomeSpec& outcome, const RuleGridConfig& grid,
                       std::optional<double> measure_weight = std::nullopt);

}  // namespace maid
