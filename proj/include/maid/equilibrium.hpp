#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "maid/core.hpp"

namespace maid {

// Finite candidate-rule space per decision node. The default grid holds all
// deterministic rules; setting mix_step in (0,1] adds the epsilon-step simplex
// grid over mixed rules instead.
struct RuleGridConfig {
  double mix_step = 0.0;               // 0 = deterministic rules only
  std::size_t per_decision_cap = 10'000'000;
  std::size_t profile_cap = 10'000'000;
};

// Enumerated equilibria with a probability weight per member (default uniform).
struct NashSet {
  std::vector<StrategyProfile> equilibria;
  std::vector<double> weights;
};

// All candidate rules for one decision, in a deterministic order: contexts are
// digits (first parent instantiation slowest-varying), deterministic actions
// ascending; simplex grids order each context's distribution by descending
// first coordinate. Throws GridTooLarge past the per-decision cap.
std::vector<DecisionRule> enumerate_rules(const Maid& m, const std::string& d,
                                          const RuleGridConfig& grid);

// Argmax over the grid of the owner's expected utility, varying only the
// decisions in `subset` (all owned by one agent; everything else must already
// be assigned in `profile`). Ties go to the earlier grid entry.
StrategyProfile best_response(const Maid& m, const StrategyProfile& profile,
                              const std::set<std::string>& subset,
                              const RuleGridConfig& grid);

// True iff no agent can improve its expected utility by more than tol with a
// grid deviation of all its decisions jointly.
bool is_nash(const Maid& m, const StrategyProfile& profile, const RuleGridConfig& grid,
             double tol = kProbTol);

// Brute force over the full profile grid. Throws GridTooLarge past the
// profile cap; weights default to uniform.
NashSet enumerate_nash(const Maid& m, const RuleGridConfig& grid, double tol = kProbTol);

// Generalized backward induction over the relevance graph's component graph,
// influencers first. Singleton components use best_response with decisions in
// later components held at placeholder rules (legitimate: they are not
// s-reachable); non-singleton components are solved as joint blocks by
// exhaustive search for a block-level equilibrium. `placeholders` optionally
// overrides the default placeholder (first grid rule) per decision.
StrategyProfile backward_induction(
    const Maid& m, const RuleGridConfig& grid,
    const std::optional<std::map<std::string, DecisionRule>>& placeholders = std::nullopt);

}  // namespace maid
