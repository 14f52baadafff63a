#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "maid/core.hpp"

namespace maid {

// Finite team-reward Markov game. Joint actions are indexed row-major over
// the agent order (first agent slowest); `transition` has one row of |states|
// probabilities per (state, joint action), `reward` one value per
// (state, joint action).
struct MarkovGame {
  std::vector<std::string> agents;
  std::vector<std::string> states;
  std::vector<std::vector<std::string>> actions;  // per agent, same order
  std::vector<double> transition;
  std::vector<double> reward;
  std::size_t horizon = 1;
  std::vector<double> initial;  // distribution over states

  std::size_t joint_action_count() const;
  std::size_t joint_index(const std::vector<std::size_t>& action_per_agent) const;
};

// Validates set sizes, row normalization, horizon >= 1.
MarkovGame build_markov_game(MarkovGame spec);

enum class ParadigmKind { SelfOrganization, GlobalIntervention, TargetedIntervention };

struct Paradigm {
  ParadigmKind kind = ParadigmKind::SelfOrganization;
  std::string targeted;  // required for TargetedIntervention
  std::string guidance_label = "desired-outcome";
};

struct UnrollOptions {
  std::size_t outcome_cap = 1'000'000;
  // Sequential moves: inserts an information-set chance node per timestep
  // carrying the first agent's decision to the later movers.
  bool sequential = false;
};

// MAID with state chance nodes S_t0..S_tL, decisions D_<agent>_t<k> observing
// S_tk, and one team utility U_tk per timestep shared by all agents, so a
// Nash equilibrium maximizes the expected total reward. Throws UnrollTooLarge
// past the outcome cap.
Maid unroll(const MarkovGame& game, const UnrollOptions& opts = {});

// Rewires an unrolled MAID into one of the three interaction paradigms:
// replaces each team utility with per-agent utilities and adds the guidance
// node Z_tk with paradigm-specific edges (self-organization: Z reads the
// non-targeted decision and feeds the targeted utility; global: Z is a root
// observed by all decisions and feeding all utilities; targeted: Z drives a
// pre-decision recommendation node observed by the targeted decision, and
// feeds the targeted utility as an intrinsic reward channel). State,
// transition, and decision nodes keep their CPDs unchanged.
Maid apply_paradigm(const Maid& unrolled, const Paradigm& paradigm);

// Expected total reward of a stationary pure policy (one action index per
// (agent, state)) by direct trajectory enumeration; oracle for unroll.
double trajectory_expected_return(const MarkovGame& game,
                                  const std::vector<std::vector<std::size_t>>& policy);

// The same stationary policy as a full StrategyProfile on unroll(game).
StrategyProfile stationary_profile(const MarkovGame& game, const Maid& unrolled,
                                   const std::vector<std::vector<std::size_t>>& policy);

}  // namespace maid
