#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "maid/core.hpp"  // MaidError

namespace marl {

using Rng = std::mt19937_64;

// Cooperative navigation on a small integer grid: agents spread out to cover
// the landmarks while avoiding collisions.
struct GridSpreadConfig {
  int size = 5;
  int n_agents = 3;
  std::vector<std::pair<int, int>> landmarks = {{0, 0}, {2, 2}, {4, 4}};
  int episode_len = 20;
};

struct GridSpreadState {
  std::vector<std::pair<int, int>> agents;
  int step = 0;
};

// Actions: 0 up, 1 down, 2 left, 3 right, 4 stay.
inline constexpr int kGridSpreadActions = 5;

GridSpreadState gridspread_reset(const GridSpreadConfig& cfg, Rng& rng);

// Moves clamped to the arena; extrinsic reward = -sum over landmarks of the
// closest agent's Euclidean distance, minus 1 per coincident agent pair.
std::pair<GridSpreadState, double> gridspread_step(const GridSpreadConfig& cfg,
                                                   const GridSpreadState& state,
                                                   const std::vector<int>& actions);

// Negative distance of the targeted agent to one fixed landmark.
double intrinsic_fixed_landmark(const GridSpreadConfig& cfg, const GridSpreadState& state,
                                int targeted, int landmark_index);

// Negative distance of the targeted agent to the landmark farthest from both
// teammates (max over landmarks of min teammate distance, ties to the lowest
// landmark index). Requires exactly two teammates.
double intrinsic_farthest_landmark(const GridSpreadConfig& cfg, const GridSpreadState& state,
                                   int targeted);

// Tabular observation key: the agent's own coordinates.
std::string gridspread_obs_key(const GridSpreadState& state, int agent);

}  // namespace marl
