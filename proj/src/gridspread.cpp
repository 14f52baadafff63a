#include "marl/gridspread.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace marl {

namespace {

double dist(std::pair<int, int> a, std::pair<int, int> b) {
  double dx = a.first - b.first;
  double dy = a.second - b.second;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

GridSpreadState gridspread_reset(const GridSpreadConfig& cfg, Rng& rng) {
  GridSpreadState s;
  std::uniform_int_distribution<int> cell(0, cfg.size - 1);
  for (int i = 0; i < cfg.n_agents; ++i) {
    int x = cell(rng);
    int y = cell(rng);
    s.agents.emplace_back(x, y);
  }
  return s;
}

std::pair<GridSpreadState, double> gridspread_step(const GridSpreadConfig& cfg,
                                                   const GridSpreadState& state,
                                                   const std::vector<int>& actions) {
  if (actions.size() != state.agents.size())
    throw maid::MaidError("InvalidEnv", "one action per agent required");
  GridSpreadState next = state;
  next.step++;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    auto& [x, y] = next.agents[i];
    switch (actions[i]) {
      case 0: y = std::min(y + 1, cfg.size - 1); break;
      case 1: y = std::max(y - 1, 0); break;
      case 2: x = std::max(x - 1, 0); break;
      case 3: x = std::min(x + 1, cfg.size - 1); break;
      case 4: break;
      default: throw maid::MaidError("InvalidEnv", "unknown action");
    }
  }
  double reward = 0;
  for (const auto& l : cfg.landmarks) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : next.agents) best = std::min(best, dist(p, l));
    reward -= best;
  }
  for (std::size_t i = 0; i < next.agents.size(); ++i)
    for (std::size_t j = i + 1; j < next.agents.size(); ++j)
      if (next.agents[i] == next.agents[j]) reward -= 1.0;
  return {next, reward};
}

double intrinsic_fixed_landmark(const GridSpreadConfig& cfg, const GridSpreadState& state,
                                int targeted, int landmark_index) {
  return -dist(state.agents.at(targeted), cfg.landmarks.at(landmark_index));
}

double intrinsic_farthest_landmark(const GridSpreadConfig& cfg, const GridSpreadState& state,
                                   int targeted) {
  if (state.agents.size() != 3)
    throw maid::MaidError("WrongTeamSize", "farthest-landmark signal needs exactly 2 teammates");
  std::vector<int> mates;
  for (int i = 0; i < static_cast<int>(state.agents.size()); ++i)
    if (i != targeted) mates.push_back(i);
  double best_dmin = -1;
  std::size_t best_l = 0;
  for (std::size_t l = 0; l < cfg.landmarks.size(); ++l) {
    double dmin = std::min(dist(state.agents[mates[0]], cfg.landmarks[l]),
                           dist(state.agents[mates[1]], cfg.landmarks[l]));
    if (dmin > best_dmin) {  // strict: ties keep the lowest landmark index
      best_dmin = dmin;
      best_l = l;
    }
  }
  return -dist(state.agents.at(targeted), cfg.landmarks[best_l]);
}

std::string gridspread_obs_key(const GridSpreadState& state, int agent) {
  const auto& [x, y] = state.agents.at(agent);
  return std::to_string(x) + "," + std::to_string(y);
}

}  // namespace marl
