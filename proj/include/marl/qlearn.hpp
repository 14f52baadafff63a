#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "marl/gridspread.hpp"  // Rng

namespace marl {

// Linear decay from start to finish over decay_fraction of the budget,
// flat afterwards.
struct EpsilonSchedule {
  double start = 1.0;
  double finish = 0.05;
  double decay_fraction = 0.6;

  double at(std::size_t step, std::size_t total_steps) const;
};

// One agent's tabular action-value function; rows appear zero-initialized on
// first touch.
struct QTable {
  std::size_t n_actions = 0;
  double alpha = 0.1;
  double gamma = 0.95;
  std::unordered_map<std::string, std::vector<double>> table;

  std::vector<double>& row(const std::string& key);
  double max_value(const std::string& key) const;
  double value(const std::string& key, int action) const;
};

// One-step Q-learning: q[o,a] += alpha * (r + gamma * max q[o'] * (1-done) - q[o,a]).
void iql_update(QTable& q, const std::string& obs, int action, double reward,
                const std::string& next_obs, bool done);

// Tabular value decomposition: the joint value is the sum of per-agent
// entries; the shared TD error is split equally across agents. Returns the
// TD error for diagnostics.
double vdn_update(std::vector<QTable>& qs, const std::vector<std::string>& obs,
                  const std::vector<int>& actions, double team_reward,
                  const std::vector<std::string>& next_obs, bool done);

// Greedy action among `legal` (all actions when empty), first maximum wins.
int greedy_action(const QTable& q, const std::string& obs, const std::vector<int>& legal = {});

// Epsilon-greedy with uniform tie-breaking among maxima.
int epsilon_greedy_action(const QTable& q, const std::string& obs, double epsilon, Rng& rng,
                          const std::vector<int>& legal = {});

}  // namespace marl
