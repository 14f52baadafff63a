#include "marl/qlearn.hpp"

#include <algorithm>
#include <limits>

namespace marl {

double EpsilonSchedule::at(std::size_t step, std::size_t total_steps) const {
  double horizon = decay_fraction * static_cast<double>(total_steps);
  if (horizon <= 0) return finish;
  double frac = std::min(1.0, static_cast<double>(step) / horizon);
  return start + (finish - start) * frac;
}

std::vector<double>& QTable::row(const std::string& key) {
  auto it = table.find(key);
  if (it == table.end()) it = table.emplace(key, std::vector<double>(n_actions, 0.0)).first;
  return it->second;
}

double QTable::max_value(const std::string& key) const {
  auto it = table.find(key);
  if (it == table.end()) return 0.0;
  return *std::max_element(it->second.begin(), it->second.end());
}

double QTable::value(const std::string& key, int action) const {
  auto it = table.find(key);
  return it == table.end() ? 0.0 : it->second[static_cast<std::size_t>(action)];
}

void iql_update(QTable& q, const std::string& obs, int action, double reward,
                const std::string& next_obs, bool done) {
  double target = reward + q.gamma * q.max_value(next_obs) * (done ? 0.0 : 1.0);
  double& cell = q.row(obs)[static_cast<std::size_t>(action)];
  cell += q.alpha * (target - cell);
}

double vdn_update(std::vector<QTable>& qs, const std::vector<std::string>& obs,
                  const std::vector<int>& actions, double team_reward,
                  const std::vector<std::string>& next_obs, bool done) {
  double joint = 0, next_joint = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    joint += qs[i].value(obs[i], actions[i]);
    next_joint += qs[i].max_value(next_obs[i]);
  }
  double td = team_reward + qs.front().gamma * next_joint * (done ? 0.0 : 1.0) - joint;
  double share = td / static_cast<double>(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    double& cell = qs[i].row(obs[i])[static_cast<std::size_t>(actions[i])];
    cell += qs[i].alpha * share;
  }
  return td;
}

namespace {

std::vector<int> all_actions(std::size_t n) {
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<int>(i);
  return out;
}

std::vector<int> best_actions(const QTable& q, const std::string& obs,
                              const std::vector<int>& legal) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> maxima;
  for (int a : legal) {
    double v = q.value(obs, a);
    if (v > best) {
      best = v;
      maxima.assign(1, a);
    } else if (v == best) {
      maxima.push_back(a);
    }
  }
  return maxima;
}

}  // namespace

int greedy_action(const QTable& q, const std::string& obs, const std::vector<int>& legal) {
  auto acts = legal.empty() ? all_actions(q.n_actions) : legal;
  return best_actions(q, obs, acts).front();
}

int epsilon_greedy_action(const QTable& q, const std::string& obs, double epsilon, Rng& rng,
                          const std::vector<int>& legal) {
  auto acts = legal.empty() ? all_actions(q.n_actions) : legal;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, acts.size() - 1);
    return acts[pick(rng)];
  }
  auto maxima = best_actions(q, obs, acts);
  if (maxima.size() == 1) return maxima.front();
  std::uniform_int_distribution<std::size_t> pick(0, maxima.size() - 1);
  return maxima[pick(rng)];
}

}  // namespace marl
