#include "maid/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maid {

namespace {

std::size_t checked_product(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

std::string dec_id(const std::string& agent, std::size_t t) {
  return "D_" + agent + "_t" + std::to_string(t);
}

}  // namespace

std::size_t MarkovGame::joint_action_count() const {
  std::size_t c = 1;
  for (const auto& a : actions) c *= a.size();
  return c;
}

std::size_t MarkovGame::joint_index(const std::vector<std::size_t>& action_per_agent) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < agents.size(); ++i)
    idx = idx * actions[i].size() + action_per_agent[i];
  return idx;
}

MarkovGame build_markov_game(MarkovGame spec) {
  if (spec.agents.empty() || spec.states.empty())
    throw MaidError("BadDomain", "agents and states must be nonempty");
  if (spec.actions.size() != spec.agents.size())
    throw MaidError("BadDomain", "one action set per agent required");
  for (const auto& a : spec.actions)
    if (a.empty()) throw MaidError("BadDomain", "empty action set");
  if (spec.horizon < 1) throw MaidError("BadDomain", "horizon must be at least 1");

  const std::size_t s = spec.states.size();
  const std::size_t ja = spec.joint_action_count();
  if (spec.transition.size() != s * ja * s)
    throw MaidError("MissingCptRow", "transition table has wrong size");
  if (spec.reward.size() != s * ja)
    throw MaidError("MissingCptRow", "reward table has wrong size");
  if (spec.initial.size() != s)
    throw MaidError("MissingCptRow", "initial distribution has wrong size");

  auto check_row = [](const double* row, std::size_t n, const char* what) {
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (row[i] < -kRowTol || row[i] > 1 + kRowTol)
        throw MaidError("CptRowNotNormalized", std::string(what) + " entry out of [0,1]");
      sum += row[i];
    }
    if (std::abs(sum - 1.0) > kRowTol)
      throw MaidError("CptRowNotNormalized", std::string(what) + " row does not sum to 1");
  };
  for (std::size_t r = 0; r < s * ja; ++r) check_row(&spec.transition[r * s], s, "transition");
  check_row(spec.initial.data(), s, "initial");
  for (double v : spec.reward)
    if (!std::isfinite(v)) throw MaidError("BadDomain", "non-finite reward");
  return spec;
}

Maid unroll(const MarkovGame& game, const UnrollOptions& opts) {
  const std::size_t n = game.agents.size();
  const std::size_t L = game.horizon;

  std::size_t outcomes = game.states.size();
  for (std::size_t t = 0; t < L; ++t) {
    outcomes = checked_product(outcomes, game.states.size());
    for (std::size_t i = 0; i < n; ++i) outcomes = checked_product(outcomes, game.actions[i].size());
  }
  if (outcomes > opts.outcome_cap)
    throw MaidError("UnrollTooLarge", "unrolled joint outcome space exceeds the cap");

  Maid m;
  m.agents = game.agents;

  Node s0;
  s0.id = "S_t0";
  s0.kind = NodeKind::Chance;
  s0.domain = game.states;
  s0.table = game.initial;
  m.nodes.push_back(std::move(s0));

  for (std::size_t t = 0; t < L; ++t) {
    std::string st = "S_t" + std::to_string(t);
    for (std::size_t i = 0; i < n; ++i) {
      Node d;
      d.id = dec_id(game.agents[i], t);
      d.kind = NodeKind::Decision;
      d.owners = {game.agents[i]};
      d.parents = {st};
      if (opts.sequential && i > 0) d.parents.push_back("I_t" + std::to_string(t));
      d.domain = game.actions[i];
      m.nodes.push_back(std::move(d));
      if (opts.sequential && i == 0 && n > 1) {
        // information-set node copying the first mover's choice
        Node info;
        info.id = "I_t" + std::to_string(t);
        info.kind = NodeKind::Chance;
        info.parents = {dec_id(game.agents[0], t)};
        info.domain = game.actions[0];
        info.table.assign(game.actions[0].size() * game.actions[0].size(), 0.0);
        for (std::size_t a = 0; a < game.actions[0].size(); ++a)
          info.table[a * game.actions[0].size() + a] = 1.0;
        m.nodes.push_back(std::move(info));
      }
    }
    std::vector<std::string> context = {st};
    for (std::size_t i = 0; i < n; ++i) context.push_back(dec_id(game.agents[i], t));

    Node u;
    u.id = "U_t" + std::to_string(t);
    u.kind = NodeKind::Utility;
    u.owners.insert(game.agents.begin(), game.agents.end());  // shared team reward
    u.parents = context;
    u.table = game.reward;
    m.nodes.push_back(std::move(u));

    Node sn;
    sn.id = "S_t" + std::to_string(t + 1);
    sn.kind = NodeKind::Chance;
    sn.parents = context;
    sn.domain = game.states;
    sn.table = game.transition;
    m.nodes.push_back(std::move(sn));
  }
  return build_maid(std::move(m));
}

namespace {

// Coordination payoff over the parents' index product: 1 when all parent
// values agree by index, else 0. Schematic — the paradigm classification is
// structural and does not read these numbers.
std::vector<double> coordination_table(const Maid& m, const std::vector<std::string>& parents) {
  std::vector<std::size_t> sizes;
  std::size_t rows = 1;
  for (const auto& p : parents) {
    sizes.push_back(m.outcome_count(m.node(p)));
    rows *= sizes.back();
  }
  std::vector<double> table(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t rem = r;
    std::vector<std::size_t> vals(sizes.size());
    for (std::size_t i = sizes.size(); i-- > 0;) {
      vals[i] = rem % sizes[i];
      rem /= sizes[i];
    }
    bool same = true;
    for (std::size_t i = 1; i < vals.size(); ++i) same &= (vals[i] % sizes[0]) == vals[0];
    table[r] = same ? 1.0 : 0.0;
  }
  return table;
}

}  // namespace

Maid apply_paradigm(const Maid& unrolled, const Paradigm& paradigm) {
  if (paradigm.kind != ParadigmKind::SelfOrganization &&
      paradigm.kind != ParadigmKind::GlobalIntervention &&
      paradigm.kind != ParadigmKind::TargetedIntervention)
    throw MaidError("UnknownParadigm", "unrecognized paradigm kind");

  Maid m = unrolled;
  const bool two_agent = paradigm.kind != ParadigmKind::GlobalIntervention;
  if (two_agent && m.agents.size() != 2)
    throw MaidError("UnknownParadigm", "this paradigm template requires exactly two agents");
  std::string h = paradigm.targeted.empty() ? m.agents.front() : paradigm.targeted;
  if (std::find(m.agents.begin(), m.agents.end(), h) == m.agents.end())
    throw MaidError("UnknownAgent", "targeted agent '" + h + "' not in the game");
  std::string a;
  if (two_agent) a = m.agents[0] == h ? m.agents[1] : m.agents[0];

  // Timesteps are identified by the unroll's team utility nodes.
  std::vector<std::size_t> steps;
  for (const auto& n : unrolled.nodes)
    if (n.kind == NodeKind::Utility && n.id.rfind("U_t", 0) == 0)
      steps.push_back(std::stoul(n.id.substr(3)));

  for (std::size_t t : steps) {
    std::string ts = "_t" + std::to_string(t);
    std::string z = "Z" + ts;
    m.nodes.erase(m.nodes.begin() +
                  static_cast<std::ptrdiff_t>(m.index_of("U" + ts)));

    auto add_utility = [&](const std::string& agent, std::vector<std::string> parents) {
      Node u;
      u.id = "U_" + agent + ts;
      u.kind = NodeKind::Utility;
      u.owners = {agent};
      u.parents = std::move(parents);
      u.table = coordination_table(m, u.parents);
      m.nodes.push_back(std::move(u));
    };

    switch (paradigm.kind) {
      case ParadigmKind::SelfOrganization: {
        // Z reads the non-targeted decision; the targeted agent coordinates
        // with it purely through its own utility.
        Node zn;
        zn.id = z;
        zn.kind = NodeKind::Chance;
        zn.guidance = true;
        zn.parents = {dec_id(a, t)};
        zn.domain = m.node(dec_id(a, t)).domain;
        std::size_t k = zn.domain.size();
        zn.table.assign(k * k, 0.0);
        for (std::size_t v = 0; v < k; ++v) zn.table[v * k + v] = 1.0;
        m.nodes.push_back(std::move(zn));
        add_utility(h, {dec_id(h, t), z});
        add_utility(a, {dec_id(h, t), dec_id(a, t)});
        break;
      }
      case ParadigmKind::GlobalIntervention: {
        // Z is a root signal observed by every decision and paid to everyone.
        Node zn;
        zn.id = z;
        zn.kind = NodeKind::Chance;
        zn.guidance = true;
        zn.domain = {"0", "1"};
        zn.table = {0.5, 0.5};
        m.nodes.push_back(std::move(zn));
        for (const auto& agent : m.agents) m.node(dec_id(agent, t)).parents.push_back(z);
        for (const auto& agent : m.agents) add_utility(agent, {dec_id(agent, t), z});
        break;
      }
      case ParadigmKind::TargetedIntervention: {
        // Z encodes the desired outcome and drives a recommendation node
        // observed only by the targeted decision; Z also feeds the targeted
        // agent's utility as the intrinsic reward channel.
        Node zn;
        zn.id = z;
        zn.kind = NodeKind::Chance;
        zn.guidance = true;
        zn.domain = {"0", "1"};
        zn.table = {1.0, 0.0};  // deterministic desired-outcome encoding
        m.nodes.push_back(std::move(zn));
        const std::string pre_id = "D_pre" + ts;
        Node pre;
        pre.id = pre_id;
        pre.kind = NodeKind::Chance;
        pre.parents = {z};
        pre.domain = m.node(dec_id(h, t)).domain;
        pre.table.assign(2 * pre.domain.size(), 0.0);
        for (std::size_t r = 0; r < 2; ++r) pre.table[r * pre.domain.size()] = 1.0;
        m.nodes.push_back(std::move(pre));
        m.node(dec_id(h, t)).parents.push_back(pre_id);
        add_utility(h, {dec_id(h, t), z});
        add_utility(a, {dec_id(h, t), dec_id(a, t)});
        break;
      }
    }
  }
  return build_maid(std::move(m));
}

double trajectory_expected_return(const MarkovGame& game,
                                  const std::vector<std::vector<std::size_t>>& policy) {
  const std::size_t s = game.states.size();
  std::vector<double> dist = game.initial;
  double total = 0;
  for (std::size_t t = 0; t < game.horizon; ++t) {
    std::vector<double> next(s, 0.0);
    for (std::size_t st = 0; st < s; ++st) {
      if (dist[st] == 0) continue;
      std::vector<std::size_t> acts(game.agents.size());
      for (std::size_t i = 0; i < game.agents.size(); ++i) acts[i] = policy[i][st];
      std::size_t ja = game.joint_index(acts);
      total += dist[st] * game.reward[st * game.joint_action_count() + ja];
      for (std::size_t sn = 0; sn < s; ++sn)
        next[sn] += dist[st] * game.transition[(st * game.joint_action_count() + ja) * s + sn];
    }
    dist = std::move(next);
  }
  return total;
}

StrategyProfile stationary_profile(const MarkovGame& game, const Maid& unrolled,
                                   const std::vector<std::vector<std::size_t>>& policy) {
  StrategyProfile p;
  for (std::size_t t = 0; t < game.horizon; ++t) {
    for (std::size_t i = 0; i < game.agents.size(); ++i) {
      const std::string id = dec_id(game.agents[i], t);
      const Node& d = unrolled.node(id);
      const std::size_t k = d.domain.size();
      DecisionRule rule;
      rule.decision = id;
      rule.table.assign(unrolled.context_count(d) * k, 0.0);
      // parents are {S_t}; one context per state
      for (std::size_t st = 0; st < game.states.size(); ++st)
        rule.table[st * k + policy[i][st]] = 1.0;
      p.rules[id] = rule;
    }
  }
  return p;
}

}  // namespace maid
