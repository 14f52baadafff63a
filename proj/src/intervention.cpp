#include "maid/intervention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "maid/io.hpp"

namespace maid {

namespace {

std::size_t checked_product(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

// Visits the cartesian product of the decisions' rule grids in canonical
// order (first decision slowest); visit may return false to stop early.
void for_each_profile(const Maid& m, const RuleGridConfig& grid,
                      const std::function<bool(const StrategyProfile&)>& visit) {
  auto ds = m.decision_ids();
  std::vector<std::vector<DecisionRule>> grids;
  std::size_t count = 1;
  for (const auto& d : ds) {
    grids.push_back(enumerate_rules(m, d, grid));
    count = checked_product(count, grids.back().size());
  }
  if (count > grid.profile_cap)
    throw MaidError("GridTooLarge", "profile space exceeds the configured cap");
  std::vector<std::size_t> digit(ds.size(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    StrategyProfile p;
    for (std::size_t k = 0; k < ds.size(); ++k) p.rules[ds[k]] = grids[k][digit[k]];
    if (!visit(p)) return;
    for (std::size_t k = ds.size(); k-- > 0;) {
      if (++digit[k] < grids[k].size()) break;
      digit[k] = 0;
    }
  }
}

bool joints_equal(const JointDistribution& a, const JointDistribution& b) {
  if (a.support.size() != b.support.size()) return false;
  for (std::size_t i = 0; i < a.support.size(); ++i) {
    if (a.support[i].first != b.support[i].first) return false;
    if (std::abs(a.support[i].second - b.support[i].second) > kProbTol) return false;
  }
  return true;
}

}  // namespace

Maid apply_pre_strategy(const Maid& m, const PreStrategy& pre) {
  if (pre.null) return m;
  if (!m.has_node(pre.target) || m.node(pre.target).kind != NodeKind::Decision)
    throw MaidError("TargetNotDecision", "'" + pre.target + "' is not a decision node");
  if (!m.has_node(pre.guidance) || !m.node(pre.guidance).guidance)
    throw MaidError("GuidanceNotFlagged", "'" + pre.guidance + "' is not a guidance node");
  if (m.has_node(pre.pre_node_id))
    throw MaidError("IdCollision", "node '" + pre.pre_node_id + "' already exists");

  Maid out = m;
  const Node& target = m.node(pre.target);
  Node pre_node;
  pre_node.id = pre.pre_node_id;
  pre_node.kind = NodeKind::Chance;
  pre_node.parents = target.parents;
  if (std::find(pre_node.parents.begin(), pre_node.parents.end(), pre.guidance) ==
      pre_node.parents.end())
    pre_node.parents.push_back(pre.guidance);
  pre_node.domain = target.domain;  // a recommendation for the target decision
  pre_node.table = pre.rule.table;
  out.nodes.push_back(std::move(pre_node));
  out.node(pre.target).parents.push_back(pre.pre_node_id);
  return build_maid(std::move(out));
}

double resolve_u_star(const Maid& m, const OutcomeSpec& outcome, const RuleGridConfig& grid) {
  if (outcome.u_star) return *outcome.u_star;
  double best = -std::numeric_limits<double>::infinity();
  for_each_profile(m, grid, [&](const StrategyProfile& p) {
    for (const auto& [u, prob] : total_utility_distribution(m, p))
      if (prob > kProbTol) best = std::max(best, u);
    return true;
  });
  return best;
}

NashSet intervened_nash_set(const Maid& m, const PreStrategy& pre, const RuleGridConfig& grid) {
  Maid intervened = apply_pre_strategy(m, pre);
  NashSet ns = enumerate_nash(intervened, grid);
  if (ns.equilibria.empty())
    throw MaidError("NoEquilibriumFound", "no equilibrium on the given grid");
  if (pre.null) return ns;  // empty intervention keeps the uniform measure

  // Compliance measure: the intervention re-weights equilibria by how often
  // the target actually realizes the recommendation; it cannot create new
  // equilibria, so non-compliant ones get weight 0 and are dropped.
  std::size_t target_i = intervened.index_of(pre.target);
  std::size_t pre_i = intervened.index_of(pre.pre_node_id);
  std::vector<JointDistribution> joints;
  std::vector<double> raw(ns.equilibria.size(), 0.0);
  for (std::size_t i = 0; i < ns.equilibria.size(); ++i) {
    joints.push_back(joint_distribution(induce(intervened, ns.equilibria[i])));
    for (const auto& [a, p] : joints.back().support)
      if (a[target_i] == a[pre_i]) raw[i] += p;
  }
  double total = 0;
  for (double w : raw) total += w;
  if (total <= kProbTol) raw.assign(raw.size(), 1.0);  // fully ignored: uniform fallback

  // Merge behaviorally identical equilibria (identical induced joints) and
  // drop zero-weight ones.
  NashSet out;
  std::vector<JointDistribution> kept;
  for (std::size_t i = 0; i < ns.equilibria.size(); ++i) {
    if (raw[i] <= kProbTol) continue;
    bool merged = false;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if (joints_equal(kept[k], joints[i])) {
        out.weights[k] += raw[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.equilibria.push_back(ns.equilibria[i]);
      out.weights.push_back(raw[i]);
      kept.push_back(joints[i]);
    }
  }
  double norm = 0;
  for (double w : out.weights) norm += w;
  for (double& w : out.weights) w /= norm;
  return out;
}

namespace {

double outcome_prob_under(const Maid& maid_for_profiles, const NashSet& ns, double u_star) {
  double p = 0;
  for (std::size_t i = 0; i < ns.equilibria.size(); ++i)
    p += ns.weights[i] * total_utility_prob(maid_for_profiles, ns.equilibria[i], u_star);
  return p;
}

// Write-once cache of baseline NE sets, keyed by MAID content and grid shape.
NashSet cached_nash_set(const Maid& m, const RuleGridConfig& grid) {
  static std::map<std::string, NashSet> cache;
  static std::mutex mu;
  std::string key = content_hash(serialize_maid(m)) + "|" + std::to_string(grid.mix_step);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  NashSet ns = enumerate_nash(m, grid);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(ns)).first->second;
}

}  // namespace

double interventional_outcome_prob(const Maid& m, const PreStrategy& pre,
                                   const OutcomeSpec& outcome, const RuleGridConfig& grid) {
  double u_star = resolve_u_star(m, outcome, grid);
  NashSet ns = intervened_nash_set(m, pre, grid);
  return outcome_prob_under(apply_pre_strategy(m, pre), ns, u_star);
}

CausalEffectReport causal_effect(const Maid& m, const PreStrategy& pre,
                                 const OutcomeSpec& outcome, const RuleGridConfig& grid) {
  CausalEffectReport r;
  r.u_star = resolve_u_star(m, outcome, grid);
  r.baseline = cached_nash_set(m, grid);
  if (r.baseline.equilibria.empty())
    throw MaidError("NoEquilibriumFound", "no baseline equilibrium on the given grid");
  r.induced = intervened_nash_set(m, pre, grid);
  r.p_baseline = outcome_prob_under(m, r.baseline, r.u_star);
  r.p_intervened = outcome_prob_under(apply_pre_strategy(m, pre), r.induced, r.u_star);
  r.delta = r.p_intervened - r.p_baseline;
  return r;
}

std::vector<PreStrategy> enumerate_pre_strategies(const Maid& m, const std::string& target,
                                                  const std::string& guidance,
                                                  const RuleGridConfig& pre_grid) {
  if (!m.has_node(target) || m.node(target).kind != NodeKind::Decision)
    throw MaidError("TargetNotDecision", "'" + target + "' is not a decision node");
  if (!m.has_node(guidance) || !m.node(guidance).guidance)
    throw MaidError("GuidanceNotFlagged", "'" + guidance + "' is not a guidance node");

  // Rule space for the pre node: build a scratch MAID where it is a decision
  // node with the exact parents/domain it will carry, and reuse the grid.
  Maid scratch = m;
  Node probe;
  probe.id = "__pre_probe__";
  probe.kind = NodeKind::Decision;
  probe.owners = {m.agents.front()};
  probe.parents = m.node(target).parents;
  if (std::find(probe.parents.begin(), probe.parents.end(), guidance) == probe.parents.end())
    probe.parents.push_back(guidance);
  probe.domain = m.node(target).domain;
  scratch.nodes.push_back(std::move(probe));

  std::vector<PreStrategy> out;
  out.push_back(PreStrategy::none());
  for (auto& rule : enumerate_rules(scratch, "__pre_probe__", pre_grid)) {
    PreStrategy p;
    p.null = false;
    p.target = target;
    p.guidance = guidance;
    p.rule = std::move(rule);
    p.rule.decision = p.pre_node_id;
    out.push_back(std::move(p));
  }
  return out;
}

std::pair<PreStrategy, CausalEffectReport> optimize_pre_strategy(
    const Maid& m, const std::string& target, const std::string& guidance,
    const OutcomeSpec& outcome, const RuleGridConfig& pre_grid, const RuleGridConfig& grid) {
  OutcomeSpec fixed = outcome;
  fixed.u_star = resolve_u_star(m, outcome, grid);  // resolve once, shared by all candidates
  std::pair<PreStrategy, CausalEffectReport> best;
  bool have = false;
  for (const auto& pre : enumerate_pre_strategies(m, target, guidance, pre_grid)) {
    CausalEffectReport r = causal_effect(m, pre, fixed, grid);
    if (!have || r.delta > best.second.delta + kProbTol) {
      best = {pre, r};
      have = true;
    }
  }
  return best;
}

double posterior_score(const Maid& m, const StrategyProfile& profile, const PreStrategy& pre,
                       const OutcomeSpec& outcome, const RuleGridConfig& grid,
                       std::optional<double> measure_weight) {
  Maid intervened = apply_pre_strategy(m, pre);
  double u_star = resolve_u_star(m, outcome, grid);
  double likelihood = total_utility_prob(intervened, profile, u_star);
  if (likelihood == 0.0) return 0.0;
  double w;
  if (measure_weight) {
    w = *measure_weight;
  } else {
    w = 0.0;
    NashSet ns = intervened_nash_set(m, pre, grid);
    JointDistribution jd = joint_distribution(induce(intervened, profile));
    for (std::size_t i = 0; i < ns.equilibria.size(); ++i) {
      if (joints_equal(jd, joint_distribution(induce(intervened, ns.equilibria[i])))) {
        w = ns.weights[i];
        break;
      }
    }
  }
  return likelihood * w;
}

}  // namespace maid
