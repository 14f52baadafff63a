#include "maid/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "maid/graph.hpp"

namespace maid {

namespace {

// Saturating product, used for cap checks before materializing a grid.
std::size_t checked_product(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

// Compositions of `total` into `parts` nonnegative integers, first coordinate
// descending (so the pure first action comes first).
void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t v = total + 1; v-- > 0;) {
    cur.push_back(v);
    compositions(total - v, parts - 1, cur, out);
    cur.pop_back();
  }
}

// Per-context candidate distributions for one decision node.
std::vector<std::vector<double>> context_choices(std::size_t k, const RuleGridConfig& grid) {
  std::vector<std::vector<double>> out;
  if (grid.mix_step <= 0.0) {
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<double> row(k, 0.0);
      row[a] = 1.0;
      out.push_back(std::move(row));
    }
    return out;
  }
  auto steps = static_cast<std::size_t>(std::llround(1.0 / grid.mix_step));
  if (steps == 0 || std::abs(steps * grid.mix_step - 1.0) > 1e-9)
    throw MaidError("GridTooLarge", "mix_step must evenly divide 1");
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> cur;
  compositions(steps, k, cur, comps);
  for (const auto& c : comps) {
    std::vector<double> row(k);
    for (std::size_t a = 0; a < k; ++a) row[a] = static_cast<double>(c[a]) / steps;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::vector<DecisionRule> enumerate_rules(const Maid& m, const std::string& d,
                                          const RuleGridConfig& grid) {
  const Node& n = m.node(d);
  if (n.kind != NodeKind::Decision)
    throw MaidError("NotADecision", "'" + d + "' is not a decision node");
  const std::size_t contexts = m.context_count(n);
  const std::size_t k = n.domain.size();
  auto choices = context_choices(k, grid);

  std::size_t count = 1;
  for (std::size_t c = 0; c < contexts; ++c) count = checked_product(count, choices.size());
  if (count > grid.per_decision_cap)
    throw MaidError("GridTooLarge", "rule grid for '" + d + "' exceeds the cap");

  std::vector<DecisionRule> rules;
  rules.reserve(count);
  std::vector<std::size_t> digit(contexts, 0);
  for (std::size_t i = 0; i < count; ++i) {
    DecisionRule r;
    r.decision = d;
    r.table.reserve(contexts * k);
    for (std::size_t c = 0; c < contexts; ++c) {
      const auto& row = choices[digit[c]];
      r.table.insert(r.table.end(), row.begin(), row.end());
    }
    rules.push_back(std::move(r));
    // increment mixed-radix counter, last context fastest
    for (std::size_t c = contexts; c-- > 0;) {
      if (++digit[c] < choices.size()) break;
      digit[c] = 0;
    }
  }
  return rules;
}

namespace {

// Iterates the cartesian product of rule grids for `decisions`, calling
// visit(candidate rules) for each combination in canonical grid order (first
// decision slowest). Returns false if visit ever returns false (early stop).
bool for_each_combination(const std::vector<std::vector<DecisionRule>>& grids,
                          const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> digit(grids.size(), 0);
  while (true) {
    if (!visit(digit)) return false;
    std::size_t c = grids.size();
    while (c-- > 0) {
      if (++digit[c] < grids[c].size()) break;
      digit[c] = 0;
      if (c == 0) return true;
    }
    if (grids.empty()) return true;
  }
}

std::size_t combination_count(const std::vector<std::vector<DecisionRule>>& grids,
                              std::size_t cap, const char* what) {
  std::size_t count = 1;
  for (const auto& g : grids) count = checked_product(count, g.size());
  if (count > cap) throw MaidError(what, "search space exceeds the configured cap");
  return count;
}

}  // namespace

StrategyProfile best_response(const Maid& m, const StrategyProfile& profile,
                              const std::set<std::string>& subset,
                              const RuleGridConfig& grid) {
  if (subset.empty()) throw MaidError("MixedOwnership", "empty decision subset");
  std::string owner;
  for (const auto& d : subset) {
    const Node& n = m.node(d);
    if (n.kind != NodeKind::Decision)
      throw MaidError("MixedOwnership", "'" + d + "' is not a decision node");
    if (owner.empty())
      owner = *n.owners.begin();
    else if (owner != *n.owners.begin())
      throw MaidError("MixedOwnership", "subset spans more than one agent");
  }
  for (const auto& d : m.decision_ids())
    if (!subset.count(d) && !profile.rules.count(d))
      throw MaidError("IncompleteContext", "decision '" + d + "' has no fixed rule");

  std::vector<std::string> ds(subset.begin(), subset.end());
  std::vector<std::vector<DecisionRule>> grids;
  for (const auto& d : ds) grids.push_back(enumerate_rules(m, d, grid));
  combination_count(grids, grid.profile_cap, "GridTooLarge");

  StrategyProfile best;
  double best_eu = -std::numeric_limits<double>::infinity();
  for_each_combination(grids, [&](const std::vector<std::size_t>& digit) {
    StrategyProfile cand = profile;
    for (std::size_t i = 0; i < ds.size(); ++i) cand.rules[ds[i]] = grids[i][digit[i]];
    double eu = expected_utility(m, cand, owner);
    if (eu > best_eu) {
      best_eu = eu;
      best = cand;
    }
    return true;
  });
  return best;
}

namespace {

// No joint grid deviation of `agent`'s decisions (others fixed at `profile`)
// improves its expected utility by more than tol.
bool agent_rules_optimal(const Maid& m, const StrategyProfile& profile,
                         const std::string& agent, const std::vector<std::string>& ds,
                         const RuleGridConfig& grid, double tol) {
  if (ds.empty()) return true;
  double base = expected_utility(m, profile, agent);
  std::vector<std::vector<DecisionRule>> grids;
  for (const auto& d : ds) grids.push_back(enumerate_rules(m, d, grid));
  combination_count(grids, grid.profile_cap, "GridTooLarge");
  return for_each_combination(grids, [&](const std::vector<std::size_t>& digit) {
    StrategyProfile cand = profile;
    for (std::size_t i = 0; i < ds.size(); ++i) cand.rules[ds[i]] = grids[i][digit[i]];
    return expected_utility(m, cand, agent) <= base + tol;
  });
}

}  // namespace

bool is_nash(const Maid& m, const StrategyProfile& profile, const RuleGridConfig& grid,
             double tol) {
  if (!profile.covers(m)) throw MaidError("PartialProfile", "is_nash requires a full profile");
  for (const auto& agent : m.agents) {
    std::vector<std::string> ds;
    for (const auto& d : m.decision_ids())
      if (m.node(d).owners.count(agent)) ds.push_back(d);
    if (!agent_rules_optimal(m, profile, agent, ds, grid, tol)) return false;
  }
  return true;
}

NashSet enumerate_nash(const Maid& m, const RuleGridConfig& grid, double tol) {
  auto ds = m.decision_ids();
  std::vector<std::vector<DecisionRule>> grids;
  for (const auto& d : ds) grids.push_back(enumerate_rules(m, d, grid));
  combination_count(grids, grid.profile_cap, "GridTooLarge");

  NashSet out;
  for_each_combination(grids, [&](const std::vector<std::size_t>& digit) {
    StrategyProfile cand;
    for (std::size_t i = 0; i < ds.size(); ++i) cand.rules[ds[i]] = grids[i][digit[i]];
    if (is_nash(m, cand, grid, tol)) out.equilibria.push_back(std::move(cand));
    return true;
  });
  out.weights.assign(out.equilibria.size(),
                     out.equilibria.empty() ? 0.0 : 1.0 / out.equilibria.size());
  return out;
}

StrategyProfile backward_induction(
    const Maid& m, const RuleGridConfig& grid,
    const std::optional<std::map<std::string, DecisionRule>>& placeholders) {
  auto cg = component_graph(relevance_graph(m));

  // Seed every decision with a placeholder rule; decisions in later components
  // are not s-reachable from earlier ones, so the placeholders cannot affect
  // the earlier optimizations.
  StrategyProfile profile;
  for (const auto& d : m.decision_ids()) {
    if (placeholders && placeholders->count(d))
      profile.rules[d] = placeholders->at(d);
    else
      profile.rules[d] = enumerate_rules(m, d, grid).front();
  }

  for (const auto& block : cg.components) {
    if (block.size() == 1) {
      profile = best_response(m, profile, {block[0]}, grid);
      continue;
    }
    // Joint block: exhaustive search for a block-level equilibrium with
    // everything outside the block held fixed.
    std::vector<std::vector<DecisionRule>> grids;
    for (const auto& d : block) grids.push_back(enumerate_rules(m, d, grid));
    combination_count(grids, grid.profile_cap, "BlockTooLarge");

    std::set<std::string> block_agents;
    for (const auto& d : block) block_agents.insert(*m.node(d).owners.begin());

    bool found = false;
    for_each_combination(grids, [&](const std::vector<std::size_t>& digit) {
      StrategyProfile cand = profile;
      for (std::size_t i = 0; i < block.size(); ++i) cand.rules[block[i]] = grids[i][digit[i]];
      for (const auto& agent : block_agents) {
        std::vector<std::string> ds;
        for (const auto& d : block)
          if (m.node(d).owners.count(agent)) ds.push_back(d);
        if (!agent_rules_optimal(m, cand, agent, ds, grid, kProbTol)) return true;
      }
      profile = cand;
      found = true;
      return false;  // first block equilibrium in grid order wins
    });
    if (!found)
      throw MaidError("NoEquilibriumFound",
                      "no block-level equilibrium exists on the given grid");
  }
  return profile;
}

}  // namespace maid
