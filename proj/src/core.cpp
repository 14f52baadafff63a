#include "maid/core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace maid {

namespace {

std::unordered_map<std::string, std::size_t> make_index(const Maid& m) {
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < m.nodes.size(); ++i) idx.emplace(m.nodes[i].id, i);
  return idx;
}

}  // namespace

const Node& Maid::node(const std::string& id) const {
  return nodes[index_of(id)];
}

Node& Maid::node(const std::string& id) {
  return nodes[const_cast<const Maid*>(this)->index_of(id)];
}

bool Maid::has_node(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return true;
  return false;
}

std::size_t Maid::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  throw MaidError("UnknownNode", "no node named '" + id + "'");
}

std::vector<std::string> Maid::decision_ids() const {
  std::vector<std::string> out;
  for (const auto& n : nodes)
    if (n.kind == NodeKind::Decision) out.push_back(n.id);
  return out;
}

std::vector<std::string> Maid::utility_ids() const {
  std::vector<std::string> out;
  for (const auto& n : nodes)
    if (n.kind == NodeKind::Utility) out.push_back(n.id);
  return out;
}

std::vector<std::string> Maid::children_of(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& n : nodes)
    if (std::find(n.parents.begin(), n.parents.end(), id) != n.parents.end())
      out.push_back(n.id);
  return out;
}

std::vector<std::string> Maid::topo_order() const {
  auto idx = make_index(*this);
  std::vector<std::size_t> indeg(nodes.size(), 0);
  for (const auto& n : nodes) indeg[idx.at(n.id)] = n.parents.size();
  std::vector<std::string> order;
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (indeg[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    std::size_t i = ready.front();
    ready.erase(ready.begin());
    order.push_back(nodes[i].id);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const auto& ps = nodes[j].parents;
      if (std::find(ps.begin(), ps.end(), nodes[i].id) != ps.end()) {
        if (--indeg[j] == 0) ready.push_back(j);
      }
    }
  }
  if (order.size() != nodes.size())
    throw MaidError("CycleDetected", "graph contains a directed cycle");
  return order;
}

std::size_t Maid::context_count(const Node& n) const {
  std::size_t c = 1;
  for (const auto& p : n.parents) c *= outcome_count(node(p));
  return c;
}

std::size_t Maid::outcome_count(const Node& n) const {
  return n.kind == NodeKind::Utility ? 1 : n.domain.size();
}

bool StrategyProfile::covers(const Maid& m) const {
  for (const auto& d : m.decision_ids())
    if (!rules.count(d)) return false;
  return true;
}

double JointDistribution::total() const {
  double s = 0;
  for (const auto& [a, p] : support) s += p;
  return s;
}

Maid build_maid(Maid spec) {
  std::set<std::string> agent_set(spec.agents.begin(), spec.agents.end());
  std::set<std::string> ids;
  for (const auto& n : spec.nodes) {
    if (!ids.insert(n.id).second)
      throw MaidError("DuplicateNode", "node '" + n.id + "' declared twice");
  }
  for (const auto& n : spec.nodes) {
    for (const auto& p : n.parents) {
      if (!ids.count(p))
        throw MaidError("UnknownParent", "node '" + n.id + "' has unknown parent '" + p + "'");
      if (spec.node(p).kind == NodeKind::Utility)
        throw MaidError("UtilityHasChild",
                        "utility node '" + p + "' is a parent of '" + n.id + "'");
    }
    if (n.kind == NodeKind::Decision) {
      if (n.owners.size() != 1)
        throw MaidError("UnknownAgent", "decision '" + n.id + "' must have exactly one owner");
      if (!agent_set.count(*n.owners.begin()))
        throw MaidError("UnknownAgent", "decision '" + n.id + "' owned by unknown agent");
    }
    if (n.kind == NodeKind::Utility) {
      if (n.owners.empty())
        throw MaidError("UnknownAgent", "utility '" + n.id + "' has no owner");
      for (const auto& a : n.owners)
        if (!agent_set.count(a))
          throw MaidError("UnknownAgent", "utility '" + n.id + "' owned by unknown agent");
    }
    if (n.kind != NodeKind::Utility && n.domain.empty())
      throw MaidError("BadDomain", "node '" + n.id + "' has empty domain");
  }
  spec.topo_order();  // throws CycleDetected

  for (const auto& n : spec.nodes) {
    std::size_t rows = spec.context_count(n);
    if (n.kind == NodeKind::Chance) {
      if (n.table.size() != rows * n.domain.size())
        throw MaidError("MissingCptRow", "chance node '" + n.id + "' table has " +
                                             std::to_string(n.table.size()) + " entries, expected " +
                                             std::to_string(rows * n.domain.size()));
      for (std::size_t r = 0; r < rows; ++r) {
        double s = 0;
        for (std::size_t k = 0; k < n.domain.size(); ++k) {
          double v = n.table[r * n.domain.size() + k];
          if (v < -kRowTol || v > 1 + kRowTol)
            throw MaidError("CptRowNotNormalized",
                            "entry out of [0,1] in CPT of '" + n.id + "'");
          s += v;
        }
        if (std::abs(s - 1.0) > kRowTol)
          throw MaidError("CptRowNotNormalized",
                          "row " + std::to_string(r) + " of '" + n.id + "' sums to " +
                              std::to_string(s));
      }
    } else if (n.kind == NodeKind::Utility) {
      if (n.table.size() != rows)
        throw MaidError("MissingCptRow", "utility node '" + n.id + "' table has " +
                                             std::to_string(n.table.size()) +
                                             " entries, expected " + std::to_string(rows));
      for (double v : n.table)
        if (!std::isfinite(v))
          throw MaidError("BadDomain", "utility '" + n.id + "' has non-finite value");
    }
  }
  return spec;
}

Maid induce(const Maid& m, const StrategyProfile& profile) {
  Maid out = m;
  for (const auto& [id, rule] : profile.rules) {
    if (!out.has_node(id) || out.node(id).kind != NodeKind::Decision)
      throw MaidError("RuleDomainMismatch", "'" + id + "' is not a decision node");
    Node& n = out.node(id);
    std::size_t expected = out.context_count(n) * n.domain.size();
    if (rule.table.size() != expected)
      throw MaidError("RuleDomainMismatch",
                      "rule for '" + id + "' has " + std::to_string(rule.table.size()) +
                          " entries, expected " + std::to_string(expected));
    n.kind = NodeKind::Chance;
    n.table = rule.table;
  }
  return out;
}

std::size_t context_index(const Maid& m, const Node& n,
                          const std::function<std::size_t(const std::string&)>& value_of) {
  std::size_t idx = 0;
  for (const auto& p : n.parents) {
    idx = idx * m.outcome_count(m.node(p)) + value_of(p);
  }
  return idx;
}

namespace {

// Depth-first product of CPDs over a topological order, pruning zero branches.
void enumerate_rec(const Maid& m, const std::vector<std::string>& order, std::size_t depth,
                   std::unordered_map<std::string, std::size_t>& value, double prob,
                   JointDistribution& out) {
  if (depth == order.size()) {
    Assignment a(m.nodes.size());
    for (std::size_t i = 0; i < m.nodes.size(); ++i) a[i] = value.at(m.nodes[i].id);
    out.support.emplace_back(std::move(a), prob);
    return;
  }
  const Node& n = m.node(order[depth]);
  auto lookup = [&](const std::string& id) { return value.at(id); };
  if (n.kind == NodeKind::Utility) {
    value[n.id] = 0;  // value is a function of the parents
    enumerate_rec(m, order, depth + 1, value, prob, out);
    value.erase(n.id);
    return;
  }
  std::size_t row = context_index(m, n, lookup);
  for (std::size_t k = 0; k < n.domain.size(); ++k) {
    double p = n.table[row * n.domain.size() + k];
    if (p <= 0) continue;
    value[n.id] = k;
    enumerate_rec(m, order, depth + 1, value, prob * p, out);
  }
  value.erase(n.id);
}

}  // namespace

JointDistribution joint_distribution(const Maid& m) {
  for (const auto& n : m.nodes)
    if (n.kind == NodeKind::Decision)
      throw MaidError("UnassignedDecision", "decision '" + n.id + "' has no rule");
  JointDistribution jd;
  std::unordered_map<std::string, std::size_t> value;
  enumerate_rec(m, m.topo_order(), 0, value, 1.0, jd);
  return jd;
}

double utility_value(const Maid& m, const Node& util, const Assignment& a) {
  auto lookup = [&](const std::string& id) { return a[m.index_of(id)]; };
  return util.table[context_index(m, util, lookup)];
}

double expected_utility(const Maid& m, const StrategyProfile& profile,
                        const std::string& agent) {
  if (std::find(m.agents.begin(), m.agents.end(), agent) == m.agents.end())
    throw MaidError("UnknownAgent", "no agent named '" + agent + "'");
  if (!profile.covers(m))
    throw MaidError("PartialProfile", "expected_utility requires a full profile");
  Maid induced = induce(m, profile);
  JointDistribution jd = joint_distribution(induced);
  double eu = 0;
  for (const auto& [a, p] : jd.support) {
    double u = 0;
    for (const auto& n : induced.nodes)
      if (n.kind == NodeKind::Utility && n.owners.count(agent))
        u += utility_value(induced, n, a);
    eu += p * u;
  }
  return eu;
}

std::map<double, double> total_utility_distribution(const Maid& m,
                                                    const StrategyProfile& profile) {
  if (!profile.covers(m))
    throw MaidError("PartialProfile", "total_utility_distribution requires a full profile");
  Maid induced = induce(m, profile);
  JointDistribution jd = joint_distribution(induced);
  std::map<double, double> dist;
  for (const auto& [a, p] : jd.support) {
    double u = 0;
    for (const auto& n : induced.nodes)
      if (n.kind == NodeKind::Utility) u += utility_value(induced, n, a);
    // merge keys that agree within kProbTol
    auto it = dist.lower_bound(u - kProbTol);
    if (it != dist.end() && std::abs(it->first - u) <= kProbTol)
      it->second += p;
    else
      dist[u] += p;
  }
  if (dist.empty()) dist[0.0] = 1.0;  // utility-free network: empty sum
  return dist;
}

double total_utility_prob(const Maid& m, const StrategyProfile& profile, double target) {
  auto dist = total_utility_distribution(m, profile);
  double p = 0;
  for (const auto& [u, q] : dist)
    if (std::abs(u - target) <= kProbTol) p += q;
  return p;
}

}  // namespace maid
