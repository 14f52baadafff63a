#include "maid/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace maid {

bool RelevanceGraph::has_edge(const std::string& from, const std::string& to) const {
  return std::find(edges.begin(), edges.end(), std::make_pair(from, to)) != edges.end();
}

bool RelevanceGraph::cyclic() const {
  // Kahn's algorithm on the relevance graph itself.
  std::unordered_map<std::string, int> indeg;
  for (const auto& n : nodes) indeg[n] = 0;
  for (const auto& [a, b] : edges) indeg[b]++;
  std::deque<std::string> ready;
  for (const auto& n : nodes)
    if (indeg[n] == 0) ready.push_back(n);
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto n = ready.front();
    ready.pop_front();
    ++seen;
    for (const auto& [a, b] : edges)
      if (a == n && --indeg[b] == 0) ready.push_back(b);
  }
  return seen != nodes.size();
}

bool is_active_path(const Maid& m, const std::vector<std::string>& path,
                    const std::set<std::string>& evidence) {
  if (path.size() < 2) throw MaidError("NotAPath", "path needs at least two nodes");
  auto is_parent = [&](const std::string& p, const std::string& c) {
    const auto& ps = m.node(c).parents;
    return std::find(ps.begin(), ps.end(), p) != ps.end();
  };
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!is_parent(path[i], path[i + 1]) && !is_parent(path[i + 1], path[i]))
      throw MaidError("NotAPath", "'" + path[i] + "' and '" + path[i + 1] + "' not adjacent");
  }
  // descendant closure for collider activation
  auto has_observed_descendant = [&](const std::string& v) {
    std::deque<std::string> q{v};
    std::unordered_set<std::string> seen;
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      if (!seen.insert(u).second) continue;
      if (evidence.count(u)) return true;
      for (const auto& c : m.children_of(u)) q.push_back(c);
    }
    return false;
  };
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    bool collider = is_parent(path[i - 1], path[i]) && is_parent(path[i + 1], path[i]);
    if (collider) {
      if (!has_observed_descendant(path[i])) return false;
    } else {
      if (evidence.count(path[i])) return false;
    }
  }
  return true;
}

namespace {

// Reachability formulation of d-connection over (node, direction) states.
bool d_connected(const Maid& m, const std::string& x, const std::string& y,
                 const std::set<std::string>& evidence) {
  std::unordered_set<std::string> anc;
  {
    std::deque<std::string> q(evidence.begin(), evidence.end());
    while (!q.empty()) {
      auto v = q.front();
      q.pop_front();
      if (!anc.insert(v).second) continue;
      for (const auto& p : m.node(v).parents) q.push_back(p);
    }
  }
  enum Dir { Up, Down };
  std::set<std::pair<std::string, int>> visited;
  std::deque<std::pair<std::string, int>> q{{x, Up}};
  while (!q.empty()) {
    auto [v, d] = q.front();
    q.pop_front();
    if (!visited.insert({v, d}).second) continue;
    if (!evidence.count(v) && v == y) return true;
    if (d == Up && !evidence.count(v)) {
      for (const auto& p : m.node(v).parents) q.push_back({p, Up});
      for (const auto& c : m.children_of(v)) q.push_back({c, Down});
    } else if (d == Down) {
      if (!evidence.count(v))
        for (const auto& c : m.children_of(v)) q.push_back({c, Down});
      if (anc.count(v))
        for (const auto& p : m.node(v).parents) q.push_back({p, Up});
    }
  }
  return false;
}

}  // namespace

bool d_separated(const Maid& m, const std::string& x, const std::string& y,
                 const std::set<std::string>& evidence) {
  if (x == y) throw MaidError("NodeInEvidence", "endpoints must differ");
  if (evidence.count(x) || evidence.count(y))
    throw MaidError("NodeInEvidence", "query node is in the evidence set");
  return !d_connected(m, x, y, evidence);
}

bool s_reachable(const Maid& m, const std::string& d, const std::string& d_prime) {
  const Node& dn = m.node(d);
  const Node& dpn = m.node(d_prime);
  if (dn.kind != NodeKind::Decision || dpn.kind != NodeKind::Decision)
    throw MaidError("NotADecision", "s_reachable needs two decision nodes");
  const std::string& owner = *dn.owners.begin();

  // temporary extended graph with a fresh parent of d_prime
  Maid ext = m;
  Node fresh;
  fresh.id = "__s_hat__";
  fresh.kind = NodeKind::Chance;
  fresh.domain = {"0"};
  fresh.table = {1.0};
  ext.nodes.push_back(fresh);
  ext.node(d_prime).parents.push_back(fresh.id);

  std::set<std::string> evidence(dn.parents.begin(), dn.parents.end());
  evidence.insert(d);

  for (const auto& n : m.nodes) {
    if (n.kind != NodeKind::Utility || !n.owners.count(owner)) continue;
    if (!d_separated(ext, fresh.id, n.id, evidence)) return true;
  }
  return false;
}

RelevanceGraph relevance_graph(const Maid& m) {
  RelevanceGraph rg;
  rg.nodes = m.decision_ids();
  for (const auto& d : rg.nodes)
    for (const auto& dp : rg.nodes)
      if (d != dp && s_reachable(m, d, dp)) rg.edges.emplace_back(dp, d);
  std::sort(rg.edges.begin(), rg.edges.end());
  return rg;
}

ComponentGraph component_graph(const RelevanceGraph& rg) {
  // Tarjan SCC, then condensation in topological order.
  const std::size_t n = rg.nodes.size();
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[rg.nodes[i]] = i;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [a, b] : rg.edges) adj[idx[a]].push_back(idx[b]);

  std::vector<int> low(n, -1), num(n, -1), comp(n, -1);
  std::vector<std::size_t> stk;
  std::vector<bool> on(n, false);
  int counter = 0, ncomp = 0;
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    num[v] = low[v] = counter++;
    stk.push_back(v);
    on[v] = true;
    for (auto w : adj[v]) {
      if (num[w] == -1) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], num[w]);
      }
    }
    if (low[v] == num[v]) {
      while (true) {
        auto w = stk.back();
        stk.pop_back();
        on[w] = false;
        comp[w] = ncomp;
        if (w == v) break;
      }
      ++ncomp;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (num[v] == -1) dfs(v);

  std::vector<std::vector<std::string>> comps(ncomp);
  for (std::size_t v = 0; v < n; ++v) comps[comp[v]].push_back(rg.nodes[v]);
  std::set<std::pair<int, int>> cedges;
  for (const auto& [a, b] : rg.edges)
    if (comp[idx[a]] != comp[idx[b]]) cedges.insert({comp[idx[a]], comp[idx[b]]});

  // topological order over components, tie-broken by smallest member index
  std::vector<int> indeg(ncomp, 0);
  for (auto [a, b] : cedges) indeg[b]++;
  auto first_member = [&](int c) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v)
      if (comp[v] == c) best = std::min(best, v);
    return best;
  };
  std::vector<int> order;
  std::vector<bool> done(ncomp, false);
  for (int round = 0; round < ncomp; ++round) {
    int pick = -1;
    for (int c = 0; c < ncomp; ++c) {
      if (done[c] || indeg[c] != 0) continue;
      if (pick == -1 || first_member(c) < first_member(pick)) pick = c;
    }
    done[pick] = true;
    order.push_back(pick);
    for (auto [a, b] : cedges)
      if (a == pick) indeg[b]--;
  }

  ComponentGraph cg;
  std::vector<int> newpos(ncomp);
  for (int i = 0; i < ncomp; ++i) newpos[order[i]] = i;
  cg.components.resize(ncomp);
  for (int i = 0; i < ncomp; ++i) cg.components[newpos[i]] = comps[i];
  for (auto [a, b] : cedges) cg.edges.emplace_back(newpos[a], newpos[b]);
  std::sort(cg.edges.begin(), cg.edges.end());
  return cg;
}

SolvabilityReport classify_solvability(const Maid& m) {
  SolvabilityReport r;
  RelevanceGraph rg = relevance_graph(m);
  r.relevance_cyclic = rg.cyclic();
  r.il_solvable = !r.relevance_cyclic;
  for (const auto& c : component_graph(rg).components)
    if (c.size() > 1) r.joint_blocks.push_back(c);
  return r;
}

namespace {

const char* shape_of(NodeKind k) {
  switch (k) {
    case NodeKind::Decision: return "box";
    case NodeKind::Utility: return "diamond";
    default: return "ellipse";
  }
}

}  // namespace

std::string to_dot(const Maid& m) {
  std::ostringstream os;
  os << "digraph maid {\n";
  for (const auto& n : m.nodes)
    os << "  \"" << n.id << "\" [shape=" << shape_of(n.kind) << "];\n";
  for (const auto& n : m.nodes)
    for (const auto& p : n.parents) os << "  \"" << p << "\" -> \"" << n.id << "\";\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const RelevanceGraph& rg) {
  std::ostringstream os;
  os << "digraph relevance {\n";
  for (const auto& n : rg.nodes) os << "  \"" << n << "\" [shape=box];\n";
  for (const auto& [a, b] : rg.edges) os << "  \"" << a << "\" -> \"" << b << "\";\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const ComponentGraph& cg) {
  std::ostringstream os;
  os << "digraph components {\n";
  for (std::size_t i = 0; i < cg.components.size(); ++i) {
    os << "  \"c" << i << "\" [shape=box,label=\"{";
    for (std::size_t j = 0; j < cg.components[i].size(); ++j) {
      if (j) os << ", ";
      os << cg.components[i][j];
    }
    os << "}\"];\n";
  }
  for (const auto& [a, b] : cg.edges) os << "  \"c" << a << "\" -> \"c" << b << "\";\n";
  os << "}\n";
  return os.str();
}

std::string report_text(const SolvabilityReport& r) {
  std::ostringstream os;
  os << "relevance_cyclic=" << (r.relevance_cyclic ? "true" : "false") << "\n";
  os << "il_solvable=" << (r.il_solvable ? "true" : "false") << "\n";
  os << "joint_blocks=" << r.joint_blocks.size() << "\n";
  for (const auto& b : r.joint_blocks) {
    os << "block:";
    for (const auto& d : b) os << " " << d;
    os << "\n";
  }
  return os.str();
}

}  // namespace maid
