#pragma once

#include <set>
#include <string>
#include <vector>

#include "maid/core.hpp"

namespace maid {

struct RelevanceGraph {
  std::vector<std::string> nodes;                            // decision ids, declaration order
  std::vector<std::pair<std::string, std::string>> edges;    // (d_prime -> d)

  bool has_edge(const std::string& from, const std::string& to) const;
  bool cyclic() const;
};

struct ComponentGraph {
  std::vector<std::vector<std::string>> components;          // SCCs, topological order
  std::vector<std::pair<std::size_t, std::size_t>> edges;    // between component indices
};

struct SolvabilityReport {
  bool relevance_cyclic = false;
  bool il_solvable = false;
  std::vector<std::vector<std::string>> joint_blocks;  // non-singleton SCCs
};

// True iff the given undirected path is active given the evidence set
// (collider opened by itself/descendant in evidence, non-collider blocked by
// evidence). Throws NotAPath if consecutive nodes are not adjacent.
bool is_active_path(const Maid& m, const std::vector<std::string>& path,
                    const std::set<std::string>& evidence);

bool d_separated(const Maid& m, const std::string& x, const std::string& y,
                 const std::set<std::string>& evidence);

// s-reachability: adds a fresh parent to d_prime on a scratch copy
// and asks for an active path to some utility node of d's owner given
// Pa(d) + {d}.
bool s_reachable(const Maid& m, const std::string& d, const std::string& d_prime);

RelevanceGraph relevance_graph(const Maid& m);

ComponentGraph component_graph(const RelevanceGraph& rg);

SolvabilityReport classify_solvability(const Maid& m);

std::string to_dot(const Maid& m);
std::string to_dot(const RelevanceGraph& rg);
std::string to_dot(const ComponentGraph& cg);

std::string report_text(const SolvabilityReport& r);

}  // namespace maid
