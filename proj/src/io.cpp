#include "maid/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace maid {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Chance: return "chance";
    case NodeKind::Decision: return "decision";
    default: return "utility";
  }
}

NodeKind kind_of(const std::string& s) {
  if (s == "chance") return NodeKind::Chance;
  if (s == "decision") return NodeKind::Decision;
  if (s == "utility") return NodeKind::Utility;
  throw MaidError("ParseError", "unknown node kind '" + s + "'");
}

ordered_json maid_to_json(const Maid& m) {
  ordered_json j;
  j["agents"] = m.agents;
  j["nodes"] = ordered_json::array();
  for (const auto& n : m.nodes) {
    ordered_json jn;
    jn["id"] = n.id;
    jn["kind"] = kind_name(n.kind);
    if (n.owners.size() == 1)
      jn["owner"] = *n.owners.begin();
    else if (!n.owners.empty())
      jn["owners"] = n.owners;
    if (n.guidance) jn["guidance"] = true;
    jn["parents"] = n.parents;
    jn["domain"] = n.domain;
    jn["table"] = n.table;
    j["nodes"].push_back(std::move(jn));
  }
  return j;
}

Maid maid_from_json(const ordered_json& j) {
  Maid m;
  m.agents = j.at("agents").get<std::vector<std::string>>();
  for (const auto& jn : j.at("nodes")) {
    Node n;
    n.id = jn.at("id").get<std::string>();
    n.kind = kind_of(jn.at("kind").get<std::string>());
    if (jn.contains("owner")) n.owners.insert(jn.at("owner").get<std::string>());
    if (jn.contains("owners"))
      for (const auto& o : jn.at("owners")) n.owners.insert(o.get<std::string>());
    n.guidance = jn.value("guidance", false);
    n.parents = jn.at("parents").get<std::vector<std::string>>();
    n.domain = jn.at("domain").get<std::vector<std::string>>();
    n.table = jn.at("table").get<std::vector<double>>();
    m.nodes.push_back(std::move(n));
  }
  return m;
}

ordered_json nash_set_to_json(const NashSet& ns) {
  ordered_json j;
  j["equilibria"] = ordered_json::array();
  for (const auto& p : ns.equilibria) {
    ordered_json jp = ordered_json::object();
    for (const auto& [d, rule] : p.rules) jp[d] = rule.table;
    j["equilibria"].push_back(std::move(jp));
  }
  j["weights"] = ns.weights;
  return j;
}

NashSet nash_set_from_json(const ordered_json& j) {
  NashSet ns;
  for (const auto& jp : j.at("equilibria")) {
    StrategyProfile p;
    for (const auto& [d, table] : jp.items())
      p.rules[d] = DecisionRule{d, table.get<std::vector<double>>()};
    ns.equilibria.push_back(std::move(p));
  }
  ns.weights = j.at("weights").get<std::vector<double>>();
  return ns;
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const MaidError&) {
    throw;
  } catch (const std::exception& e) {
    throw MaidError("ParseError", e.what());
  }
}

}  // namespace

std::string serialize_maid(const Maid& m) { return maid_to_json(m).dump(2) + "\n"; }

Maid parse_maid(const std::string& text) {
  return guarded([&] { return build_maid(maid_from_json(ordered_json::parse(text))); });
}

std::string serialize_markov_game(const MarkovGame& g) {
  ordered_json j;
  j["agents"] = g.agents;
  j["states"] = g.states;
  j["actions"] = g.actions;
  j["transition"] = g.transition;
  j["reward"] = g.reward;
  j["horizon"] = g.horizon;
  j["initial"] = g.initial;
  return j.dump(2) + "\n";
}

MarkovGame parse_markov_game(const std::string& text) {
  return guarded([&] {
    auto j = ordered_json::parse(text);
    MarkovGame g;
    g.agents = j.at("agents").get<std::vector<std::string>>();
    g.states = j.at("states").get<std::vector<std::string>>();
    g.actions = j.at("actions").get<std::vector<std::vector<std::string>>>();
    g.transition = j.at("transition").get<std::vector<double>>();
    g.reward = j.at("reward").get<std::vector<double>>();
    g.horizon = j.at("horizon").get<std::size_t>();
    g.initial = j.at("initial").get<std::vector<double>>();
    return build_markov_game(std::move(g));
  });
}

std::string serialize_nash_set(const NashSet& ns) { return nash_set_to_json(ns).dump(2) + "\n"; }

NashSet parse_nash_set(const std::string& text) {
  return guarded([&] { return nash_set_from_json(ordered_json::parse(text)); });
}

std::string serialize_causal_effect(const CausalEffectReport& r) {
  ordered_json j;
  j["u_star"] = r.u_star;
  j["p_intervened"] = r.p_intervened;
  j["p_baseline"] = r.p_baseline;
  j["delta"] = r.delta;
  j["induced"] = nash_set_to_json(r.induced);
  j["baseline"] = nash_set_to_json(r.baseline);
  return j.dump(2) + "\n";
}

CausalEffectReport parse_causal_effect(const std::string& text) {
  return guarded([&] {
    auto j = ordered_json::parse(text);
    CausalEffectReport r;
    r.u_star = j.at("u_star").get<double>();
    r.p_intervened = j.at("p_intervened").get<double>();
    r.p_baseline = j.at("p_baseline").get<double>();
    r.delta = j.at("delta").get<double>();
    r.induced = nash_set_from_json(j.at("induced"));
    r.baseline = nash_set_from_json(j.at("baseline"));
    return r;
  });
}

std::string content_hash(const std::string& text) {
  // FNV-1a, 64-bit; stable across runs and platforms.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MaidError("FileNotFound", "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MaidError("WriteFailed", "cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw MaidError("WriteFailed", "cannot write '" + path + "'");
}

}  // namespace maid
