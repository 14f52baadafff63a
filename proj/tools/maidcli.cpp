#include <charconv>
#include <cmath>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maid/graph.hpp"
#include "maid/intervention.hpp"
#include "maid/io.hpp"
#include "maid/templates.hpp"
#include "marl/train.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string out_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir + "/" + name;
}

int run_analyze(const std::string& input, const std::string& out) {
  maid::Maid m = maid::parse_maid(maid::read_file(input));
  auto rg = maid::relevance_graph(m);
  auto report = maid::classify_solvability(m);
  std::string text = maid::report_text(report);
  maid::write_file(out_path(out, "solvability.txt"), text);
  maid::write_file(out_path(out, "maid.dot"), maid::to_dot(m));
  maid::write_file(out_path(out, "relevance.dot"), maid::to_dot(rg));
  maid::write_file(out_path(out, "components.dot"), maid::to_dot(maid::component_graph(rg)));
  std::cout << text;
  return 0;
}

int run_solve(const std::string& input, const std::string& out, double mix_step) {
  maid::Maid m = maid::parse_maid(maid::read_file(input));
  maid::RuleGridConfig grid;
  grid.mix_step = mix_step;
  auto ns = maid::enumerate_nash(m, grid);
  maid::write_file(out_path(out, "nash.json"), maid::serialize_nash_set(ns));
  std::cout << "equilibria=" << ns.equilibria.size() << "\n";
  return 0;
}

int run_intervene(const std::string& input, const std::string& target,
                  const std::string& guidance, double u_star, bool has_u_star,
                  const std::string& out) {
  maid::Maid m = maid::parse_maid(maid::read_file(input));
  maid::OutcomeSpec outcome;
  if (has_u_star) outcome.u_star = u_star;
  maid::RuleGridConfig grid;
  auto [pre, report] = maid::optimize_pre_strategy(m, target, guidance, outcome, grid, grid);
  maid::write_file(out_path(out, "causal_effect.json"), maid::serialize_causal_effect(report));
  std::cout << "delta=" << fmt(report.delta) << " p_I=" << fmt(report.p_intervened)
            << " p_U=" << fmt(report.p_baseline) << "\n";
  return 0;
}

int run_unroll(const std::string& input, const std::string& paradigm, bool sequential,
               const std::string& out) {
  maid::MarkovGame g = maid::parse_markov_game(maid::read_file(input));
  maid::UnrollOptions opts;
  opts.sequential = sequential;
  maid::Maid m = maid::unroll(g, opts);
  if (paradigm != "none") {
    maid::Paradigm p;
    if (paradigm == "self-organization")
      p.kind = maid::ParadigmKind::SelfOrganization;
    else if (paradigm == "global")
      p.kind = maid::ParadigmKind::GlobalIntervention;
    else if (paradigm == "targeted")
      p.kind = maid::ParadigmKind::TargetedIntervention;
    else
      throw maid::MaidError("UnknownParadigm", "unknown paradigm '" + paradigm + "'");
    m = maid::apply_paradigm(m, p);
  }
  maid::write_file(out_path(out, "unrolled.json"), maid::serialize_maid(m));
  std::cout << "nodes=" << m.nodes.size() << "\n";
  return 0;
}

int run_export_dot(const std::string& input, const std::string& out) {
  maid::Maid m = maid::parse_maid(maid::read_file(input));
  maid::write_file(out_path(out, "maid.dot"), maid::to_dot(m));
  return 0;
}

marl::TrainConfig load_train_config(const std::string& config_path,
                                    const std::vector<std::string>& overrides,
                                    std::uint64_t seed, bool has_seed) {
  ordered_json j = ordered_json::object();
  if (!config_path.empty()) j = ordered_json::parse(maid::read_file(config_path));
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw maid::MaidError("ParseError", "override must look like key=value");
    std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    // overrides win over the file
    ordered_json parsed;
    try {
      parsed = ordered_json::parse(value);
    } catch (...) {
      parsed = value;  // bare strings
    }
    j[key] = parsed;
  }

  marl::TrainConfig cfg;
  auto str = [&](const char* k, const std::string& d) { return j.value(k, d); };
  std::string alg = str("algorithm", "IQL");
  if (alg == "IQL")
    cfg.algorithm = marl::Algorithm::IQL;
  else if (alg == "VDN")
    cfg.algorithm = marl::Algorithm::VDN;
  else
    throw maid::MaidError("ParseError", "unknown algorithm '" + alg + "'");
  std::string var = str("variant", "Base");
  if (var == "Base")
    cfg.variant = marl::Variant::Base;
  else if (var == "IntrinsicReward")
    cfg.variant = marl::Variant::IntrinsicReward;
  else if (var == "GlobalIntervention")
    cfg.variant = marl::Variant::GlobalIntervention;
  else if (var == "PSI")
    cfg.variant = marl::Variant::PSI;
  else
    throw maid::MaidError("ParseError", "unknown variant '" + var + "'");
  std::string env = str("env", "GridSpread");
  if (env == "GridSpread")
    cfg.env = marl::EnvKind::GridSpread;
  else if (env == "MiniHanabi")
    cfg.env = marl::EnvKind::MiniHanabi;
  else
    throw maid::MaidError("InvalidEnv", "unknown env '" + env + "'");
  std::string intr = str("intrinsic", "FixedLandmark");
  if (intr == "FixedLandmark")
    cfg.intrinsic = marl::IntrinsicKind::FixedLandmark;
  else if (intr == "FarthestLandmark")
    cfg.intrinsic = marl::IntrinsicKind::FarthestLandmark;
  else if (intr == "FiveSave")
    cfg.intrinsic = marl::IntrinsicKind::FiveSave;
  else if (intr == "TheChop")
    cfg.intrinsic = marl::IntrinsicKind::TheChop;
  else
    throw maid::MaidError("ParseError", "unknown intrinsic '" + intr + "'");
  std::string noise = str("noise", "none");
  if (noise == "none")
    cfg.noise = marl::NoiseRegime::None;
  else if (noise == "train-only")
    cfg.noise = marl::NoiseRegime::TrainOnly;
  else if (noise == "test-only")
    cfg.noise = marl::NoiseRegime::TestOnly;
  else if (noise == "both")
    cfg.noise = marl::NoiseRegime::Both;
  else
    throw maid::MaidError("ParseError", "unknown noise regime '" + noise + "'");

  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.epsilon.start = j.value("epsilon_start", cfg.epsilon.start);
  cfg.epsilon.finish = j.value("epsilon_finish", cfg.epsilon.finish);
  cfg.epsilon.decay_fraction = j.value("epsilon_decay", cfg.epsilon.decay_fraction);
  cfg.intrinsic_reward_ratio = j.value("intrinsic_reward_ratio", cfg.intrinsic_reward_ratio);
  cfg.total_timesteps = j.value("total_timesteps", cfg.total_timesteps);
  cfg.targeted = j.value("targeted", cfg.targeted);
  cfg.buckets = j.value("buckets", cfg.buckets);
  cfg.landmark_index = j.value("landmark_index", cfg.landmark_index);
  cfg.noise_scale = j.value("noise_scale", cfg.noise_scale);
  cfg.eval_episodes = j.value("eval_episodes", cfg.eval_episodes);
  cfg.grid.size = j.value("grid_size", cfg.grid.size);
  cfg.grid.n_agents = j.value("n_agents", cfg.grid.n_agents);
  cfg.grid.episode_len = j.value("episode_len", cfg.grid.episode_len);
  if (j.contains("landmarks")) {
    cfg.grid.landmarks.clear();
    for (const auto& l : j["landmarks"])
      cfg.grid.landmarks.emplace_back(l.at(0).get<int>(), l.at(1).get<int>());
  }
  if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (has_seed) {
    // --seed is the root: derive one stream per configured seed slot
    std::size_t n = cfg.seeds.size();
    cfg.seeds.clear();
    for (std::size_t i = 0; i < n; ++i) cfg.seeds.push_back(seed + i);
  }
  return cfg;
}

struct Stats {
  double mean = 0, ci = 0;
  std::size_t n = 0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  s.n = xs.size();
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= xs.size();
  if (xs.size() > 1) {
    double var = 0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    var /= (xs.size() - 1);
    s.ci = 1.96 * std::sqrt(var) / std::sqrt(static_cast<double>(xs.size()));
  }
  return s;
}

int run_train(const std::string& config_path, const std::vector<std::string>& overrides,
              std::uint64_t seed, bool has_seed, std::size_t jobs, const std::string& out) {
  marl::TrainConfig cfg = load_train_config(config_path, overrides, seed, has_seed);
  marl::Metrics m = marl::train(cfg, jobs);
  maid::write_file(out_path(out, "metrics.csv"), m.to_csv());

  // summary at the final eval step: mean and 95% CI over seeds
  std::size_t last = 0;
  for (const auto& r : m.rows) last = std::max(last, r.step);
  std::vector<double> ext, intr, comp;
  for (const auto& r : m.rows) {
    if (r.step != last) continue;
    ext.push_back(r.extrinsic_return);
    intr.push_back(r.intrinsic_return);
    comp.push_back(r.compliance_rate);
  }
  Stats se = stats_of(ext), si = stats_of(intr), sc = stats_of(comp);
  std::string summary;
  summary += "variant=" + marl::variant_name(cfg.variant) +
             " algorithm=" + marl::algorithm_name(cfg.algorithm) +
             " step=" + std::to_string(last) + " seeds=" + std::to_string(se.n) + "\n";
  summary += "extrinsic_mean=" + fmt(se.mean) + " extrinsic_ci=" + fmt(se.ci) + "\n";
  summary += "intrinsic_mean=" + fmt(si.mean) + " intrinsic_ci=" + fmt(si.ci) + "\n";
  summary += "compliance_mean=" + fmt(sc.mean) + " compliance_ci=" + fmt(sc.ci) + "\n";
  maid::write_file(out_path(out, "summary.txt"), summary);
  std::cout << summary;
  return 0;
}

int run_report(const std::vector<std::string>& inputs, const std::string& out) {
  // long-format aggregation over seeds: one row per (variant, algorithm,
  // step, metric)
  std::map<std::tuple<std::string, std::string, std::size_t, std::string>, std::vector<double>>
      groups;
  for (const auto& path : inputs) {
    marl::Metrics m = marl::parse_metrics_csv(maid::read_file(path));
    for (const auto& r : m.rows) {
      groups[{r.variant, r.algorithm, r.step, "extrinsic_return"}].push_back(r.extrinsic_return);
      groups[{r.variant, r.algorithm, r.step, "intrinsic_return"}].push_back(r.intrinsic_return);
      groups[{r.variant, r.algorithm, r.step, "compliance_rate"}].push_back(r.compliance_rate);
    }
  }
  std::string csv = "variant,algorithm,step,metric,mean,ci_lo,ci_hi,n\n";
  for (const auto& [key, xs] : groups) {
    Stats s = stats_of(xs);
    csv += std::get<0>(key) + "," + std::get<1>(key) + "," + std::to_string(std::get<2>(key)) +
           "," + std::get<3>(key) + "," + fmt(s.mean) + "," + fmt(s.mean - s.ci) + "," +
           fmt(s.mean + s.ci) + "," + std::to_string(s.n) + "\n";
  }
  maid::write_file(out_path(out, "report.csv"), csv);
  std::cout << "groups=" << groups.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence-diagram game analysis and tabular MARL experiments"};
  app.require_subcommand(1);

  std::string input, out = ".", target, guidance, paradigm = "none", config_path;
  std::vector<std::string> overrides, inputs;
  double mix_step = 0.0, u_star = 0.0;
  bool sequential = false;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  auto* analyze = app.add_subcommand("analyze", "solvability report + DOT exports");
  analyze->add_option("--config", input, "MAID file")->required();
  analyze->add_option("--out", out, "output directory");

  auto* solve = app.add_subcommand("solve", "enumerate Nash equilibria");
  solve->add_option("--config", input, "MAID file")->required();
  solve->add_option("--out", out, "output directory");
  solve->add_option("--mix-step", mix_step, "simplex grid step (0 = deterministic rules)");

  auto* intervene = app.add_subcommand("intervene", "optimize a pre-strategy intervention");
  intervene->add_option("--config", input, "MAID file")->required();
  intervene->add_option("--target", target, "targeted decision node")->required();
  intervene->add_option("--guidance", guidance, "guidance node")->required();
  auto* ustar_opt = intervene->add_option("--u-star", u_star, "desired total utility");
  intervene->add_option("--out", out, "output directory");

  auto* unroll_cmd = app.add_subcommand("unroll", "unroll a Markov game into a MAID");
  unroll_cmd->add_option("--config", input, "Markov game file")->required();
  unroll_cmd->add_option("--paradigm", paradigm,
                         "none | self-organization | global | targeted");
  unroll_cmd->add_flag("--sequential", sequential, "sequential-move information sets");
  unroll_cmd->add_option("--out", out, "output directory");

  auto* train_cmd = app.add_subcommand("train", "tabular MARL training");
  train_cmd->add_option("--config", config_path, "train config file");
  train_cmd->add_option("--override", overrides, "key=value config overrides");
  auto* seed_opt = train_cmd->add_option("--seed", seed, "root seed");
  train_cmd->add_option("--jobs", jobs, "parallel seed workers");
  train_cmd->add_option("--out", out, "output directory");

  auto* export_dot = app.add_subcommand("export-dot", "MAID to Graphviz DOT");
  export_dot->add_option("--config", input, "MAID file")->required();
  export_dot->add_option("--out", out, "output directory");

  auto* report_cmd = app.add_subcommand("report", "aggregate metrics CSVs");
  report_cmd->add_option("inputs", inputs, "metrics CSV files")->required();
  report_cmd->add_option("--out", out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(input, out);
    if (*solve) return run_solve(input, out, mix_step);
    if (*intervene)
      return run_intervene(input, target, guidance, u_star, !ustar_opt->empty(), out);
    if (*unroll_cmd) return run_unroll(input, paradigm, sequential, out);
    if (*train_cmd)
      return run_train(config_path, overrides, seed, !seed_opt->empty(), jobs, out);
    if (*export_dot) return run_export_dot(input, out);
    if (*report_cmd) return run_report(inputs, out);
  } catch (const maid::MaidError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
