#include "marl/train.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

namespace marl {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Base: return "Base";
    case Variant::IntrinsicReward: return "IntrinsicReward";
    case Variant::GlobalIntervention: return "GlobalIntervention";
    default: return "PSI";
  }
}

std::string algorithm_name(Algorithm a) { return a == Algorithm::IQL ? "IQL" : "VDN"; }

std::string Metrics::to_csv() const {
  std::string out = "seed,step,variant,algorithm,extrinsic_return,intrinsic_return,compliance_rate\n";
  for (const auto& r : rows) {
    out += std::to_string(r.seed) + "," + std::to_string(r.step) + "," + r.variant + "," +
           r.algorithm + "," + fmt(r.extrinsic_return) + "," + fmt(r.intrinsic_return) + "," +
           fmt(r.compliance_rate) + "\n";
  }
  return out;
}

Metrics parse_metrics_csv(const std::string& text) {
  Metrics m;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    MetricsRow r;
    std::getline(ls, field, ',');
    r.seed = std::stoull(field);
    std::getline(ls, field, ',');
    r.step = std::stoull(field);
    std::getline(ls, r.variant, ',');
    std::getline(ls, r.algorithm, ',');
    std::getline(ls, field, ',');
    r.extrinsic_return = std::stod(field);
    std::getline(ls, field, ',');
    r.intrinsic_return = std::stod(field);
    std::getline(ls, field, ',');
    r.compliance_rate = std::stod(field);
    m.rows.push_back(std::move(r));
  }
  return m;
}

double composite_reward(double extrinsic, double intrinsic, double ratio) {
  return extrinsic + ratio * intrinsic;
}

std::string guidance_feature(const std::string& obs, double signal, int buckets, double lo,
                             double hi) {
  int idx = 0;
  if (buckets > 1 && hi > lo) {
    double frac = (signal - lo) / (hi - lo);
    idx = static_cast<int>(std::floor(frac * buckets));
    idx = std::clamp(idx, 0, buckets - 1);
  }
  return obs + "|g" + std::to_string(idx);
}

namespace {

struct StepOutcome {
  double extrinsic = 0;
  double intrinsic = 0;  // targeted agent's signal for this transition
  bool done = false;
  bool convention_relevant = false;
  bool convention_ok = false;
};

// Uniform view over the two environments for the training loop.
class Env {
 public:
  virtual ~Env() = default;
  virtual void reset(Rng& rng) = 0;
  virtual int n_agents() const = 0;
  virtual int n_actions() const = 0;
  virtual std::vector<int> actors() const = 0;           // agents acting this step
  virtual std::vector<int> legal(int agent) const = 0;   // empty = every action
  virtual std::string obs(int agent, bool noisy, Rng& rng) const = 0;
  virtual StepOutcome step(const std::vector<int>& actions) = 0;
  // state-based guidance signal for the PSI observation feature
  virtual double guidance_signal() const = 0;
  virtual double bucket_lo() const = 0;
  virtual double bucket_hi() const = 0;
};

class GridEnv : public Env {
 public:
  explicit GridEnv(const TrainConfig& cfg) : cfg_(cfg) {}

  void reset(Rng& rng) override {
    state_ = gridspread_reset(cfg_.grid, rng);
    steps_ = 0;
  }
  int n_agents() const override { return cfg_.grid.n_agents; }
  int n_actions() const override { return kGridSpreadActions; }
  std::vector<int> actors() const override {
    std::vector<int> all(cfg_.grid.n_agents);
    for (int i = 0; i < cfg_.grid.n_agents; ++i) all[i] = i;
    return all;
  }
  std::vector<int> legal(int) const override { return {}; }
  std::string obs(int agent, bool, Rng&) const override {
    return gridspread_obs_key(state_, agent);
  }
  StepOutcome step(const std::vector<int>& actions) override {
    StepOutcome out;
    auto [next, extrinsic] = gridspread_step(cfg_.grid, state_, actions);
    state_ = next;
    out.extrinsic = extrinsic;
    out.intrinsic = signal_at(state_);
    out.done = ++steps_ >= cfg_.grid.episode_len;
    return out;
  }
  double guidance_signal() const override { return signal_at(state_); }
  double bucket_lo() const override {
    double d = cfg_.grid.size - 1;
    return -std::sqrt(2.0) * d;  // arena diagonal
  }
  double bucket_hi() const override { return 0.0; }

 private:
  double signal_at(const GridSpreadState& s) const {
    if (cfg_.intrinsic == IntrinsicKind::FarthestLandmark)
      return intrinsic_farthest_landmark(cfg_.grid, s, cfg_.targeted);
    return intrinsic_fixed_landmark(cfg_.grid, s, cfg_.targeted, cfg_.landmark_index);
  }

  TrainConfig cfg_;
  GridSpreadState state_;
  int steps_ = 0;
};

class HanabiEnv : public Env {
 public:
  explicit HanabiEnv(const TrainConfig& cfg) : cfg_(cfg) {}

  void reset(Rng& rng) override {
    state_ = minihanabi_reset(cfg_.hanabi, rng);
    last_penalty_ = 0;
  }
  int n_agents() const override { return cfg_.hanabi.n_players; }
  int n_actions() const override {
    return 2 * cfg_.hanabi.hand_size + cfg_.hanabi.colors + cfg_.hanabi.max_rank;
  }
  std::vector<int> actors() const override { return {state_.current}; }
  std::vector<int> legal(int) const override {
    std::vector<int> out;
    for (const auto& a : minihanabi_legal_actions(cfg_.hanabi, state_))
      out.push_back(encode(a));
    return out;
  }
  std::string obs(int agent, bool noisy, Rng& rng) const override {
    std::string key = minihanabi_obs_key(state_, agent);
    if (noisy && cfg_.noise_scale > 0) {
      // perturb the per-card beliefs and expose their argmax card type
      auto beliefs = minihanabi_beliefs(cfg_.hanabi, state_, agent);
      inject_noise(beliefs, cfg_.noise_scale, rng);
      key += "|b";
      for (const auto& b : beliefs) {
        auto it = std::max_element(b.begin(), b.end());
        key += std::to_string(it - b.begin());
        key += '.';
      }
    }
    return key;
  }
  StepOutcome step(const std::vector<int>& actions) override {
    StepOutcome out;
    const int me = state_.current;
    HanabiAction act = decode(actions[me]);
    if (me == cfg_.targeted) {
      double pen = cfg_.intrinsic == IntrinsicKind::TheChop
                       ? chop_reward(cfg_.hanabi, state_, act)
                       : five_save_reward(cfg_.hanabi, state_, act);
      bool relevant = cfg_.intrinsic == IntrinsicKind::TheChop
                          ? chop_relevant(act)
                          : five_save_relevant(cfg_.hanabi, state_, act);
      out.intrinsic = pen;
      out.convention_relevant = relevant;
      out.convention_ok = relevant && pen == 0.0;
      last_penalty_ = pen;
    }
    auto res = minihanabi_step(cfg_.hanabi, state_, act);
    state_ = res.state;
    out.extrinsic = res.reward;
    out.done = res.done;
    return out;
  }
  double guidance_signal() const override { return last_penalty_; }
  double bucket_lo() const override { return -2.0; }
  double bucket_hi() const override { return 0.0; }

  int encode(const HanabiAction& a) const {
    switch (a.type) {
      case HanabiAction::Play: return a.index;
      case HanabiAction::Discard: return cfg_.hanabi.hand_size + a.index;
      case HanabiAction::HintColor: return 2 * cfg_.hanabi.hand_size + a.index;
      default: return 2 * cfg_.hanabi.hand_size + cfg_.hanabi.colors + (a.index - 1);
    }
  }
  HanabiAction decode(int code) const {
    int h = cfg_.hanabi.hand_size;
    if (code < h) return {HanabiAction::Play, code};
    if (code < 2 * h) return {HanabiAction::Discard, code - h};
    if (code < 2 * h + cfg_.hanabi.colors) return {HanabiAction::HintColor, code - 2 * h};
    return {HanabiAction::HintRank, code - 2 * h - cfg_.hanabi.colors + 1};
  }

 private:
  TrainConfig cfg_;
  MiniHanabiState state_;
  double last_penalty_ = 0;
};

std::unique_ptr<Env> make_env(const TrainConfig& cfg) {
  if (cfg.env == EnvKind::GridSpread) {
    if (cfg.grid.n_agents < 1 || cfg.grid.size < 1 || cfg.grid.landmarks.empty() ||
        cfg.targeted < 0 || cfg.targeted >= cfg.grid.n_agents)
      throw maid::MaidError("InvalidEnv", "bad grid configuration");
    return std::make_unique<GridEnv>(cfg);
  }
  if (cfg.hanabi.n_players != 2 || cfg.targeted < 0 || cfg.targeted >= cfg.hanabi.n_players)
    throw maid::MaidError("InvalidEnv", "bad hanabi configuration");
  return std::make_unique<HanabiEnv>(cfg);
}

bool targeted_gets_intrinsic(Variant v) {
  return v == Variant::IntrinsicReward || v == Variant::PSI || v == Variant::GlobalIntervention;
}

std::string observe(const TrainConfig& cfg, Env& env, int agent, bool eval_phase, Rng& rng) {
  bool noisy = eval_phase
                   ? (cfg.noise == NoiseRegime::TestOnly || cfg.noise == NoiseRegime::Both)
                   : (cfg.noise == NoiseRegime::TrainOnly || cfg.noise == NoiseRegime::Both);
  std::string key = env.obs(agent, noisy, rng);
  if (cfg.variant == Variant::PSI && agent == cfg.targeted)
    key = guidance_feature(key, env.guidance_signal(), cfg.buckets, env.bucket_lo(),
                           env.bucket_hi());
  return key;
}

struct EvalPoint {
  double extrinsic = 0;
  double intrinsic = 0;
  double compliance = 1.0;
};

EvalPoint evaluate(const TrainConfig& cfg, std::vector<QTable>& qs, Rng& rng) {
  auto env = make_env(cfg);
  EvalPoint out;
  long relevant = 0, ok = 0;
  for (int ep = 0; ep < cfg.eval_episodes; ++ep) {
    env->reset(rng);
    bool done = false;
    std::size_t guard = 0;
    while (!done && guard++ < 10'000) {
      std::vector<int> actions(static_cast<std::size_t>(env->n_agents()), 0);
      for (int agent : env->actors()) {
        std::string key = observe(cfg, *env, agent, true, rng);
        actions[static_cast<std::size_t>(agent)] =
            greedy_action(qs[static_cast<std::size_t>(agent)], key, env->legal(agent));
      }
      StepOutcome so = env->step(actions);
      out.extrinsic += so.extrinsic;
      out.intrinsic += so.intrinsic;
      relevant += so.convention_relevant ? 1 : 0;
      ok += so.convention_ok ? 1 : 0;
      done = so.done;
    }
  }
  out.extrinsic /= cfg.eval_episodes;
  out.intrinsic /= cfg.eval_episodes;
  out.compliance = relevant == 0 ? 1.0 : static_cast<double>(ok) / relevant;
  return out;
}

Metrics run_seed(const TrainConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  auto env = make_env(cfg);
  std::vector<QTable> qs(static_cast<std::size_t>(env->n_agents()));
  for (auto& q : qs) {
    q.n_actions = static_cast<std::size_t>(env->n_actions());
    q.alpha = cfg.learning_rate;
    q.gamma = cfg.gamma;
  }
  env->reset(rng);

  Metrics m;
  std::size_t eval_interval =
      std::max<std::size_t>(1, cfg.total_timesteps / static_cast<std::size_t>(cfg.eval_points));

  for (std::size_t step = 1; step <= cfg.total_timesteps; ++step) {
    double eps = cfg.epsilon.at(step - 1, cfg.total_timesteps);
    auto actors = env->actors();
    std::vector<int> actions(static_cast<std::size_t>(env->n_agents()), 0);
    std::vector<std::string> keys(actions.size());
    for (int agent : actors) {
      auto a = static_cast<std::size_t>(agent);
      keys[a] = observe(cfg, *env, agent, false, rng);
      actions[a] = epsilon_greedy_action(qs[a], keys[a], eps, rng, env->legal(agent));
    }
    StepOutcome so = env->step(actions);
    std::vector<std::string> next_keys(actions.size());
    for (int agent : actors)
      next_keys[static_cast<std::size_t>(agent)] = observe(cfg, *env, agent, false, rng);

    if (cfg.algorithm == Algorithm::IQL) {
      for (int agent : actors) {
        auto a = static_cast<std::size_t>(agent);
        double r = so.extrinsic;
        if (targeted_gets_intrinsic(cfg.variant) &&
            (agent == cfg.targeted || cfg.variant == Variant::GlobalIntervention))
          r = composite_reward(so.extrinsic, so.intrinsic, cfg.intrinsic_reward_ratio);
        iql_update(qs[a], keys[a], actions[a], r, next_keys[a], so.done);
      }
    } else {
      double team = so.extrinsic;
      if (cfg.variant == Variant::GlobalIntervention)
        team = composite_reward(so.extrinsic, actors.size() * so.intrinsic,
                                cfg.intrinsic_reward_ratio);
      else if (targeted_gets_intrinsic(cfg.variant))
        team = composite_reward(so.extrinsic, so.intrinsic, cfg.intrinsic_reward_ratio);
      std::vector<std::string> o, no;
      std::vector<int> acts;
      std::vector<QTable> sub;
      for (int agent : actors) {
        auto a = static_cast<std::size_t>(agent);
        o.push_back(keys[a]);
        no.push_back(next_keys[a]);
        acts.push_back(actions[a]);
        sub.push_back(std::move(qs[a]));
      }
      vdn_update(sub, o, acts, team, no, so.done);
      for (std::size_t i = 0; i < actors.size(); ++i)
        qs[static_cast<std::size_t>(actors[i])] = std::move(sub[i]);
    }

    if (so.done) env->reset(rng);

    if (step % eval_interval == 0 || step == cfg.total_timesteps) {
      Rng eval_rng(seed ^ (0x9E3779B97F4A7C15ull * (step + 1)));
      EvalPoint ev = evaluate(cfg, qs, eval_rng);
      MetricsRow row;
      row.seed = seed;
      row.step = step;
      row.variant = variant_name(cfg.variant);
      row.algorithm = algorithm_name(cfg.algorithm);
      row.extrinsic_return = ev.extrinsic;
      row.intrinsic_return = ev.intrinsic;
      row.compliance_rate = ev.compliance;
      m.rows.push_back(std::move(row));
    }
  }
  return m;
}

}  // namespace

Metrics train(const TrainConfig& config) { return train(config, 1); }

Metrics train(const TrainConfig& config, std::size_t jobs) {
  if (config.seeds.empty()) throw maid::MaidError("InvalidEnv", "at least one seed required");
  std::set<std::uint64_t> unique(config.seeds.begin(), config.seeds.end());
  if (unique.size() != config.seeds.size())
    throw maid::MaidError("SeedCollision", "duplicate seeds in the config");

  std::vector<Metrics> per_seed(config.seeds.size());
  std::vector<std::exception_ptr> errors(config.seeds.size());
  jobs = std::max<std::size_t>(1, std::min(jobs, config.seeds.size()));
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < config.seeds.size(); i += jobs) {
        try {
          per_seed[i] = run_seed(config, config.seeds[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Metrics m;
  for (auto& ps : per_seed)
    m.rows.insert(m.rows.end(), ps.rows.begin(), ps.rows.end());
  return m;
}

}  // namespace marl
