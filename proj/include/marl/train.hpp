#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "marl/gridspread.hpp"
#include "marl/minihanabi.hpp"
#include "marl/qlearn.hpp"

namespace marl {

enum class Algorithm { IQL, VDN };
enum class Variant { Base, IntrinsicReward, GlobalIntervention, PSI };
enum class EnvKind { GridSpread, MiniHanabi };
enum class NoiseRegime { None, TrainOnly, TestOnly, Both };
enum class IntrinsicKind { FixedLandmark, FarthestLandmark, FiveSave, TheChop };

struct TrainConfig {
  Algorithm algorithm = Algorithm::IQL;
  Variant variant = Variant::Base;
  EnvKind env = EnvKind::GridSpread;
  GridSpreadConfig grid;
  HanabiConfig hanabi;
  IntrinsicKind intrinsic = IntrinsicKind::FixedLandmark;
  int landmark_index = 0;
  int targeted = 0;
  double intrinsic_reward_ratio = 1.0;
  int buckets = 3;
  double learning_rate = 0.2;
  double gamma = 0.95;
  EpsilonSchedule epsilon;
  std::size_t total_timesteps = 60'000;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  NoiseRegime noise = NoiseRegime::None;
  double noise_scale = 0.0;
  int eval_episodes = 32;
  int eval_points = 20;  // evaluate every 5% of the budget
};

struct MetricsRow {
  std::uint64_t seed = 0;
  std::size_t step = 0;
  std::string variant;
  std::string algorithm;
  double extrinsic_return = 0;
  double intrinsic_return = 0;
  double compliance_rate = 0;
};

struct Metrics {
  std::vector<MetricsRow> rows;

  std::string to_csv() const;
};

Metrics parse_metrics_csv(const std::string& text);

std::string variant_name(Variant v);
std::string algorithm_name(Algorithm a);

double composite_reward(double extrinsic, double intrinsic, double ratio);

// Appends the intrinsic signal, quantized into `buckets` equal-width bins
// over [lo, hi] (clamped), to the observation key. The tabular stand-in for
// the pre-policy's guidance input.
std::string guidance_feature(const std::string& obs, double signal, int buckets, double lo,
                             double hi);

// Runs every seed sequentially (or fanned over `jobs` workers); rows are
// ordered by (seed, step) either way. Throws InvalidEnv, SeedCollision.
Metrics train(const TrainConfig& config);
Metrics train(const TrainConfig& config, std::size_t jobs);

}  // namespace marl
