#pragma once

#include <random>
#include <string>
#include <vector>

#include "maid/core.hpp"  // MaidError
#include "marl/gridspread.hpp"  // Rng

namespace marl {

// Reduced two-player Hanabi: fewer colors and ranks, small hands, but the
// full hint/discard/play action structure needed by the two conventions.
struct HanabiConfig {
  int colors = 2;
  int max_rank = 3;
  std::vector<int> rank_counts = {3, 2, 1};  // copies of rank 1..max_rank per color
  int hand_size = 3;
  int max_tokens = 3;
  int lives = 2;
  int n_players = 2;
  // Discarding at full tokens is illegal by default; the flag downgrades it
  // to a legal no-token-gain move.
  bool discard_at_max_illegal = true;
  int save_rank() const { return max_rank; }
};

struct Card {
  int color = 0;
  int rank = 0;  // 1-based
  bool operator==(const Card&) const = default;
};

struct CardKnowledge {
  bool color_hinted = false;
  bool rank_hinted = false;
  bool hinted() const { return color_hinted || rank_hinted; }
};

struct HanabiAction {
  enum Type { Play, Discard, HintColor, HintRank } type = Play;
  int index = 0;  // card slot for Play/Discard; color or rank value for hints
};

struct MiniHanabiState {
  std::vector<Card> deck;  // back = next draw
  std::vector<std::vector<Card>> hands;
  std::vector<std::vector<CardKnowledge>> knowledge;
  std::vector<int> fireworks;  // top rank played per color
  int tokens = 0;
  int lives = 0;
  std::vector<Card> discards;
  int current = 0;
  int final_turns = -1;  // countdown once the deck is empty, -1 = not started
  bool done = false;

  int score() const;
};

MiniHanabiState minihanabi_reset(const HanabiConfig& cfg, Rng& rng);

// One move by the current player. Successful play advances the firework
// (+1 reward); a failed play costs a life (and zeroes the episode score when
// the last life goes); a discard regains a hint token. Throws IllegalAction.
struct HanabiStepResult {
  MiniHanabiState state;
  double reward = 0;
  bool done = false;
};
HanabiStepResult minihanabi_step(const HanabiConfig& cfg, const MiniHanabiState& state,
                                 const HanabiAction& action);

std::vector<HanabiAction> minihanabi_legal_actions(const HanabiConfig& cfg,
                                                   const MiniHanabiState& state);

// Tabular observation key for one player: own hint flags, fireworks, tokens,
// lives (own card identities are hidden).
std::string minihanabi_obs_key(const MiniHanabiState& state, int player);

// "5 Save": -1 when a teammate holds an unhinted save-rank card and the
// action is a hint naming neither the save rank nor the color of such a card.
double five_save_reward(const HanabiConfig& cfg, const MiniHanabiState& state,
                        const HanabiAction& action);

// "The Chop": discards must take the rightmost unhinted card. Non-discards 0;
// discarding with every card hinted -1; discarding off-chop -2; chop 0.
double chop_reward(const HanabiConfig& cfg, const MiniHanabiState& state,
                   const HanabiAction& action);

// True when the action could have violated the convention (the compliance
// denominator): a hint while a teammate holds an unhinted save-rank card for
// FiveSave, any discard for TheChop.
bool five_save_relevant(const HanabiConfig& cfg, const MiniHanabiState& state,
                        const HanabiAction& action);
bool chop_relevant(const HanabiAction& action);

// Per-card belief of one player over (color, rank) pairs, uniform over the
// deck compositions consistent with that card's hint flags.
std::vector<std::vector<double>> minihanabi_beliefs(const HanabiConfig& cfg,
                                                    const MiniHanabiState& state, int player);

// Perturbs belief distributions with uniform noise in [-scale, scale],
// clamps to nonnegative and renormalizes; scale 0 is the identity and draws
// nothing from the generator.
void inject_noise(std::vector<std::vector<double>>& distributions, double scale, Rng& rng);

}  // namespace marl
