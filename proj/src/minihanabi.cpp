#include "marl/minihanabi.hpp"

#include <algorithm>
#include <numeric>

namespace marl {

namespace {

int teammate_of(const HanabiConfig& cfg, int player) { return (player + 1) % cfg.n_players; }

void draw_card(MiniHanabiState& s, int player) {
  if (s.deck.empty()) return;
  s.hands[player].push_back(s.deck.back());
  s.knowledge[player].push_back({});
  s.deck.pop_back();
}

void remove_card(MiniHanabiState& s, int player, int slot) {
  s.hands[player].erase(s.hands[player].begin() + slot);
  s.knowledge[player].erase(s.knowledge[player].begin() + slot);
}

void advance_turn(const HanabiConfig& cfg, MiniHanabiState& s) {
  if (s.deck.empty()) {
    if (s.final_turns < 0) s.final_turns = cfg.n_players;
    if (--s.final_turns == 0) s.done = true;
  }
  bool complete = true;
  for (int f : s.fireworks) complete &= f == cfg.max_rank;
  if (complete) s.done = true;
  s.current = teammate_of(cfg, s.current);
}

}  // namespace

int MiniHanabiState::score() const {
  return std::accumulate(fireworks.begin(), fireworks.end(), 0);
}

MiniHanabiState minihanabi_reset(const HanabiConfig& cfg, Rng& rng) {
  MiniHanabiState s;
  for (int c = 0; c < cfg.colors; ++c)
    for (int r = 1; r <= cfg.max_rank; ++r)
      for (int k = 0; k < cfg.rank_counts[r - 1]; ++k) s.deck.push_back({c, r});
  std::shuffle(s.deck.begin(), s.deck.end(), rng);
  s.hands.resize(cfg.n_players);
  s.knowledge.resize(cfg.n_players);
  s.fireworks.assign(cfg.colors, 0);
  s.tokens = cfg.max_tokens;
  s.lives = cfg.lives;
  for (int p = 0; p < cfg.n_players; ++p)
    for (int k = 0; k < cfg.hand_size; ++k) draw_card(s, p);
  return s;
}

HanabiStepResult minihanabi_step(const HanabiConfig& cfg, const MiniHanabiState& state,
                                 const HanabiAction& action) {
  if (state.done) throw maid::MaidError("IllegalAction", "episode is over");
  HanabiStepResult out;
  out.state = state;
  MiniHanabiState& s = out.state;
  const int me = s.current;
  const int mate = teammate_of(cfg, me);

  switch (action.type) {
    case HanabiAction::Play: {
      if (action.index < 0 || action.index >= static_cast<int>(s.hands[me].size()))
        throw maid::MaidError("IllegalAction", "no card in that slot");
      Card c = s.hands[me][action.index];
      remove_card(s, me, action.index);
      if (s.fireworks[c.color] + 1 == c.rank) {
        s.fireworks[c.color]++;
        out.reward = 1.0;
      } else {
        s.discards.push_back(c);
        if (--s.lives == 0) {
          // the team scores 0: cancel everything earned so far
          out.reward = -static_cast<double>(s.score());
          s.done = true;
        }
      }
      draw_card(s, me);
      break;
    }
    case HanabiAction::Discard: {
      if (action.index < 0 || action.index >= static_cast<int>(s.hands[me].size()))
        throw maid::MaidError("IllegalAction", "no card in that slot");
      if (s.tokens == cfg.max_tokens && cfg.discard_at_max_illegal)
        throw maid::MaidError("IllegalAction", "hint tokens already at maximum");
      s.discards.push_back(s.hands[me][action.index]);
      remove_card(s, me, action.index);
      s.tokens = std::min(s.tokens + 1, cfg.max_tokens);
      draw_card(s, me);
      break;
    }
    case HanabiAction::HintColor:
    case HanabiAction::HintRank: {
      if (s.tokens == 0) throw maid::MaidError("IllegalAction", "no hint token left");
      bool rank_hint = action.type == HanabiAction::HintRank;
      bool present = false;
      for (std::size_t k = 0; k < s.hands[mate].size(); ++k) {
        const Card& c = s.hands[mate][k];
        if ((rank_hint && c.rank == action.index) || (!rank_hint && c.color == action.index)) {
          present = true;
          if (rank_hint)
            s.knowledge[mate][k].rank_hinted = true;
          else
            s.knowledge[mate][k].color_hinted = true;
        }
      }
      if (!present)
        throw maid::MaidError("IllegalAction", "hint must name something the teammate holds");
      s.tokens--;
      break;
    }
  }
  if (!s.done) advance_turn(cfg, s);
  out.done = s.done;
  return out;
}

std::vector<HanabiAction> minihanabi_legal_actions(const HanabiConfig& cfg,
                                                   const MiniHanabiState& state) {
  std::vector<HanabiAction> out;
  if (state.done) return out;
  const int me = state.current;
  const int mate = teammate_of(cfg, me);
  for (int k = 0; k < static_cast<int>(state.hands[me].size()); ++k)
    out.push_back({HanabiAction::Play, k});
  if (state.tokens < cfg.max_tokens || !cfg.discard_at_max_illegal)
    for (int k = 0; k < static_cast<int>(state.hands[me].size()); ++k)
      out.push_back({HanabiAction::Discard, k});
  if (state.tokens > 0) {
    for (int c = 0; c < cfg.colors; ++c) {
      bool present = false;
      for (const Card& card : state.hands[mate]) present |= card.color == c;
      if (present) out.push_back({HanabiAction::HintColor, c});
    }
    for (int r = 1; r <= cfg.max_rank; ++r) {
      bool present = false;
      for (const Card& card : state.hands[mate]) present |= card.rank == r;
      if (present) out.push_back({HanabiAction::HintRank, r});
    }
  }
  return out;
}

std::string minihanabi_obs_key(const MiniHanabiState& state, int player) {
  std::string key;
  for (const auto& k : state.knowledge[player]) {
    key += k.color_hinted ? 'c' : '-';
    key += k.rank_hinted ? 'r' : '-';
  }
  key += "|f";
  for (int f : state.fireworks) key += std::to_string(f);
  key += "|t" + std::to_string(state.tokens);
  key += "|l" + std::to_string(state.lives);
  return key;
}

double five_save_reward(const HanabiConfig& cfg, const MiniHanabiState& state,
                        const HanabiAction& action) {
  if (action.type != HanabiAction::HintColor && action.type != HanabiAction::HintRank)
    return 0.0;
  const int mate = teammate_of(cfg, state.current);
  std::vector<int> save_colors;  // colors of unhinted save-rank cards
  for (std::size_t k = 0; k < state.hands[mate].size(); ++k)
    if (state.hands[mate][k].rank == cfg.save_rank() && !state.knowledge[mate][k].hinted())
      save_colors.push_back(state.hands[mate][k].color);
  if (save_colors.empty()) return 0.0;
  if (action.type == HanabiAction::HintRank && action.index == cfg.save_rank()) return 0.0;
  if (action.type == HanabiAction::HintColor &&
      std::find(save_colors.begin(), save_colors.end(), action.index) != save_colors.end())
    return 0.0;
  return -1.0;
}

double chop_reward(const HanabiConfig& cfg, const MiniHanabiState& state,
                   const HanabiAction& action) {
  (void)cfg;
  if (action.type != HanabiAction::Discard) return 0.0;
  const auto& know = state.knowledge[state.current];
  int chop = -1;  // rightmost unhinted card
  for (int k = static_cast<int>(know.size()); k-- > 0;) {
    if (!know[k].hinted()) {
      chop = k;
      break;
    }
  }
  if (chop < 0) return -1.0;  // discouraged: discarding when all cards are hinted
  return action.index == chop ? 0.0 : -2.0;
}

bool five_save_relevant(const HanabiConfig& cfg, const MiniHanabiState& state,
                        const HanabiAction& action) {
  if (action.type != HanabiAction::HintColor && action.type != HanabiAction::HintRank)
    return false;
  const int mate = teammate_of(cfg, state.current);
  for (std::size_t k = 0; k < state.hands[mate].size(); ++k)
    if (state.hands[mate][k].rank == cfg.save_rank() && !state.knowledge[mate][k].hinted())
      return true;
  return false;
}

bool chop_relevant(const HanabiAction& action) { return action.type == HanabiAction::Discard; }

std::vector<std::vector<double>> minihanabi_beliefs(const HanabiConfig& cfg,
                                                    const MiniHanabiState& state, int player) {
  std::vector<std::vector<double>> out;
  const std::size_t types = static_cast<std::size_t>(cfg.colors) * cfg.max_rank;
  for (std::size_t k = 0; k < state.hands[player].size(); ++k) {
    const Card& actual = state.hands[player][k];
    const CardKnowledge& know = state.knowledge[player][k];
    std::vector<double> belief(types, 0.0);
    double mass = 0;
    for (int c = 0; c < cfg.colors; ++c) {
      for (int r = 1; r <= cfg.max_rank; ++r) {
        if (know.color_hinted && c != actual.color) continue;
        if (know.rank_hinted && r != actual.rank) continue;
        double w = cfg.rank_counts[r - 1];
        belief[static_cast<std::size_t>(c) * cfg.max_rank + (r - 1)] = w;
        mass += w;
      }
    }
    for (double& b : belief) b /= mass;
    out.push_back(std::move(belief));
  }
  return out;
}

void inject_noise(std::vector<std::vector<double>>& distributions, double scale, Rng& rng) {
  if (scale == 0.0) return;  // identity, no generator draws
  std::uniform_real_distribution<double> noise(-scale, scale);
  for (auto& dist : distributions) {
    double mass = 0;
    for (double& p : dist) {
      p = std::max(0.0, p + noise(rng));
      mass += p;
    }
    if (mass <= 0) {
      // fully wiped out: fall back to uniform
      for (double& p : dist) p = 1.0 / dist.size();
    } else {
      for (double& p : dist) p /= mass;
    }
  }
}

}  // namespace marl
