#pragma once

#include "maid/core.hpp"
#include "maid/markov.hpp"

namespace maid {

// One-shot two-agent interaction-paradigm MAIDs (agents "h" and "a", binary
// decisions). `sequential` inserts an information-set chance node carrying
// a's decision to h (the second mover). Utility tables are schematic
// coordination payoffs; the paradigm classification is purely structural.
Maid one_shot_paradigm(ParadigmKind kind, bool sequential = false);

// Two-agent logistics coordination game: decisions D_A, D_B over
// {space, speed}, payoffs (9,9)/(3,6)/(6,3)/(5,5).
Maid logistics_maid();

// Logistics game extended with a constant guidance signal Z observed by D_A;
// the fixture for pre-strategy interventions steering equilibrium selection.
Maid logistics_intervention_maid();

// The tree-killer story: Alice decides PoisonTree and BuildPatio, Bob decides
// TreeDoctor, with TreeSick/TreeDead chance nodes and four utilities.
Maid tree_killer_maid();

// The logistics game as a one-transition team-reward Markov game
// (team rewards 18/9/9/10).
MarkovGame logistics_game();

}  // namespace maid
