#pragma once

#include <string>

#include "maid/core.hpp"
#include "maid/equilibrium.hpp"
#include "maid/intervention.hpp"
#include "maid/markov.hpp"

namespace maid {

// Structured-text (JSON, fixed field order, 2-space indent) serialization.
// parse(serialize(x)) == x and serialize(parse(text)) is byte-identical for
// canonical files.

std::string serialize_maid(const Maid& m);
Maid parse_maid(const std::string& text);  // validates via build_maid

std::string serialize_markov_game(const MarkovGame& g);
MarkovGame parse_markov_game(const std::string& text);

std::string serialize_nash_set(const NashSet& ns);
NashSet parse_nash_set(const std::string& text);

std::string serialize_causal_effect(const CausalEffectReport& r);
CausalEffectReport parse_causal_effect(const std::string& text);

// Stable content hash of the canonical serialization (cache keys).
std::string content_hash(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace maid
