#pragma once

#include <string>
#include <vector>

#include "gameforms/game.hpp"

namespace gameforms {

// Game form text format. Serialization is canonical: single spaces, grid
// block for two players, map block otherwise, trailing newline after "end".
GameForm parse_game_form(const std::string& text);
std::string serialize_game_form(const GameForm& form);

// Preference text format ("player 1: a2 > a1 > a3"). Orders must be
// permutations of `outcome_labels`.
PreferenceProfile parse_preferences(const std::string& text,
                                    const std::vector<std::string>& outcome_labels);
std::string serialize_preferences(const PreferenceProfile& prefs,
                                  const std::vector<std::string>& outcome_labels);

std::string render_profile(const StrategyProfile& x);
std::string render_box(const SubBox& box);

}  // namespace gameforms
