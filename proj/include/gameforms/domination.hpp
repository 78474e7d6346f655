#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gameforms/game.hpp"

namespace gameforms {

struct EliminablePair {
  int player;     // 1-based
  int dominator;  // strategy index
  int dominated;
  friend auto operator<=>(const EliminablePair&, const EliminablePair&) = default;
};

struct EliminationStep {
  int player;
  int dominated;
  int dominator;
  SubBox box_before;
};

struct EliminationTrace {
  SubBox start;
  std::vector<EliminationStep> steps;
  SubBox terminal;
};

struct DominationEquilibrium {
  StrategyProfile profile;
  Outcome outcome;
};

// Per player, a bijection between two equal-size strategy subsets, listed as
// (from, to) pairs in ascending `from` order.
struct PermutationWitness {
  std::vector<std::vector<std::pair<int, int>>> maps;
};

// All ordered pairs where the first surviving strategy dominates (or is
// equivalent to) the second modulo `box`, sorted by player, then dominated,
// then dominator.
std::vector<EliminablePair> eliminable_pairs(const Game& game, const SubBox& box);

// Repeatedly eliminates the first pair from eliminable_pairs until none
// remains. The terminal box is domination-free.
EliminationTrace run_canonical(const Game& game);

// Every terminal D-box reachable by any elimination order, deduplicated and
// sorted. Throws BudgetExceeded if more than `step_budget` boxes are expanded.
std::vector<SubBox> all_terminal_boxes(const Game& game, long long step_budget = 1'000'000);

// Present iff the canonical run terminates in a 1 x ... x 1 box.
std::optional<DominationEquilibrium> domination_equilibrium(const Game& game);
bool is_ds(const Game& game);

// A per-player bijection carrying box `y` onto box `z` with identical
// outcomes at corresponding profiles; absent iff none exists.
std::optional<PermutationWitness> boxes_isomorphic(const GameForm& form, const SubBox& y,
                                                   const SubBox& z);

// One line per step plus the terminal box line.
std::string render_trace(const EliminationTrace& trace);

namespace detail {

// Elimination core shared by the trace and sweep paths. Mutates `box` to the
// terminal box; returns true iff it is a singleton.
bool eliminate_to_terminal(const GameForm& form, const RankTable& ranks, SubBox& box,
                           std::vector<EliminationStep>* steps);

}  // namespace detail

}  // namespace gameforms
