#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gameforms/game.hpp"

namespace gameforms {

// Veto voting: voter i distributes mu[i] veto cards over p candidates, at
// most lambda[a] on candidate a; candidates vetoed by at least lambda[a]
// cards in total are eliminated, the rest are elected.
struct VetoSpec {
  std::vector<int> mu;      // per-voter veto power
  std::vector<int> lambda;  // per-candidate veto resistance

  int voters() const { return static_cast<int>(mu.size()); }
  int candidates() const { return static_cast<int>(lambda.size()); }
  // Requires positive entries and sum(mu) < sum(lambda).
  void validate() const;
};

// "veto mu=1,1 lambda=1,1,1"
VetoSpec parse_veto_spec(const std::string& text);
std::string serialize_veto_spec(const VetoSpec& spec);

using VetoStrategy = std::vector<int>;  // per-candidate card counts

// All capped compositions of mu[voter] into p parts, ascending lexicographic.
std::vector<VetoStrategy> enumerate_strategies(const VetoSpec& spec, int voter);

struct VetoCorrespondence {
  VetoSpec spec;
  std::vector<std::vector<VetoStrategy>> strategies;  // per voter
  // Elected candidate ids per joint strategy profile, row-major (last voter
  // fastest), each ascending. Never empty.
  std::vector<std::vector<int>> elected;
  long long multi_cell_count = 0;
  // Product of per-cell elected counts; saturates at selection_count_cap.
  long long selection_count = 0;
  static constexpr long long selection_count_cap = 1'000'000'000'000'000'000LL;
};

VetoCorrespondence build_correspondence(const VetoSpec& spec, long long max_cells = 1'000'000);

// The game form of one selection (mixed-radix index over multi-valued cells,
// last cell fastest). Outcomes are the candidates that actually appear.
GameForm selection_form(const VetoCorrespondence& corr, long long selection_index);

// Every selection that is dominance solvable as a game form, in canonical
// selection order. Throws BudgetExceeded when the selection count exceeds
// max_selections. `jobs` > 1 splits the scan; the result is identical.
std::vector<GameForm> enumerate_ds_selections(const VetoCorrespondence& corr,
                                              long long max_selections = 1'000'000,
                                              int jobs = 1);

// Resumable window over [begin, end): invokes fn(selection_index, form) for
// every DS selection in the window, in order. Never throws for budget
// reasons; callers checkpoint `end` and continue.
void for_each_ds_selection(const VetoCorrespondence& corr, long long begin, long long end,
                           const std::function<void(long long, const GameForm&)>& fn);

}  // namespace gameforms
