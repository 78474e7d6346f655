#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gameforms/game.hpp"

namespace gameforms {

// Two-player grid with per-line total pre-orders (ties allowed), independent
// of any game form. Player 1 compares rows within each column, player 2
// compares columns within each row; comparisons never cross lines.
struct Configuration {
  int rows = 0;
  int cols = 0;
  // col_ranks[c][r]: player 1's rank of row r within column c, higher = preferred.
  std::vector<std::vector<int>> col_ranks;
  // row_ranks[r][c]: player 2's rank of column c within row r.
  std::vector<std::vector<int>> row_ranks;

  void validate() const;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

Configuration parse_configuration(const std::string& text);
std::string serialize_configuration(const Configuration& config);

// The configuration induced by a two-player game: line pre-orders follow the
// players' preferences over cell outcomes.
Configuration configuration_of_game(const Game& game);

// A 2x2 pattern: sign of player 1's row1-vs-row2 comparison in columns 1,2
// followed by player 2's col1-vs-col2 comparison in rows 1,2; +1 prefers the
// first element, -1 the second, 0 tie.
using SquarePattern = std::array<int8_t, 4>;

enum class SquareAnchor {
  none,
  ne_free,             // the unique class without a Nash equilibrium
  battle_of_sexes,     // has an NE but no DE
  dominant_pair,       // both players have a strictly dominant strategy
  non_tie_transitive,  // one of the two classes not realizable by a game form
};

struct TwoSquareClass {
  int id = 0;  // 1-based catalog index
  SquarePattern canonical{};
  int orbit_size = 0;
  bool has_ne = false;
  bool has_de = false;
  bool tie_transitive = false;
  SquareAnchor anchor = SquareAnchor::none;
};

// The fifteen classes of 2x2 patterns under row swap, column swap and player
// transposition, ordered by canonical pattern encoding.
const std::vector<TwoSquareClass>& square_catalog();
// Catalog id of one pattern.
int classify_square(const SquarePattern& pattern);
int catalog_id_of(SquareAnchor anchor);           // unique anchors only
std::vector<int> catalog_ids_of(SquareAnchor anchor);

// Classes realized by all row-pair x column-pair sub-squares.
std::set<int> type_set(const Configuration& config);

struct ConfigSolutions {
  std::vector<std::pair<int, int>> ne_profiles;  // (row, col), 1-based
  bool has_de = false;  // some elimination order reaches a 1x1 box
};

ConfigSolutions config_solutions(const Configuration& config, long long max_boxes = 4'000'000);

struct TieTransitivity {
  bool transitive = false;
  // When transitive: the game form whose outcomes are the tie classes.
  std::optional<GameForm> induced_form;
};

// Merges profiles connected by ties of either player; true iff neither
// player's lifted strict relation has a cycle.
TieTransitivity tie_transitivity(const Configuration& config);

// A family of subsets (terms) over named symbols.
struct Dnf {
  std::vector<std::string> symbols;         // universe, first-appearance order
  std::vector<std::vector<int>> terms;      // ascending symbol indices
};

// "c1 | c2 c3 | c5 c9"
Dnf parse_dnf(const std::string& text);
std::string serialize_dnf(const Dnf& dnf);
Dnf irredundant(const Dnf& dnf);
// The irredundant family of all minimal transversals; involutive on
// irredundant inputs. Throws BudgetExceeded when the universe exceeds
// max_symbols.
Dnf dualize(const Dnf& dnf, int max_symbols = 20);
// Set-of-sets equality over symbol names.
bool dnf_equal(const Dnf& a, const Dnf& b);

enum class ScanTarget { nash, domination };

struct ScanOptions {
  std::set<int> allowed;  // catalog ids every sub-square must belong to
  int max_rows = 3;
  int max_cols = 3;
  bool tie_free = false;
  long long node_budget = 5'000'000;
};

// Exhaustive search for a configuration without the target solution whose
// type set stays inside `allowed`. Returns the first witness in canonical
// search order, or absent when none exists within the size bounds. Throws
// BudgetExceeded when the node budget runs out first.
std::optional<Configuration> scan_for_examples(ScanTarget target, const ScanOptions& options);

}  // namespace gameforms
