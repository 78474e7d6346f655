#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gameforms {

struct Outcome {
  int id = -1;
  std::string label;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// A strategy profile; coordinates are 1-based, one per player.
struct StrategyProfile {
  std::vector<int> coords;
  friend auto operator<=>(const StrategyProfile&, const StrategyProfile&) = default;
};

// Total mapping from strategy profiles to outcomes over a product of finite
// strategy sets. `table` holds one outcome id per profile, profiles ordered
// lexicographically with the last coordinate varying fastest (row-major for
// two players).
struct GameForm {
  std::vector<int> sizes;
  std::vector<std::string> outcomes;
  std::vector<int> table;

  int players() const { return static_cast<int>(sizes.size()); }
  int outcome_count() const { return static_cast<int>(outcomes.size()); }
  long long profile_count() const;

  // Profile rank in table order. Throws std::out_of_range on bad coordinates.
  long long rank_of(const StrategyProfile& x) const;
  int outcome_id(const StrategyProfile& x) const { return table[rank_of(x)]; }
  StrategyProfile profile_at(long long rank) const;

  // Checks sizes, table length, id ranges and surjectivity.
  // Throws std::invalid_argument on violation.
  void validate() const;

  friend bool operator==(const GameForm&, const GameForm&) = default;
};

Outcome outcome_of(const GameForm& form, const StrategyProfile& x);

// One strict total order over outcome ids per player, best first.
class PreferenceProfile {
 public:
  PreferenceProfile() = default;
  // `orders[i]` must be a permutation of 0..p-1; throws std::invalid_argument.
  explicit PreferenceProfile(std::vector<std::vector<int>> orders);

  int players() const { return static_cast<int>(orders_.size()); }
  int outcome_count() const { return orders_.empty() ? 0 : static_cast<int>(orders_[0].size()); }
  const std::vector<int>& order(int player) const { return orders_.at(player); }
  const std::vector<std::vector<int>>& orders() const { return orders_; }
  // Position of outcome `a` in player `i`'s order; 0 is best.
  int rank(int player, int a) const { return ranks_[player][a]; }
  bool prefers(int player, int a, int b) const { return ranks_[player][a] < ranks_[player][b]; }
  const std::vector<std::vector<int>>& rank_table() const { return ranks_; }

  friend bool operator==(const PreferenceProfile& a, const PreferenceProfile& b) {
    return a.orders_ == b.orders_;
  }

 private:
  std::vector<std::vector<int>> orders_;
  std::vector<std::vector<int>> ranks_;
};

struct Game {
  GameForm form;
  PreferenceProfile prefs;
  // Validates the form and that prefs range over exactly form.outcomes.
  void validate() const;
};

// Per-player non-empty subsets of surviving strategies, each strictly
// increasing; the state of iterated elimination.
struct SubBox {
  std::vector<std::vector<int>> strategies;

  static SubBox full(const GameForm& form);
  bool valid_for(const GameForm& form) const;
  bool singleton() const;
  long long profile_count() const;
  // The unique profile of a singleton box.
  StrategyProfile only_profile() const;
  SubBox without(int player, int strategy) const;
  bool contained_in(const SubBox& other) const;

  friend auto operator<=>(const SubBox&, const SubBox&) = default;
};

enum class Domination {
  strict_somewhere,  // weakly better everywhere, strictly at least once
  equivalent,        // identical outcomes everywhere on the box
  none,
};

// Does strategy `s` of `player` dominate `t` modulo `box`? `s` and `t` need
// not lie inside box; opponents range over the box.
Domination dominates_mod(const Game& game, int player, int s, int t, const SubBox& box);

bool is_nash_equilibrium(const Game& game, const StrategyProfile& x);
std::vector<StrategyProfile> nash_equilibria(const Game& game);

namespace detail {

// Rank tables indexed [player][outcome id]; lower rank preferred. The hot
// loops take these directly so sweeps can reuse buffers.
using RankTable = std::vector<std::vector<int>>;

Domination dominates_mod(const GameForm& form, const RankTable& ranks, int player,
                         int s, int t, const SubBox& box);
bool is_nash_equilibrium(const GameForm& form, const RankTable& ranks, const StrategyProfile& x);
bool has_nash_equilibrium(const GameForm& form, const RankTable& ranks);
void ranks_from_orders(const std::vector<std::vector<int>>& orders, RankTable& out);

}  // namespace detail

}  // namespace gameforms
