#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gameforms/game.hpp"

namespace gameforms {

struct PropertyLimits {
  int max_players = 4;
  int max_outcomes = 8;
  long long max_pref_profiles = 10'000'000;
  long long max_subboxes = 1'000'000;  // total-tightness sweep for n > 2
};

// E(K, B) over coalition and block bitmasks. E(I, B) = 1 iff B nonempty,
// E(empty, B) = 1 iff B = A, and E(K, B) = 1 implies E(I\K, A\B) = 0.
struct EffectivityFunction {
  int players = 0;
  int outcomes = 0;
  std::vector<uint8_t> bits;  // index (K << outcomes) | B

  bool effective(unsigned coalition, unsigned block) const {
    return bits[(static_cast<size_t>(coalition) << outcomes) | block] != 0;
  }
};

EffectivityFunction effectivity_function(const GameForm& form, const PropertyLimits& limits = {});

enum class TightMode { full, weak };

struct TightnessResult {
  bool tight = false;
  // Counterexample pair when not tight: E(K,B) == E(I\K, A\B).
  unsigned coalition = 0;
  unsigned block = 0;
};

TightnessResult is_tight(const GameForm& form, TightMode mode, const PropertyLimits& limits = {});

struct RectangularityResult {
  bool rectangular = false;
  int violating_outcome = -1;
};

// True iff every outcome's preimage is a full sub-box.
RectangularityResult is_rectangular(const GameForm& form);

struct TotalTightnessResult {
  bool totally_tight = false;
  // A non-tight sub-box when false; for two players this is a 2x2 box
  // without a constant line.
  std::optional<SubBox> violating_box;
};

// Totally tight: every sub-box restriction of the form is tight. For two
// players this is equivalent to every 2x2 box containing a constant line,
// which is used as a fast path.
TotalTightnessResult is_totally_tight(const GameForm& form, const PropertyLimits& limits = {});

// Tight and rectangular; the characterization of positional forms.
bool is_positional_form(const GameForm& form, const PropertyLimits& limits = {});

struct ImprovementCycle {
  std::vector<StrategyProfile> profiles;  // x0 -> x1 -> ... -> back to x0
};

// A directed cycle in the single-player strict-improvement graph, or absent.
std::optional<ImprovementCycle> find_improvement_cycle(const Game& game);

struct SolvabilityReport {
  bool ns = false;  // every strict preference profile yields a game with an NE
  bool ds = false;  // every profile yields a dominance-solvable game
  bool ac = false;  // no profile yields an improvement cycle
  // First failing profile in canonical order, per property.
  std::optional<PreferenceProfile> ns_witness;
  std::optional<std::pair<PreferenceProfile, SubBox>> ds_witness;      // terminal box
  std::optional<std::pair<PreferenceProfile, ImprovementCycle>> ac_witness;
};

SolvabilityReport classify_solvability(const GameForm& form, const PropertyLimits& limits = {});

// Is a single game dominance solvable under the given ranks; sweep building
// block shared with the veto module.
namespace detail {
bool is_ds(const GameForm& form, const RankTable& ranks);
bool has_improvement_cycle(const GameForm& form, const RankTable& ranks);
// Enumerates rank tables of all (p!)^n strict preference profiles in
// canonical order (player 1 most significant); stops when fn returns false.
void sweep_pref_profiles(int players, int outcomes,
                         const std::function<bool(const RankTable&, const std::vector<int>&)>& fn);
const std::vector<std::vector<int>>& permutations_of(int p);  // lex order, cached
}  // namespace detail

struct FormProperties {
  bool tight, weak_tight, rect, tt, positional, ns, ds, ac;
};

FormProperties analyze_form(const GameForm& form, const PropertyLimits& limits = {});
// "tight=1 weak_tight=1 rect=1 tt=0 positional=1 ns=1 ds=1 ac=1"
std::string render_properties(const FormProperties& props);

}  // namespace gameforms
