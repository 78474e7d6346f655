#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gameforms/game.hpp"

namespace gameforms {

// Social choice function: every voter reports a strict order over the
// candidates; the choice table is total over all (p!)^n report profiles,
// indexed mixed-radix over permutation indices (lexicographic permutation
// enumeration, last voter fastest).
struct Scf {
  int voters = 0;
  std::vector<std::string> candidates;
  std::vector<int> choice;  // candidate id per report profile

  int candidate_count() const { return static_cast<int>(candidates.size()); }
  long long profile_count() const { return static_cast<long long>(choice.size()); }
  void validate() const;
  friend bool operator==(const Scf&, const Scf&) = default;
};

// File format: "scf n=<n> p=<p>" header, then one line per profile in
// canonical order: "a>b>c|b>a>c|... -> <candidate>".
Scf parse_scf(const std::string& text);
std::string serialize_scf(const Scf& scf);

// Builtins (n = p = 3). Leaders: voters 1 and 2 agree on a top -> elect it;
// distinct bottoms -> elect the candidate that is nobody's bottom; otherwise
// elect whichever of the two tops voter 3 ranks lower. The follow variant
// elects the top voter 3 ranks higher and is not stable.
Scf leaders_scf();
Scf leaders_follow_scf();
Scf dictator_scf(int voters, int candidates, int dictator);

// The strategic game at report profile x (permutation index per voter):
// strategies are all p! orders, outcomes the candidates the table actually
// elects, preferences given by x itself.
Game game_of_profile(const Scf& scf, const std::vector<int>& profile);
GameForm scf_game_form(const Scf& scf);

struct AxiomReport {
  bool sincere = false;      // every report profile is an NE of its own game
  bool dictatorial = false;  // some voter always gets their reported top
  std::optional<bool> monotone;  // only evaluated when p == 2
};

AxiomReport check_axioms(const Scf& scf);

struct DResult {
  bool defined = false;
  std::optional<Scf> image;
  std::optional<std::vector<int>> undefined_at;  // first profile whose game is not DS
};

// The domination operator: image(x) is the DE outcome of (S, x).
DResult apply_D(const Scf& scf);
bool is_stable(const Scf& scf);

struct DIteration {
  enum class End { cycle, undefined, max_iter };
  std::vector<Scf> sequence;  // distinct SCFs seen, starting with the input
  End end = End::max_iter;
  int cycle_entry = -1;  // index of the first repeated SCF
  int period = 0;
  std::optional<std::vector<int>> undefined_at;
};

DIteration iterate_D(const Scf& scf, int max_iter = 64);

}  // namespace gameforms
