#include "gameforms/domination.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gameforms/errors.hpp"
#include "gameforms/text.hpp"

namespace gameforms {

namespace detail {

namespace {

// First eliminable pair in canonical order (player, dominated, dominator),
// or player == 0 when the box is domination-free.
EliminablePair first_eliminable(const GameForm& form, const RankTable& ranks, const SubBox& box) {
  for (int i = 1; i <= form.players(); ++i) {
    const auto& set = box.strategies[i - 1];
    if (set.size() < 2) continue;
    for (int t : set) {
      for (int s : set) {
        if (s == t) continue;
        if (dominates_mod(form, ranks, i, s, t, box) != Domination::none)
          return {i, s, t};
      }
    }
  }
  return {0, 0, 0};
}

}  // namespace

bool eliminate_to_terminal(const GameForm& form, const RankTable& ranks, SubBox& box,
                           std::vector<EliminationStep>* steps) {
  for (;;) {
    EliminablePair p = first_eliminable(form, ranks, box);
    if (p.player == 0) break;
    if (steps) steps->push_back({p.player, p.dominated, p.dominator, box});
    auto& set = box.strategies[p.player - 1];
    set.erase(std::remove(set.begin(), set.end(), p.dominated), set.end());
  }
  return box.singleton();
}

}  // namespace detail

std::vector<EliminablePair> eliminable_pairs(const Game& game, const SubBox& box) {
  if (!box.valid_for(game.form)) throw std::out_of_range("box is not valid for this form");
  std::vector<EliminablePair> out;
  const auto& ranks = game.prefs.rank_table();
  for (int i = 1; i <= game.form.players(); ++i) {
    const auto& set = box.strategies[i - 1];
    for (int t : set)
      for (int s : set) {
        if (s == t) continue;
        if (detail::dominates_mod(game.form, ranks, i, s, t, box) != Domination::none)
          out.push_back({i, s, t});
      }
  }
  return out;
}

EliminationTrace run_canonical(const Game& game) {
  EliminationTrace trace;
  trace.start = SubBox::full(game.form);
  SubBox box = trace.start;
  detail::eliminate_to_terminal(game.form, game.prefs.rank_table(), box, &trace.steps);
  trace.terminal = std::move(box);
  return trace;
}

std::vector<SubBox> all_terminal_boxes(const Game& game, long long step_budget) {
  const auto& ranks = game.prefs.rank_table();
  std::set<SubBox> visited;
  std::set<SubBox> terminal;
  std::vector<SubBox> stack{SubBox::full(game.form)};
  visited.insert(stack.back());
  long long expanded = 0;
  while (!stack.empty()) {
    SubBox box = std::move(stack.back());
    stack.pop_back();
    if (++expanded > step_budget)
      throw BudgetExceeded("terminal-box exploration exceeded " + std::to_string(step_budget) +
                           " box expansions");
    bool any = false;
    for (int i = 1; i <= game.form.players(); ++i) {
      const auto& set = box.strategies[i - 1];
      if (set.size() < 2) continue;
      for (int t : set)
        for (int s : set) {
          if (s == t) continue;
          if (detail::dominates_mod(game.form, ranks, i, s, t, box) == Domination::none) continue;
          any = true;
          SubBox child = box.without(i, t);
          if (visited.insert(child).second) stack.push_back(std::move(child));
        }
    }
    if (!any) terminal.insert(std::move(box));
  }
  return {terminal.begin(), terminal.end()};
}

std::optional<DominationEquilibrium> domination_equilibrium(const Game& game) {
  SubBox box = SubBox::full(game.form);
  if (!detail::eliminate_to_terminal(game.form, game.prefs.rank_table(), box, nullptr))
    return std::nullopt;
  StrategyProfile x = box.only_profile();
  return DominationEquilibrium{x, outcome_of(game.form, x)};
}

bool is_ds(const Game& game) { return domination_equilibrium(game).has_value(); }

namespace {

// Backtracking search for per-player bijections y -> z preserving outcomes.
struct IsoSearch {
  const GameForm& form;
  const SubBox& y;
  const SubBox& z;
  // assignment[i][k]: index into z.strategies[i] assigned to y.strategies[i][k], or -1
  std::vector<std::vector<int>> assignment;
  std::vector<std::vector<char>> taken;

  explicit IsoSearch(const GameForm& f, const SubBox& y_, const SubBox& z_)
      : form(f), y(y_), z(z_) {
    for (const auto& set : y.strategies) {
      assignment.emplace_back(set.size(), -1);
      taken.emplace_back(set.size(), 0);
    }
  }

  bool outcomes_match() const {
    const int n = form.players();
    std::vector<size_t> idx(n, 0);
    for (;;) {
      StrategyProfile a, b;
      for (int i = 0; i < n; ++i) {
        a.coords.push_back(y.strategies[i][idx[i]]);
        b.coords.push_back(z.strategies[i][assignment[i][idx[i]]]);
      }
      if (form.outcome_id(a) != form.outcome_id(b)) return false;
      int i = n - 1;
      while (i >= 0 && ++idx[i] == y.strategies[i].size()) idx[i--] = 0;
      if (i < 0) return true;
    }
  }

  bool fill(int player, size_t pos) {
    if (player == form.players()) return outcomes_match();
    if (pos == y.strategies[player].size()) return fill(player + 1, 0);
    for (size_t to = 0; to < z.strategies[player].size(); ++to) {
      if (taken[player][to]) continue;
      taken[player][to] = 1;
      assignment[player][pos] = static_cast<int>(to);
      if (fill(player, pos + 1)) return true;
      taken[player][to] = 0;
      assignment[player][pos] = -1;
    }
    return false;
  }
};

}  // namespace

std::optional<PermutationWitness> boxes_isomorphic(const GameForm& form, const SubBox& y,
                                                   const SubBox& z) {
  if (!y.valid_for(form) || !z.valid_for(form))
    throw std::out_of_range("box is not valid for this form");
  for (int i = 0; i < form.players(); ++i)
    if (y.strategies[i].size() != z.strategies[i].size()) return std::nullopt;

  IsoSearch search(form, y, z);
  if (!search.fill(0, 0)) return std::nullopt;
  PermutationWitness witness;
  for (int i = 0; i < form.players(); ++i) {
    std::vector<std::pair<int, int>> map;
    for (size_t k = 0; k < y.strategies[i].size(); ++k)
      map.emplace_back(y.strategies[i][k], z.strategies[i][search.assignment[i][k]]);
    witness.maps.push_back(std::move(map));
  }
  return witness;
}

std::string render_trace(const EliminationTrace& trace) {
  std::ostringstream out;
  for (const auto& step : trace.steps)
    out << "eliminate p=" << step.player << " s=" << step.dominated << " by " << step.dominator
        << '\n';
  out << render_box(trace.terminal) << '\n';
  return out.str();
}

}  // namespace gameforms
