#include "gameforms/properties.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <numeric>
#include <sstream>

#include "gameforms/domination.hpp"
#include "gameforms/errors.hpp"

namespace gameforms {

namespace {

void check_eff_bounds(const GameForm& form, const PropertyLimits& limits) {
  if (form.players() > limits.max_players)
    throw BudgetExceeded("effectivity function limited to " + std::to_string(limits.max_players) +
                         " players");
  if (form.outcome_count() > limits.max_outcomes)
    throw BudgetExceeded("effectivity function limited to " + std::to_string(limits.max_outcomes) +
                         " outcomes");
}

// Outcome sets each coalition can force, one bitmask per joint strategy.
std::vector<std::vector<unsigned>> forced_sets(const GameForm& form) {
  const int n = form.players();
  std::vector<std::vector<unsigned>> forced(size_t{1} << n);
  const long long cells = form.profile_count();
  for (unsigned coalition = 1; coalition < (1u << n); ++coalition) {
    std::vector<int> members, opponents;
    for (int i = 0; i < n; ++i)
      (coalition >> i & 1 ? members : opponents).push_back(i);
    long long joint = 1;
    for (int i : members) joint *= form.sizes[i];
    std::vector<unsigned> sets(joint, 0);
    // One pass over all profiles, accumulating by the coalition's sub-rank.
    for (long long r = 0; r < cells; ++r) {
      long long rest = r, sub = 0;
      // profile_at inlined to avoid allocation
      static thread_local std::vector<int> coords;
      coords.assign(n, 0);
      for (int i = n - 1; i >= 0; --i) {
        coords[i] = static_cast<int>(rest % form.sizes[i]);
        rest /= form.sizes[i];
      }
      for (int i : members) sub = sub * form.sizes[i] + coords[i];
      sets[sub] |= 1u << form.table[r];
    }
    forced[coalition] = std::move(sets);
  }
  return forced;
}

}  // namespace

EffectivityFunction effectivity_function(const GameForm& form, const PropertyLimits& limits) {
  check_eff_bounds(form, limits);
  const int n = form.players();
  const int p = form.outcome_count();
  auto forced = forced_sets(form);

  EffectivityFunction eff;
  eff.players = n;
  eff.outcomes = p;
  eff.bits.assign(size_t{1} << (n + p), 0);
  const unsigned all = (1u << p) - 1;
  for (unsigned coalition = 0; coalition < (1u << n); ++coalition) {
    for (unsigned block = 0; block <= all; ++block) {
      bool value;
      if (coalition == 0)
        value = block == all;  // convention
      else
        value = std::any_of(forced[coalition].begin(), forced[coalition].end(),
                            [&](unsigned set) { return (set & ~block) == 0; });
      eff.bits[(size_t{coalition} << p) | block] = value ? 1 : 0;
    }
  }
  return eff;
}

TightnessResult is_tight(const GameForm& form, TightMode mode, const PropertyLimits& limits) {
  auto eff = effectivity_function(form, limits);
  const int n = eff.players;
  const unsigned full = (1u << n) - 1;
  const unsigned all = (1u << eff.outcomes) - 1;
  for (unsigned coalition = 0; coalition <= full; ++coalition) {
    if (mode == TightMode::weak) {
      int size = std::popcount(coalition);
      if (size != 1 && size != n - 1) continue;
    }
    for (unsigned block = 0; block <= all; ++block)
      if (eff.effective(coalition, block) == eff.effective(full ^ coalition, all ^ block))
        return {false, coalition, block};
  }
  return {true, 0, 0};
}

RectangularityResult is_rectangular(const GameForm& form) {
  const int n = form.players();
  const long long cells = form.profile_count();
  for (int a = 0; a < form.outcome_count(); ++a) {
    std::vector<std::vector<char>> used(n);
    for (int i = 0; i < n; ++i) used[i].assign(form.sizes[i], 0);
    long long count = 0;
    for (long long r = 0; r < cells; ++r) {
      if (form.table[r] != a) continue;
      ++count;
      long long rest = r;
      for (int i = n - 1; i >= 0; --i) {
        used[i][rest % form.sizes[i]] = 1;
        rest /= form.sizes[i];
      }
    }
    long long box = 1;
    for (int i = 0; i < n; ++i)
      box *= std::count(used[i].begin(), used[i].end(), 1);
    // preimage is always inside the coordinate-set box; equality means it fills it
    if (box != count) return {false, a};
  }
  return {true, -1};
}

namespace {

GameForm restrict_to(const GameForm& form, const SubBox& box) {
  GameForm out;
  const int n = form.players();
  for (const auto& set : box.strategies) out.sizes.push_back(static_cast<int>(set.size()));
  std::vector<size_t> idx(n, 0);
  std::vector<int> raw;
  for (;;) {
    StrategyProfile x;
    for (int i = 0; i < n; ++i) x.coords.push_back(box.strategies[i][idx[i]]);
    raw.push_back(form.outcome_id(x));
    int i = n - 1;
    while (i >= 0 && ++idx[i] == box.strategies[i].size()) idx[i--] = 0;
    if (i < 0) break;
  }
  std::vector<int> remap(form.outcome_count(), -1);
  for (int id : raw)
    if (remap[id] < 0) {
      remap[id] = static_cast<int>(out.outcomes.size());
      out.outcomes.push_back(form.outcomes[id]);
    }
  for (int id : raw) out.table.push_back(remap[id]);
  return out;
}

std::optional<SubBox> violating_2x2(const GameForm& form) {
  // Two players: scan every 2x2 box for a constant line.
  const int k1 = form.sizes[0], k2 = form.sizes[1];
  for (int r1 = 1; r1 <= k1; ++r1)
    for (int r2 = r1 + 1; r2 <= k1; ++r2)
      for (int c1 = 1; c1 <= k2; ++c1)
        for (int c2 = c1 + 1; c2 <= k2; ++c2) {
          auto at = [&](int r, int c) { return form.table[(r - 1LL) * k2 + (c - 1)]; };
          int a = at(r1, c1), b = at(r1, c2), c = at(r2, c1), d = at(r2, c2);
          if (a != b && c != d && a != c && b != d)
            return SubBox{{{r1, r2}, {c1, c2}}};
        }
  return std::nullopt;
}

}  // namespace

TotalTightnessResult is_totally_tight(const GameForm& form, const PropertyLimits& limits) {
  if (form.players() == 2) {
    if (auto box = violating_2x2(form)) return {false, box};
    return {true, std::nullopt};
  }
  // Every sub-box restriction must be tight. Enumerate sub-boxes smallest
  // first so the reported violation is minimal.
  long long total = 1;
  for (int k : form.sizes) {
    total *= (1LL << k) - 1;
    if (total > limits.max_subboxes)
      throw BudgetExceeded("total tightness sweep exceeds the sub-box bound");
  }
  const int n = form.players();
  std::vector<std::vector<std::vector<int>>> subsets(n);
  for (int i = 0; i < n; ++i)
    for (unsigned m = 1; m < (1u << form.sizes[i]); ++m) {
      std::vector<int> set;
      for (int s = 0; s < form.sizes[i]; ++s)
        if (m >> s & 1) set.push_back(s + 1);
      subsets[i].push_back(std::move(set));
    }
  std::vector<SubBox> boxes;
  std::vector<size_t> idx(n, 0);
  for (;;) {
    SubBox box;
    for (int i = 0; i < n; ++i) box.strategies.push_back(subsets[i][idx[i]]);
    boxes.push_back(std::move(box));
    int i = n - 1;
    while (i >= 0 && ++idx[i] == subsets[i].size()) idx[i--] = 0;
    if (i < 0) break;
  }
  std::stable_sort(boxes.begin(), boxes.end(), [](const SubBox& a, const SubBox& b) {
    return a.profile_count() < b.profile_count();
  });
  for (const auto& box : boxes) {
    GameForm sub = restrict_to(form, box);
    if (!is_tight(sub, TightMode::full, limits).tight) return {false, box};
  }
  return {true, std::nullopt};
}

bool is_positional_form(const GameForm& form, const PropertyLimits& limits) {
  return is_tight(form, TightMode::full, limits).tight && is_rectangular(form).rectangular;
}

namespace detail {

namespace {
void ranks_row(const std::vector<int>& order, std::vector<int>& row) {
  row.assign(order.size(), 0);
  for (size_t pos = 0; pos < order.size(); ++pos) row[order[pos]] = static_cast<int>(pos);
}
}  // namespace

const std::vector<std::vector<int>>& permutations_of(int p) {
  if (p < 1 || p > 8) throw BudgetExceeded("permutation enumeration limited to 8 outcomes");
  static std::mutex mutex;
  static std::vector<std::vector<std::vector<int>>> cache(9);
  std::scoped_lock lock(mutex);
  auto& perms = cache[p];
  if (perms.empty()) {
    std::vector<int> base(p);
    std::iota(base.begin(), base.end(), 0);
    do perms.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));
  }
  return perms;
}

void sweep_pref_profiles(int players, int outcomes,
                         const std::function<bool(const RankTable&, const std::vector<int>&)>& fn) {
  const auto& perms = permutations_of(outcomes);
  const int f = static_cast<int>(perms.size());
  std::vector<int> index(players, 0);
  RankTable ranks(players);
  for (int i = 0; i < players; ++i) ranks_row(perms[0], ranks[i]);
  for (;;) {
    if (!fn(ranks, index)) return;
    int i = players - 1;
    while (i >= 0) {
      if (++index[i] < f) {
        ranks_row(perms[index[i]], ranks[i]);
        break;
      }
      index[i] = 0;
      ranks_row(perms[0], ranks[i]);
      --i;
    }
    if (i < 0) return;
  }
}

bool is_ds(const GameForm& form, const RankTable& ranks) {
  SubBox box = SubBox::full(form);
  return eliminate_to_terminal(form, ranks, box, nullptr);
}

namespace {

// DFS over the strict single-deviation improvement graph; returns a cycle as
// profile ranks when one exists.
std::optional<std::vector<long long>> improvement_cycle_ranks(const GameForm& form,
                                                              const RankTable& ranks) {
  const long long cells = form.profile_count();
  const int n = form.players();
  std::vector<long long> strides(n, 1);
  for (int i = n - 2; i >= 0; --i) strides[i] = strides[i + 1] * form.sizes[i + 1];

  std::vector<char> color(cells, 0);  // 0 white, 1 gray, 2 black
  std::vector<long long> parent(cells, -1);
  // Explicit stack: (node, player, alternative strategy) resume point.
  struct Frame {
    long long node;
    int player;
    int alt;
  };
  std::vector<Frame> stack;
  std::vector<int> coords(n);

  auto decode = [&](long long r) {
    for (int i = n - 1; i >= 0; --i) {
      coords[i] = static_cast<int>(r % form.sizes[i]) + 1;
      r /= form.sizes[i];
    }
  };

  for (long long start = 0; start < cells; ++start) {
    if (color[start] != 0) continue;
    stack.push_back({start, 0, 1});
    color[start] = 1;
    while (!stack.empty()) {
      Frame& fr = stack.back();
      decode(fr.node);
      const int here = form.table[fr.node];
      bool descended = false;
      while (fr.player < n) {
        if (fr.alt > form.sizes[fr.player]) {
          ++fr.player;
          fr.alt = 1;
          continue;
        }
        int s = fr.alt++;
        if (s == coords[fr.player]) continue;
        long long next =
            fr.node + static_cast<long long>(s - coords[fr.player]) * strides[fr.player];
        int there = form.table[next];
        if (ranks[fr.player][there] >= ranks[fr.player][here]) continue;
        if (color[next] == 1) {
          // Back edge: walk parents from fr.node to next.
          std::vector<long long> cycle{next};
          for (long long at = fr.node; at != next; at = parent[at]) cycle.push_back(at);
          std::reverse(cycle.begin() + 1, cycle.end());
          return cycle;
        }
        if (color[next] == 0) {
          parent[next] = fr.node;
          color[next] = 1;
          stack.push_back({next, 0, 1});
          descended = true;
          break;
        }
      }
      if (descended) continue;
      if (fr.player >= n) {
        color[fr.node] = 2;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

}  // namespace

bool has_improvement_cycle(const GameForm& form, const RankTable& ranks) {
  return improvement_cycle_ranks(form, ranks).has_value();
}

}  // namespace detail

std::optional<ImprovementCycle> find_improvement_cycle(const Game& game) {
  auto ranks = detail::improvement_cycle_ranks(game.form, game.prefs.rank_table());
  if (!ranks) return std::nullopt;
  ImprovementCycle cycle;
  for (long long r : *ranks) cycle.profiles.push_back(game.form.profile_at(r));
  return cycle;
}

SolvabilityReport classify_solvability(const GameForm& form, const PropertyLimits& limits) {
  const int n = form.players();
  const int p = form.outcome_count();
  const auto& perms = detail::permutations_of(p);
  long long sweep = 1;
  for (int i = 0; i < n; ++i) {
    sweep *= static_cast<long long>(perms.size());
    if (sweep > limits.max_pref_profiles)
      throw BudgetExceeded("preference sweep exceeds " +
                           std::to_string(limits.max_pref_profiles) + " profiles");
  }

  SolvabilityReport report;
  report.ns = report.ds = report.ac = true;
  auto profile_of = [&](const std::vector<int>& index) {
    std::vector<std::vector<int>> orders;
    for (int i : index) orders.push_back(perms[i]);
    return PreferenceProfile(std::move(orders));
  };
  detail::sweep_pref_profiles(n, p, [&](const detail::RankTable& ranks,
                                        const std::vector<int>& index) {
    if (report.ns && !detail::has_nash_equilibrium(form, ranks)) {
      report.ns = false;
      report.ns_witness = profile_of(index);
    }
    if (report.ds) {
      SubBox box = SubBox::full(form);
      if (!detail::eliminate_to_terminal(form, ranks, box, nullptr)) {
        report.ds = false;
        report.ds_witness = {profile_of(index), std::move(box)};
      }
    }
    if (report.ac) {
      if (auto cycle = detail::improvement_cycle_ranks(form, ranks)) {
        report.ac = false;
        ImprovementCycle ic;
        for (long long r : *cycle) ic.profiles.push_back(form.profile_at(r));
        report.ac_witness = {profile_of(index), std::move(ic)};
      }
    }
    return report.ns || report.ds || report.ac;
  });
  return report;
}

FormProperties analyze_form(const GameForm& form, const PropertyLimits& limits) {
  FormProperties props{};
  props.tight = is_tight(form, TightMode::full, limits).tight;
  props.weak_tight = is_tight(form, TightMode::weak, limits).tight;
  props.rect = is_rectangular(form).rectangular;
  props.tt = is_totally_tight(form, limits).totally_tight;
  props.positional = props.tight && props.rect;
  auto report = classify_solvability(form, limits);
  props.ns = report.ns;
  props.ds = report.ds;
  props.ac = report.ac;
  return props;
}

std::string render_properties(const FormProperties& props) {
  std::ostringstream out;
  out << "tight=" << props.tight << " weak_tight=" << props.weak_tight << " rect=" << props.rect
      << " tt=" << props.tt << " positional=" << props.positional << " ns=" << props.ns
      << " ds=" << props.ds << " ac=" << props.ac;
  return out.str();
}

}  // namespace gameforms
