#include "gameforms/game.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace gameforms {

long long GameForm::profile_count() const {
  long long n = 1;
  for (int k : sizes) n *= k;
  return n;
}

long long GameForm::rank_of(const StrategyProfile& x) const {
  if (static_cast<int>(x.coords.size()) != players())
    throw std::out_of_range("profile has wrong arity");
  long long r = 0;
  for (int i = 0; i < players(); ++i) {
    int c = x.coords[i];
    if (c < 1 || c > sizes[i])
      throw std::out_of_range("strategy index out of range for player " + std::to_string(i + 1));
    r = r * sizes[i] + (c - 1);
  }
  return r;
}

StrategyProfile GameForm::profile_at(long long rank) const {
  StrategyProfile x;
  x.coords.assign(players(), 1);
  for (int i = players() - 1; i >= 0; --i) {
    x.coords[i] = static_cast<int>(rank % sizes[i]) + 1;
    rank /= sizes[i];
  }
  return x;
}

void GameForm::validate() const {
  if (sizes.empty()) throw std::invalid_argument("game form needs at least one player");
  for (int k : sizes)
    if (k < 1) throw std::invalid_argument("every strategy set needs at least one strategy");
  if (outcomes.empty()) throw std::invalid_argument("game form needs at least one outcome");
  std::set<std::string> labels(outcomes.begin(), outcomes.end());
  if (labels.size() != outcomes.size()) throw std::invalid_argument("duplicate outcome label");
  if (static_cast<long long>(table.size()) != profile_count())
    throw std::invalid_argument("table size does not match the profile count");
  std::vector<char> seen(outcomes.size(), 0);
  for (int id : table) {
    if (id < 0 || id >= outcome_count()) throw std::invalid_argument("outcome id out of range");
    seen[id] = 1;
  }
  for (size_t a = 0; a < seen.size(); ++a)
    if (!seen[a]) throw std::invalid_argument("outcome '" + outcomes[a] + "' never appears");
}

Outcome outcome_of(const GameForm& form, const StrategyProfile& x) {
  int id = form.outcome_id(x);
  return Outcome{id, form.outcomes[id]};
}

PreferenceProfile::PreferenceProfile(std::vector<std::vector<int>> orders)
    : orders_(std::move(orders)) {
  ranks_.resize(orders_.size());
  for (size_t i = 0; i < orders_.size(); ++i) {
    const auto& ord = orders_[i];
    if (ord.size() != orders_[0].size())
      throw std::invalid_argument("players rank different outcome counts");
    ranks_[i].assign(ord.size(), -1);
    for (size_t pos = 0; pos < ord.size(); ++pos) {
      int a = ord[pos];
      if (a < 0 || a >= static_cast<int>(ord.size()) || ranks_[i][a] != -1)
        throw std::invalid_argument("preference order is not a permutation of the outcomes");
      ranks_[i][a] = static_cast<int>(pos);
    }
  }
}

void Game::validate() const {
  form.validate();
  if (prefs.players() != form.players())
    throw std::invalid_argument("preference profile has wrong player count");
  if (prefs.outcome_count() != form.outcome_count())
    throw std::invalid_argument("preference profile ranges over a different outcome set");
}

SubBox SubBox::full(const GameForm& form) {
  SubBox box;
  box.strategies.reserve(form.sizes.size());
  for (int k : form.sizes) {
    std::vector<int> all(k);
    for (int s = 1; s <= k; ++s) all[s - 1] = s;
    box.strategies.push_back(std::move(all));
  }
  return box;
}

bool SubBox::valid_for(const GameForm& form) const {
  if (static_cast<int>(strategies.size()) != form.players()) return false;
  for (int i = 0; i < form.players(); ++i) {
    const auto& set = strategies[i];
    if (set.empty()) return false;
    int prev = 0;
    for (int s : set) {
      if (s <= prev || s > form.sizes[i]) return false;
      prev = s;
    }
  }
  return true;
}

bool SubBox::singleton() const {
  for (const auto& set : strategies)
    if (set.size() != 1) return false;
  return true;
}

long long SubBox::profile_count() const {
  long long n = 1;
  for (const auto& set : strategies) n *= static_cast<long long>(set.size());
  return n;
}

StrategyProfile SubBox::only_profile() const {
  StrategyProfile x;
  for (const auto& set : strategies) x.coords.push_back(set.front());
  return x;
}

SubBox SubBox::without(int player, int strategy) const {
  SubBox out = *this;
  auto& set = out.strategies[player - 1];
  set.erase(std::remove(set.begin(), set.end(), strategy), set.end());
  return out;
}

bool SubBox::contained_in(const SubBox& other) const {
  if (strategies.size() != other.strategies.size()) return false;
  for (size_t i = 0; i < strategies.size(); ++i)
    if (!std::includes(other.strategies[i].begin(), other.strategies[i].end(),
                       strategies[i].begin(), strategies[i].end()))
      return false;
  return true;
}

namespace detail {

void ranks_from_orders(const std::vector<std::vector<int>>& orders, RankTable& out) {
  out.resize(orders.size());
  for (size_t i = 0; i < orders.size(); ++i) {
    out[i].assign(orders[i].size(), 0);
    for (size_t pos = 0; pos < orders[i].size(); ++pos) out[i][orders[i][pos]] = static_cast<int>(pos);
  }
}

namespace {

// Strides for the row-major table layout (last player fastest).
std::vector<long long> strides_of(const GameForm& form) {
  std::vector<long long> st(form.sizes.size(), 1);
  for (int i = form.players() - 2; i >= 0; --i) st[i] = st[i + 1] * form.sizes[i + 1];
  return st;
}

}  // namespace

Domination dominates_mod(const GameForm& form, const RankTable& ranks, int player, int s, int t,
                         const SubBox& box) {
  const int n = form.players();
  const int pi = player - 1;
  const auto strides = strides_of(form);

  // Odometer over opponents' strategies inside the box.
  std::vector<size_t> idx(n, 0);
  long long base = 0;
  for (int j = 0; j < n; ++j)
    if (j != pi) base += static_cast<long long>(box.strategies[j][0] - 1) * strides[j];

  const long long off_s = static_cast<long long>(s - 1) * strides[pi];
  const long long off_t = static_cast<long long>(t - 1) * strides[pi];
  const auto& rank = ranks[pi];

  bool all_equal = true;
  bool any_strict = false;
  for (;;) {
    int a = form.table[base + off_s];
    int b = form.table[base + off_t];
    if (a != b) {
      all_equal = false;
      if (rank[a] < rank[b])
        any_strict = true;
      else
        return Domination::none;
    }
    // advance odometer
    int j = n - 1;
    for (; j >= 0; --j) {
      if (j == pi) continue;
      base -= static_cast<long long>(box.strategies[j][idx[j]] - 1) * strides[j];
      if (++idx[j] < box.strategies[j].size()) {
        base += static_cast<long long>(box.strategies[j][idx[j]] - 1) * strides[j];
        break;
      }
      idx[j] = 0;
      base += static_cast<long long>(box.strategies[j][0] - 1) * strides[j];
    }
    if (j < 0) break;
  }
  if (all_equal) return Domination::equivalent;
  return any_strict ? Domination::strict_somewhere : Domination::none;
}

bool is_nash_equilibrium(const GameForm& form, const RankTable& ranks, const StrategyProfile& x) {
  const auto strides = strides_of(form);
  long long base = form.rank_of(x);
  int current = form.table[base];
  for (int i = 0; i < form.players(); ++i) {
    long long rest = base - static_cast<long long>(x.coords[i] - 1) * strides[i];
    for (int s = 1; s <= form.sizes[i]; ++s) {
      if (s == x.coords[i]) continue;
      int a = form.table[rest + static_cast<long long>(s - 1) * strides[i]];
      if (ranks[i][a] < ranks[i][current]) return false;
    }
  }
  return true;
}

bool has_nash_equilibrium(const GameForm& form, const RankTable& ranks) {
  const long long total = form.profile_count();
  for (long long r = 0; r < total; ++r) {
    StrategyProfile x = form.profile_at(r);
    if (is_nash_equilibrium(form, ranks, x)) return true;
  }
  return false;
}

}  // namespace detail

Domination dominates_mod(const Game& game, int player, int s, int t, const SubBox& box) {
  if (player < 1 || player > game.form.players()) throw std::out_of_range("bad player index");
  const int k = game.form.sizes[player - 1];
  if (s < 1 || s > k || t < 1 || t > k) throw std::out_of_range("bad strategy index");
  if (!box.valid_for(game.form)) throw std::out_of_range("box is not valid for this form");
  return detail::dominates_mod(game.form, game.prefs.rank_table(), player, s, t, box);
}

bool is_nash_equilibrium(const Game& game, const StrategyProfile& x) {
  return detail::is_nash_equilibrium(game.form, game.prefs.rank_table(), x);
}

std::vector<StrategyProfile> nash_equilibria(const Game& game) {
  std::vector<StrategyProfile> out;
  const long long total = game.form.profile_count();
  for (long long r = 0; r < total; ++r) {
    StrategyProfile x = game.form.profile_at(r);
    if (is_nash_equilibrium(game, x)) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace gameforms
