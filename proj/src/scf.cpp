#include "gameforms/scf.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "gameforms/domination.hpp"
#include "gameforms/errors.hpp"
#include "gameforms/properties.hpp"
#include "parse_util.hpp"

namespace gameforms {

namespace {

long long pow_ll(long long base, int exp) {
  long long out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// Permutation indices of one report profile from its rank, player 1 most
// significant.
std::vector<int> profile_of_rank(long long rank, int voters, long long factorial) {
  std::vector<int> out(voters);
  for (int i = voters - 1; i >= 0; --i) {
    out[i] = static_cast<int>(rank % factorial);
    rank /= factorial;
  }
  return out;
}

}  // namespace

void Scf::validate() const {
  if (voters < 1) throw std::invalid_argument("an SCF needs at least one voter");
  if (candidates.empty()) throw std::invalid_argument("an SCF needs at least one candidate");
  const auto& perms = detail::permutations_of(candidate_count());
  if (static_cast<long long>(choice.size()) !=
      pow_ll(static_cast<long long>(perms.size()), voters))
    throw std::invalid_argument("choice table must cover all report profiles");
  for (int c : choice)
    if (c < 0 || c >= candidate_count()) throw std::invalid_argument("candidate id out of range");
}

Scf parse_scf(const std::string& text) {
  auto lines = detail::significant_lines(text);
  if (lines.empty()) throw ParseError(1, "expected 'scf n=<n> p=<p>' header");
  Scf scf;
  int p = 0;
  {
    auto toks = detail::tokens_of(lines[0].text);
    std::string nval, pval;
    if (toks.size() != 3 || toks[0] != "scf" || !detail::strip_prefix(toks[1], "n=", &nval) ||
        !detail::strip_prefix(toks[2], "p=", &pval))
      throw ParseError(lines[0].number, "expected 'scf n=<n> p=<p>'");
    scf.voters = detail::parse_int(nval, lines[0].number);
    p = detail::parse_int(pval, lines[0].number);
    if (scf.voters < 1 || p < 1) throw ParseError(lines[0].number, "n and p must be positive");
  }
  const auto& perms = detail::permutations_of(p);
  const long long expected = pow_ll(static_cast<long long>(perms.size()), scf.voters);
  if (static_cast<long long>(lines.size()) != expected + 1)
    throw ParseError(lines.back().number,
                     "expected " + std::to_string(expected) + " profile lines");

  std::map<std::string, int> id_of;
  auto parse_order = [&](const std::string& order_text, int line) {
    std::vector<int> order;
    std::string item;
    std::istringstream in(order_text);
    while (std::getline(in, item, '>')) {
      size_t b = item.find_first_not_of(" \t");
      size_t e = item.find_last_not_of(" \t");
      if (b == std::string::npos) throw ParseError(line, "empty candidate name");
      std::string sym = item.substr(b, e - b + 1);
      if (scf.candidates.size() < static_cast<size_t>(p) && !id_of.count(sym)) {
        id_of[sym] = static_cast<int>(scf.candidates.size());
        scf.candidates.push_back(sym);
      }
      auto it = id_of.find(sym);
      if (it == id_of.end()) throw ParseError(line, "unknown candidate '" + sym + "'");
      order.push_back(it->second);
    }
    if (static_cast<int>(order.size()) != p)
      throw ParseError(line, "order must list every candidate once");
    return order;
  };

  for (long long rank = 0; rank < expected; ++rank) {
    const auto& ln = lines[rank + 1];
    auto arrow = ln.text.rfind("->");
    if (arrow == std::string::npos) throw ParseError(ln.number, "expected '-> <candidate>'");
    std::string left = ln.text.substr(0, arrow);
    auto winner_toks = detail::tokens_of(ln.text.substr(arrow + 2));
    if (winner_toks.size() != 1) throw ParseError(ln.number, "expected one elected candidate");

    std::vector<std::string> order_texts;
    std::string part;
    std::istringstream in(left);
    while (std::getline(in, part, '|')) order_texts.push_back(part);
    if (static_cast<int>(order_texts.size()) != scf.voters)
      throw ParseError(ln.number, "expected " + std::to_string(scf.voters) + " orders");

    auto indices = profile_of_rank(rank, scf.voters, static_cast<long long>(perms.size()));
    for (int i = 0; i < scf.voters; ++i) {
      auto order = parse_order(order_texts[i], ln.number);
      if (order != perms[indices[i]])
        throw ParseError(ln.number, "profiles must follow the canonical enumeration");
    }
    auto it = id_of.find(winner_toks[0]);
    if (it == id_of.end())
      throw ParseError(ln.number, "unknown candidate '" + winner_toks[0] + "'");
    scf.choice.push_back(it->second);
  }
  scf.validate();
  return scf;
}

std::string serialize_scf(const Scf& scf) {
  const auto& perms = detail::permutations_of(scf.candidate_count());
  std::ostringstream out;
  out << "scf n=" << scf.voters << " p=" << scf.candidate_count() << "\n";
  const long long total = scf.profile_count();
  for (long long rank = 0; rank < total; ++rank) {
    auto indices = profile_of_rank(rank, scf.voters, static_cast<long long>(perms.size()));
    for (int i = 0; i < scf.voters; ++i) {
      if (i) out << '|';
      const auto& order = perms[indices[i]];
      for (size_t k = 0; k < order.size(); ++k) out << (k ? ">" : "") << scf.candidates[order[k]];
    }
    out << " -> " << scf.candidates[scf.choice[rank]] << '\n';
  }
  return out.str();
}

namespace {

Scf leaders_common(bool follow) {
  Scf scf;
  scf.voters = 3;
  scf.candidates = {"a1", "a2", "a3"};
  const auto& perms = detail::permutations_of(3);
  for (const auto& x1 : perms)
    for (const auto& x2 : perms)
      for (const auto& x3 : perms) {
        int top1 = x1[0], top2 = x2[0];
        int bottom1 = x1[2], bottom2 = x2[2];
        int elected;
        if (top1 == top2) {
          elected = top1;
        } else if (bottom1 != bottom2) {
          elected = 3 - bottom1 - bottom2;  // the candidate that is nobody's bottom
        } else {
          // conflict: distinct tops, equal bottoms; consult voter 3
          int pos1 = static_cast<int>(std::find(x3.begin(), x3.end(), top1) - x3.begin());
          int pos2 = static_cast<int>(std::find(x3.begin(), x3.end(), top2) - x3.begin());
          int liked = pos1 < pos2 ? top1 : top2;
          int other = liked == top1 ? top2 : top1;
          elected = follow ? liked : other;
        }
        scf.choice.push_back(elected);
      }
  scf.validate();
  return scf;
}

}  // namespace

Scf leaders_scf() { return leaders_common(false); }
Scf leaders_follow_scf() { return leaders_common(true); }

Scf dictator_scf(int voters, int candidates, int dictator) {
  if (dictator < 1 || dictator > voters) throw std::invalid_argument("bad dictator index");
  Scf scf;
  scf.voters = voters;
  for (int a = 1; a <= candidates; ++a) scf.candidates.push_back("a" + std::to_string(a));
  const auto& perms = detail::permutations_of(candidates);
  const long long total = pow_ll(static_cast<long long>(perms.size()), voters);
  for (long long rank = 0; rank < total; ++rank) {
    auto indices = profile_of_rank(rank, voters, static_cast<long long>(perms.size()));
    scf.choice.push_back(perms[indices[dictator - 1]][0]);
  }
  scf.validate();
  return scf;
}

namespace {

struct ScfFormView {
  GameForm form;
  std::vector<int> used_ids;        // form outcome id -> candidate id
  std::vector<int> candidate_slot;  // candidate id -> form outcome id or -1
};

ScfFormView form_view_of(const Scf& scf) {
  ScfFormView view;
  const int p = scf.candidate_count();
  const auto& perms = detail::permutations_of(p);
  std::vector<char> used(p, 0);
  for (int c : scf.choice) used[c] = 1;
  view.candidate_slot.assign(p, -1);
  for (int a = 0; a < p; ++a)
    if (used[a]) {
      view.candidate_slot[a] = static_cast<int>(view.used_ids.size());
      view.used_ids.push_back(a);
      view.form.outcomes.push_back(scf.candidates[a]);
    }
  view.form.sizes.assign(scf.voters, static_cast<int>(perms.size()));
  view.form.table.reserve(scf.choice.size());
  for (int c : scf.choice) view.form.table.push_back(view.candidate_slot[c]);
  view.form.validate();
  return view;
}

// Rank rows over the used outcomes for one voter's reported order.
void ranks_for_report(const ScfFormView& view, const std::vector<int>& order,
                      std::vector<int>& row) {
  row.assign(view.used_ids.size(), 0);
  int pos = 0;
  for (int candidate : order) {
    int slot = view.candidate_slot[candidate];
    if (slot >= 0) row[slot] = pos++;
  }
}

}  // namespace

GameForm scf_game_form(const Scf& scf) {
  scf.validate();
  return form_view_of(scf).form;
}

Game game_of_profile(const Scf& scf, const std::vector<int>& profile) {
  scf.validate();
  if (static_cast<int>(profile.size()) != scf.voters)
    throw std::invalid_argument("profile has wrong voter count");
  auto view = form_view_of(scf);
  const auto& perms = detail::permutations_of(scf.candidate_count());
  std::vector<std::vector<int>> orders;
  for (int index : profile) {
    if (index < 0 || index >= static_cast<int>(perms.size()))
      throw std::out_of_range("permutation index out of range");
    std::vector<int> order;
    for (int candidate : perms[index])
      if (view.candidate_slot[candidate] >= 0) order.push_back(view.candidate_slot[candidate]);
    orders.push_back(std::move(order));
  }
  return Game{std::move(view.form), PreferenceProfile(std::move(orders))};
}

AxiomReport check_axioms(const Scf& scf) {
  scf.validate();
  AxiomReport report;
  const int p = scf.candidate_count();
  const auto& perms = detail::permutations_of(p);
  const long long factorial = static_cast<long long>(perms.size());
  const long long total = scf.profile_count();
  auto view = form_view_of(scf);

  // sincere: every report profile is an NE of its own game
  report.sincere = true;
  detail::RankTable ranks(scf.voters);
  StrategyProfile x;
  x.coords.assign(scf.voters, 1);
  for (long long rank = 0; rank < total && report.sincere; ++rank) {
    auto indices = profile_of_rank(rank, scf.voters, factorial);
    for (int i = 0; i < scf.voters; ++i) {
      ranks_for_report(view, perms[indices[i]], ranks[i]);
      x.coords[i] = indices[i] + 1;
    }
    if (!detail::is_nash_equilibrium(view.form, ranks, x)) report.sincere = false;
  }

  // dictatorial: some voter always gets their reported top
  report.dictatorial = false;
  for (int i = 0; i < scf.voters && !report.dictatorial; ++i) {
    bool rules = true;
    for (long long rank = 0; rank < total && rules; ++rank) {
      auto indices = profile_of_rank(rank, scf.voters, factorial);
      if (scf.choice[rank] != perms[indices[i]][0]) rules = false;
    }
    if (rules) report.dictatorial = true;
  }

  if (p == 2) {
    // monotone: growing a winner's supporting coalition keeps it elected.
    // With two candidates a report is identified by its top; checking single
    // flips toward the winner covers every coalition inclusion.
    bool monotone = true;
    for (long long rank = 0; rank < total && monotone; ++rank) {
      auto indices = profile_of_rank(rank, scf.voters, factorial);
      int winner = scf.choice[rank];
      for (int i = 0; i < scf.voters && monotone; ++i) {
        if (perms[indices[i]][0] == winner) continue;
        auto flipped = indices;
        flipped[i] = winner == 0 ? 0 : 1;  // permutation 0 is a1>a2, 1 is a2>a1
        long long flipped_rank = 0;
        for (int v = 0; v < scf.voters; ++v) flipped_rank = flipped_rank * factorial + flipped[v];
        if (scf.choice[flipped_rank] != winner) monotone = false;
      }
    }
    report.monotone = monotone;
  }
  return report;
}

DResult apply_D(const Scf& scf) {
  scf.validate();
  auto view = form_view_of(scf);
  const auto& perms = detail::permutations_of(scf.candidate_count());
  const long long factorial = static_cast<long long>(perms.size());
  const long long total = scf.profile_count();

  Scf image;
  image.voters = scf.voters;
  image.candidates = scf.candidates;
  image.choice.reserve(total);
  detail::RankTable ranks(scf.voters);
  for (long long rank = 0; rank < total; ++rank) {
    auto indices = profile_of_rank(rank, scf.voters, factorial);
    for (int i = 0; i < scf.voters; ++i) ranks_for_report(view, perms[indices[i]], ranks[i]);
    SubBox box = SubBox::full(view.form);
    if (!detail::eliminate_to_terminal(view.form, ranks, box, nullptr))
      return {false, std::nullopt, indices};
    image.choice.push_back(view.used_ids[view.form.outcome_id(box.only_profile())]);
  }
  return {true, std::move(image), std::nullopt};
}

bool is_stable(const Scf& scf) {
  auto result = apply_D(scf);
  return result.defined && result.image->choice == scf.choice;
}

DIteration iterate_D(const Scf& scf, int max_iter) {
  DIteration out;
  out.sequence.push_back(scf);
  for (int step = 0; step < max_iter; ++step) {
    auto next = apply_D(out.sequence.back());
    if (!next.defined) {
      out.end = DIteration::End::undefined;
      out.undefined_at = next.undefined_at;
      return out;
    }
    for (size_t k = 0; k < out.sequence.size(); ++k) {
      if (out.sequence[k].choice == next.image->choice) {
        out.end = DIteration::End::cycle;
        out.cycle_entry = static_cast<int>(k);
        out.period = static_cast<int>(out.sequence.size()) - out.cycle_entry;
        return out;
      }
    }
    out.sequence.push_back(std::move(*next.image));
  }
  out.end = DIteration::End::max_iter;
  return out;
}

}  // namespace gameforms
