#include "gameforms/text.hpp"

#include <map>
#include <sstream>

#include "gameforms/errors.hpp"
#include "parse_util.hpp"

namespace gameforms {

using detail::Line;
using detail::parse_int;
using detail::significant_lines;
using detail::strip_prefix;
using detail::tokens_of;

GameForm parse_game_form(const std::string& text) {
  auto lines = significant_lines(text);
  size_t at = 0;
  auto need = [&](const char* what) -> const Line& {
    if (at >= lines.size()) {
      int last = lines.empty() ? 1 : lines.back().number;
      throw ParseError(last, std::string("unexpected end of input, expected ") + what);
    }
    return lines[at];
  };

  if (need("'gameform'").text != "gameform")
    throw ParseError(lines[at].number, "expected 'gameform' header");
  ++at;

  GameForm form;
  {
    std::string rest;
    const Line& ln = need("'players:'");
    if (!strip_prefix(ln.text, "players:", &rest))
      throw ParseError(ln.number, "expected 'players: <n>'");
    auto toks = tokens_of(rest);
    if (toks.size() != 1) throw ParseError(ln.number, "expected exactly one player count");
    int n = parse_int(toks[0], ln.number);
    if (n < 1) throw ParseError(ln.number, "player count must be positive");
    form.sizes.resize(n);
    ++at;
  }
  {
    std::string rest;
    const Line& ln = need("'sizes:'");
    if (!strip_prefix(ln.text, "sizes:", &rest))
      throw ParseError(ln.number, "expected 'sizes: <k1> ... <kn>'");
    auto toks = tokens_of(rest);
    if (toks.size() != form.sizes.size())
      throw ParseError(ln.number, "size mismatch: expected " + std::to_string(form.sizes.size()) +
                                      " strategy counts, got " + std::to_string(toks.size()));
    for (size_t i = 0; i < toks.size(); ++i) {
      form.sizes[i] = parse_int(toks[i], ln.number);
      if (form.sizes[i] < 1) throw ParseError(ln.number, "strategy counts must be positive");
    }
    ++at;
  }
  std::map<std::string, int> id_of;
  {
    std::string rest;
    const Line& ln = need("'outcomes:'");
    if (!strip_prefix(ln.text, "outcomes:", &rest))
      throw ParseError(ln.number, "expected 'outcomes: <label> ...'");
    for (const auto& lbl : tokens_of(rest)) {
      if (!detail::valid_label(lbl))
        throw ParseError(ln.number, "bad outcome label '" + lbl + "'");
      if (!id_of.emplace(lbl, static_cast<int>(form.outcomes.size())).second)
        throw ParseError(ln.number, "duplicate outcome label '" + lbl + "'");
      form.outcomes.push_back(lbl);
    }
    if (form.outcomes.empty()) throw ParseError(ln.number, "at least one outcome is required");
    ++at;
  }

  const long long cells = form.profile_count();
  form.table.assign(cells, -1);
  auto lookup = [&](const std::string& lbl, int line) {
    auto it = id_of.find(lbl);
    if (it == id_of.end()) throw ParseError(line, "unknown outcome label '" + lbl + "'");
    return it->second;
  };

  if (form.players() == 2) {
    const Line& hdr = need("'grid:'");
    if (hdr.text != "grid:") throw ParseError(hdr.number, "expected 'grid:' for two players");
    ++at;
    for (int r = 0; r < form.sizes[0]; ++r) {
      const Line& ln = need("a grid row");
      if (ln.text == "end")
        throw ParseError(ln.number, "missing cell: grid has " + std::to_string(r) + " of " +
                                        std::to_string(form.sizes[0]) + " rows");
      auto toks = tokens_of(ln.text);
      if (static_cast<int>(toks.size()) != form.sizes[1])
        throw ParseError(ln.number, toks.size() < static_cast<size_t>(form.sizes[1])
                                        ? "missing cell: expected " + std::to_string(form.sizes[1]) +
                                              " labels in this row"
                                        : "too many cells in this row");
      for (int c = 0; c < form.sizes[1]; ++c)
        form.table[static_cast<long long>(r) * form.sizes[1] + c] = lookup(toks[c], ln.number);
      ++at;
    }
  } else {
    const Line& hdr = need("'map:'");
    if (hdr.text != "map:")
      throw ParseError(hdr.number, "expected 'map:' block for " +
                                       std::to_string(form.players()) + " players");
    ++at;
    for (long long r = 0; r < cells; ++r) {
      const Line& ln = need("a map row");
      if (ln.text == "end")
        throw ParseError(ln.number, "missing cell: map has " + std::to_string(r) + " of " +
                                        std::to_string(cells) + " profiles");
      auto toks = tokens_of(ln.text);
      if (toks.size() != static_cast<size_t>(form.players()) + 1)
        throw ParseError(ln.number, "expected " + std::to_string(form.players()) +
                                        " coordinates and one label");
      StrategyProfile x;
      for (int i = 0; i < form.players(); ++i) x.coords.push_back(parse_int(toks[i], ln.number));
      long long rank;
      try {
        rank = form.rank_of(x);
      } catch (const std::out_of_range& ex) {
        throw ParseError(ln.number, ex.what());
      }
      if (rank != r)
        throw ParseError(ln.number, "profiles must appear in lexicographic order");
      form.table[rank] = lookup(toks.back(), ln.number);
      ++at;
    }
  }
  {
    const Line& ln = need("'end'");
    if (ln.text != "end") throw ParseError(ln.number, "expected 'end'");
    ++at;
  }
  if (at != lines.size())
    throw ParseError(lines[at].number, "unexpected content after 'end'");

  // Surjectivity onto the declared outcome list.
  std::vector<char> seen(form.outcomes.size(), 0);
  for (int id : form.table) seen[id] = 1;
  for (size_t a = 0; a < seen.size(); ++a)
    if (!seen[a])
      throw ParseError(lines.back().number,
                       "declared outcome '" + form.outcomes[a] + "' never appears");
  form.validate();
  return form;
}

std::string serialize_game_form(const GameForm& form) {
  std::ostringstream out;
  out << "gameform\n";
  out << "players: " << form.players() << "\n";
  out << "sizes:";
  for (int k : form.sizes) out << ' ' << k;
  out << "\noutcomes:";
  for (const auto& lbl : form.outcomes) out << ' ' << lbl;
  out << '\n';
  if (form.players() == 2) {
    out << "grid:\n";
    for (int r = 0; r < form.sizes[0]; ++r) {
      for (int c = 0; c < form.sizes[1]; ++c) {
        if (c) out << ' ';
        out << form.outcomes[form.table[static_cast<long long>(r) * form.sizes[1] + c]];
      }
      out << '\n';
    }
  } else {
    out << "map:\n";
    const long long cells = form.profile_count();
    for (long long r = 0; r < cells; ++r) {
      StrategyProfile x = form.profile_at(r);
      for (int c : x.coords) out << c << ' ';
      out << form.outcomes[form.table[r]] << '\n';
    }
  }
  out << "end\n";
  return out.str();
}

PreferenceProfile parse_preferences(const std::string& text,
                                    const std::vector<std::string>& outcome_labels) {
  std::map<std::string, int> id_of;
  for (size_t a = 0; a < outcome_labels.size(); ++a)
    id_of[outcome_labels[a]] = static_cast<int>(a);

  auto lines = significant_lines(text);
  if (lines.empty() || lines.front().text != "prefs")
    throw ParseError(lines.empty() ? 1 : lines.front().number, "expected 'prefs' header");
  if (lines.back().text != "end") throw ParseError(lines.back().number, "expected 'end'");

  std::vector<std::vector<int>> orders;
  for (size_t at = 1; at + 1 < lines.size(); ++at) {
    const Line& ln = lines[at];
    std::string rest;
    std::string expected = "player " + std::to_string(orders.size() + 1) + ":";
    if (!strip_prefix(ln.text, expected, &rest))
      throw ParseError(ln.number, "expected '" + expected + " ...'");
    std::vector<int> order;
    std::vector<char> used(outcome_labels.size(), 0);
    // tokens alternate label, '>', label, ...
    auto toks = tokens_of(rest);
    for (size_t k = 0; k < toks.size(); ++k) {
      if (k % 2 == 1) {
        if (toks[k] != ">") throw ParseError(ln.number, "expected '>' between outcomes");
        continue;
      }
      auto it = id_of.find(toks[k]);
      if (it == id_of.end())
        throw ParseError(ln.number, "unknown outcome label '" + toks[k] + "'");
      if (used[it->second])
        throw ParseError(ln.number, "outcome '" + toks[k] + "' listed twice");
      used[it->second] = 1;
      order.push_back(it->second);
    }
    if (order.size() != outcome_labels.size())
      throw ParseError(ln.number, "order must list every outcome exactly once");
    orders.push_back(std::move(order));
  }
  if (orders.empty()) throw ParseError(lines.front().number, "no player orders given");
  return PreferenceProfile(std::move(orders));
}

std::string serialize_preferences(const PreferenceProfile& prefs,
                                  const std::vector<std::string>& outcome_labels) {
  std::ostringstream out;
  out << "prefs\n";
  for (int i = 0; i < prefs.players(); ++i) {
    out << "player " << (i + 1) << ":";
    const auto& ord = prefs.order(i);
    for (size_t k = 0; k < ord.size(); ++k) out << (k ? " > " : " ") << outcome_labels[ord[k]];
    out << '\n';
  }
  out << "end\n";
  return out.str();
}

std::string render_profile(const StrategyProfile& x) {
  std::ostringstream out;
  out << '(';
  for (size_t i = 0; i < x.coords.size(); ++i) out << (i ? "," : "") << x.coords[i];
  out << ')';
  return out.str();
}

std::string render_box(const SubBox& box) {
  std::ostringstream out;
  out << "box:";
  for (size_t i = 0; i < box.strategies.size(); ++i) {
    out << (i ? " x {" : " {");
    for (size_t k = 0; k < box.strategies[i].size(); ++k)
      out << (k ? "," : "") << box.strategies[i][k];
    out << '}';
  }
  return out.str();
}

}  // namespace gameforms
