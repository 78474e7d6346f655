#include "gameforms/positional.hpp"

#include <map>
#include <sstream>

#include "gameforms/errors.hpp"
#include "parse_util.hpp"

namespace gameforms {

namespace {

struct Token {
  std::string text;
  int line;
};

std::vector<Token> lex_tree(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  std::string cur;
  int cur_line = 1;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back({cur, cur_line});
      cur.clear();
    }
  };
  for (char c : text) {
    if (c == '\n') ++line;
    if (c == '(' || c == ')') {
      flush();
      out.push_back({std::string(1, c), line});
    } else if (isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      if (cur.empty()) cur_line = line;
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

int parse_node(const std::vector<Token>& toks, size_t& at, Arborescence& tree) {
  if (at >= toks.size())
    throw ParseError(toks.empty() ? 1 : toks.back().line, "unexpected end of tree");
  const Token& tok = toks[at];
  int id = static_cast<int>(tree.nodes.size());
  if (tok.text == "(") {
    ++at;
    if (at >= toks.size()) throw ParseError(tok.line, "expected a player index after '('");
    int player = detail::parse_int(toks[at].text, toks[at].line);
    if (player < 1) throw ParseError(toks[at].line, "player indices are 1-based");
    ++at;
    tree.nodes.push_back({player, {}, ""});
    while (at < toks.size() && toks[at].text != ")") {
      int child = parse_node(toks, at, tree);  // may reallocate tree.nodes
      tree.nodes[id].children.push_back(child);
    }
    if (at >= toks.size()) throw ParseError(tok.line, "missing ')'");
    if (tree.nodes[id].children.empty())
      throw ParseError(tok.line, "internal nodes need at least one child");
    ++at;  // ')'
  } else if (tok.text == ")") {
    throw ParseError(tok.line, "unexpected ')'");
  } else {
    if (!detail::valid_label(tok.text))
      throw ParseError(tok.line, "bad outcome label '" + tok.text + "'");
    tree.nodes.push_back({0, {}, tok.text});
    ++at;
  }
  return id;
}

}  // namespace

Arborescence parse_tree(const std::string& text) {
  auto toks = lex_tree(text);
  if (toks.empty()) throw ParseError(1, "empty tree");
  Arborescence tree;
  size_t at = 0;
  parse_node(toks, at, tree);
  if (at != toks.size()) throw ParseError(toks[at].line, "unexpected content after the tree");
  for (const auto& node : tree.nodes)
    if (!node.is_leaf()) tree.player_count = std::max(tree.player_count, node.player);
  tree.nodes_of_player.assign(tree.player_count, {});
  for (size_t id = 0; id < tree.nodes.size(); ++id)
    if (!tree.nodes[id].is_leaf())
      tree.nodes_of_player[tree.nodes[id].player - 1].push_back(static_cast<int>(id));
  return tree;
}

namespace {

void write_node(const Arborescence& tree, int id, std::ostringstream& out) {
  const auto& node = tree.nodes[id];
  if (node.is_leaf()) {
    out << node.label;
    return;
  }
  out << '(' << node.player;
  for (int child : node.children) {
    out << ' ';
    write_node(tree, child, out);
  }
  out << ')';
}

}  // namespace

std::string serialize_tree(const Arborescence& tree) {
  std::ostringstream out;
  write_node(tree, 0, out);
  return out.str();
}

std::vector<std::string> tree_outcomes(const Arborescence& tree) {
  std::vector<std::string> out;
  std::map<std::string, int> seen;
  for (const auto& node : tree.nodes)
    if (node.is_leaf() && seen.emplace(node.label, 1).second) out.push_back(node.label);
  return out;
}

BackwardInductionResult backward_induction(const Arborescence& tree,
                                           const PreferenceProfile& prefs) {
  auto labels = tree_outcomes(tree);
  std::map<std::string, int> id_of;
  for (size_t a = 0; a < labels.size(); ++a) id_of[labels[a]] = static_cast<int>(a);
  if (prefs.players() < tree.player_count)
    throw std::invalid_argument("preference profile misses a player");
  if (prefs.outcome_count() != static_cast<int>(labels.size()))
    throw std::invalid_argument("preference profile ranges over a different outcome set");

  BackwardInductionResult result;
  result.strategies.resize(tree.player_count);
  for (int i = 0; i < tree.player_count; ++i)
    result.strategies[i].choices.assign(tree.nodes_of_player[i].size(), 0);
  std::vector<std::vector<int>> slot(tree.nodes.size());  // node id -> slot in its player's list
  std::vector<int> slot_of(tree.nodes.size(), -1);
  for (int i = 0; i < tree.player_count; ++i)
    for (size_t k = 0; k < tree.nodes_of_player[i].size(); ++k)
      slot_of[tree.nodes_of_player[i][k]] = static_cast<int>(k);

  // Post-order fold; the controller keeps the child with its best outcome,
  // first child on ties (equal outcomes only, since orders are strict).
  auto fold = [&](auto&& self, int id) -> int {
    const auto& node = tree.nodes[id];
    if (node.is_leaf()) return id_of.at(node.label);
    int best = -1, pick = 0;
    for (size_t k = 0; k < node.children.size(); ++k) {
      int value = self(self, node.children[k]);
      if (best < 0 || prefs.prefers(node.player - 1, value, best)) {
        best = value;
        pick = static_cast<int>(k);
      }
    }
    result.strategies[node.player - 1].choices[slot_of[id]] = pick + 1;
    return best;
  };
  int root_outcome = fold(fold, 0);
  result.outcome = Outcome{root_outcome, labels[root_outcome]};
  return result;
}

GameForm to_game_form(const Arborescence& tree, long long max_profiles) {
  GameForm form;
  form.outcomes = tree_outcomes(tree);
  std::map<std::string, int> id_of;
  for (size_t a = 0; a < form.outcomes.size(); ++a) id_of[form.outcomes[a]] = static_cast<int>(a);

  // Strategy count per player: product of child counts over the player's
  // nodes, unreachable nodes included.
  long long total = 1;
  for (int i = 0; i < tree.player_count; ++i) {
    long long count = 1;
    for (int id : tree.nodes_of_player[i]) {
      count *= static_cast<long long>(tree.nodes[id].children.size());
      if (count > max_profiles) throw BudgetExceeded("strategy space exceeds the profile bound");
    }
    form.sizes.push_back(static_cast<int>(count));
    total *= count;
    if (total > max_profiles) throw BudgetExceeded("strategy space exceeds the profile bound");
  }

  std::vector<int> slot_of(tree.nodes.size(), -1);
  for (int i = 0; i < tree.player_count; ++i)
    for (size_t k = 0; k < tree.nodes_of_player[i].size(); ++k)
      slot_of[tree.nodes_of_player[i][k]] = static_cast<int>(k);

  // Decode strategy index -> child choice per node (mixed radix, last node
  // fastest), then follow the unique play from the root.
  std::vector<std::vector<int>> choices(tree.player_count);
  form.table.reserve(total);
  StrategyProfile x;
  x.coords.assign(tree.player_count, 1);
  for (long long rank = 0; rank < total; ++rank) {
    long long rest = rank;
    for (int i = tree.player_count - 1; i >= 0; --i) {
      long long s = rest % form.sizes[i];
      rest /= form.sizes[i];
      const auto& nodes = tree.nodes_of_player[i];
      choices[i].assign(nodes.size(), 0);
      for (int k = static_cast<int>(nodes.size()) - 1; k >= 0; --k) {
        long long arity = tree.nodes[nodes[k]].children.size();
        choices[i][k] = static_cast<int>(s % arity);
        s /= arity;
      }
    }
    int at = 0;
    while (!tree.nodes[at].is_leaf()) {
      const auto& node = tree.nodes[at];
      at = node.children[choices[node.player - 1][slot_of[at]]];
    }
    form.table.push_back(id_of.at(tree.nodes[at].label));
  }
  form.validate();
  return form;
}

}  // namespace gameforms
