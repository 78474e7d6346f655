#pragma once

#include <string>
#include <vector>

#include "gameforms/game.hpp"

namespace gameforms {

// Rooted tree with perfect information. Nodes are stored in preorder;
// node 0 is the root. Internal nodes carry a controlling player (1-based)
// and an ordered child list; leaves carry an outcome label.
struct Arborescence {
  struct Node {
    int player = 0;  // 0 for leaves
    std::vector<int> children;
    std::string label;  // leaves only
    bool is_leaf() const { return player == 0; }
  };
  std::vector<Node> nodes;
  int player_count = 0;
  // Node ids controlled by each player, preorder. Index is player-1.
  std::vector<std::vector<int>> nodes_of_player;
};

// Grammar: tree ::= label | "(" int tree+ ")".
Arborescence parse_tree(const std::string& text);
std::string serialize_tree(const Arborescence& tree);

// Leaf labels in order of first appearance (preorder); this is the outcome
// id order of the induced game form.
std::vector<std::string> tree_outcomes(const Arborescence& tree);

// For one player, a child choice (1-based) at every node the player
// controls, aligned with Arborescence::nodes_of_player.
struct PositionalStrategy {
  std::vector<int> choices;
  friend bool operator==(const PositionalStrategy&, const PositionalStrategy&) = default;
};

struct BackwardInductionResult {
  Outcome outcome;  // id refers to tree_outcomes order
  std::vector<PositionalStrategy> strategies;  // per player
};

// Folds leaves upward; each controller picks the child with its most
// preferred propagated outcome, first child on equal outcomes. `prefs` is
// over tree_outcomes(tree).
BackwardInductionResult backward_induction(const Arborescence& tree,
                                           const PreferenceProfile& prefs);

// Player i's strategies are all full assignments at i's nodes, including
// unreachable ones, enumerated mixed-radix with the last node fastest.
GameForm to_game_form(const Arborescence& tree, long long max_profiles = 1'000'000);

}  // namespace gameforms
