#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "gameforms/domination.hpp"
#include "gameforms/errors.hpp"
#include "gameforms/positional.hpp"
#include "gameforms/properties.hpp"
#include "gameforms/text.hpp"
#include "test_util.hpp"

using namespace gameforms;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(TEST_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

PreferenceProfile prefs_from(const Arborescence& tree, std::vector<std::vector<int>> orders) {
  (void)tree;
  return PreferenceProfile(std::move(orders));
}

// Random arborescence over `players` players. With distinct_labels every
// leaf gets its own outcome; otherwise labels repeat across leaves.
std::string random_tree_text(std::mt19937& rng, int players, int max_depth,
                             bool distinct_labels = false) {
  std::ostringstream out;
  int leaves = 0;
  auto rec = [&](auto&& self, int depth) -> void {
    bool leaf = depth >= max_depth || (leaves > 0 && rng() % 3 == 0);
    if (leaf) {
      out << "a" << (distinct_labels ? ++leaves : 1 + static_cast<int>(rng() % 4));
      if (!distinct_labels) ++leaves;
      return;
    }
    out << '(' << 1 + static_cast<int>(rng() % players);
    int kids = 2 + static_cast<int>(rng() % 2);
    for (int k = 0; k < kids; ++k) {
      out << ' ';
      self(self, depth + 1);
    }
    out << ')';
  };
  rec(rec, 0);
  return out.str();
}

}  // namespace

TEST_CASE("tree parsing and serialization") {
  Arborescence tree = parse_tree("(1 a1 (2 a2 a3))");
  CHECK(tree.player_count == 2);
  CHECK(tree.nodes.size() == 5);
  CHECK(tree.nodes_of_player[0] == std::vector<int>{0});
  CHECK(tree.nodes_of_player[1] == std::vector<int>{2});
  CHECK(serialize_tree(tree) == "(1 a1 (2 a2 a3))");
  CHECK(tree_outcomes(tree) == std::vector<std::string>{"a1", "a2", "a3"});

  CHECK(parse_tree("a1").player_count == 0);
  CHECK_THROWS_AS(parse_tree("(1 a1"), ParseError);
  CHECK_THROWS_AS(parse_tree("(1)"), ParseError);
  CHECK_THROWS_AS(parse_tree("(0 a1 a2)"), ParseError);
  CHECK_THROWS_AS(parse_tree("(1 a1 a2) junk"), ParseError);
}

TEST_CASE("backward induction hand folds") {
  Arborescence tree = parse_tree("(1 a1 (2 a2 a3))");
  // u1: a2 > a1 > a3, u2: a3 > a2 > a1 -> player 2 would pick a3, player 1 avoids it
  auto result = backward_induction(tree, prefs_from(tree, {{1, 0, 2}, {2, 1, 0}}));
  CHECK(result.outcome.label == "a1");
  CHECK(result.strategies[0].choices == std::vector<int>{1});
  CHECK(result.strategies[1].choices == std::vector<int>{2});

  // both prefer a3 most
  auto other = backward_induction(tree, prefs_from(tree, {{2, 1, 0}, {2, 1, 0}}));
  CHECK(other.outcome.label == "a3");

  Arborescence leaf = parse_tree("a1");
  auto trivial = backward_induction(leaf, PreferenceProfile(std::vector<std::vector<int>>{{0}}));
  CHECK(trivial.outcome.label == "a1");
  CHECK(trivial.strategies.empty());

  CHECK_THROWS_AS(backward_induction(tree, PreferenceProfile({{1, 0}, {0, 1}})),
                  std::invalid_argument);
}

TEST_CASE("induced game forms reproduce the fixture grids") {
  CHECK(serialize_game_form(to_game_form(parse_tree(slurp("pos_2x2.tree")))) ==
        slurp("pos_2x2.gf"));
  CHECK(serialize_game_form(to_game_form(parse_tree(slurp("pos_2x4.tree")))) ==
        slurp("pos_2x4.gf"));
  CHECK(serialize_game_form(to_game_form(parse_tree(slurp("pos_2x2x2.tree")))) ==
        slurp("pos_2x2x2.gf"));
}

TEST_CASE("strategy spaces include unreachable choices") {
  // player 1 controls the root and a node under its own first move
  Arborescence tree = parse_tree("(1 (1 a1 a2) a3)");
  GameForm form = to_game_form(tree);
  CHECK(form.sizes == std::vector<int>{4});
  std::multiset<std::string> outcomes;
  for (int id : form.table) outcomes.insert(form.outcomes[id]);
  CHECK(outcomes == std::multiset<std::string>{"a1", "a2", "a3", "a3"});

  CHECK_THROWS_AS(to_game_form(parse_tree("(1 (1 a1 a2) a3)"), 3), BudgetExceeded);
}

TEST_CASE("backward induction agrees with the domination equilibrium") {
  std::mt19937 rng(808);
  auto check_tree = [&](const Arborescence& tree, int prefs_players) {
    auto labels = tree_outcomes(tree);
    GameForm form = to_game_form(tree);
    for (int trial = 0; trial < 60; ++trial) {
      auto prefs = test_util::random_prefs(rng, prefs_players, static_cast<int>(labels.size()));
      auto bi = backward_induction(tree, prefs);
      Game game{form, prefs};
      auto de = domination_equilibrium(game);
      REQUIRE(de.has_value());
      CHECK(de->outcome.label == labels[bi.outcome.id]);
    }
  };
  check_tree(parse_tree(slurp("pos_2x2.tree")), 2);
  check_tree(parse_tree(slurp("pos_2x4.tree")), 2);
  check_tree(parse_tree(slurp("pos_2x2x2.tree")), 3);
  for (int t = 0; t < 25; ++t) {
    Arborescence tree = parse_tree(random_tree_text(rng, 3, 3));
    if (tree.player_count == 0) continue;
    check_tree(tree, std::max(tree.player_count, 2));
  }
}

TEST_CASE("induced forms are tight; with distinct leaf labels also rectangular") {
  for (const char* name : {"pos_2x2.tree", "pos_2x4.tree", "pos_2x2x2.tree"}) {
    GameForm form = to_game_form(parse_tree(slurp(name)));
    CHECK(is_positional_form(form));
  }
  std::mt19937 rng(191);
  int checked = 0;
  while (checked < 30) {
    Arborescence tree = parse_tree(random_tree_text(rng, 3, 2, /*distinct_labels=*/true));
    if (tree_outcomes(tree).size() > 8) continue;  // effectivity bound
    GameForm form = to_game_form(tree);
    CHECK(is_positional_form(form));
    ++checked;
  }
  // Repeated leaf labels keep tightness but can merge outcome preimages into
  // sets that are no longer boxes, so rectangularity is not asserted there.
  for (int t = 0; t < 30; ++t) {
    Arborescence tree = parse_tree(random_tree_text(rng, 3, 3));
    GameForm form = to_game_form(tree);
    CHECK(is_tight(form, TightMode::full).tight);
  }
  GameForm merged = to_game_form(parse_tree("(1 (2 a1 a2) (2 a2 a1))"));
  CHECK(is_tight(merged, TightMode::full).tight);
  CHECK_FALSE(is_rectangular(merged).rectangular);
}

TEST_CASE("single-node strategy pairs differ in one outcome pair at bottom folds") {
  // For a node whose children are all leaves, two strategies of its mover
  // that differ only there produce rows equal everywhere except for one
  // fixed pair of outcomes.
  for (const char* name : {"pos_2x2.tree", "pos_2x4.tree", "pos_2x2x2.tree"}) {
    Arborescence tree = parse_tree(slurp(name));
    GameForm form = to_game_form(tree);
    for (size_t v = 0; v < tree.nodes.size(); ++v) {
      const auto& node = tree.nodes[v];
      if (node.is_leaf()) continue;
      bool bottom = true;
      for (int child : node.children) bottom &= tree.nodes[child].is_leaf();
      if (!bottom) continue;
      const int mover = node.player;
      // locate the slot of v within the mover's node list
      const auto& owned = tree.nodes_of_player[mover - 1];
      size_t slot = std::find(owned.begin(), owned.end(), static_cast<int>(v)) - owned.begin();
      // strategy ranks are mixed-radix over owned nodes, last fastest
      long long radix = 1;
      for (size_t k = slot + 1; k < owned.size(); ++k)
        radix *= static_cast<long long>(tree.nodes[owned[k]].children.size());
      const int arity = static_cast<int>(node.children.size());
      for (int s = 1; s <= form.sizes[mover - 1]; ++s)
        for (int d = 1; d < arity; ++d) {
          long long digit = (s - 1) / radix % arity;
          if (digit + d >= arity) continue;
          int t = static_cast<int>(s + d * radix);
          std::set<std::pair<int, int>> diffs;
          const long long cells = form.profile_count();
          for (long long r = 0; r < cells; ++r) {
            StrategyProfile x = form.profile_at(r);
            if (x.coords[mover - 1] != s) continue;
            StrategyProfile y = x;
            y.coords[mover - 1] = t;
            int a = form.outcome_id(x), b = form.outcome_id(y);
            if (a != b) diffs.insert({a, b});
          }
          CHECK(diffs.size() <= 1);
          if (!diffs.empty()) {
            auto [a, b] = *diffs.begin();
            int child_s = node.children[digit];
            int child_t = node.children[digit + d];
            CHECK(form.outcomes[a] == tree.nodes[child_s].label);
            CHECK(form.outcomes[b] == tree.nodes[child_t].label);
          }
        }
    }
  }
}
