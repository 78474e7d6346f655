#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "gameforms/domination.hpp"
#include "gameforms/errors.hpp"
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

GameForm fixture(const std::string& name) { return parse_game_form(slurp(name)); }

GameForm cycle_form() {
  return parse_game_form(
      "gameform\nplayers: 2\nsizes: 2 2\noutcomes: a1 a2\ngrid:\na1 a2\na2 a1\nend\n");
}

// Every surjective table over `cells` cells with at most max_blocks outcomes,
// one representative per outcome relabeling (restricted growth strings).
void for_each_partition(int cells, int max_blocks,
                        const std::function<void(const std::vector<int>&, int)>& fn) {
  std::vector<int> table(cells, 0);
  auto rec = [&](auto&& self, int at, int used) -> void {
    if (at == cells) {
      fn(table, used);
      return;
    }
    for (int b = 0; b < std::min(used + 1, max_blocks); ++b) {
      table[at] = b;
      self(self, at + 1, std::max(used, b + 1));
    }
  };
  rec(rec, 0, 0);
}

GameForm form_of_table(std::vector<int> sizes, const std::vector<int>& table, int outcomes) {
  GameForm form;
  form.sizes = std::move(sizes);
  for (int a = 1; a <= outcomes; ++a) form.outcomes.push_back("a" + std::to_string(a));
  form.table = table;
  form.validate();
  return form;
}

// Independent sub-box sweep used to cross-check the two-player fast path.
bool oracle_every_subform_tight(const GameForm& form) {
  const int k1 = form.sizes[0], k2 = form.sizes[1];
  for (unsigned rows = 1; rows < (1u << k1); ++rows)
    for (unsigned cols = 1; cols < (1u << k2); ++cols) {
      std::vector<int> row_ids, col_ids;
      for (int r = 0; r < k1; ++r)
        if (rows >> r & 1) row_ids.push_back(r);
      for (int c = 0; c < k2; ++c)
        if (cols >> c & 1) col_ids.push_back(c);
      std::vector<int> raw;
      for (int r : row_ids)
        for (int c : col_ids) raw.push_back(form.table[static_cast<long long>(r) * k2 + c]);
      std::vector<int> remap(form.outcome_count(), -1);
      GameForm sub;
      sub.sizes = {static_cast<int>(row_ids.size()), static_cast<int>(col_ids.size())};
      for (int& id : raw) {
        if (remap[id] < 0) {
          remap[id] = static_cast<int>(sub.outcomes.size());
          sub.outcomes.push_back(form.outcomes[id]);
        }
        id = remap[id];
      }
      sub.table = raw;
      if (!is_tight(sub, TightMode::full).tight) return false;
    }
  return true;
}

bool is_valid_improvement_cycle(const Game& game, const ImprovementCycle& cycle) {
  if (cycle.profiles.size() < 2) return false;
  for (size_t k = 0; k < cycle.profiles.size(); ++k) {
    const auto& from = cycle.profiles[k];
    const auto& to = cycle.profiles[(k + 1) % cycle.profiles.size()];
    int mover = -1;
    for (int i = 0; i < game.form.players(); ++i)
      if (from.coords[i] != to.coords[i]) {
        if (mover >= 0) return false;  // more than one coordinate changed
        mover = i;
      }
    if (mover < 0) return false;
    if (!game.prefs.prefers(mover, game.form.outcome_id(to), game.form.outcome_id(from)))
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("effectivity function on the 2x2 example") {
  GameForm form = fixture("pos_2x2.gf");  // a1 a1 / a2 a3
  auto eff = effectivity_function(form);
  CHECK(eff.effective(0b01, 0b001));        // row 1 forces a1
  CHECK_FALSE(eff.effective(0b10, 0b110));  // every column contains a1
  const unsigned all = 0b111;
  for (unsigned block = 0; block <= all; ++block)
    CHECK(eff.effective(0, block) == (block == all));
  CHECK_FALSE(eff.effective(0b11, 0));
  CHECK(eff.effective(0b11, 0b010));
}

TEST_CASE("effectivity duality soundness on random forms") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    GameForm form = test_util::random_form(rng, 3, 3, 5);
    auto eff = effectivity_function(form);
    const unsigned full = (1u << form.players()) - 1;
    const unsigned all = (1u << form.outcome_count()) - 1;
    for (unsigned coalition = 0; coalition <= full; ++coalition)
      for (unsigned block = 0; block <= all; ++block) {
        bool both = eff.effective(coalition, block) &&
                    eff.effective(full ^ coalition, all ^ block);
        CHECK_FALSE(both);
      }
  }
}

TEST_CASE("tightness of the fixtures") {
  for (const char* name : {"pos_3x5.gf", "pos_2x2.gf", "pos_2x4.gf", "pos_2x2x2.gf"}) {
    GameForm form = fixture(name);
    CHECK(is_tight(form, TightMode::full).tight);
    CHECK(is_tight(form, TightMode::weak).tight);
  }
  auto bad = is_tight(cycle_form(), TightMode::full);
  CHECK_FALSE(bad.tight);
  // the counterexample pair really is a duality violation
  auto eff = effectivity_function(cycle_form());
  CHECK(eff.effective(bad.coalition, bad.block) ==
        eff.effective(0b11 ^ bad.coalition, 0b11 ^ bad.block));
  CHECK_FALSE(is_tight(fixture("three_person_ns_not_ds.gf"), TightMode::full).tight);
}

TEST_CASE("rectangularity") {
  CHECK(is_rectangular(fixture("pos_3x5.gf")).rectangular);
  auto bad = is_rectangular(cycle_form());
  CHECK_FALSE(bad.rectangular);
  CHECK(bad.violating_outcome == 0);
  GameForm constant =
      parse_game_form("gameform\nplayers: 2\nsizes: 2 2\noutcomes: a1\ngrid:\na1 a1\na1 a1\nend\n");
  CHECK(is_rectangular(constant).rectangular);
}

TEST_CASE("total tightness") {
  CHECK(is_totally_tight(fixture("pos_2x2.gf")).totally_tight);
  auto bad = is_totally_tight(cycle_form());
  CHECK_FALSE(bad.totally_tight);
  REQUIRE(bad.violating_box.has_value());
  CHECK(*bad.violating_box == SubBox{{{1, 2}, {1, 2}}});
  // the three-person fixture fails: its full box is not tight
  auto three = is_totally_tight(fixture("three_person_ns_not_ds.gf"));
  CHECK_FALSE(three.totally_tight);
  REQUIRE(three.violating_box.has_value());
  CHECK_FALSE(is_tight(fixture("three_person_ns_not_ds.gf"), TightMode::full).tight);

  // two-player fast path agrees with the sub-box sweep on every 2x2 and 2x3
  // form over up to four outcomes
  for (auto sizes : std::vector<std::vector<int>>{{2, 2}, {2, 3}}) {
    int cells = sizes[0] * sizes[1];
    for_each_partition(cells, 4, [&](const std::vector<int>& table, int outcomes) {
      GameForm form = form_of_table(sizes, table, outcomes);
      CHECK(is_totally_tight(form).totally_tight == oracle_every_subform_tight(form));
    });
  }
}

TEST_CASE("positional form predicate") {
  for (const char* name : {"pos_3x5.gf", "pos_2x2.gf", "pos_2x4.gf", "pos_2x2x2.gf"})
    CHECK(is_positional_form(fixture(name)));
  CHECK_FALSE(is_positional_form(cycle_form()));
  CHECK_FALSE(is_positional_form(fixture("three_person_ns_not_ds.gf")));
}

TEST_CASE("classify_solvability on the fixtures") {
  SUBCASE("three-person example is NS and AC but not DS") {
    auto report = classify_solvability(fixture("three_person_ns_not_ds.gf"));
    CHECK(report.ns);
    CHECK(report.ac);
    CHECK_FALSE(report.ds);
    REQUIRE(report.ds_witness.has_value());
    CHECK_FALSE(report.ds_witness->second.singleton());
    CHECK_FALSE(report.ns_witness.has_value());
  }
  SUBCASE("matching-pennies pattern is not NS; first witness is lexicographic") {
    auto report = classify_solvability(cycle_form());
    CHECK_FALSE(report.ns);
    CHECK_FALSE(report.ds);
    CHECK_FALSE(report.ac);
    REQUIRE(report.ns_witness.has_value());
    CHECK(report.ns_witness->order(0) == std::vector<int>{0, 1});
    CHECK(report.ns_witness->order(1) == std::vector<int>{1, 0});
    REQUIRE(report.ac_witness.has_value());
    Game game{cycle_form(), report.ac_witness->first};
    CHECK(is_valid_improvement_cycle(game, report.ac_witness->second));
  }
  SUBCASE("the 2x2 positional grid is NS, DS and AC") {
    auto report = classify_solvability(fixture("pos_2x2.gf"));
    CHECK(report.ns);
    CHECK(report.ds);
    CHECK(report.ac);
  }
}

TEST_CASE("improvement cycles") {
  Game pennies{cycle_form(), PreferenceProfile({{0, 1}, {1, 0}})};
  auto cycle = find_improvement_cycle(pennies);
  REQUIRE(cycle.has_value());
  CHECK(cycle->profiles.size() == 4);
  CHECK(is_valid_improvement_cycle(pennies, *cycle));

  Game solved{fixture("pos_2x2.gf"), PreferenceProfile({{1, 2, 0}, {1, 2, 0}})};
  CHECK_FALSE(find_improvement_cycle(solved).has_value());

  Game one{parse_game_form("gameform\nplayers: 2\nsizes: 1 1\noutcomes: a1\ngrid:\na1\nend\n"),
           PreferenceProfile({{0}, {0}})};
  CHECK_FALSE(find_improvement_cycle(one).has_value());
}

TEST_CASE("two-player implication chain on exhaustive 2x2 forms") {
  for_each_partition(4, 4, [&](const std::vector<int>& table, int outcomes) {
    GameForm form = form_of_table({2, 2}, table, outcomes);
    auto report = classify_solvability(form);
    bool tt = is_totally_tight(form).totally_tight;
    bool tight = is_tight(form, TightMode::full).tight;
    CHECK(tt == report.ac);
    if (tt) CHECK(report.ds);
    if (report.ds) CHECK(report.ns);
    CHECK(report.ns == tight);
  });
}

TEST_CASE("general-n implications audited on random three-player forms") {
  std::mt19937 rng(90210);
  for (int trial = 0; trial < 60; ++trial) {
    GameForm form = test_util::random_form(rng, 3, 2, 4, 3);
    auto report = classify_solvability(form);
    bool tight = is_tight(form, TightMode::full).tight;
    bool tt = is_totally_tight(form).totally_tight;
    if (report.ds) CHECK(tight);
    if (tt) CHECK(tight);
    if (report.ac) CHECK(report.ns);
    if (report.ds) CHECK(report.ns);
  }
}

TEST_CASE("property line rendering") {
  auto props = analyze_form(fixture("pos_2x2.gf"));
  CHECK(render_properties(props) ==
        "tight=1 weak_tight=1 rect=1 tt=1 positional=1 ns=1 ds=1 ac=1");
  auto bad = analyze_form(fixture("three_person_ns_not_ds.gf"));
  CHECK(render_properties(bad) ==
        "tight=0 weak_tight=0 rect=0 tt=0 positional=0 ns=1 ds=0 ac=1");
}

TEST_CASE("budget guards") {
  GameForm big;
  big.sizes = {2, 2};
  for (int a = 1; a <= 9; ++a) big.outcomes.push_back("a" + std::to_string(a));
  big.table = {0, 1, 2, 3};
  CHECK_THROWS_AS(effectivity_function(big), BudgetExceeded);  // nine outcomes
  PropertyLimits tiny;
  tiny.max_pref_profiles = 10;
  CHECK_THROWS_AS(classify_solvability(fixture("pos_3x5.gf"), tiny), BudgetExceeded);
}
