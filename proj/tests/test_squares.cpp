#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "gameforms/errors.hpp"
#include "gameforms/squares.hpp"
#include "gameforms/text.hpp"
#include "test_util.hpp"

using namespace gameforms;

namespace {

std::vector<int> line_of(int sign) {
  if (sign > 0) return {1, 0};
  if (sign < 0) return {0, 1};
  return {0, 0};
}

Configuration config_2x2(int v1, int v2, int h1, int h2) {
  Configuration config;
  config.rows = config.cols = 2;
  config.col_ranks = {line_of(v1), line_of(v2)};
  config.row_ranks = {line_of(h1), line_of(h2)};
  return config;
}

// strict improvement cycle: each player prefers a different cell in each line
Configuration cycle_config() { return config_2x2(-1, +1, +1, -1); }
// battle of sexes: two strict NEs on the diagonal, no domination
Configuration bos_config() { return config_2x2(-1, +1, -1, +1); }

Configuration zero_sum_config(const std::vector<std::vector<int>>& value) {
  Configuration config;
  config.rows = static_cast<int>(value.size());
  config.cols = static_cast<int>(value[0].size());
  for (int c = 0; c < config.cols; ++c) {
    std::vector<int> line(config.rows);
    for (int r = 0; r < config.rows; ++r) line[r] = value[r][c];
    config.col_ranks.push_back(std::move(line));
  }
  for (int r = 0; r < config.rows; ++r) {
    std::vector<int> line(config.cols);
    for (int c = 0; c < config.cols; ++c) line[c] = -value[r][c];
    config.row_ranks.push_back(std::move(line));
  }
  return config;
}

Dnf dnf(const std::string& text) { return parse_dnf(text); }

}  // namespace

TEST_CASE("the catalog has fifteen classes with the known solution counts") {
  const auto& catalog = square_catalog();
  REQUIRE(catalog.size() == 15);
  int with_ne = 0, with_de = 0, with_tt = 0, orbit_total = 0;
  for (const auto& cls : catalog) {
    with_ne += cls.has_ne;
    with_de += cls.has_de;
    with_tt += cls.tie_transitive;
    orbit_total += cls.orbit_size;
  }
  CHECK(with_ne == 14);
  CHECK(with_de == 13);
  CHECK(with_tt == 13);
  CHECK(orbit_total == 81);
}

TEST_CASE("catalog anchors") {
  const auto& catalog = square_catalog();
  int ne_free = catalog_id_of(SquareAnchor::ne_free);
  CHECK(classify_square({-1, +1, +1, -1}) == ne_free);
  CHECK_FALSE(catalog[ne_free - 1].has_ne);
  CHECK_FALSE(catalog[ne_free - 1].has_de);

  int bos = catalog_id_of(SquareAnchor::battle_of_sexes);
  CHECK(classify_square({-1, +1, -1, +1}) == bos);
  CHECK(catalog[bos - 1].has_ne);
  CHECK_FALSE(catalog[bos - 1].has_de);

  int dominant = catalog_id_of(SquareAnchor::dominant_pair);
  CHECK(classify_square({+1, +1, +1, +1}) == dominant);
  CHECK(catalog[dominant - 1].has_de);

  auto non_tt = catalog_ids_of(SquareAnchor::non_tie_transitive);
  REQUIRE(non_tt.size() == 2);
  std::set<SquarePattern> patterns{catalog[non_tt[0] - 1].canonical,
                                   catalog[non_tt[1] - 1].canonical};
  CHECK(patterns == std::set<SquarePattern>{{-1, 0, 0, 0}, {-1, +1, 0, 0}});
}

TEST_CASE("classification is invariant under the symmetry group") {
  auto row_swap = [](SquarePattern q) {
    return SquarePattern{static_cast<int8_t>(-q[0]), static_cast<int8_t>(-q[1]), q[3], q[2]};
  };
  auto col_swap = [](SquarePattern q) {
    return SquarePattern{q[1], q[0], static_cast<int8_t>(-q[2]), static_cast<int8_t>(-q[3])};
  };
  auto transpose = [](SquarePattern q) { return SquarePattern{q[2], q[3], q[0], q[1]}; };
  for (int v1 = -1; v1 <= 1; ++v1)
    for (int v2 = -1; v2 <= 1; ++v2)
      for (int h1 = -1; h1 <= 1; ++h1)
        for (int h2 = -1; h2 <= 1; ++h2) {
          SquarePattern p{static_cast<int8_t>(v1), static_cast<int8_t>(v2),
                          static_cast<int8_t>(h1), static_cast<int8_t>(h2)};
          int id = classify_square(p);
          CHECK(classify_square(row_swap(p)) == id);
          CHECK(classify_square(col_swap(p)) == id);
          CHECK(classify_square(transpose(p)) == id);
        }
}

TEST_CASE("type sets") {
  CHECK(type_set(cycle_config()) ==
        std::set<int>{catalog_id_of(SquareAnchor::ne_free)});
  CHECK(type_set(bos_config()) ==
        std::set<int>{catalog_id_of(SquareAnchor::battle_of_sexes)});

  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Game game = test_util::random_game(rng, 2, 3, 4);
    if (game.form.sizes[0] < 2 || game.form.sizes[1] < 2) continue;
    Configuration config = configuration_of_game(game);
    auto types = type_set(config);
    CHECK(types.size() <= 9u);
    // invariance under row/column swaps and transposition
    Configuration transposed;
    transposed.rows = config.cols;
    transposed.cols = config.rows;
    transposed.col_ranks = config.row_ranks;
    transposed.row_ranks = config.col_ranks;
    CHECK(type_set(transposed) == types);
    Configuration swapped = config;
    std::swap(swapped.col_ranks[0], swapped.col_ranks.back());
    for (auto& line : swapped.row_ranks) std::swap(line[0], line.back());
    CHECK(type_set(swapped) == types);
  }
}

TEST_CASE("configuration solutions") {
  auto cycle = config_solutions(cycle_config());
  CHECK(cycle.ne_profiles.empty());
  CHECK_FALSE(cycle.has_de);

  auto bos = config_solutions(bos_config());
  CHECK(bos.ne_profiles.size() == 2);
  CHECK_FALSE(bos.has_de);

  // player 2 indifferent on a constant row: saddle point survives
  Configuration saddle = zero_sum_config({{1, 1}, {0, 2}});
  auto result = config_solutions(saddle);
  CHECK(!result.ne_profiles.empty());

  // all ties everywhere: everything is an NE and elimination reaches 1x1
  Configuration flat = config_2x2(0, 0, 0, 0);
  auto all = config_solutions(flat);
  CHECK(all.ne_profiles.size() == 4);
  CHECK(all.has_de);
}

TEST_CASE("tie transitivity") {
  // tie-free configurations are always transitive
  CHECK(tie_transitivity(cycle_config()).transitive);

  // player 2 ties both rows, player 1 ties column 1 and is strict in column 2
  Configuration bad = config_2x2(0, -1, 0, 0);
  CHECK_FALSE(tie_transitivity(bad).transitive);

  // configurations induced by a game refine the game's outcome partition
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    Game game = test_util::random_game(rng, 2, 3, 4);
    Configuration config = configuration_of_game(game);
    auto result = tie_transitivity(config);
    REQUIRE(result.transitive);
    REQUIRE(result.induced_form.has_value());
    const GameForm& induced = *result.induced_form;
    std::map<int, int> class_to_outcome;
    for (long long r = 0; r < game.form.profile_count(); ++r) {
      auto [it, fresh] = class_to_outcome.emplace(induced.table[r], game.form.table[r]);
      CHECK(it->second == game.form.table[r]);
    }
  }
}

TEST_CASE("dualization reproduces the known families") {
  auto check_dual = [](const std::string& input, const std::string& expected) {
    Dnf result = dualize(dnf(input));
    CHECK(dnf_equal(result, dnf(expected)));
    CHECK(dnf_equal(dualize(result), irredundant(dnf(input))));  // involution
  };
  check_dual("c1 | c2 c3 | c2 c4 c5 c6 | c3 c5 c6 | c5 c9",
             "c1 c2 c5 | c1 c3 c5 | c1 c2 c3 c9 | c1 c2 c6 c9 | c1 c3 c4 c9 | c1 c3 c6 c9");
  check_dual("c1 | c2 | c3 c5 c6 | c4 c5 c6 | c5 c9 | c5 c10 | c6 c11",
             "c1 c2 c3 c4 c9 c10 c11 | c1 c2 c5 c6 | c1 c2 c5 c11 | c1 c2 c6 c9 c10");
  check_dual("c1 | c2 c3 | c3 c5 c6 | c5 c9",
             "c1 c2 c5 | c1 c3 c5 | c1 c2 c6 c9 | c1 c3 c9");
  check_dual("c1 | c2 | c3 c5 c6 | c4 c5 c6", "c1 c2 c3 c4 | c1 c2 c5 | c1 c2 c6");
  CHECK(dnf_equal(dualize(dnf("v")), dnf("v")));
}

TEST_CASE("dual terms are minimal transversals") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    // random family over up to 8 symbols
    int symbols = 3 + static_cast<int>(rng() % 6);
    Dnf family;
    for (int s = 0; s < symbols; ++s) family.symbols.push_back("s" + std::to_string(s + 1));
    int terms = 1 + static_cast<int>(rng() % 5);
    for (int t = 0; t < terms; ++t) {
      std::vector<int> term;
      for (int s = 0; s < symbols; ++s)
        if (rng() % 3 == 0) term.push_back(s);
      if (term.empty()) term.push_back(static_cast<int>(rng() % symbols));
      family.terms.push_back(term);
    }
    Dnf dual = dualize(family);
    for (const auto& dual_term : dual.terms) {
      std::set<int> hit(dual_term.begin(), dual_term.end());
      for (const auto& term : family.terms) {
        bool meets = false;
        for (int v : term) meets |= hit.count(v) > 0;
        CHECK(meets);
      }
      // no proper subset is a transversal
      for (int dropped : dual_term) {
        std::set<int> smaller = hit;
        smaller.erase(dropped);
        bool still = true;
        for (const auto& term : family.terms) {
          bool meets = false;
          for (int v : term) meets |= smaller.count(v) > 0;
          still &= meets;
        }
        CHECK_FALSE(still);
      }
    }
    CHECK(dnf_equal(dualize(dual), irredundant(family)));
  }
  CHECK_THROWS_AS(dualize(dnf("a1 a2"), 1), BudgetExceeded);
}

TEST_CASE("configuration text round trip") {
  Configuration config = cycle_config();
  std::string text = serialize_configuration(config);
  CHECK(parse_configuration(text) == config);
  CHECK_THROWS_AS(parse_configuration("config\nsizes: 2 2\nend\n"), ParseError);
}

TEST_CASE("example scans") {
  int ne_free = catalog_id_of(SquareAnchor::ne_free);
  SUBCASE("the strict cycle is found when allowed") {
    ScanOptions options;
    options.allowed = {ne_free};
    options.max_rows = options.max_cols = 2;
    auto found = scan_for_examples(ScanTarget::nash, options);
    REQUIRE(found.has_value());
    CHECK(config_solutions(*found).ne_profiles.empty());
    CHECK(type_set(*found) == std::set<int>{ne_free});
  }
  SUBCASE("no single class except the cycle carries an NE-free 2x2") {
    for (const auto& cls : square_catalog()) {
      if (cls.id == ne_free) continue;
      ScanOptions options;
      options.allowed = {cls.id};
      options.max_rows = options.max_cols = 2;
      CHECK_FALSE(scan_for_examples(ScanTarget::nash, options).has_value());
    }
  }
  SUBCASE("a tie-free NE-free configuration with NE-having squares exists") {
    ScanOptions options;
    options.tie_free = true;
    options.max_rows = options.max_cols = 3;
    for (const auto& cls : square_catalog())
      if (cls.has_ne) options.allowed.insert(cls.id);
    auto found = scan_for_examples(ScanTarget::nash, options);
    REQUIRE(found.has_value());
    CHECK(config_solutions(*found).ne_profiles.empty());
    auto types = type_set(*found);
    for (int id : types) CHECK(square_catalog()[id - 1].has_ne);
  }
  SUBCASE("budget runs out loudly") {
    ScanOptions options;
    options.allowed = {ne_free};
    options.max_rows = options.max_cols = 2;
    options.node_budget = 1;
    CHECK_THROWS_AS(scan_for_examples(ScanTarget::nash, options), BudgetExceeded);
  }
}

TEST_CASE("zero-sum configurations without the cycle square have saddle points") {
  const int ne_free = catalog_id_of(SquareAnchor::ne_free);
  auto audit = [&](const std::vector<std::vector<int>>& value) {
    Configuration config = zero_sum_config(value);
    if (type_set(config).count(ne_free)) return;
    CHECK(!config_solutions(config).ne_profiles.empty());
  };
  // exhaustive 3x3 over a three-letter alphabet
  for (int code = 0; code < 19683; ++code) {
    int rest = code;
    std::vector<std::vector<int>> value(3, std::vector<int>(3));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        value[r][c] = rest % 3;
        rest /= 3;
      }
    audit(value);
  }
  // exhaustive 4x4 over two letters, then random over four
  for (int code = 0; code < 65536; ++code) {
    int rest = code;
    std::vector<std::vector<int>> value(4, std::vector<int>(4));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        value[r][c] = rest % 2;
        rest /= 2;
      }
    audit(value);
  }
  std::mt19937 rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::vector<int>> value(4, std::vector<int>(4));
    for (auto& row : value)
      for (int& v : row) v = static_cast<int>(rng() % 4);
    audit(value);
  }
}

TEST_CASE("the tie-transitive domination family dualizes to three theorems") {
  Dnf result = dualize(dnf("c1 | c2 | c3 c5 c6 | c4 c5 c6"));
  CHECK(dnf_equal(result, dnf("c1 c2 c3 c4 | c1 c2 c5 | c1 c2 c6")));
}
