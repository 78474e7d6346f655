#include "gameforms/squares.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "gameforms/errors.hpp"
#include "parse_util.hpp"

namespace gameforms {

void Configuration::validate() const {
  if (rows < 1 || cols < 1) throw std::invalid_argument("configuration needs positive sizes");
  if (static_cast<int>(col_ranks.size()) != cols || static_cast<int>(row_ranks.size()) != rows)
    throw std::invalid_argument("rank block sizes do not match the declared sizes");
  for (const auto& line : col_ranks)
    if (static_cast<int>(line.size()) != rows)
      throw std::invalid_argument("every column line needs one rank per row");
  for (const auto& line : row_ranks)
    if (static_cast<int>(line.size()) != cols)
      throw std::invalid_argument("every row line needs one rank per column");
}

Configuration parse_configuration(const std::string& text) {
  auto lines = detail::significant_lines(text);
  size_t at = 0;
  auto need = [&](const char* what) -> const detail::Line& {
    if (at >= lines.size())
      throw ParseError(lines.empty() ? 1 : lines.back().number,
                       std::string("unexpected end of input, expected ") + what);
    return lines[at];
  };
  if (need("'config'").text != "config")
    throw ParseError(lines[at].number, "expected 'config' header");
  ++at;
  Configuration config;
  {
    const auto& ln = need("'sizes:'");
    std::string rest;
    if (!detail::strip_prefix(ln.text, "sizes:", &rest))
      throw ParseError(ln.number, "expected 'sizes: k1 k2'");
    auto toks = detail::tokens_of(rest);
    if (toks.size() != 2) throw ParseError(ln.number, "expected exactly two sizes");
    config.rows = detail::parse_int(toks[0], ln.number);
    config.cols = detail::parse_int(toks[1], ln.number);
    if (config.rows < 1 || config.cols < 1) throw ParseError(ln.number, "sizes must be positive");
    ++at;
  }
  auto read_block = [&](const std::string& header, int lines_needed, int width,
                        std::vector<std::vector<int>>* out) {
    if (need(header.c_str()).text != header)
      throw ParseError(lines[at].number, "expected '" + header + "'");
    ++at;
    for (int k = 0; k < lines_needed; ++k) {
      const auto& ln = need("a rank line");
      auto toks = detail::tokens_of(ln.text);
      if (static_cast<int>(toks.size()) != width)
        throw ParseError(ln.number, "expected " + std::to_string(width) + " ranks");
      std::vector<int> ranks;
      for (const auto& tok : toks) ranks.push_back(detail::parse_int(tok, ln.number));
      out->push_back(std::move(ranks));
      ++at;
    }
  };
  read_block("ranks 1:", config.cols, config.rows, &config.col_ranks);
  read_block("ranks 2:", config.rows, config.cols, &config.row_ranks);
  if (need("'end'").text != "end") throw ParseError(lines[at].number, "expected 'end'");
  ++at;
  if (at != lines.size()) throw ParseError(lines[at].number, "unexpected content after 'end'");
  config.validate();
  return config;
}

std::string serialize_configuration(const Configuration& config) {
  std::ostringstream out;
  out << "config\nsizes: " << config.rows << ' ' << config.cols << "\nranks 1:\n";
  for (const auto& line : config.col_ranks) {
    for (size_t k = 0; k < line.size(); ++k) out << (k ? " " : "") << line[k];
    out << '\n';
  }
  out << "ranks 2:\n";
  for (const auto& line : config.row_ranks) {
    for (size_t k = 0; k < line.size(); ++k) out << (k ? " " : "") << line[k];
    out << '\n';
  }
  out << "end\n";
  return out.str();
}

Configuration configuration_of_game(const Game& game) {
  game.validate();
  if (game.form.players() != 2)
    throw std::invalid_argument("configurations are defined for two players");
  Configuration config;
  config.rows = game.form.sizes[0];
  config.cols = game.form.sizes[1];
  const int p = game.form.outcome_count();
  auto at = [&](int r, int c) {
    return game.form.table[static_cast<long long>(r) * config.cols + c];
  };
  for (int c = 0; c < config.cols; ++c) {
    std::vector<int> line(config.rows);
    for (int r = 0; r < config.rows; ++r) line[r] = p - game.prefs.rank(0, at(r, c));
    config.col_ranks.push_back(std::move(line));
  }
  for (int r = 0; r < config.rows; ++r) {
    std::vector<int> line(config.cols);
    for (int c = 0; c < config.cols; ++c) line[c] = p - game.prefs.rank(1, at(r, c));
    config.row_ranks.push_back(std::move(line));
  }
  return config;
}

namespace {

int sign_of(int a, int b) { return a > b ? 1 : (a < b ? -1 : 0); }

SquarePattern pattern_of(const Configuration& config, int r1, int r2, int c1, int c2) {
  return SquarePattern{
      static_cast<int8_t>(sign_of(config.col_ranks[c1][r1], config.col_ranks[c1][r2])),
      static_cast<int8_t>(sign_of(config.col_ranks[c2][r1], config.col_ranks[c2][r2])),
      static_cast<int8_t>(sign_of(config.row_ranks[r1][c1], config.row_ranks[r1][c2])),
      static_cast<int8_t>(sign_of(config.row_ranks[r2][c1], config.row_ranks[r2][c2]))};
}

std::vector<SquarePattern> orbit_of(const SquarePattern& p) {
  auto row_swap = [](SquarePattern q) {
    return SquarePattern{static_cast<int8_t>(-q[0]), static_cast<int8_t>(-q[1]), q[3], q[2]};
  };
  auto col_swap = [](SquarePattern q) {
    return SquarePattern{q[1], q[0], static_cast<int8_t>(-q[2]), static_cast<int8_t>(-q[3])};
  };
  auto transpose = [](SquarePattern q) { return SquarePattern{q[2], q[3], q[0], q[1]}; };
  std::vector<SquarePattern> seen{p};
  for (size_t head = 0; head < seen.size(); ++head) {
    for (auto img : {row_swap(seen[head]), col_swap(seen[head]), transpose(seen[head])})
      if (std::find(seen.begin(), seen.end(), img) == seen.end()) seen.push_back(img);
  }
  return seen;
}

SquarePattern canonical_of(const SquarePattern& p) {
  auto orbit = orbit_of(p);
  return *std::min_element(orbit.begin(), orbit.end());
}

Configuration config_of_pattern(const SquarePattern& p) {
  auto line = [](int8_t sign) {
    return sign > 0 ? std::vector<int>{1, 0} : (sign < 0 ? std::vector<int>{0, 1} : std::vector<int>{0, 0});
  };
  Configuration config;
  config.rows = config.cols = 2;
  config.col_ranks = {line(p[0]), line(p[1])};
  config.row_ranks = {line(p[2]), line(p[3])};
  return config;
}

std::vector<TwoSquareClass> build_catalog() {
  std::map<SquarePattern, std::vector<SquarePattern>> classes;
  SquarePattern p{};
  for (int v1 = -1; v1 <= 1; ++v1)
    for (int v2 = -1; v2 <= 1; ++v2)
      for (int h1 = -1; h1 <= 1; ++h1)
        for (int h2 = -1; h2 <= 1; ++h2) {
          p = {static_cast<int8_t>(v1), static_cast<int8_t>(v2), static_cast<int8_t>(h1),
               static_cast<int8_t>(h2)};
          classes[canonical_of(p)].push_back(p);
        }
  std::vector<TwoSquareClass> catalog;
  for (const auto& [canonical, members] : classes) {
    TwoSquareClass cls;
    cls.id = static_cast<int>(catalog.size()) + 1;
    cls.canonical = canonical;
    cls.orbit_size = static_cast<int>(members.size());
    Configuration config = config_of_pattern(canonical);
    auto solutions = config_solutions(config);
    cls.has_ne = !solutions.ne_profiles.empty();
    cls.has_de = solutions.has_de;
    cls.tie_transitive = tie_transitivity(config).transitive;
    catalog.push_back(cls);
  }
  // anchors
  for (auto& cls : catalog) {
    bool dominant = cls.canonical[0] == cls.canonical[1] && cls.canonical[0] != 0 &&
                    cls.canonical[2] == cls.canonical[3] && cls.canonical[2] != 0;
    if (!cls.has_ne)
      cls.anchor = SquareAnchor::ne_free;
    else if (!cls.has_de)
      cls.anchor = SquareAnchor::battle_of_sexes;
    else if (!cls.tie_transitive)
      cls.anchor = SquareAnchor::non_tie_transitive;
    else if (dominant)
      cls.anchor = SquareAnchor::dominant_pair;
  }
  return catalog;
}

}  // namespace

const std::vector<TwoSquareClass>& square_catalog() {
  static const std::vector<TwoSquareClass> catalog = build_catalog();
  return catalog;
}

int classify_square(const SquarePattern& pattern) {
  static std::once_flag once;
  static std::map<SquarePattern, int> index;
  std::call_once(once, [] {
    for (const auto& cls : square_catalog())
      for (const auto& member : orbit_of(cls.canonical)) index[member] = cls.id;
  });
  auto it = index.find(pattern);
  if (it == index.end()) throw std::invalid_argument("pattern entries must be in {-1,0,1}");
  return it->second;
}

int catalog_id_of(SquareAnchor anchor) {
  auto ids = catalog_ids_of(anchor);
  if (ids.size() != 1) throw std::invalid_argument("anchor is not unique");
  return ids.front();
}

std::vector<int> catalog_ids_of(SquareAnchor anchor) {
  std::vector<int> out;
  for (const auto& cls : square_catalog())
    if (cls.anchor == anchor) out.push_back(cls.id);
  return out;
}

std::set<int> type_set(const Configuration& config) {
  config.validate();
  if (config.rows < 2 || config.cols < 2)
    throw std::invalid_argument("type sets need at least a 2x2 configuration");
  std::set<int> out;
  for (int r1 = 0; r1 < config.rows; ++r1)
    for (int r2 = r1 + 1; r2 < config.rows; ++r2)
      for (int c1 = 0; c1 < config.cols; ++c1)
        for (int c2 = c1 + 1; c2 < config.cols; ++c2)
          out.insert(classify_square(pattern_of(config, r1, r2, c1, c2)));
  return out;
}

namespace {

std::vector<std::pair<int, int>> ne_profiles_of(const Configuration& config) {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < config.rows; ++r)
    for (int c = 0; c < config.cols; ++c) {
      bool best1 = true, best2 = true;
      for (int r2 = 0; r2 < config.rows; ++r2)
        if (config.col_ranks[c][r2] > config.col_ranks[c][r]) best1 = false;
      for (int c2 = 0; c2 < config.cols; ++c2)
        if (config.row_ranks[r][c2] > config.row_ranks[r][c]) best2 = false;
      if (best1 && best2) out.emplace_back(r + 1, c + 1);
    }
  return out;
}

}  // namespace

ConfigSolutions config_solutions(const Configuration& config, long long max_boxes) {
  config.validate();
  ConfigSolutions result;
  result.ne_profiles = ne_profiles_of(config);

  // Exhaustive elimination-order search over boxes, memoized.
  std::unordered_map<uint64_t, char> memo;
  long long expanded = 0;
  auto key_of = [](uint32_t rows, uint32_t cols) {
    return (static_cast<uint64_t>(rows) << 32) | cols;
  };
  auto search = [&](auto&& self, uint32_t rows, uint32_t cols) -> bool {
    if (std::popcount(rows) == 1 && std::popcount(cols) == 1) return true;
    auto it = memo.find(key_of(rows, cols));
    if (it != memo.end()) return it->second;
    if (++expanded > max_boxes)
      throw BudgetExceeded("elimination-order search exceeded the box budget");
    memo[key_of(rows, cols)] = 0;
    bool found = false;
    // player 1 removes a dominated row
    for (int t = 0; t < config.rows && !found; ++t) {
      if (!(rows >> t & 1)) continue;
      for (int s = 0; s < config.rows && !found; ++s) {
        if (s == t || !(rows >> s & 1)) continue;
        bool dom = true;
        for (int c = 0; c < config.cols && dom; ++c)
          if ((cols >> c & 1) && config.col_ranks[c][s] < config.col_ranks[c][t]) dom = false;
        if (dom && self(self, rows & ~(1u << t), cols)) found = true;
      }
    }
    for (int t = 0; t < config.cols && !found; ++t) {
      if (!(cols >> t & 1)) continue;
      for (int s = 0; s < config.cols && !found; ++s) {
        if (s == t || !(cols >> s & 1)) continue;
        bool dom = true;
        for (int r = 0; r < config.rows && dom; ++r)
          if ((rows >> r & 1) && config.row_ranks[r][s] < config.row_ranks[r][t]) dom = false;
        if (dom && self(self, rows, cols & ~(1u << t))) found = true;
      }
    }
    memo[key_of(rows, cols)] = found ? 1 : 0;
    return found;
  };
  if (config.rows > 31 || config.cols > 31)
    throw BudgetExceeded("configuration too large for the elimination search");
  result.has_de = search(search, (1u << config.rows) - 1, (1u << config.cols) - 1);
  return result;
}

TieTransitivity tie_transitivity(const Configuration& config) {
  config.validate();
  const int cells = config.rows * config.cols;
  std::vector<int> parent(cells);
  for (int i = 0; i < cells; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto join = [&](int a, int b) { parent[find(a)] = find(b); };
  auto cell = [&](int r, int c) { return r * config.cols + c; };

  for (int c = 0; c < config.cols; ++c)
    for (int r1 = 0; r1 < config.rows; ++r1)
      for (int r2 = r1 + 1; r2 < config.rows; ++r2)
        if (config.col_ranks[c][r1] == config.col_ranks[c][r2]) join(cell(r1, c), cell(r2, c));
  for (int r = 0; r < config.rows; ++r)
    for (int c1 = 0; c1 < config.cols; ++c1)
      for (int c2 = c1 + 1; c2 < config.cols; ++c2)
        if (config.row_ranks[r][c1] == config.row_ranks[r][c2]) join(cell(r, c1), cell(r, c2));

  // Lift each player's strict comparisons to the tie classes and test for
  // cycles (a self-edge is a cycle).
  for (int player = 0; player < 2; ++player) {
    std::map<int, std::vector<int>> adjacency;
    bool self_edge = false;
    auto add_edge = [&](int worse, int better) {
      int a = find(worse), b = find(better);
      if (a == b) {
        self_edge = true;
        return;
      }
      adjacency[a].push_back(b);
    };
    if (player == 0) {
      for (int c = 0; c < config.cols; ++c)
        for (int r1 = 0; r1 < config.rows; ++r1)
          for (int r2 = 0; r2 < config.rows; ++r2)
            if (config.col_ranks[c][r1] > config.col_ranks[c][r2])
              add_edge(cell(r2, c), cell(r1, c));
    } else {
      for (int r = 0; r < config.rows; ++r)
        for (int c1 = 0; c1 < config.cols; ++c1)
          for (int c2 = 0; c2 < config.cols; ++c2)
            if (config.row_ranks[r][c1] > config.row_ranks[r][c2])
              add_edge(cell(r, c2), cell(r, c1));
    }
    if (self_edge) return {false, std::nullopt};
    std::map<int, int> color;
    auto dfs = [&](auto&& self, int u) -> bool {
      color[u] = 1;
      if (auto it = adjacency.find(u); it != adjacency.end())
        for (int v : it->second) {
          if (color[v] == 1) return true;
          if (color[v] == 0 && self(self, v)) return true;
        }
      color[u] = 2;
      return false;
    };
    for (const auto& [u, targets] : adjacency) {
      (void)targets;
      if (color[u] == 0 && dfs(dfs, u)) return {false, std::nullopt};
    }
  }

  GameForm form;
  form.sizes = {config.rows, config.cols};
  std::map<int, int> id_of;
  for (int r = 0; r < config.rows; ++r)
    for (int c = 0; c < config.cols; ++c) {
      int root = find(cell(r, c));
      auto [it, fresh] = id_of.emplace(root, static_cast<int>(form.outcomes.size()));
      if (fresh) form.outcomes.push_back("o" + std::to_string(form.outcomes.size() + 1));
      form.table.push_back(it->second);
    }
  form.validate();
  return {true, std::move(form)};
}

// ---------------------------------------------------------------------------
// DNF and dualization

namespace {

std::vector<uint32_t> irredundant_masks(std::vector<uint32_t> terms) {
  std::sort(terms.begin(), terms.end(), [](uint32_t a, uint32_t b) {
    return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b;
  });
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::vector<uint32_t> out;
  for (uint32_t t : terms) {
    bool covered = false;
    for (uint32_t kept : out)
      if ((kept & ~t) == 0) {
        covered = true;
        break;
      }
    if (!covered) out.push_back(t);
  }
  return out;
}

std::vector<uint32_t> masks_of(const Dnf& dnf) {
  std::vector<uint32_t> out;
  for (const auto& term : dnf.terms) {
    uint32_t m = 0;
    for (int v : term) m |= 1u << v;
    out.push_back(m);
  }
  return out;
}

Dnf from_masks(const Dnf& base, const std::vector<uint32_t>& masks) {
  Dnf out;
  out.symbols = base.symbols;
  for (uint32_t m : masks) {
    std::vector<int> term;
    for (int v = 0; v < static_cast<int>(out.symbols.size()); ++v)
      if (m >> v & 1) term.push_back(v);
    out.terms.push_back(std::move(term));
  }
  return out;
}

}  // namespace

Dnf parse_dnf(const std::string& text) {
  Dnf dnf;
  std::map<std::string, int> id_of;
  std::string part;
  std::istringstream in(text);
  bool any = false;
  while (std::getline(in, part, '|')) {
    any = true;
    std::vector<int> term;
    for (const auto& sym : detail::tokens_of(part)) {
      if (!detail::valid_label(sym)) throw ParseError(1, "bad symbol '" + sym + "'");
      auto [it, fresh] = id_of.emplace(sym, static_cast<int>(dnf.symbols.size()));
      if (fresh) dnf.symbols.push_back(sym);
      if (std::find(term.begin(), term.end(), it->second) == term.end())
        term.push_back(it->second);
    }
    if (term.empty()) throw ParseError(1, "empty term");
    std::sort(term.begin(), term.end());
    dnf.terms.push_back(std::move(term));
  }
  if (!any) throw ParseError(1, "empty formula");
  return dnf;
}

std::string serialize_dnf(const Dnf& dnf) {
  std::ostringstream out;
  for (size_t k = 0; k < dnf.terms.size(); ++k) {
    if (k) out << " | ";
    for (size_t v = 0; v < dnf.terms[k].size(); ++v)
      out << (v ? " " : "") << dnf.symbols[dnf.terms[k][v]];
  }
  return out.str();
}

Dnf irredundant(const Dnf& dnf) { return from_masks(dnf, irredundant_masks(masks_of(dnf))); }

Dnf dualize(const Dnf& dnf, int max_symbols) {
  if (static_cast<int>(dnf.symbols.size()) > max_symbols)
    throw BudgetExceeded("dualization universe exceeds " + std::to_string(max_symbols) +
                         " symbols");
  auto terms = irredundant_masks(masks_of(dnf));
  // Incremental minimal transversals.
  std::vector<uint32_t> transversals{0};
  for (uint32_t term : terms) {
    std::vector<uint32_t> next;
    for (uint32_t tr : transversals) {
      if (tr & term) {
        next.push_back(tr);
        continue;
      }
      for (int v = 0; v < static_cast<int>(dnf.symbols.size()); ++v)
        if (term >> v & 1) next.push_back(tr | (1u << v));
    }
    transversals = irredundant_masks(std::move(next));
  }
  return from_masks(dnf, transversals);
}

bool dnf_equal(const Dnf& a, const Dnf& b) {
  auto names = [](const Dnf& d) {
    std::set<std::vector<std::string>> out;
    for (const auto& term : d.terms) {
      std::vector<std::string> syms;
      for (int v : term) syms.push_back(d.symbols[v]);
      std::sort(syms.begin(), syms.end());
      out.insert(std::move(syms));
    }
    return out;
  };
  return names(a) == names(b);
}

// ---------------------------------------------------------------------------
// Example search

namespace {

// All dense rank vectors of length m (total pre-orders), lexicographic;
// strict orders only when tie_free.
std::vector<std::vector<int>> line_alternatives(int m, bool tie_free) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(m, 0);
  auto rec = [&](auto&& self, int at) -> void {
    if (at == m) {
      int top = *std::max_element(cur.begin(), cur.end());
      std::vector<char> seen(top + 1, 0);
      for (int v : cur) seen[v] = 1;
      if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return;  // ranks must be dense
      if (tie_free && top != m - 1) return;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v < m; ++v) {
      cur[at] = v;
      self(self, at + 1);
    }
  };
  rec(rec, 0);
  return out;
}

struct Scan {
  ScanTarget target;
  const ScanOptions& options;
  int rows, cols;
  std::vector<std::vector<int>> col_alts, row_alts;
  Configuration config;
  long long nodes = 0;

  Scan(ScanTarget t, const ScanOptions& opts, int k1, int k2)
      : target(t), options(opts), rows(k1), cols(k2) {
    col_alts = line_alternatives(rows, opts.tie_free);
    row_alts = line_alternatives(cols, opts.tie_free);
    config.rows = rows;
    config.cols = cols;
  }

  void bump() {
    if (++nodes > options.node_budget)
      throw BudgetExceeded("example search exceeded the node budget");
  }

  bool square_allowed(int r1, int r2, int c1, int c2) const {
    return options.allowed.count(classify_square(pattern_of(config, r1, r2, c1, c2))) > 0;
  }

  // Columns first, then rows; every completed sub-square is checked as soon
  // as its last line lands, and target-NE scans also reject any finished NE
  // cell immediately.
  bool fill_rows(int r) {
    if (r == rows) {
      if (target == ScanTarget::nash) return true;  // cells already verified NE-free
      return !config_solutions(config).has_de;
    }
    for (const auto& alt : row_alts) {
      bump();
      config.row_ranks.push_back(alt);
      bool ok = true;
      if (target == ScanTarget::nash) {
        for (int c = 0; c < cols && ok; ++c) {
          bool best1 = true, best2 = true;
          for (int r2 = 0; r2 < rows; ++r2)
            if (config.col_ranks[c][r2] > config.col_ranks[c][r]) best1 = false;
          for (int c2 = 0; c2 < cols; ++c2)
            if (alt[c2] > alt[c]) best2 = false;
          if (best1 && best2) ok = false;  // found an NE cell
        }
      }
      for (int r1 = 0; r1 < r && ok; ++r1)
        for (int c1 = 0; c1 < cols && ok; ++c1)
          for (int c2 = c1 + 1; c2 < cols && ok; ++c2)
            if (!square_allowed(r1, r, c1, c2)) ok = false;
      if (ok && fill_rows(r + 1)) return true;
      config.row_ranks.pop_back();
    }
    return false;
  }

  bool fill_cols(int c) {
    if (c == cols) return fill_rows(0);
    for (const auto& alt : col_alts) {
      bump();
      config.col_ranks.push_back(alt);
      if (fill_cols(c + 1)) return true;
      config.col_ranks.pop_back();
    }
    return false;
  }
};

}  // namespace

std::optional<Configuration> scan_for_examples(ScanTarget target, const ScanOptions& options) {
  if (options.max_rows < 2 || options.max_cols < 2)
    throw std::invalid_argument("the search needs room for at least one 2x2 square");
  long long nodes_used = 0;
  for (int k1 = 2; k1 <= options.max_rows; ++k1)
    for (int k2 = 2; k2 <= options.max_cols; ++k2) {
      Scan scan(target, options, k1, k2);
      scan.nodes = nodes_used;
      if (scan.fill_cols(0)) return scan.config;
      nodes_used = scan.nodes;
    }
  return std::nullopt;
}

}  // namespace gameforms
