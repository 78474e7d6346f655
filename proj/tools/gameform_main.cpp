// Command-line front end: parse inputs, dispatch analyses, emit reports.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gameforms/domination.hpp"
#include "gameforms/errors.hpp"
#include "gameforms/positional.hpp"
#include "gameforms/properties.hpp"
#include "gameforms/scf.hpp"
#include "gameforms/squares.hpp"
#include "gameforms/text.hpp"
#include "gameforms/veto.hpp"

using nlohmann::json;
using namespace gameforms;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Options {
  std::string format = "text";
  int jobs = 1;
  unsigned seed = 12345;  // consumed by randomized sweep drivers
  long long max_profiles = 10'000'000;
  long long max_selections = 1'000'000;
  long long max_steps = 1'000'000;

  bool json_mode() const { return format == "json-lines"; }
  PropertyLimits limits() const {
    PropertyLimits limits;
    limits.max_pref_profiles = max_profiles;
    return limits;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

json json_profile(const StrategyProfile& x) { return json(x.coords); }

json json_box(const SubBox& box) {
  json out = json::array();
  for (const auto& set : box.strategies) out.push_back(set);
  return out;
}

json json_prefs(const PreferenceProfile& prefs, const std::vector<std::string>& labels) {
  json out = json::array();
  for (int i = 0; i < prefs.players(); ++i) {
    json order = json::array();
    for (int a : prefs.order(i)) order.push_back(labels[a]);
    out.push_back(order);
  }
  return out;
}

void emit(const Options& options, const json& record, const std::string& text) {
  if (options.json_mode())
    std::cout << record.dump() << '\n';
  else
    std::cout << text;
}

// One JSON line per result item, summary record last.
void emit_many(const Options& options, const std::vector<json>& records, const std::string& text) {
  if (options.json_mode())
    for (const auto& record : records) std::cout << record.dump() << '\n';
  else
    std::cout << text;
}

int cmd_solve(const Options& options, const std::string& form_path, const std::string& prefs_path) {
  Game game;
  game.form = parse_game_form(read_file(form_path));
  game.prefs = parse_preferences(read_file(prefs_path), game.form.outcomes);
  game.validate();

  EliminationTrace trace = run_canonical(game);
  auto de = domination_equilibrium(game);
  auto equilibria = nash_equilibria(game);

  json record{{"verb", "solve"}};
  record["steps"] = json::array();
  for (const auto& step : trace.steps)
    record["steps"].push_back(
        {{"player", step.player}, {"dominated", step.dominated}, {"dominator", step.dominator}});
  record["terminal"] = json_box(trace.terminal);
  record["de"] = nullptr;
  if (de)
    record["de"] = {{"profile", json_profile(de->profile)}, {"outcome", de->outcome.label}};
  record["ne"] = json::array();
  for (const auto& x : equilibria) record["ne"].push_back(json_profile(x));

  std::ostringstream text;
  text << render_trace(trace);
  if (de)
    text << "de: " << render_profile(de->profile) << " -> " << de->outcome.label << '\n';
  else
    text << "de: none\n";
  text << "ne:";
  for (const auto& x : equilibria) text << ' ' << render_profile(x);
  text << '\n';
  emit(options, record, text.str());
  return kExitOk;
}

int cmd_bi(const Options& options, const std::string& tree_path, const std::string& prefs_path) {
  Arborescence tree = parse_tree(read_file(tree_path));
  auto labels = tree_outcomes(tree);
  PreferenceProfile prefs = parse_preferences(read_file(prefs_path), labels);
  auto result = backward_induction(tree, prefs);

  json record{{"verb", "bi"}, {"outcome", result.outcome.label}};
  record["strategies"] = json::array();
  for (const auto& strategy : result.strategies) record["strategies"].push_back(strategy.choices);

  std::ostringstream text;
  text << "outcome: " << result.outcome.label << '\n';
  for (size_t i = 0; i < result.strategies.size(); ++i) {
    text << "moves p=" << (i + 1) << ":";
    for (int choice : result.strategies[i].choices) text << ' ' << choice;
    text << '\n';
  }
  emit(options, record, text.str());
  return kExitOk;
}

int cmd_normalize(const Options& options, const std::string& tree_path) {
  Arborescence tree = parse_tree(read_file(tree_path));
  GameForm form = to_game_form(tree, options.max_steps);
  std::string serialized = serialize_game_form(form);
  json record{{"verb", "normalize"},
              {"players", form.players()},
              {"sizes", form.sizes},
              {"gameform", serialized}};
  emit(options, record, serialized);
  return kExitOk;
}

int cmd_props(const Options& options, const std::string& form_path) {
  GameForm form = parse_game_form(read_file(form_path));
  auto limits = options.limits();
  FormProperties props = analyze_form(form, limits);
  auto report = classify_solvability(form, limits);

  json record{{"verb", "props"},
              {"tight", props.tight ? 1 : 0},
              {"weak_tight", props.weak_tight ? 1 : 0},
              {"rect", props.rect ? 1 : 0},
              {"tt", props.tt ? 1 : 0},
              {"positional", props.positional ? 1 : 0},
              {"ns", props.ns ? 1 : 0},
              {"ds", props.ds ? 1 : 0},
              {"ac", props.ac ? 1 : 0}};
  std::ostringstream text;
  text << render_properties(props) << '\n';
  if (report.ns_witness) {
    record["ns_witness"] = json_prefs(*report.ns_witness, form.outcomes);
    text << "witness ns (no equilibrium):\n"
         << serialize_preferences(*report.ns_witness, form.outcomes);
  }
  if (report.ds_witness) {
    record["ds_witness"] = {{"prefs", json_prefs(report.ds_witness->first, form.outcomes)},
                            {"terminal", json_box(report.ds_witness->second)}};
    text << "witness ds (not solvable):\n"
         << serialize_preferences(report.ds_witness->first, form.outcomes)
         << render_box(report.ds_witness->second) << '\n';
  }
  if (report.ac_witness) {
    json cycle = json::array();
    for (const auto& x : report.ac_witness->second.profiles) cycle.push_back(json_profile(x));
    record["ac_witness"] = {{"prefs", json_prefs(report.ac_witness->first, form.outcomes)},
                            {"cycle", cycle}};
    text << "witness ac (improvement cycle):\n"
         << serialize_preferences(report.ac_witness->first, form.outcomes) << "cycle:";
    for (const auto& x : report.ac_witness->second.profiles) text << ' ' << render_profile(x);
    text << '\n';
  }
  emit(options, record, text.str());
  return kExitOk;
}

int cmd_veto(const Options& options, const std::string& mu_text, const std::string& lambda_text,
             bool enumerate_ds, std::optional<long long> from, std::optional<long long> limit) {
  VetoSpec spec = parse_veto_spec("veto mu=" + mu_text + " lambda=" + lambda_text);
  VetoCorrespondence corr = build_correspondence(spec, options.max_steps);

  json record{{"verb", "veto"},
              {"mu", spec.mu},
              {"lambda", spec.lambda},
              {"cells", corr.elected.size()},
              {"multi_cells", corr.multi_cell_count},
              {"selections", corr.selection_count}};
  json strategy_counts = json::array();
  for (const auto& list : corr.strategies) strategy_counts.push_back(list.size());
  record["strategies"] = strategy_counts;

  std::ostringstream text;
  text << "strategies:";
  for (const auto& list : corr.strategies) text << ' ' << list.size();
  text << "\ncells=" << corr.elected.size() << " multi_cells=" << corr.multi_cell_count << '\n';

  if (!enumerate_ds) {
    text << "selections=" << corr.selection_count << '\n';
    emit(options, record, text.str());
    return kExitOk;
  }

  if (from || limit) {
    // resumable window; never a budget error
    long long begin = from.value_or(0);
    long long end = limit ? begin + *limit : corr.selection_count;
    long long found = 0;
    std::vector<json> records;
    for_each_ds_selection(corr, begin, end, [&](long long index, const GameForm& form) {
      ++found;
      records.push_back({{"verb", "veto-ds"},
                         {"index", index},
                         {"gameform", serialize_game_form(form)}});
      text << serialize_game_form(form);
    });
    long long next = std::min(end, corr.selection_count);
    record["range"] = {{"from", begin}, {"to", next}};
    record["ds_in_range"] = found;
    record["next"] = next;
    records.push_back(record);
    text << "range=[" << begin << "," << next << ") ds_in_range=" << found << " next=" << next
         << '\n';
    emit_many(options, records, text.str());
    return kExitOk;
  }

  auto ds = enumerate_ds_selections(corr, options.max_selections, options.jobs);
  std::vector<json> records;
  for (const auto& form : ds) {
    records.push_back({{"verb", "veto-ds"}, {"gameform", serialize_game_form(form)}});
    text << serialize_game_form(form);
  }
  record["ds_count"] = ds.size();
  records.push_back(record);
  text << "selections=" << corr.selection_count << " ds=" << ds.size() << '\n';
  emit_many(options, records, text.str());
  return kExitOk;
}

const char* anchor_name(SquareAnchor anchor) {
  switch (anchor) {
    case SquareAnchor::ne_free:
      return "ne-free";
    case SquareAnchor::battle_of_sexes:
      return "battle-of-sexes";
    case SquareAnchor::dominant_pair:
      return "dominant";
    case SquareAnchor::non_tie_transitive:
      return "non-tie-transitive";
    default:
      return "-";
  }
}

int cmd_squares_catalog(const Options& options) {
  const auto& catalog = square_catalog();
  int with_ne = 0, with_de = 0, with_tt = 0;
  std::ostringstream text;
  std::vector<json> records;
  for (const auto& cls : catalog) {
    with_ne += cls.has_ne;
    with_de += cls.has_de;
    with_tt += cls.tie_transitive;
    records.push_back(
        {{"verb", "square-class"},
         {"id", cls.id},
         {"pattern", {cls.canonical[0], cls.canonical[1], cls.canonical[2], cls.canonical[3]}},
         {"orbit", cls.orbit_size},
         {"ne", cls.has_ne ? 1 : 0},
         {"de", cls.has_de ? 1 : 0},
         {"tt", cls.tie_transitive ? 1 : 0},
         {"anchor", anchor_name(cls.anchor)}});
    text << 'c' << cls.id << " pattern=" << int(cls.canonical[0]) << ',' << int(cls.canonical[1])
         << ',' << int(cls.canonical[2]) << ',' << int(cls.canonical[3])
         << " orbit=" << cls.orbit_size << " ne=" << cls.has_ne << " de=" << cls.has_de
         << " tt=" << cls.tie_transitive << " anchor=" << anchor_name(cls.anchor) << '\n';
  }
  text << "classes=" << catalog.size() << " ne=" << with_ne << " de=" << with_de
       << " tt=" << with_tt << '\n';
  records.push_back(json{{"verb", "squares-catalog"},
                         {"count", catalog.size()},
                         {"ne", with_ne},
                         {"de", with_de},
                         {"tt", with_tt}});
  emit_many(options, records, text.str());
  return kExitOk;
}

int cmd_squares_analyze(const Options& options, const std::string& config_path) {
  Configuration config = parse_configuration(read_file(config_path));
  auto types = type_set(config);
  auto solutions = config_solutions(config);
  auto tt = tie_transitivity(config);

  json record{{"verb", "squares-analyze"},
              {"rows", config.rows},
              {"cols", config.cols},
              {"types", std::vector<int>(types.begin(), types.end())},
              {"ne_count", solutions.ne_profiles.size()},
              {"has_de", solutions.has_de ? 1 : 0},
              {"tie_transitive", tt.transitive ? 1 : 0}};
  std::ostringstream text;
  text << "types:";
  for (int id : types) text << " c" << id;
  text << "\nne:";
  for (auto [r, c] : solutions.ne_profiles) text << " (" << r << ',' << c << ')';
  text << "\nhas_de=" << solutions.has_de << " tie_transitive=" << tt.transitive << '\n';
  json ne_list = json::array();
  for (auto [r, c] : solutions.ne_profiles) ne_list.push_back({r, c});
  record["ne"] = ne_list;
  if (tt.induced_form) {
    record["induced_gameform"] = serialize_game_form(*tt.induced_form);
    text << serialize_game_form(*tt.induced_form);
  }
  emit(options, record, text.str());
  return kExitOk;
}

int cmd_squares_scan(const Options& options, const std::string& target_text,
                     const std::string& allowed_text, const std::string& size_text,
                     bool tie_free) {
  ScanTarget target;
  if (target_text == "ne")
    target = ScanTarget::nash;
  else if (target_text == "de")
    target = ScanTarget::domination;
  else
    throw std::invalid_argument("target must be ne or de");

  ScanOptions scan;
  scan.tie_free = tie_free;
  scan.node_budget = options.max_steps;
  if (allowed_text == "all") {
    for (const auto& cls : square_catalog()) scan.allowed.insert(cls.id);
  } else if (allowed_text == "all-ne") {
    for (const auto& cls : square_catalog())
      if (cls.has_ne) scan.allowed.insert(cls.id);
  } else {
    std::istringstream in(allowed_text);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (!item.empty() && item[0] == 'c') item.erase(0, 1);
      scan.allowed.insert(std::stoi(item));
    }
  }
  if (auto x = size_text.find('x'); x != std::string::npos) {
    scan.max_rows = std::stoi(size_text.substr(0, x));
    scan.max_cols = std::stoi(size_text.substr(x + 1));
  } else {
    throw std::invalid_argument("size must look like 3x3");
  }

  auto found = scan_for_examples(target, scan);
  json record{{"verb", "squares-scan"},
              {"target", target_text},
              {"tie_free", tie_free},
              {"found", found.has_value()}};
  std::ostringstream text;
  if (found) {
    record["config"] = serialize_configuration(*found);
    text << serialize_configuration(*found);
  } else {
    text << "absent within bounds\n";
  }
  emit(options, record, text.str());
  return kExitOk;
}

int cmd_dualize(const Options& options, const std::string& formula) {
  Dnf dual = dualize(parse_dnf(formula));
  json record{{"verb", "dualize"}, {"dual", serialize_dnf(dual)}, {"terms", dual.terms.size()}};
  emit(options, record, serialize_dnf(dual) + "\n");
  return kExitOk;
}

Scf load_scf(const std::string& source) {
  if (source == "builtin:leaders") return leaders_scf();
  if (source == "builtin:leaders-follow") return leaders_follow_scf();
  return parse_scf(read_file(source));
}

int cmd_scf(const Options& options, const std::string& action, const std::string& source,
            int max_iter) {
  Scf scf = load_scf(source);
  if (action == "check") {
    auto axioms = check_axioms(scf);
    json record{{"verb", "scf-check"},
                {"n", scf.voters},
                {"p", scf.candidate_count()},
                {"sincere", axioms.sincere ? 1 : 0},
                {"dictatorial", axioms.dictatorial ? 1 : 0}};
    std::ostringstream text;
    text << "sincere=" << axioms.sincere << " dictatorial=" << axioms.dictatorial;
    if (axioms.monotone) {
      record["monotone"] = *axioms.monotone ? 1 : 0;
      text << " monotone=" << *axioms.monotone;
    }
    text << '\n';
    emit(options, record, text.str());
    return kExitOk;
  }
  if (action == "apply-d") {
    auto result = apply_D(scf);
    json record{{"verb", "scf-apply-d"}, {"defined", result.defined ? 1 : 0}};
    std::ostringstream text;
    if (!result.defined) {
      record["undefined_at"] = *result.undefined_at;
      text << "defined=0 undefined_at=";
      for (size_t i = 0; i < result.undefined_at->size(); ++i)
        text << (i ? "," : "") << (*result.undefined_at)[i];
      text << '\n';
    } else {
      bool stable = result.image->choice == scf.choice;
      record["stable"] = stable ? 1 : 0;
      record["image"] = serialize_scf(*result.image);
      text << "defined=1 stable=" << stable << '\n' << serialize_scf(*result.image);
    }
    emit(options, record, text.str());
    return kExitOk;
  }
  if (action == "iterate") {
    auto iteration = iterate_D(scf, max_iter);
    json record{{"verb", "scf-iterate"}, {"steps", iteration.sequence.size()}};
    std::ostringstream text;
    switch (iteration.end) {
      case DIteration::End::cycle:
        record["end"] = "cycle";
        record["entry"] = iteration.cycle_entry;
        record["period"] = iteration.period;
        text << "cycle entry=" << iteration.cycle_entry << " period=" << iteration.period
             << " distinct=" << iteration.sequence.size() << '\n';
        break;
      case DIteration::End::undefined:
        record["end"] = "undefined";
        record["undefined_at"] = *iteration.undefined_at;
        text << "undefined after " << iteration.sequence.size() << " steps\n";
        break;
      case DIteration::End::max_iter:
        record["end"] = "max-iter";
        text << "no repeat within " << max_iter << " applications\n";
        break;
    }
    emit(options, record, text.str());
    return kExitOk;
  }
  throw std::invalid_argument("unknown scf action '" + action + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite game form analysis"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Options options;
  app.add_option("--format", options.format, "text or json-lines")
      ->check(CLI::IsMember({"text", "json-lines"}));
  app.add_option("--jobs", options.jobs, "worker threads for sweep verbs");
  app.add_option("--seed", options.seed, "seed for randomized sweep drivers");
  app.add_option("--max-profiles", options.max_profiles, "preference sweep budget");
  app.add_option("--max-selections", options.max_selections, "selection enumeration budget");
  app.add_option("--max-steps", options.max_steps, "node and cell budget");

  std::string form_path, prefs_path, tree_path, config_path;
  std::string mu_text, lambda_text, target_text = "ne", allowed_text = "all", size_text = "3x3";
  std::string formula, scf_action, scf_source;
  bool enumerate_ds = false, tie_free = false;
  std::optional<long long> from, limit;
  int max_iter = 64;

  auto* solve = app.add_subcommand("solve", "eliminate dominated strategies");
  solve->add_option("gameform", form_path)->required();
  solve->add_option("prefs", prefs_path)->required();

  auto* bi = app.add_subcommand("bi", "backward induction on a tree");
  bi->add_option("tree", tree_path)->required();
  bi->add_option("prefs", prefs_path)->required();

  auto* normalize = app.add_subcommand("normalize", "tree to normal game form");
  normalize->add_option("tree", tree_path)->required();

  auto* props = app.add_subcommand("props", "structural and solvability report");
  props->add_option("gameform", form_path)->required();

  auto* veto = app.add_subcommand("veto", "veto correspondence analysis");
  veto->add_option("--mu", mu_text, "per-voter veto powers")->required();
  veto->add_option("--lambda", lambda_text, "per-candidate resistances")->required();
  veto->add_flag("--enumerate-ds", enumerate_ds, "list dominance-solvable selections");
  veto->add_option("--from", from, "resume the DS scan at this selection index");
  veto->add_option("--limit", limit, "scan at most this many selections");

  auto* squares = app.add_subcommand("squares", "two-player configurations");
  auto* catalog = squares->add_subcommand("catalog", "the fifteen 2x2 classes");
  auto* analyze = squares->add_subcommand("analyze", "analyze a configuration");
  analyze->add_option("config", config_path)->required();
  auto* scan = squares->add_subcommand("scan", "search for solution-free examples");
  scan->add_option("--target", target_text, "ne or de");
  scan->add_option("--allowed", allowed_text, "catalog ids, or all / all-ne");
  scan->add_option("--max-size", size_text, "like 3x3");
  scan->add_flag("--tie-free", tie_free, "strict orders only");
  squares->require_subcommand(1);

  auto* dual = app.add_subcommand("dualize", "minimal transversals of a DNF");
  dual->add_option("dnf", formula)->required();

  auto* scf = app.add_subcommand("scf", "social choice functions");
  scf->add_option("action", scf_action, "check, apply-d or iterate")->required();
  scf->add_option("scf", scf_source, "file path or builtin:leaders")->required();
  scf->add_option("--max-iter", max_iter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(options, form_path, prefs_path);
    if (*bi) return cmd_bi(options, tree_path, prefs_path);
    if (*normalize) return cmd_normalize(options, tree_path);
    if (*props) return cmd_props(options, form_path);
    if (*veto) return cmd_veto(options, mu_text, lambda_text, enumerate_ds, from, limit);
    if (*squares) {
      if (*catalog) return cmd_squares_catalog(options);
      if (*analyze) return cmd_squares_analyze(options, config_path);
      if (*scan) return cmd_squares_scan(options, target_text, allowed_text, size_text, tie_free);
    }
    if (*dual) return cmd_dualize(options, formula);
    if (*scf) return cmd_scf(options, scf_action, scf_source, max_iter);
  } catch (const BudgetExceeded& ex) {
    std::cerr << "budget exceeded: " << ex.what() << '\n';
    return kExitBudget;
  } catch (const ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
