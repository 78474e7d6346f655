#include "gameforms/veto.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>
#include <thread>

#include "gameforms/errors.hpp"
#include "gameforms/properties.hpp"
#include "parse_util.hpp"

namespace gameforms {

void VetoSpec::validate() const {
  if (mu.empty() || lambda.empty())
    throw std::invalid_argument("veto spec needs at least one voter and one candidate");
  for (int m : mu)
    if (m < 1) throw std::invalid_argument("veto powers must be positive");
  for (int l : lambda)
    if (l < 1) throw std::invalid_argument("veto resistances must be positive");
  long long mu_sum = std::accumulate(mu.begin(), mu.end(), 0LL);
  long long lambda_sum = std::accumulate(lambda.begin(), lambda.end(), 0LL);
  if (mu_sum >= lambda_sum)
    throw std::invalid_argument("total veto power must stay below total veto resistance");
}

VetoSpec parse_veto_spec(const std::string& text) {
  auto lines = detail::significant_lines(text);
  if (lines.size() != 1) throw ParseError(lines.empty() ? 1 : lines[1].number, "expected one 'veto' line");
  auto toks = detail::tokens_of(lines[0].text);
  if (toks.size() != 3 || toks[0] != "veto")
    throw ParseError(lines[0].number, "expected 'veto mu=... lambda=...'");
  auto parse_list = [&](const std::string& tok, const std::string& key) {
    std::string rest;
    if (!detail::strip_prefix(tok, key + "=", &rest))
      throw ParseError(lines[0].number, "expected '" + key + "=<list>'");
    std::vector<int> out;
    std::string item;
    std::istringstream in(rest);
    while (std::getline(in, item, ','))
      out.push_back(detail::parse_int(item, lines[0].number));
    if (out.empty()) throw ParseError(lines[0].number, key + " list is empty");
    return out;
  };
  VetoSpec spec;
  spec.mu = parse_list(toks[1], "mu");
  spec.lambda = parse_list(toks[2], "lambda");
  try {
    spec.validate();
  } catch (const std::invalid_argument& ex) {
    throw ParseError(lines[0].number, ex.what());
  }
  return spec;
}

std::string serialize_veto_spec(const VetoSpec& spec) {
  std::ostringstream out;
  out << "veto mu=";
  for (size_t i = 0; i < spec.mu.size(); ++i) out << (i ? "," : "") << spec.mu[i];
  out << " lambda=";
  for (size_t i = 0; i < spec.lambda.size(); ++i) out << (i ? "," : "") << spec.lambda[i];
  return out.str();
}

std::vector<VetoStrategy> enumerate_strategies(const VetoSpec& spec, int voter) {
  spec.validate();
  if (voter < 1 || voter > spec.voters()) throw std::out_of_range("bad voter index");
  const int p = spec.candidates();
  std::vector<VetoStrategy> out;
  VetoStrategy cur(p, 0);
  // Ascending lexicographic: earlier candidates take as few cards as possible.
  auto rec = [&](auto&& self, int at, int remaining) -> void {
    if (at == p) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    int cap = std::min(remaining, spec.lambda[at]);
    for (int c = 0; c <= cap; ++c) {
      cur[at] = c;
      self(self, at + 1, remaining - c);
    }
    cur[at] = 0;
  };
  rec(rec, 0, spec.mu[voter - 1]);
  return out;
}

VetoCorrespondence build_correspondence(const VetoSpec& spec, long long max_cells) {
  spec.validate();
  VetoCorrespondence corr;
  corr.spec = spec;
  long long cells = 1;
  for (int i = 1; i <= spec.voters(); ++i) {
    corr.strategies.push_back(enumerate_strategies(spec, i));
    if (corr.strategies.back().empty())
      throw std::invalid_argument("voter " + std::to_string(i) +
                                  " has no strategy under the per-candidate caps");
    cells *= static_cast<long long>(corr.strategies.back().size());
    if (cells > max_cells) throw BudgetExceeded("correspondence exceeds the cell bound");
  }

  const int n = spec.voters();
  const int p = spec.candidates();
  corr.elected.reserve(cells);
  corr.selection_count = 1;
  std::vector<size_t> idx(n, 0);
  std::vector<int> total(p);
  for (;;) {
    std::fill(total.begin(), total.end(), 0);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < p; ++a) total[a] += corr.strategies[i][idx[i]][a];
    std::vector<int> elected;
    for (int a = 0; a < p; ++a)
      if (total[a] < spec.lambda[a]) elected.push_back(a);
    if (elected.empty()) throw std::logic_error("empty election; spec invariant violated");
    if (elected.size() > 1) {
      ++corr.multi_cell_count;
      const long long choices = static_cast<long long>(elected.size());
      if (corr.selection_count > VetoCorrespondence::selection_count_cap / choices)
        corr.selection_count = VetoCorrespondence::selection_count_cap;
      else
        corr.selection_count *= choices;
    }
    corr.elected.push_back(std::move(elected));
    int i = n - 1;
    while (i >= 0 && ++idx[i] == corr.strategies[i].size()) idx[i--] = 0;
    if (i < 0) break;
  }
  return corr;
}

GameForm selection_form(const VetoCorrespondence& corr, long long selection_index) {
  if (selection_index < 0 || selection_index >= corr.selection_count)
    throw std::out_of_range("selection index out of range");
  const int p = corr.spec.candidates();
  std::vector<int> choice(corr.elected.size());
  long long rest = selection_index;
  // Mixed radix over multi-valued cells, last cell fastest.
  for (long long cell = static_cast<long long>(corr.elected.size()) - 1; cell >= 0; --cell) {
    const auto& options = corr.elected[cell];
    if (options.size() == 1) {
      choice[cell] = options[0];
    } else {
      choice[cell] = options[rest % options.size()];
      rest /= static_cast<long long>(options.size());
    }
  }

  GameForm form;
  for (const auto& list : corr.strategies) form.sizes.push_back(static_cast<int>(list.size()));
  std::vector<char> used(p, 0);
  for (int a : choice) used[a] = 1;
  std::vector<int> remap(p, -1);
  for (int a = 0; a < p; ++a)
    if (used[a]) {
      remap[a] = static_cast<int>(form.outcomes.size());
      form.outcomes.push_back("a" + std::to_string(a + 1));
    }
  form.table.reserve(choice.size());
  for (int a : choice) form.table.push_back(remap[a]);
  form.validate();
  return form;
}

namespace {

bool selection_is_ds(const GameForm& form) {
  bool ds = true;
  detail::sweep_pref_profiles(form.players(), form.outcome_count(),
                              [&](const detail::RankTable& ranks, const std::vector<int>&) {
                                if (!detail::is_ds(form, ranks)) {
                                  ds = false;
                                  return false;
                                }
                                return true;
                              });
  return ds;
}

}  // namespace

void for_each_ds_selection(const VetoCorrespondence& corr, long long begin, long long end,
                           const std::function<void(long long, const GameForm&)>& fn) {
  begin = std::max(begin, 0LL);
  end = std::min(end, corr.selection_count);
  for (long long index = begin; index < end; ++index) {
    GameForm form = selection_form(corr, index);
    if (selection_is_ds(form)) fn(index, form);
  }
}

std::vector<GameForm> enumerate_ds_selections(const VetoCorrespondence& corr,
                                              long long max_selections, int jobs) {
  if (corr.selection_count > max_selections)
    throw BudgetExceeded("selection count " + std::to_string(corr.selection_count) +
                         " exceeds the bound " + std::to_string(max_selections) +
                         "; use the resumable range scan");
  const long long total = corr.selection_count;
  jobs = std::max(1, jobs);
  std::vector<std::pair<long long, GameForm>> hits;
  if (jobs == 1 || total < 64) {
    for_each_ds_selection(corr, 0, total,
                          [&](long long index, const GameForm& form) { hits.emplace_back(index, form); });
  } else {
    // warm the permutation cache before the workers share it
    detail::permutations_of(corr.spec.candidates());
    std::atomic<long long> next{0};
    constexpr long long block = 64;
    std::vector<std::vector<std::pair<long long, GameForm>>> found(jobs);
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        for (;;) {
          long long begin = next.fetch_add(block);
          if (begin >= total) return;
          for_each_ds_selection(corr, begin, std::min(begin + block, total),
                                [&](long long index, const GameForm& form) {
                                  found[w].emplace_back(index, form);
                                });
        }
      });
    for (auto& worker : workers) worker.join();
    for (auto& part : found)
      hits.insert(hits.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
    std::sort(hits.begin(), hits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  std::vector<GameForm> out;
  out.reserve(hits.size());
  for (auto& [index, form] : hits) out.push_back(std::move(form));
  return out;
}

}  // namespace gameforms
