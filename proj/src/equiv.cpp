#include "adtl/equiv.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace adtl {

namespace {

// mt19937_64 raw output with rejection sampling: identical sequences on
// every conforming standard library.
uint64_t uniform(std::mt19937_64& rng, uint64_t n) {
  uint64_t limit = std::numeric_limits<uint64_t>::max() -
                   std::numeric_limits<uint64_t>::max() % n;
  uint64_t v;
  do { v = rng(); } while (v >= limit);
  return v % n;
}

// Truncated at the first output divergence, or nullopt when sul_out agrees
// with the hypothesis everywhere.
std::optional<Counterexample> divergence(const MealyMachine& hyp,
                                         const Word& in, const Word& sul_out) {
  Word hout = hyp.run(in);
  for (size_t i = 0; i < in.size(); ++i)
    if (hout[i] != sul_out[i])
      return Counterexample{Word(in.begin(), in.begin() + i + 1),
                            Word(sul_out.begin(), sul_out.begin() + i + 1)};
  return std::nullopt;
}

}  // namespace

std::optional<Counterexample> ExactOracle::find_counterexample(
    const MealyMachine& hyp) {
  auto sep = separating_word(hyp, *target_);
  if (!sep) return std::nullopt;
  return Counterexample{*sep, target_->run(*sep)};
}

std::optional<Counterexample> ExpandedOracle::find_counterexample(
    const MealyMachine& hyp) {
  auto sep = separating_word(hyp, *target_);
  if (!sep) return std::nullopt;
  if (sep->size() >= total_length_)
    return Counterexample{*sep, target_->run(*sep)};

  Word prefix(sep->begin(), sep->end() - 1);
  int x = target_->step(target_->initial(), prefix);
  int y = x % target_->num_inputs();
  Word expanded = prefix;
  expanded.insert(expanded.end(), total_length_ - sep->size(), y);
  expanded.push_back(sep->back());
  Word tout = target_->run(expanded);
  if (tout != hyp.run(expanded)) return Counterexample{expanded, tout};
  return Counterexample{*sep, target_->run(*sep)};
}

std::optional<Counterexample> RandomWordOracle::find_counterexample(
    const MealyMachine& hyp) {
  int k = hyp.num_inputs();
  for (int q = 0; q < queries_; ++q) {
    size_t len = len_min_ + uniform(rng_, len_max_ - len_min_ + 1);
    Word w(len);
    for (size_t j = 0; j < len; ++j)
      w[j] = static_cast<int>(uniform(rng_, static_cast<uint64_t>(k)));
    if (auto ce = divergence(hyp, w, mq(*sul_, w))) return ce;
  }
  return std::nullopt;
}

std::optional<Counterexample> WpMethodOracle::find_counterexample(
    const MealyMachine& hyp) {
  int n = hyp.num_states(), k = hyp.num_inputs();

  // breadth-first state cover
  std::vector<Word> cover(n);
  std::vector<bool> seen(n, false);
  std::deque<int> bfs{hyp.initial()};
  seen[hyp.initial()] = true;
  while (!bfs.empty()) {
    int s = bfs.front();
    bfs.pop_front();
    for (int i = 0; i < k; ++i) {
      int t = hyp.delta(s, i);
      if (seen[t]) continue;
      seen[t] = true;
      cover[t] = cover[s];
      cover[t].push_back(i);
      bfs.push_back(t);
    }
  }

  // identification sets from pairwise separating words of the hypothesis
  std::vector<std::vector<Word>> ident(n);
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t)
      if (auto w = separating_word(hyp, s, t)) {
        ident[s].push_back(*w);
        ident[t].push_back(*w);
      }

  std::vector<Word> middles{Word{}};
  for (size_t lo = 0, d = 0; static_cast<int>(d) < depth_; ++d) {
    size_t hi = middles.size();
    for (size_t j = lo; j < hi; ++j)
      for (int i = 0; i < k; ++i) {
        Word m = middles[j];
        m.push_back(i);
        middles.push_back(std::move(m));
      }
    lo = hi;
  }

  for (int s = 0; s < n; ++s) {
    if (!seen[s]) continue;
    for (const Word& mid : middles) {
      Word pm = cover[s];
      pm.insert(pm.end(), mid.begin(), mid.end());
      int dest = hyp.step(hyp.initial(), pm);
      const std::vector<Word>& ws = ident[dest];
      if (ws.empty()) {
        if (pm.empty()) continue;
        if (auto ce = divergence(hyp, pm, mq(*sul_, pm))) return ce;
        continue;
      }
      for (const Word& w : ws) {
        Word test = pm;
        test.insert(test.end(), w.begin(), w.end());
        if (auto ce = divergence(hyp, test, mq(*sul_, test))) return ce;
      }
    }
  }
  return std::nullopt;
}

std::optional<Counterexample> CacheSweepOracle::find_counterexample(
    const MealyMachine& hyp) {
  Word in, out;
  std::optional<Counterexample> found;
  auto walk = [&](auto&& self, const ObservationTree::Node* node,
                  int state) -> void {
    for (const auto& [i, edge] : node->edges) {
      if (found) return;
      in.push_back(i);
      out.push_back(edge.first);
      if (hyp.lambda(state, i) != edge.first)
        found = Counterexample{in, out};
      else
        self(self, edge.second.get(), hyp.delta(state, i));
      in.pop_back();
      out.pop_back();
    }
  };
  walk(walk, oracle_->tree().root(), hyp.initial());
  return found;
}

std::optional<Counterexample> ChainOracle::find_counterexample(
    const MealyMachine& hyp) {
  for (auto& m : members_)
    if (auto ce = m->find_counterexample(hyp)) return ce;
  return std::nullopt;
}

}  // namespace adtl
