// Equivalence oracles driving the learning loop: white-box exact and
// expanded variants, black-box random-word and Wp-method testing, a
// zero-cost cache sweep, and an ordered chain combinator.
#pragma once

#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "adtl/oracle.hpp"

namespace adtl {

// (input word, SUL output word) with SUL(input) != hypothesis(input).
using Counterexample = std::pair<Word, Word>;

class EquivalenceOracle {
 public:
  virtual ~EquivalenceOracle() = default;
  virtual std::optional<Counterexample> find_counterexample(
      const MealyMachine& hyp) = 0;
};

// White-box: shortest separating word against the known target.
class ExactOracle : public EquivalenceOracle {
 public:
  explicit ExactOracle(const MealyMachine& target) : target_(&target) {}
  std::optional<Counterexample> find_counterexample(
      const MealyMachine& hyp) override;

 private:
  const MealyMachine* target_;
};

// White-box with redundancy: pads the separating word to total_length by
// pumping the self-loop input of the state before its last symbol. Falls
// back to the plain separating word when padding breaks the counterexample
// or the word is already long enough. Meant for with_self_loops targets.
class ExpandedOracle : public EquivalenceOracle {
 public:
  explicit ExpandedOracle(const MealyMachine& target, size_t total_length = 500)
      : target_(&target), total_length_(total_length) {}
  std::optional<Counterexample> find_counterexample(
      const MealyMachine& hyp) override;

 private:
  const MealyMachine* target_;
  size_t total_length_;
};

// Black-box sampling: fixed number of uniform random words per call,
// lengths uniform in [len_min, len_max]. Seed-deterministic across
// platforms; queries go through the (cached) SUL oracle.
class RandomWordOracle : public EquivalenceOracle {
 public:
  RandomWordOracle(SymbolQueryOracle& sul, int queries, size_t len_min,
                   size_t len_max, uint64_t seed)
      : sul_(&sul), queries_(queries), len_min_(len_min), len_max_(len_max),
        rng_(seed) {}
  std::optional<Counterexample> find_counterexample(
      const MealyMachine& hyp) override;

 private:
  SymbolQueryOracle* sul_;
  int queries_;
  size_t len_min_, len_max_;
  std::mt19937_64 rng_;
};

// Black-box conformance testing: partial W-method over the hypothesis.
// Suite = state cover x middle words up to `depth` x per-state
// identification sets (pairwise separating words of the hypothesis).
class WpMethodOracle : public EquivalenceOracle {
 public:
  WpMethodOracle(SymbolQueryOracle& sul, int depth)
      : sul_(&sul), depth_(depth) {}
  std::optional<Counterexample> find_counterexample(
      const MealyMachine& hyp) override;

 private:
  SymbolQueryOracle* sul_;
  int depth_;
};

// Zero-cost consistency check: scans the observation tree for a recorded
// run whose outputs diverge from the hypothesis. Never queries the SUL.
class CacheSweepOracle : public EquivalenceOracle {
 public:
  explicit CacheSweepOracle(const CachingOracle& oracle) : oracle_(&oracle) {}
  std::optional<Counterexample> find_counterexample(
      const MealyMachine& hyp) override;

 private:
  const CachingOracle* oracle_;
};

// Consults members in order; the first counterexample wins.
class ChainOracle : public EquivalenceOracle {
 public:
  ChainOracle() = default;
  void add(std::unique_ptr<EquivalenceOracle> o) {
    members_.push_back(std::move(o));
  }
  std::optional<Counterexample> find_counterexample(
      const MealyMachine& hyp) override;

 private:
  std::vector<std::unique_ptr<EquivalenceOracle>> members_;
};

}  // namespace adtl
