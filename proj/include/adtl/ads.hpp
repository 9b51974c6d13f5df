// Adaptive distinguishing sequence computation: Lee-Yannakakis splitting
// trees for full state sets, exact/best-effort successor-tree searches for
// subsets, and the defensive variant that closes transitions on demand.
#pragma once

#include <cstdint>
#include <functional>

#include "adtl/adt.hpp"
#include "adtl/mealy.hpp"

namespace adtl {

enum class AdsProfile { BestEffort, MinimalLength, MinimalSize };

enum class AdsStatus {
  Ok,
  None,    // provably no ADS for the given targets
  Budget,  // search cut off before an answer was established
};

struct AdsResult {
  AdsStatus status = AdsStatus::None;
  std::unique_ptr<AdtNode> tree;  // reset-free; set iff status == Ok

  bool ok() const { return status == AdsStatus::Ok; }
};

inline constexpr int64_t kDefaultAdsBudget = 100000;

struct NotMinimal : std::logic_error {
  NotMinimal() : std::logic_error("machine has equivalent states") {}
};

// Thrown by close_fn when closing a transition uncovered a new hypothesis
// state; the caller restarts its computation on the grown hypothesis.
struct ModificationSignal {};

// Hook invoked by searches when an input cannot be explored because some
// current states lack the transition: (blocked states, input).
using OpenHook = std::function<void(const std::vector<int>&, int)>;

// Dispatch: <=1 target -> bare final; 2 targets -> shortest separating word
// chain; all states of a complete machine under BestEffort -> ly_full_ads;
// otherwise successor_tree_search.
AdsResult compute_ads(const MealyMachine& m, const std::vector<int>& targets,
                      AdsProfile profile, int64_t budget = kDefaultAdsBudget,
                      const OpenHook& open_hook = nullptr);

struct LyResult {
  std::unique_ptr<AdtNode> tree;       // set on success
  std::vector<int> indistinguishable;  // witness block on failure
};

// Polynomial splitting-tree construction for the full state set of a
// complete, minimal machine; ADS depth bounded by (n^2 - n)/2.
LyResult ly_full_ads(const MealyMachine& m);

// BestEffort: leveled breadth-first search over input words; MinimalLength /
// MinimalSize: exact minimum-cost search (cost = depth resp. symbol-node
// count) with memoization. Convergent words are pruned.
AdsResult successor_tree_search(const MealyMachine& m,
                                const std::vector<int>& targets,
                                AdsProfile profile, int64_t budget,
                                const OpenHook& open_hook = nullptr);

using CloseFn = std::function<void(int state, int input)>;

// compute_ads over a partial hypothesis: on failure, closes the smallest
// recorded blocking (states, input) pair via close_fn and retries.
// Propagates ModificationSignal from close_fn.
AdsResult compute_defensive_ads(const MealyMachine& m,
                                const std::vector<int>& targets,
                                const CloseFn& close_fn, AdsProfile profile,
                                int64_t budget = kDefaultAdsBudget);

// Simulation check (cheap, run on every computed tree): from each target
// state, walking the tree by applying symbol-node inputs ends at the unique
// final referencing that state.
bool ads_valid(const MealyMachine& m, const AdtNode* tree,
               const std::vector<int>& targets);

}  // namespace adtl
