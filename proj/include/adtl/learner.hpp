// ADT learner core: hypothesis bookkeeping, counterexample decomposition and
// handling, transition closing, ADT-consistency enforcement, counterexample
// reactivation, and observation-tree shortcuts.
#pragma once

#include <deque>
#include <set>

#include "adtl/ads.hpp"
#include "adtl/adt.hpp"
#include "adtl/mealy.hpp"
#include "adtl/oracle.hpp"

namespace adtl {

struct NotACounterexample : std::runtime_error {
  NotACounterexample()
      : std::runtime_error("word is not a counterexample for the hypothesis") {}
};

// Partial hypothesis automaton plus learner bookkeeping.
struct Hypothesis {
  MealyMachine machine;
  std::vector<Word> access_sequences;          // [0] = epsilon, prefix-closed
  std::deque<std::pair<int, int>> open_transitions;  // (state, input) FIFO
  std::set<std::pair<int, int>> spanning;      // spanning-tree transitions
};

// u . a . v equals the counterexample input word; v is nonempty.
struct Decomposition {
  Word u;
  int a = -1;
  Word v;
  int u_state = -1;    // delta_H(u)
  int old_state = -1;  // delta_H(u . a) before redirecting
};

// Pending FIFO plus insertion-ordered global cache used for reactivation.
struct CounterexampleStore {
  std::deque<std::pair<Word, Word>> pending;
  std::vector<std::pair<Word, Word>> all_seen;

  void add(const Word& in, const Word& out);

 private:
  std::set<std::pair<Word, Word>> seen_;
};

enum class SubtreeHeuristic { None, Leveled, Exhaustive, Single };

struct LearnerConfig {
  bool use_subtree_extension = false;  // SE: reset-free grafts in split_leaf
  SubtreeHeuristic subtree_heuristic = SubtreeHeuristic::None;
  AdsProfile subtree_profile = AdsProfile::BestEffort;
  std::optional<AdsProfile> immediate_replacement;  // IR_x when set
  int64_t ads_budget = kDefaultAdsBudget;
};

struct LearnerStats {
  uint64_t adt_pr = 0;    // proposed subtree replacements
  uint64_t adt_pran = 0;  // states referenced in proposed replacements
  uint64_t adt_prs = 0;   // symbol nodes in proposed replacements
  uint64_t adt_ars = 0;   // symbol nodes in accepted replacements
  uint64_t adt_arr = 0;   // reset nodes in accepted replacements
  uint64_t adt_arp = 0;   // accepted reset-free replacements
  uint64_t adt_ara = 0;   // accepted replacements
  uint64_t ot_e = 0;      // extending discriminators found in the OT
  uint64_t ot_s = 0;      // shorter discriminators found in the OT
};

class AdtLearner {
 public:
  AdtLearner(CachingOracle& oracle, Alphabet inputs, Alphabet outputs,
             LearnerConfig config = {});

  // Builds the one-state hypothesis and closes its |I| transitions.
  void initialize();

  // Handles one external counterexample; true iff the hypothesis changed.
  bool refine_hypothesis(const Word& in, const Word& out);

  const MealyMachine& hypothesis() const { return hyp_.machine; }
  const Hypothesis& hyp() const { return hyp_; }
  Hypothesis& hyp() { return hyp_; }
  const Adt& adt() const { return adt_; }
  Adt& adt() { return adt_; }
  CounterexampleStore& store() { return store_; }
  CachingOracle& oracle() { return *oracle_; }
  const LearnerConfig& config() const { return config_; }

  // Whether the hypothesis already reproduces the recorded outputs.
  bool consistent_with(const Word& in, const Word& out) const;

  // Binary search for the split point of a currently valid counterexample.
  Decomposition decompose(const Word& ce_input);

  // One refinement step; false when the counterexample is exhausted.
  bool refine_internal(const Word& in, const Word& out);

  // Drains open_transitions, fixing outputs and sifting successors.
  void close_transitions();

  // Closes one transition (re-closing is allowed and idempotent); true iff a
  // new hypothesis state was minted.
  bool close_single(int state, int input);

  // Enqueues a counterexample for every ADT trace the hypothesis violates.
  void ensure_adt_consistency();

  // Re-sifts every access sequence; true iff each lands on its own final.
  bool check_canonicity();

  // When set, verify_against(twin) runs after every mutating step and a
  // violation raises logic_error. Intended for simulated runs only.
  void set_twin(SymbolQueryOracle* twin) { twin_ = twin; }
  void verify_tree() const;

  LearnerStats stats;
  // Accepted-form decompositions <acc(delta_H(u)), a, v>, in order.
  std::vector<Decomposition> decomposition_log;

 private:
  // Tries the reset-free OT graft (variant 1); true on success.
  bool shortcut_extend(AdtNode* leaf, int old_state, int new_state);
  // Replaces v by a strictly shorter recorded separating word if one exists.
  void shortcut_shorten(int old_state, int new_state, Word& v);
  void run_subtree_heuristic();
  void run_immediate_replacement(AdtNode* spliced);

  CachingOracle* oracle_;
  LearnerConfig config_;
  Hypothesis hyp_;
  Adt adt_;
  CounterexampleStore store_;
  SymbolQueryOracle* twin_ = nullptr;
};

}  // namespace adtl
