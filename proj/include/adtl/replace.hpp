// Discriminator replacement framework: validation against the SUL, ambiguity
// resolution, splice + re-sift bookkeeping, and the leveled / exhaustive /
// single / immediate replacement heuristics.
#pragma once

#include "adtl/learner.hpp"

namespace adtl {

struct Replacement {
  AdtNode* node_to_replace = nullptr;      // lives in the learner's ADT
  std::unique_ptr<AdtNode> replacement;    // proposed (reset-free) ADS
  std::vector<int> cutout;                 // states left to the existing ADT
};

// Re-queries every leaf trace of repl on the SUL, recording counterexamples
// for mismatches, merging the observed traces into one tree and resolving
// collisions (and cutout states) through the existing ADT. The returned tree
// is verified and covers every state referenced under ntr.
std::unique_ptr<AdtNode> validate(AdtLearner& learner, AdtNode* ntr,
                                  const AdtNode* repl,
                                  const std::vector<int>& cutout);

// Places state s into repl by a live sift (resets drop the parent-trace
// obligation); collisions are split with the LCA discriminator taken from the
// learner's current ADT.
void resolve_ambiguities(AdtLearner& learner, AdtNode* ntr, Adt& repl, int s);

// Validates each proposal, discards those whose effective reset count did not
// strictly decrease, splices the rest, then re-sifts every transition leading
// into an affected state. Updates the learner's replacement statistics.
void apply_replacements(AdtLearner& learner, std::vector<Replacement> rs);

std::vector<Replacement> heuristic_leveled(AdtLearner& learner);
std::vector<Replacement> heuristic_exhaustive(AdtLearner& learner);
std::vector<Replacement> heuristic_single(AdtLearner& learner);

// Reset-free continuation of the parent-trace ADS for the states referenced
// under node (a sub-ADT root); nullptr when node is the root, when leaf
// states converge along the parent trace, or when no ADS exists.
std::unique_ptr<AdtNode> compute_adt_extension(AdtLearner& learner,
                                               AdtNode* node);

// Immediate replacement (restartable): replays the parent trace over the
// current leaf states of temp_discr, closing open transitions on demand with
// the temporary discriminator, then defensively computes an extension ADS.
// Returns nullptr when the temporary discriminator has to be kept.
std::unique_ptr<AdtNode> heuristic_immediate(AdtLearner& learner,
                                             AdtNode* temp_discr);

// rf score used by heuristic_single: (1 + reset nodes) / leaves.
double rf_score(const AdtNode* n);

}  // namespace adtl
