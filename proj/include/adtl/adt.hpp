// Adaptive discrimination tree: symbol/reset/final nodes, sifting,
// leaf splitting, trace extraction, and structural statistics.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "adtl/oracle.hpp"

namespace adtl {

struct NotADiscriminator : std::runtime_error {
  NotADiscriminator()
      : std::runtime_error("suffix does not separate the two states") {}
};

struct StateNotInTree : std::runtime_error {
  explicit StateNotInTree(int s)
      : std::runtime_error("state " + std::to_string(s) +
                           " has no final node in the tree") {}
};

struct AdtNode {
  enum class Kind { Symbol, Reset, Final };
  Kind kind;
  int input = -1;      // Symbol only
  int reference = -1;  // Final only; -1 = unset
  AdtNode* parent = nullptr;
  int incoming_output = -1;  // edge label when parent is a Symbol node
  std::map<int, std::unique_ptr<AdtNode>> children;  // Symbol: output -> child
  std::unique_ptr<AdtNode> reset_child;              // Reset: single child

  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_reset() const { return kind == Kind::Reset; }
  bool is_final() const { return kind == Kind::Final; }
};

std::unique_ptr<AdtNode> make_final(int reference = -1);
std::unique_ptr<AdtNode> make_symbol(int input);
std::unique_ptr<AdtNode> make_reset(std::unique_ptr<AdtNode> child);
// Attaches child under a symbol node's output edge (sets parent/incoming).
AdtNode* add_child(AdtNode* symbol, int output, std::unique_ptr<AdtNode> child);
std::unique_ptr<AdtNode> clone(const AdtNode* n);

struct Trace {
  Word inputs, outputs;
  bool operator==(const Trace& o) const {
    return inputs == o.inputs && outputs == o.outputs;
  }
};

// Ancestors of n from its parent up to the root (empty for the root).
std::vector<const AdtNode*> path(const AdtNode* n);

// Input/output segment since the nearest Reset (or the root) strictly above n.
Trace trace(const AdtNode* n);
// All such segments along the whole path, leaf-most segment first.
std::vector<Trace> traces(const AdtNode* n);

// Owner of one discrimination tree.
class Adt {
 public:
  Adt() : root_(make_final()) {}
  explicit Adt(std::unique_ptr<AdtNode> root) : root_(std::move(root)) {}

  AdtNode* root() { return root_.get(); }
  const AdtNode* root() const { return root_.get(); }

  AdtNode* find_final(int state) const;  // nullptr if absent

  // Replaces `target` (which must live in this tree) with `repl`, fixing
  // parent pointers and the incoming edge label. Returns the new node.
  AdtNode* splice(AdtNode* target, std::unique_ptr<AdtNode> repl);

  std::unique_ptr<AdtNode> release_root() { return std::move(root_); }

 private:
  std::unique_ptr<AdtNode>& slot_of(AdtNode* n);
  std::unique_ptr<AdtNode> root_;
};

// Walks the tree from the root, replaying `access` after each (implicit or
// explicit) reset and querying symbol-node inputs. Returns the reached Final
// node, creating an unreferenced one when an output edge is missing.
AdtNode* sift(Adt& adt, const Word& access, SymbolQueryOracle& o);

struct SplitResult {
  AdtNode* subtree;  // root of the freshly grafted chain, inside the tree
  bool extended;     // grafted without a reset via the parent-trace prefix
};

// Splits the Final node referencing old_state with discriminator v.
SplitResult split_leaf(Adt& adt, const Word& acc_old, const Word& acc_new,
                       int old_state, int new_state, const Word& v,
                       SymbolQueryOracle& o, bool extend);

// Sum over leaves below n of the Reset nodes crossed within n's subtree
// (n itself included when it is a Reset node).
int effective_reset_count(const AdtNode* n);

std::vector<AdtNode*> collect_leaves(AdtNode* n);
std::vector<const AdtNode*> collect_leaves(const AdtNode* n);
std::vector<AdtNode*> collect_reset_nodes(AdtNode* n);
// Children of Reset nodes: roots of nested sub-ADTs. immediate_only restricts
// to resets reachable from n without crossing another reset.
std::vector<AdtNode*> collect_sub_adts(AdtNode* n, bool immediate_only = false);
// Lowest common ancestor (always a Symbol node) of two states' finals.
AdtNode* find_lca(const Adt& adt, int s1, int s2);

// States referenced by finals below n, ascending, unset references skipped.
std::vector<int> referenced_states(const AdtNode* n);

// Symbol-node count below (and including) n.
int count_symbol_nodes(const AdtNode* n);
// Reset-node count below (and including) n.
int count_reset_nodes(const AdtNode* n);

// Throws std::logic_error when the tree violates well-formedness: single-node
// trees are Final, multi-node roots are Symbol, symbol nodes have >= 1 child,
// every leaf is Final, references are unique, parent/edge links consistent.
void validate_structure(const AdtNode* root);

// Verified-tree property: for every final referencing s and every segment
// (i, o) of its traces, the SUL answers mq(acc(s), i) = o.
bool verify_against(const Adt& adt, const std::function<Word(int)>& access_of,
                    SymbolQueryOracle& o);

std::string adt_to_dot(const AdtNode* root, const Alphabet* inputs = nullptr,
                       const Alphabet* outputs = nullptr);

}  // namespace adtl
