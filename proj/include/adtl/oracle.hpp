// Symbol-query oracle stack: simulated SUL, observation-tree cache with
// unique-query counters, and membership-query convenience wrappers.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>

#include "adtl/mealy.hpp"

namespace adtl {

struct QueryBeforeReset : std::runtime_error {
  QueryBeforeReset() : std::runtime_error("symbol query before first reset") {}
};

struct CacheInconsistency : std::runtime_error {
  explicit CacheInconsistency(const std::string& msg)
      : std::runtime_error("cache inconsistency (non-deterministic SUL?): " +
                           msg) {}
};

// Strictly sequential reset/symbol query interface (one in-order caller).
class SymbolQueryOracle {
 public:
  virtual ~SymbolQueryOracle() = default;
  virtual void reset() = 0;
  virtual int query(int input) = 0;

  Word query_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (int i : w) out.push_back(query(i));
    return out;
  }
};

// Membership queries as reset + symbol-query sequences.
inline Word mq(SymbolQueryOracle& o, const Word& w) {
  o.reset();
  return o.query_word(w);
}
// Outputs of v after silently executing prefix u.
inline Word mq(SymbolQueryOracle& o, const Word& u, const Word& v) {
  o.reset();
  o.query_word(u);
  return o.query_word(v);
}

class SimulatedSul : public SymbolQueryOracle {
 public:
  explicit SimulatedSul(const MealyMachine& m) : m_(&m) {
    if (!m.complete())
      throw std::invalid_argument("simulated SUL needs a complete machine");
  }
  void reset() override { cur_ = m_->initial(); }
  int query(int input) override {
    if (cur_ < 0) throw QueryBeforeReset();
    int out = m_->lambda(cur_, input);
    cur_ = m_->delta(cur_, input);
    return out;
  }

 private:
  const MealyMachine* m_;
  int cur_ = -1;
};

struct QueryCounters {
  uint64_t resets = 0;   // resets forwarded to the raw SUL
  uint64_t symbols = 0;  // symbol queries forwarded to the raw SUL
};

// Prefix tree of everything ever executed on the SUL.
class ObservationTree {
 public:
  struct Node {
    // input -> (output, child); ordered for deterministic traversal
    std::map<int, std::pair<int, std::unique_ptr<Node>>> edges;
  };

  Node* root() { return &root_; }
  const Node* root() const { return &root_; }

  const Node* node_for(const Word& w) const;

 private:
  Node root_;
};

// Shortest input word recorded under both nodes with differing output words;
// ties break toward the lower input id.
std::optional<Word> ot_find_separating_word(const ObservationTree::Node* a,
                                            const ObservationTree::Node* b);

// Transparent cache over an owned raw oracle. Runs are served from the
// observation tree while edges exist; the first miss triggers one real reset
// plus a silent replay of the current run's prefix. Only forwarded resets
// and symbols hit the counters.
class CachingOracle : public SymbolQueryOracle {
 public:
  explicit CachingOracle(std::unique_ptr<SymbolQueryOracle> inner,
                         bool strict = true)
      : inner_(std::move(inner)), strict_(strict) {}

  void reset() override {
    started_ = true;
    cur_ = tree_.root();
    prefix_.clear();
    synced_ = false;
  }

  int query(int input) override;

  const ObservationTree& tree() const { return tree_; }
  ObservationTree& tree() { return tree_; }
  const QueryCounters& counters() const { return counters_; }

 private:
  std::unique_ptr<SymbolQueryOracle> inner_;
  bool strict_;
  ObservationTree tree_;
  QueryCounters counters_;
  ObservationTree::Node* cur_ = nullptr;
  Word prefix_;          // inputs of the current run
  bool synced_ = false;  // inner_ is positioned at cur_
  bool started_ = false;
};

}  // namespace adtl
