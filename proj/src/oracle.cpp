#include "adtl/oracle.hpp"

#include <algorithm>
#include <deque>
#include <iostream>

namespace adtl {

const ObservationTree::Node* ObservationTree::node_for(const Word& w) const {
  const Node* n = &root_;
  for (int i : w) {
    auto it = n->edges.find(i);
    if (it == n->edges.end()) return nullptr;
    n = it->second.second.get();
  }
  return n;
}

std::optional<Word> ot_find_separating_word(const ObservationTree::Node* a,
                                            const ObservationTree::Node* b) {
  if (a == nullptr || b == nullptr || a == b) return std::nullopt;
  struct Entry {
    const ObservationTree::Node *x, *y;
    int parent, input;
  };
  std::vector<Entry> entries{{a, b, -1, -1}};
  auto reconstruct = [&](int at, int last) {
    Word w{last};
    while (at >= 0 && entries[at].input >= 0) {
      w.push_back(entries[at].input);
      at = entries[at].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
  };
  for (size_t head = 0; head < entries.size(); ++head) {
    auto [x, y, parent, input] = entries[head];
    for (auto& [i, eo] : x->edges) {
      auto it = y->edges.find(i);
      if (it == y->edges.end()) continue;
      if (eo.first != it->second.first)
        return reconstruct(static_cast<int>(head), i);
      entries.push_back({eo.second.get(), it->second.second.get(),
                         static_cast<int>(head), i});
    }
  }
  return std::nullopt;
}

int CachingOracle::query(int input) {
  if (!started_) throw QueryBeforeReset();
  auto it = cur_->edges.find(input);
  if (it != cur_->edges.end()) {
    // Cache hit: zero forwarded queries; inner_ is no longer in step.
    synced_ = false;
    int out = it->second.first;
    cur_ = it->second.second.get();
    prefix_.push_back(input);
    return out;
  }
  if (!synced_) {
    inner_->reset();
    ++counters_.resets;
    ObservationTree::Node* n = tree_.root();
    for (int j : prefix_) {
      auto& edge = n->edges.at(j);
      int out = inner_->query(j);
      ++counters_.symbols;
      if (out != edge.first) {
        if (strict_)
          throw CacheInconsistency("replay of input " + std::to_string(j) +
                                   " returned " + std::to_string(out) +
                                   ", recorded " + std::to_string(edge.first));
        std::cerr << "warning: observation tree replay mismatch on input "
                  << j << "\n";
      }
      n = edge.second.get();
    }
    cur_ = n;
    synced_ = true;
  }
  int out = inner_->query(input);
  ++counters_.symbols;
  auto [ins, _] = cur_->edges.emplace(
      input, std::make_pair(out, std::make_unique<ObservationTree::Node>()));
  cur_ = ins->second.second.get();
  prefix_.push_back(input);
  return out;
}

}  // namespace adtl
