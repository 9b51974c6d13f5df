#include "adtl/learner.hpp"

#include <algorithm>
#include <cassert>

#include "adtl/replace.hpp"

namespace adtl {

void CounterexampleStore::add(const Word& in, const Word& out) {
  pending.emplace_back(in, out);
  if (seen_.emplace(in, out).second) all_seen.emplace_back(in, out);
}

AdtLearner::AdtLearner(CachingOracle& oracle, Alphabet inputs, Alphabet outputs,
                       LearnerConfig config)
    : oracle_(&oracle), config_(config) {
  hyp_.machine = MealyMachine(std::move(inputs), std::move(outputs), 1);
}

void AdtLearner::initialize() {
  hyp_.machine = MealyMachine(hyp_.machine.inputs(), hyp_.machine.outputs(), 1);
  hyp_.access_sequences = {Word{}};
  hyp_.open_transitions.clear();
  hyp_.spanning.clear();
  adt_ = Adt();
  adt_.root()->reference = 0;
  store_ = CounterexampleStore();
  stats = LearnerStats();
  decomposition_log.clear();
  for (int i = 0; i < hyp_.machine.num_inputs(); ++i)
    hyp_.open_transitions.emplace_back(0, i);
  close_transitions();
  verify_tree();
}

bool AdtLearner::close_single(int s, int i) {
  MealyMachine& m = hyp_.machine;
  const Word as = hyp_.access_sequences[s];
  oracle_->reset();
  oracle_->query_word(as);
  int out = oracle_->query(i);
  Word w = as;
  w.push_back(i);
  AdtNode* f = sift(adt_, w, *oracle_);
  if (f->reference < 0) {
    int n = m.add_state();
    hyp_.access_sequences.push_back(w);
    f->reference = n;
    m.set_transition(s, i, n, out);
    hyp_.spanning.emplace(s, i);
    for (int j = 0; j < m.num_inputs(); ++j)
      hyp_.open_transitions.emplace_back(n, j);
    return true;
  }
  m.set_transition(s, i, f->reference, out);
  return false;
}

void AdtLearner::close_transitions() {
  while (!hyp_.open_transitions.empty()) {
    auto [s, i] = hyp_.open_transitions.front();
    hyp_.open_transitions.pop_front();
    close_single(s, i);
  }
}

bool AdtLearner::consistent_with(const Word& in, const Word& out) const {
  return hyp_.machine.run(in) == out;
}

Decomposition AdtLearner::decompose(const Word& ce) {
  const MealyMachine& m = hyp_.machine;
  Word hout = m.run(ce);
  Word sout = mq(*oracle_, ce);
  size_t p0 = 0;
  while (p0 < ce.size() && hout[p0] == sout[p0]) ++p0;
  if (p0 == ce.size()) throw NotACounterexample();
  // Outputs of defined transitions are queried from the SUL directly, so the
  // first divergence always lies past the first symbol.
  if (p0 == 0) throw NotACounterexample();

  // A(i) = last output of mq(acc(delta_H(ce_{1:i})), ce_{i+1:p}). A(0) is the
  // recorded SUL output at the divergence; A(p-1) equals the hypothesis
  // prediction there (a transition output), so the two ends always differ.
  auto a_of = [&](size_t i) {
    int st = m.step(m.initial(), Word(ce.begin(), ce.begin() + i));
    Word suffix(ce.begin() + i, ce.begin() + p0 + 1);
    Word o = mq(*oracle_, hyp_.access_sequences[st], suffix);
    return o.back();
  };
  int a_lo = sout[p0];
  size_t lo = 0, hi = p0;  // hi = p - 1 with p = p0 + 1
  if (a_lo == hout[p0]) throw NotACounterexample();
  while (hi - lo > 1) {
    size_t mid = lo + (hi - lo) / 2;
    if (a_of(mid) == a_lo)
      lo = mid;
    else
      hi = mid;
  }
  Decomposition d;
  d.u = Word(ce.begin(), ce.begin() + lo);
  d.a = ce[lo];
  d.v = Word(ce.begin() + lo + 1, ce.begin() + p0 + 1);
  d.u_state = m.step(m.initial(), d.u);
  d.old_state = m.delta(d.u_state, d.a);
  assert(!d.v.empty());
  return d;
}

bool AdtLearner::shortcut_extend(AdtNode* leaf, int old_state, int new_state) {
  const ObservationTree& tree = oracle_->tree();
  Word ti = trace(leaf).inputs;
  Word pa = hyp_.access_sequences[old_state];
  pa.insert(pa.end(), ti.begin(), ti.end());
  Word pb = hyp_.access_sequences[new_state];
  pb.insert(pb.end(), ti.begin(), ti.end());
  const ObservationTree::Node* na = tree.node_for(pa);
  const ObservationTree::Node* nb = tree.node_for(pb);
  if (!na || !nb) return false;
  auto w = ot_find_separating_word(na, nb);
  if (!w) return false;

  // Recorded outputs along w under both nodes; being shortest, the two runs
  // agree everywhere except at the last symbol.
  Word oa, ob;
  for (int in : *w) {
    oa.push_back(na->edges.at(in).first);
    na = na->edges.at(in).second.get();
    ob.push_back(nb->edges.at(in).first);
    nb = nb->edges.at(in).second.get();
  }
  assert(oa.back() != ob.back());
  std::unique_ptr<AdtNode> tail = make_symbol(w->back());
  add_child(tail.get(), oa.back(), make_final(old_state));
  add_child(tail.get(), ob.back(), make_final(new_state));
  for (size_t j = w->size() - 1; j-- > 0;) {
    auto sym = make_symbol((*w)[j]);
    add_child(sym.get(), oa[j], std::move(tail));
    tail = std::move(sym);
  }
  adt_.splice(leaf, std::move(tail));
  return true;
}

void AdtLearner::shortcut_shorten(int old_state, int new_state, Word& v) {
  const ObservationTree& tree = oracle_->tree();
  const ObservationTree::Node* na =
      tree.node_for(hyp_.access_sequences[old_state]);
  const ObservationTree::Node* nb =
      tree.node_for(hyp_.access_sequences[new_state]);
  if (!na || !nb) return;
  auto w = ot_find_separating_word(na, nb);
  if (w && w->size() < v.size()) {
    v = *w;
    ++stats.ot_s;
  }
}

bool AdtLearner::refine_internal(const Word& in, const Word& out) {
  MealyMachine& m = hyp_.machine;
  if (m.run(in) == out) return false;
  Decomposition d = decompose(in);
  int old_state = d.old_state;
  int n = m.add_state();
  Word acc_n = hyp_.access_sequences[d.u_state];
  acc_n.push_back(d.a);
  hyp_.access_sequences.push_back(acc_n);
  decomposition_log.push_back(
      {hyp_.access_sequences[d.u_state], d.a, d.v, d.u_state, old_state});

  AdtNode* leaf = adt_.find_final(old_state);
  int out_sym = m.lambda(d.u_state, d.a);
  m.set_transition(d.u_state, d.a, n, out_sym);
  hyp_.spanning.emplace(d.u_state, d.a);

  if (shortcut_extend(leaf, old_state, n)) {
    ++stats.ot_e;
  } else {
    Word v = d.v;
    shortcut_shorten(old_state, n, v);
    SplitResult sr =
        split_leaf(adt_, hyp_.access_sequences[old_state], acc_n, old_state, n,
                   v, *oracle_, config_.use_subtree_extension);
    if (config_.immediate_replacement && sr.subtree->parent &&
        sr.subtree->parent->is_reset())
      run_immediate_replacement(sr.subtree);
  }

  for (int j = 0; j < m.num_inputs(); ++j)
    hyp_.open_transitions.emplace_back(n, j);
  for (int s = 0; s < m.num_states(); ++s)
    for (int j = 0; j < m.num_inputs(); ++j)
      if (m.delta_or(s, j) == old_state) hyp_.open_transitions.emplace_back(s, j);
  close_transitions();
  verify_tree();
  return true;
}

void AdtLearner::ensure_adt_consistency() {
  const MealyMachine& m = hyp_.machine;
  for (AdtNode* f : collect_leaves(adt_.root())) {
    if (!f->is_final() || f->reference < 0) continue;
    int s = f->reference;
    for (const Trace& t : traces(f)) {
      int cur = s;
      for (size_t k = 0; k < t.inputs.size(); ++k) {
        if (m.lambda(cur, t.inputs[k]) != t.outputs[k]) {
          const Word& as = hyp_.access_sequences[s];
          Word cein = as;
          cein.insert(cein.end(), t.inputs.begin(), t.inputs.begin() + k + 1);
          Word ceout = m.run(as);
          ceout.insert(ceout.end(), t.outputs.begin(),
                       t.outputs.begin() + k + 1);
          store_.add(cein, ceout);
          break;
        }
        cur = m.delta(cur, t.inputs[k]);
      }
    }
  }
}

void AdtLearner::run_subtree_heuristic() {
  std::vector<Replacement> rs;
  switch (config_.subtree_heuristic) {
    case SubtreeHeuristic::None:
      return;
    case SubtreeHeuristic::Leveled:
      rs = heuristic_leveled(*this);
      break;
    case SubtreeHeuristic::Exhaustive:
      rs = heuristic_exhaustive(*this);
      break;
    case SubtreeHeuristic::Single:
      rs = heuristic_single(*this);
      break;
  }
  if (!rs.empty()) apply_replacements(*this, std::move(rs));
}

void AdtLearner::run_immediate_replacement(AdtNode* spliced) {
  std::unique_ptr<AdtNode> fd = heuristic_immediate(*this, spliced);
  if (!fd) return;
  std::vector<Replacement> rs;
  Replacement r;
  r.node_to_replace = spliced->parent;  // the temporary reset node
  r.replacement = std::move(fd);
  rs.push_back(std::move(r));
  apply_replacements(*this, std::move(rs));
}

bool AdtLearner::refine_hypothesis(const Word& in, const Word& out) {
  store_.add(in, out);
  if (!consistent_with(in, out)) run_subtree_heuristic();
  bool changed = false;
  while (true) {
    while (!store_.pending.empty()) {
      while (!store_.pending.empty()) {
        auto ce = store_.pending.front();
        store_.pending.pop_front();
        while (refine_internal(ce.first, ce.second)) changed = true;
      }
      ensure_adt_consistency();
    }
    bool reactivated = false;
    for (const auto& ce : store_.all_seen)
      if (!consistent_with(ce.first, ce.second)) {
        store_.pending.push_back(ce);
        reactivated = true;
      }
    if (!reactivated) break;
  }
  verify_tree();
  return changed;
}

bool AdtLearner::check_canonicity() {
  for (int s = 0; s < hyp_.machine.num_states(); ++s) {
    AdtNode* f = sift(adt_, hyp_.access_sequences[s], *oracle_);
    if (!f || f->reference != s) return false;
  }
  return true;
}

void AdtLearner::verify_tree() const {
  if (!twin_) return;
  auto access_of = [this](int s) { return hyp_.access_sequences[s]; };
  if (!verify_against(adt_, access_of, *twin_))
    throw std::logic_error("adaptive discrimination tree failed verification");
}

}  // namespace adtl
