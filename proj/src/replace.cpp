#include "adtl/replace.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace adtl {

namespace {

// Linear tree for one observed trace: sym(in_0) -out_0-> ... -> Final(ref).
std::unique_ptr<AdtNode> build_chain(const Word& in, const Word& out, int ref,
                                     size_t from = 0) {
  assert(from < in.size());
  std::unique_ptr<AdtNode> tail = make_final(ref);
  for (size_t j = in.size(); j-- > from;) {
    auto sym = make_symbol(in[j]);
    add_child(sym.get(), out[j], std::move(tail));
    tail = std::move(sym);
  }
  return tail;
}

// Merges an observed trace into the tree along a shared input spine,
// branching at the first output divergence. Fails on input mismatches, on
// reset nodes, and when one trace exhausts within the other.
bool merge_trace(AdtNode* root, const Word& in, const Word& out, int ref) {
  AdtNode* cur = root;
  for (size_t j = 0; j < in.size(); ++j) {
    if (!cur->is_symbol() || cur->input != in[j]) return false;
    auto it = cur->children.find(out[j]);
    if (it == cur->children.end()) {
      if (j + 1 == in.size())
        add_child(cur, out[j], make_final(ref));
      else
        add_child(cur, out[j], build_chain(in, out, ref, j + 1));
      return true;
    }
    if (j + 1 == in.size()) return false;  // leaf coincides with inner node
    cur = it->second.get();
  }
  return false;
}

}  // namespace

void resolve_ambiguities(AdtLearner& learner, AdtNode* ntr, Adt& repl, int s) {
  SymbolQueryOracle& oracle = learner.oracle();
  const Word& as = learner.hyp().access_sequences[s];
  Trace pt = trace(ntr);
  oracle.reset();
  oracle.query_word(as);
  oracle.query_word(pt.inputs);
  AdtNode* cur = repl.root();
  while (true) {
    if (cur->is_reset()) {
      // A reset drops the parent-trace obligation: classify from acc(s) only.
      oracle.reset();
      oracle.query_word(as);
      cur = cur->reset_child.get();
      continue;
    }
    if (cur->is_final()) break;
    int o = oracle.query(cur->input);
    auto it = cur->children.find(o);
    if (it == cur->children.end()) {
      add_child(cur, o, make_final(s));
      return;
    }
    cur = it->second.get();
  }
  if (cur->reference == s) return;
  if (cur->reference < 0) {
    cur->reference = s;
    return;
  }
  int other = cur->reference;
  AdtNode* lca = find_lca(learner.adt(), other, s);
  Word d = trace(lca).inputs;
  d.push_back(lca->input);
  split_leaf(repl, learner.hyp().access_sequences[other], as, other, s, d,
             oracle, false);
}

std::unique_ptr<AdtNode> validate(AdtLearner& learner, AdtNode* ntr,
                                  const AdtNode* repl,
                                  const std::vector<int>& cutout) {
  SymbolQueryOracle& oracle = learner.oracle();
  const Hypothesis& hyp = learner.hyp();
  Trace pt = trace(ntr);

  {
    std::vector<int> covered = referenced_states(repl);
    covered.insert(covered.end(), cutout.begin(), cutout.end());
    std::sort(covered.begin(), covered.end());
    for (int s : referenced_states(ntr))
      if (!std::binary_search(covered.begin(), covered.end(), s))
        throw std::logic_error("replacement does not cover state " +
                               std::to_string(s));
  }

  std::unique_ptr<AdtNode> result;
  for (const AdtNode* f : collect_leaves(repl)) {
    Trace tr = trace(f);
    int s = f->reference;
    const Word& as = hyp.access_sequences[s];
    oracle.reset();
    oracle.query_word(as);
    oracle.query_word(pt.inputs);
    Word obs;
    bool equal = true;
    size_t k = 0;
    while (k < tr.inputs.size()) {
      int o = oracle.query(tr.inputs[k]);
      obs.push_back(o);
      ++k;
      if (o != tr.outputs[k - 1]) {
        equal = false;
        break;
      }
    }
    Word in_tr(tr.inputs.begin(), tr.inputs.begin() + k);
    if (!equal) {
      Word cein = as;
      cein.insert(cein.end(), pt.inputs.begin(), pt.inputs.end());
      cein.insert(cein.end(), in_tr.begin(), in_tr.end());
      Word ceout = hyp.machine.run(as);
      ceout.insert(ceout.end(), pt.outputs.begin(), pt.outputs.end());
      ceout.insert(ceout.end(), obs.begin(), obs.end());
      learner.store().add(cein, ceout);
    }
    if (!result) {
      result = build_chain(in_tr, obs, s);
    } else if (!merge_trace(result.get(), in_tr, obs, s)) {
      Adt tmp(std::move(result));
      resolve_ambiguities(learner, ntr, tmp, s);
      result = tmp.release_root();
    }
  }
  std::vector<int> co = cutout;
  std::sort(co.begin(), co.end());
  for (int s : co) {
    Adt tmp(std::move(result));
    resolve_ambiguities(learner, ntr, tmp, s);
    result = tmp.release_root();
  }
  return result;
}

void apply_replacements(AdtLearner& learner, std::vector<Replacement> rs) {
  Hypothesis& hyp = learner.hyp();
  std::vector<AdtNode*> accepted;
  for (Replacement& r : rs) {
    ++learner.stats.adt_pr;
    learner.stats.adt_pran += collect_leaves(r.replacement.get()).size();
    learner.stats.adt_prs += count_symbol_nodes(r.replacement.get());
    int orig_eff = effective_reset_count(r.node_to_replace);
    auto validated = validate(learner, r.node_to_replace, r.replacement.get(),
                              r.cutout);
    if (effective_reset_count(validated.get()) >= orig_eff) continue;
    ++learner.stats.adt_ara;
    learner.stats.adt_ars += count_symbol_nodes(validated.get());
    int resets = count_reset_nodes(validated.get());
    learner.stats.adt_arr += resets;
    if (resets == 0) ++learner.stats.adt_arp;
    accepted.push_back(
        learner.adt().splice(r.node_to_replace, std::move(validated)));
  }
  if (accepted.empty()) return;
  const MealyMachine& m = hyp.machine;
  for (AdtNode* n : accepted) {
    std::vector<int> refs = referenced_states(n);
    for (int s = 0; s < m.num_states(); ++s)
      for (int i = 0; i < m.num_inputs(); ++i)
        if (std::binary_search(refs.begin(), refs.end(), m.delta_or(s, i)))
          hyp.open_transitions.emplace_back(s, i);
  }
  learner.close_transitions();
  learner.verify_tree();
}

std::unique_ptr<AdtNode> compute_adt_extension(AdtLearner& learner,
                                               AdtNode* node) {
  if (!node->parent || !node->parent->is_reset()) return nullptr;
  const MealyMachine& m = learner.hyp().machine;
  std::vector<int> targets = referenced_states(node);
  Trace pt = trace(node->parent);

  std::vector<int> cur = targets;
  for (int in : pt.inputs) {
    for (int& s : cur) {
      if (!m.defined(s, in)) return nullptr;
      s = m.delta(s, in);
    }
    std::vector<int> sorted = cur;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      return nullptr;  // converging states
  }
  std::map<int, int> mapping;  // current -> initial
  for (size_t j = 0; j < targets.size(); ++j) mapping[cur[j]] = targets[j];

  AdsResult r = compute_ads(m, cur, learner.config().subtree_profile,
                            learner.config().ads_budget);
  if (!r.ok()) return nullptr;
  for (AdtNode* l : collect_leaves(r.tree.get()))
    l->reference = mapping.at(l->reference);
  return std::move(r.tree);
}

std::vector<Replacement> heuristic_leveled(AdtLearner& learner) {
  std::vector<Replacement> result;
  std::deque<AdtNode*> queue{learner.adt().root()};
  while (!queue.empty()) {
    AdtNode* node = queue.front();
    queue.pop_front();
    if (auto ext = compute_adt_extension(learner, node)) {
      Replacement r;
      r.node_to_replace = node->parent;
      r.replacement = std::move(ext);
      result.push_back(std::move(r));
      continue;
    }
    if (collect_reset_nodes(node).empty()) continue;
    AdsResult ads =
        compute_ads(learner.hyp().machine, referenced_states(node),
                    learner.config().subtree_profile, learner.config().ads_budget);
    if (ads.ok()) {
      Replacement r;
      r.node_to_replace = node;
      r.replacement = std::move(ads.tree);
      result.push_back(std::move(r));
    } else {
      for (AdtNode* sub : collect_sub_adts(node, /*immediate_only=*/true))
        queue.push_back(sub);
    }
  }
  return result;
}

std::vector<Replacement> heuristic_exhaustive(AdtLearner& learner) {
  Adt& adt = learner.adt();
  if (collect_reset_nodes(adt.root()).empty()) return {};
  const MealyMachine& m = learner.hyp().machine;

  std::vector<std::vector<int>> cutouts{{}};
  for (AdtNode* sub : collect_sub_adts(adt.root()))
    cutouts.push_back(referenced_states(sub));
  std::stable_sort(cutouts.begin(), cutouts.end(),
                   [](const auto& a, const auto& b) {
                     return a.size() < b.size();
                   });

  for (auto& c : cutouts) {
    std::vector<int> targets;
    for (int s = 0; s < m.num_states(); ++s)
      if (!std::binary_search(c.begin(), c.end(), s)) targets.push_back(s);
    if (targets.size() < 2) continue;
    AdsResult ads = compute_ads(m, targets, learner.config().subtree_profile,
                                learner.config().ads_budget);
    if (ads.ok()) {
      Replacement r;
      r.node_to_replace = adt.root();
      r.replacement = std::move(ads.tree);
      r.cutout = std::move(c);
      std::vector<Replacement> result;
      result.push_back(std::move(r));
      return result;
    }
  }
  return {};
}

double rf_score(const AdtNode* n) {
  return (1.0 + count_reset_nodes(n)) /
         static_cast<double>(collect_leaves(n).size());
}

std::vector<Replacement> heuristic_single(AdtLearner& learner) {
  Adt& adt = learner.adt();
  std::vector<AdtNode*> subs = collect_sub_adts(adt.root());
  std::stable_sort(subs.begin(), subs.end(), [](AdtNode* a, AdtNode* b) {
    return rf_score(a) > rf_score(b);
  });
  for (AdtNode* st : subs) {
    if (auto ext = compute_adt_extension(learner, st)) {
      Replacement r;
      r.node_to_replace = st->parent;
      r.replacement = std::move(ext);
      std::vector<Replacement> result;
      result.push_back(std::move(r));
      return result;
    }
    if (collect_reset_nodes(st).empty()) continue;
    AdsResult ads =
        compute_ads(learner.hyp().machine, referenced_states(st),
                    learner.config().subtree_profile, learner.config().ads_budget);
    if (ads.ok()) {
      Replacement r;
      r.node_to_replace = st;
      r.replacement = std::move(ads.tree);
      std::vector<Replacement> result;
      result.push_back(std::move(r));
      return result;
    }
  }
  return {};
}

std::unique_ptr<AdtNode> heuristic_immediate(AdtLearner& learner,
                                             AdtNode* temp_discr) {
  if (!temp_discr->parent || !temp_discr->parent->is_reset()) return nullptr;
  MealyMachine& m = learner.hyp().machine;
  auto close_or_signal = [&](int s, int i) {
    if (learner.close_single(s, i)) throw ModificationSignal{};
  };
  while (true) {
    try {
      Trace pt = trace(temp_discr->parent);
      std::map<int, int> mapping;  // current -> initial
      for (int s : referenced_states(temp_discr)) mapping[s] = s;
      bool aborted = false;
      for (size_t k = 0; k < pt.inputs.size() && !aborted; ++k) {
        int in = pt.inputs[k];
        std::map<int, int> next;
        for (auto [s, init] : mapping) {
          if (!m.defined(s, in)) close_or_signal(s, in);
          if (m.lambda(s, in) != pt.outputs[k]) {
            // The refined hypothesis no longer reproduces the parent trace:
            // record the divergence as a counterexample and keep the
            // temporary discriminator.
            const Word& as = learner.hyp().access_sequences[init];
            Word cein = as;
            cein.insert(cein.end(), pt.inputs.begin(),
                        pt.inputs.begin() + k + 1);
            Word ceout = m.run(as);
            ceout.insert(ceout.end(), pt.outputs.begin(),
                         pt.outputs.begin() + k + 1);
            learner.store().add(cein, ceout);
            return nullptr;
          }
          int succ = m.delta(s, in);
          if (next.count(succ)) {
            aborted = true;  // converging states
            break;
          }
          next[succ] = init;
        }
        mapping = std::move(next);
      }
      if (aborted) return nullptr;
      std::vector<int> targets;
      for (auto& [s, init] : mapping) targets.push_back(s);
      AdsResult r =
          compute_defensive_ads(m, targets, close_or_signal,
                                *learner.config().immediate_replacement,
                                learner.config().ads_budget);
      if (!r.ok()) return nullptr;
      for (AdtNode* l : collect_leaves(r.tree.get()))
        l->reference = mapping.at(l->reference);
      return std::move(r.tree);
    } catch (const ModificationSignal&) {
      continue;  // a new state appeared; restart on the grown hypothesis
    }
  }
}

}  // namespace adtl
