#include "adtl/replace.hpp"

#include <algorithm>

#include "doctest.h"
#include "learnutil.hpp"
#include "testutil.hpp"

using namespace adtl;
using testutil::coffee_machine;
using testutil::learn_fully;
using testutil::Stack;

namespace {

// Three states distinguished only by input b (outputs 0/1/2); input a cycles
// through them emitting 0 everywhere, so pure-a words separate nothing.
MealyMachine ambiguity_machine() {
  Alphabet ia({"a", "b"}), oa({"0", "1", "2"});
  MealyMachine m(ia, oa, 3);
  m.set_transition(0, 0, 1, 0);
  m.set_transition(0, 1, 0, 0);
  m.set_transition(1, 0, 2, 0);
  m.set_transition(1, 1, 0, 1);
  m.set_transition(2, 0, 0, 0);
  m.set_transition(2, 1, 0, 2);
  return m;
}

// First fully learned stack (seed search) whose final ADT still carries reset
// nodes and whose hypothesis admits a complete ADS.
std::unique_ptr<Stack> find_resetful_stack(bool need_full_ads) {
  for (uint64_t seed = 1; seed < 60; ++seed) {
    auto st = std::make_unique<Stack>(random_mealy(8, 2, 2, seed * 101 + 3));
    learn_fully(*st);
    if (effective_reset_count(st->learner.adt().root()) == 0) continue;
    if (need_full_ads) {
      std::vector<int> all;
      for (int s = 0; s < st->learner.hypothesis().num_states(); ++s)
        all.push_back(s);
      if (!compute_ads(st->learner.hypothesis(), all, AdsProfile::BestEffort)
               .ok())
        continue;
    }
    return st;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("rf score on the worked example tree") {
  // a{0 -> s0, 1 -> b{0 -> reset -> c{0 -> s1, 1 -> s2}}}
  auto root = make_symbol(0);
  add_child(root.get(), 0, make_final(0));
  AdtNode* b = add_child(root.get(), 1, make_symbol(1));
  auto c = make_symbol(2);
  add_child(c.get(), 0, make_final(1));
  add_child(c.get(), 1, make_final(2));
  AdtNode* reset = add_child(b, 0, make_reset(std::move(c)));
  AdtNode* cnode = reset->reset_child.get();
  CHECK(rf_score(cnode) == doctest::Approx(0.5));  // (1 + 0) / 2
  CHECK(rf_score(root.get()) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("validate accepts a perfect replacement verbatim") {
  auto st = find_resetful_stack(true);
  REQUIRE(st);
  AdtLearner& L = st->learner;
  std::vector<int> all;
  for (int s = 0; s < L.hypothesis().num_states(); ++s) all.push_back(s);
  auto ads = compute_ads(L.hypothesis(), all, AdsProfile::BestEffort);
  REQUIRE(ads.ok());

  size_t pending_before = L.store().pending.size();
  auto validated = validate(L, L.adt().root(), ads.tree.get(), {});
  CHECK(adt_to_dot(validated.get()) == adt_to_dot(ads.tree.get()));
  CHECK(count_reset_nodes(validated.get()) == 0);
  CHECK(L.store().pending.size() == pending_before);  // nothing recorded
}

TEST_CASE("validate recovers from wrong predictions via the current ADT") {
  MealyMachine m = ambiguity_machine();
  Stack st(m);
  learn_fully(st);
  AdtLearner& L = st.learner;
  REQUIRE(L.hypothesis().num_states() == 3);

  // Deliberately wrong proposal over input a only:
  //   predicted s0: <aa, 00>; s1: <aa, 01> (real 00); s2: <a, 2> (real 0).
  // s1's observed trace collides with s0's leaf; s2's observed trace stops
  // on an inner node -- the <1,a> versus <12,ab> shape.
  auto repl = make_symbol(0);
  AdtNode* mid = add_child(repl.get(), 0, make_symbol(0));
  add_child(mid, 0, make_final(0));
  add_child(mid, 1, make_final(1));
  add_child(repl.get(), 2, make_final(2));

  size_t pending_before = L.store().pending.size();
  auto validated = validate(L, L.adt().root(), repl.get(), {});
  // two mispredictions -> two recorded counterexamples
  CHECK(L.store().pending.size() == pending_before + 2);
  // every recorded pair replays on the SUL exactly
  for (auto& [cin, cout] : L.store().pending) CHECK(m.run(cin) == cout);

  validate_structure(validated.get());
  CHECK(referenced_states(validated.get()) == std::vector<int>{0, 1, 2});
  CHECK(count_reset_nodes(validated.get()) >= 1);  // ambiguity resolution
  Adt tmp(std::move(validated));
  auto access_of = [&](int s) { return L.hyp().access_sequences[s]; };
  SimulatedSul sul(m);
  CHECK(verify_against(tmp, access_of, sul));
}

TEST_CASE("validate grafts cutout states back in") {
  MealyMachine m = ambiguity_machine();
  Stack st(m);
  learn_fully(st);
  AdtLearner& L = st.learner;
  auto pair_ads = compute_ads(L.hypothesis(), {0, 1}, AdsProfile::BestEffort);
  REQUIRE(pair_ads.ok());
  auto validated = validate(L, L.adt().root(), pair_ads.tree.get(), {2});
  validate_structure(validated.get());
  CHECK(referenced_states(validated.get()) == std::vector<int>{0, 1, 2});
  Adt tmp(std::move(validated));
  auto access_of = [&](int s) { return L.hyp().access_sequences[s]; };
  SimulatedSul sul(m);
  CHECK(verify_against(tmp, access_of, sul));
}

TEST_CASE("validate rejects uncovered states") {
  MealyMachine m = ambiguity_machine();
  Stack st(m);
  learn_fully(st);
  AdtLearner& L = st.learner;
  auto pair_ads = compute_ads(L.hypothesis(), {0, 1}, AdsProfile::BestEffort);
  REQUIRE(pair_ads.ok());
  CHECK_THROWS_AS(validate(L, L.adt().root(), pair_ads.tree.get(), {}),
                  std::logic_error);
}

TEST_CASE("discard rule keeps the tree unchanged") {
  // two-state target: the learned ADT is a single symbol node (reset-free),
  // so no replacement can strictly improve it
  Alphabet ia({"a"}), oa({"0", "1"});
  MealyMachine m(ia, oa, 2);
  m.set_transition(0, 0, 1, 0);
  m.set_transition(1, 0, 1, 1);
  Stack st(m);
  learn_fully(st);
  AdtLearner& L = st.learner;
  REQUIRE(effective_reset_count(L.adt().root()) == 0);

  std::string before = adt_to_dot(L.adt().root());
  auto ads = compute_ads(L.hypothesis(), {0, 1}, AdsProfile::BestEffort);
  REQUIRE(ads.ok());
  std::vector<Replacement> rs;
  Replacement r;
  r.node_to_replace = L.adt().root();
  r.replacement = std::move(ads.tree);
  rs.push_back(std::move(r));
  apply_replacements(L, std::move(rs));
  CHECK(adt_to_dot(L.adt().root()) == before);
  CHECK(L.stats.adt_pr == 1);
  CHECK(L.stats.adt_ara == 0);
}

TEST_CASE("accepted replacement reduces resets and keeps correctness") {
  auto st = find_resetful_stack(true);
  REQUIRE(st);
  AdtLearner& L = st->learner;
  int before_eff = effective_reset_count(L.adt().root());
  REQUIRE(before_eff > 0);
  std::vector<int> all;
  for (int s = 0; s < L.hypothesis().num_states(); ++s) all.push_back(s);
  auto ads = compute_ads(L.hypothesis(), all, AdsProfile::BestEffort);
  REQUIRE(ads.ok());

  std::vector<Replacement> rs;
  Replacement r;
  r.node_to_replace = L.adt().root();
  r.replacement = std::move(ads.tree);
  rs.push_back(std::move(r));
  apply_replacements(L, std::move(rs));

  CHECK(L.stats.adt_ara == 1);
  CHECK(L.stats.adt_arp == 1);
  CHECK(effective_reset_count(L.adt().root()) < before_eff);
  CHECK(L.check_canonicity());
  CHECK(!separating_word(L.hypothesis(), st->target));
}

TEST_CASE("heuristics propose nothing for reset-free trees") {
  Alphabet ia({"a"}), oa({"0", "1"});
  MealyMachine m(ia, oa, 2);
  m.set_transition(0, 0, 1, 0);
  m.set_transition(1, 0, 1, 1);
  for (auto h : {SubtreeHeuristic::Leveled, SubtreeHeuristic::Exhaustive,
                 SubtreeHeuristic::Single}) {
    LearnerConfig cfg;
    cfg.subtree_heuristic = h;
    Stack st(m, cfg);
    learn_fully(st);
    CHECK(st.learner.stats.adt_pr == 0);
  }
}

TEST_CASE("leveled and exhaustive propose the full-machine ADS at the root") {
  auto st = find_resetful_stack(true);
  REQUIRE(st);
  AdtLearner& L = st->learner;
  {
    auto rs = heuristic_leveled(L);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].node_to_replace == L.adt().root());
    CHECK(rs[0].cutout.empty());
    CHECK(count_reset_nodes(rs[0].replacement.get()) == 0);
  }
  {
    auto rs = heuristic_exhaustive(L);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].node_to_replace == L.adt().root());
    CHECK(rs[0].cutout.empty());  // the empty cutout is enumerated first
  }
  {
    auto rs = heuristic_single(L);
    CHECK(rs.size() <= 1);
  }
}

TEST_CASE("immediate replacement learns the coffee machine") {
  MealyMachine m = coffee_machine();
  LearnerConfig cfg;
  cfg.immediate_replacement = AdsProfile::BestEffort;
  Stack st(m, cfg);
  learn_fully(st);
  CHECK(st.learner.hypothesis().num_states() == 6);
  CHECK(!separating_word(st.learner.hypothesis(), minimize(m)));
}

TEST_CASE("full configuration matrix converges on random machines") {
  struct Cfg {
    bool se;
    bool ir;
    SubtreeHeuristic h;
    AdsProfile p;
  };
  std::vector<Cfg> cfgs;
  for (bool se : {false, true})
    for (bool ir : {false, true})
      for (auto h : {SubtreeHeuristic::None, SubtreeHeuristic::Leveled,
                     SubtreeHeuristic::Exhaustive, SubtreeHeuristic::Single})
        cfgs.push_back({se, ir, h, AdsProfile::BestEffort});
  cfgs.push_back({false, false, SubtreeHeuristic::Leveled,
                  AdsProfile::MinimalLength});
  cfgs.push_back({false, false, SubtreeHeuristic::Leveled,
                  AdsProfile::MinimalSize});

  for (uint64_t seed = 1; seed <= 6; ++seed) {
    MealyMachine target = random_mealy(4 + static_cast<int>(seed), 2, 2,
                                       seed * 7919 + 11);
    MealyMachine canon = minimize(target);
    for (const Cfg& c : cfgs) {
      LearnerConfig cfg;
      cfg.use_subtree_extension = c.se;
      cfg.subtree_heuristic = c.h;
      cfg.subtree_profile = c.p;
      if (c.ir) cfg.immediate_replacement = AdsProfile::BestEffort;
      Stack st(target, cfg);
      learn_fully(st);  // twin verification runs after every mutation
      CHECK(!separating_word(st.learner.hypothesis(), canon));
      CHECK(st.learner.hypothesis().num_states() == canon.num_states());
      CHECK(st.learner.check_canonicity());
      CHECK(st.learner.stats.adt_ara <= st.learner.stats.adt_pr);
    }
  }
}
