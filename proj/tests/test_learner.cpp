#include "adtl/learner.hpp"

#include <cmath>

#include "doctest.h"
#include "learnutil.hpp"
#include "testutil.hpp"

using namespace adtl;
using testutil::coffee_machine;
using testutil::learn_fully;
using testutil::RunResult;
using testutil::Stack;

TEST_CASE("initialization builds the one-state hypothesis") {
  MealyMachine m = coffee_machine();
  int button = m.inputs().id("button");
  int ok = m.outputs().id("ok"), error = m.outputs().id("error");

  Stack st(m);
  st.learner.initialize();
  const MealyMachine& h = st.learner.hypothesis();
  CHECK(h.num_states() == 1);
  CHECK(h.complete());
  for (int i = 0; i < h.num_inputs(); ++i) {
    CHECK(h.delta(0, i) == 0);
    CHECK(h.lambda(0, i) == (i == button ? error : ok));
  }
  // each input costs exactly one reset and one output-determining symbol
  CHECK(st.oracle.counters().resets == static_cast<uint64_t>(h.num_inputs()));
  CHECK(st.oracle.counters().symbols == static_cast<uint64_t>(h.num_inputs()));
  CHECK(st.learner.hyp().open_transitions.empty());
}

TEST_CASE("one-state target is learned by initialization alone") {
  Alphabet ia({"a", "b"}), oa({"0"});
  MealyMachine m(ia, oa, 1);
  m.set_transition(0, 0, 0, 0);
  m.set_transition(0, 1, 0, 0);
  Stack st(m);
  RunResult r = learn_fully(st);
  CHECK(r.valid_ces == 0);
  CHECK(r.equivalence_queries == 1);
  CHECK(st.learner.hypothesis().num_states() == 1);
}

TEST_CASE("coffee-machine run reproduces the worked decompositions") {
  MealyMachine m = coffee_machine();
  const Alphabet& in = m.inputs();
  int water = in.id("water"), pod = in.id("pod"), button = in.id("button");

  Stack st(m);
  st.learner.initialize();

  // first counterexample: button . water
  Word ce1 = {button, water};
  CHECK(!st.learner.consistent_with(ce1, m.run(ce1)));
  st.learner.refine_hypothesis(ce1, m.run(ce1));
  REQUIRE(st.learner.decomposition_log.size() == 1);
  {
    const Decomposition& d = st.learner.decomposition_log[0];
    CHECK(d.u == Word{});  // accessed state: the initial one
    CHECK(d.a == button);
    CHECK(d.v == Word{water});
  }
  const MealyMachine& h = st.learner.hypothesis();
  CHECK(h.num_states() == 2);
  CHECK(st.learner.hyp().access_sequences[1] == Word{button});
  CHECK(h.delta(0, button) == 1);
  for (int i = 0; i < h.num_inputs(); ++i) CHECK(h.delta(1, i) == 1);

  // second counterexample: two successive internal refinements
  Word ce2 = {pod, water, pod, water, button};
  st.learner.refine_hypothesis(ce2, m.run(ce2));
  REQUIRE(st.learner.decomposition_log.size() >= 3);
  {
    const Decomposition& d2 = st.learner.decomposition_log[1];
    CHECK(d2.u == Word{});
    CHECK(d2.a == pod);
    CHECK(d2.v == Word{water, button});
    const Decomposition& d3 = st.learner.decomposition_log[2];
    CHECK(d3.u == Word{pod});
    CHECK(d3.a == water);
    CHECK(d3.v == Word{button});
  }
  CHECK(st.learner.hypothesis().num_states() == 4);

  // stale counterexample: no state added
  int states = st.learner.hypothesis().num_states();
  Word ok_word = {water, pod};
  CHECK(!st.learner.refine_hypothesis(ok_word, m.run(ok_word)));
  CHECK(st.learner.hypothesis().num_states() == states);

  // drive to completion with exact counterexamples
  Stack full(m);
  RunResult r = learn_fully(full);
  CHECK(full.learner.hypothesis().num_states() == 6);
  CHECK(!separating_word(full.learner.hypothesis(), minimize(m)));
  CHECK(r.valid_ces <= 5);  // n - 1 bound
  CHECK(full.learner.check_canonicity());
}

TEST_CASE("decompose rejects non-counterexamples") {
  MealyMachine m = coffee_machine();
  Stack st(m);
  st.learner.initialize();
  Word fine = {m.inputs().id("water"), m.inputs().id("clean")};
  CHECK_THROWS_AS(st.learner.decompose(fine), NotACounterexample);
}

TEST_CASE("ensure_adt_consistency flags diverging traces") {
  MealyMachine m = coffee_machine();
  int water = m.inputs().id("water"), button = m.inputs().id("button");
  int ok = m.outputs().id("ok"), error = m.outputs().id("error");
  Stack st(m);
  st.learner.initialize();
  Word ce1 = {button, water};
  st.learner.refine_hypothesis(ce1, m.run(ce1));
  st.learner.store().pending.clear();

  // consistent hypothesis: nothing enqueued
  st.learner.ensure_adt_consistency();
  CHECK(st.learner.store().pending.empty());

  // tamper with a transition so state 1 no longer reproduces its trace
  MealyMachine& h = st.learner.hyp().machine;
  int succ = h.delta(1, water);
  h.set_transition(1, water, succ, ok);  // SUL answers error here
  st.learner.ensure_adt_consistency();
  REQUIRE(st.learner.store().pending.size() == 1);
  auto [cin, cout] = st.learner.store().pending.front();
  CHECK(cin == Word{button, water});
  CHECK(cout == Word{error, error});
  // repair and reconverge
  h.set_transition(1, water, succ, error);
  st.learner.store().pending.clear();
}

TEST_CASE("observation-tree shortcuts fire on the coffee machine") {
  MealyMachine m = coffee_machine();
  Stack st(m);
  RunResult r = learn_fully(st);
  CHECK(st.learner.hypothesis().num_states() == 6);
  // the first split always finds its discriminator in the observation tree
  // (the counterexample replay recorded the diverging continuation)
  CHECK(st.learner.stats.ot_e >= 1);
  (void)r;
}

TEST_CASE("random machines: convergence, canonicity and query bounds") {
  int runs = 0;
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    for (bool se : {false, true}) {
      int n_req = 3 + static_cast<int>(seed % 10);
      MealyMachine target = random_mealy(n_req, 3, 3, seed * 977 + 5);
      MealyMachine canon = minimize(target);
      int n = canon.num_states();
      int k = target.num_inputs();

      LearnerConfig cfg;
      cfg.use_subtree_extension = se;
      Stack st(target, cfg);
      RunResult r = learn_fully(st);
      ++runs;

      CHECK(!separating_word(st.learner.hypothesis(), canon));
      CHECK(st.learner.hypothesis().num_states() == n);
      CHECK(r.valid_ces <= n - 1 + (n == 1 ? 1 : 0));
      CHECK(st.learner.check_canonicity());

      size_t mlen = 1;
      for (auto& ce : st.learner.store().all_seen)
        mlen = std::max(mlen, ce.first.size());
      auto resets = st.oracle.counters().resets;
      auto symbols = st.oracle.counters().symbols;
      uint64_t log_m = static_cast<uint64_t>(
          std::ceil(std::log2(static_cast<double>(std::max<size_t>(mlen, 2)))));
      CHECK(resets <= static_cast<uint64_t>(k) * n * n + n * (2 + log_m) + k);
      CHECK(symbols <= 4ull * k * n * n * mlen);
    }
  }
  CHECK(runs == 50);
}

TEST_CASE("hypothesis invariants after learning") {
  MealyMachine target = random_mealy(12, 2, 2, 4242);
  Stack st(target);
  learn_fully(st);
  const Hypothesis& hyp = st.learner.hyp();
  const MealyMachine& h = hyp.machine;
  CHECK(h.complete());
  // access sequences replay to their own state and are prefix-closed
  for (int s = 0; s < h.num_states(); ++s) {
    const Word& as = hyp.access_sequences[s];
    CHECK(h.step(h.initial(), as) == s);
    if (!as.empty()) {
      Word parent(as.begin(), as.end() - 1);
      int ps = h.step(h.initial(), parent);
      bool found = false;
      for (int t = 0; t < h.num_states() && !found; ++t)
        found = hyp.access_sequences[t] == parent;
      CHECK(found);
      CHECK(hyp.spanning.count({ps, as.back()}) == 1);
    }
  }
}
