// Benchmark harness: single-run orchestration, learner/oracle spec strings,
// CSV emission with per-configuration summaries, and a classic (non-adaptive)
// discrimination-tree learner as the comparison baseline.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "adtl/equiv.hpp"
#include "adtl/learner.hpp"

namespace adtl {

// Per-run counters; the field order matches the CSV column order.
struct RunStats {
  uint64_t r = 0;       // unique reset queries
  uint64_t sq = 0;      // unique symbol queries
  int ce = 0;           // equivalence queries posed (incl. the final pass)
  int adt_rn = 0;       // reset nodes in the final ADT
  double adt_rr = 0;    // effective resets per leaf in the final ADT
  int adt_pr = 0, adt_pran = 0, adt_prs = 0;
  int adt_ars = 0, adt_arr = 0, adt_arp = 0, adt_ara = 0;
  int ot_e = 0, ot_s = 0;
  int siz = 0;          // final hypothesis size
  double dur_ms = 0;    // learner-side time; counterexample search excluded
  bool converged = true;  // white-box double check of the final hypothesis
};

// Spec grammar: "Baseline" or "ADT[a|b|c]" with a in {NSE, SE},
// b in {NIR, IR_x}, c in {NSR, LR_x, ER_x, SR_x}, x in {BE, ML, MS}.
struct LearnerSpec {
  std::string name;
  bool baseline = false;
  LearnerConfig config;
};

LearnerSpec parse_learner_spec(const std::string& spec);

// Oracle specs, chainable with '+': "exact", "expanded[L]", "cache",
// "random[queries,len_min,len_max]", "wp[depth]".
std::unique_ptr<EquivalenceOracle> parse_oracle_spec(
    const std::string& spec, const MealyMachine& target, CachingOracle& oracle,
    uint64_t seed);

struct RunResult {
  MealyMachine hypothesis;
  RunStats stats;
  std::string adt_dot;  // final discrimination tree; empty for the baseline
};

RunResult run_learning(const MealyMachine& target, const LearnerSpec& learner,
                       const std::string& oracle_spec, uint64_t seed);

struct BenchmarkConfig {
  int n = 10, k = 2, o = 2;        // random-machine dimensions
  std::string dot_path;            // overrides (n, k, o) when nonempty
  std::vector<uint64_t> seeds;
  std::vector<std::string> learners;
  std::string oracle = "exact";
};

extern const char* const kCsvHeader;

// One data row per (learner, seed) plus MEAN and STDDEV summary rows per
// learner. A failed cell records an error row and the sweep continues.
void run_benchmark(const BenchmarkConfig& cfg, std::ostream& out);

std::string stats_to_csv_row(const std::string& learner, uint64_t seed,
                             const RunStats& s);
std::string stats_to_json(const RunStats& s);

}  // namespace adtl
