// Python bindings: a small functional surface over DOT strings, covering
// machine utilities, ADS computation, single learning runs, and benchmarks.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "adtl/harness.hpp"

namespace py = pybind11;
using namespace adtl;

namespace {

py::dict stats_dict(const RunStats& s) {
  py::dict d;
  d["R"] = s.r;
  d["SQ"] = s.sq;
  d["CE"] = s.ce;
  d["ADT_RN"] = s.adt_rn;
  d["ADT_RR"] = s.adt_rr;
  d["ADT_PR"] = s.adt_pr;
  d["ADT_PRAN"] = s.adt_pran;
  d["ADT_PRS"] = s.adt_prs;
  d["ADT_ARS"] = s.adt_ars;
  d["ADT_ARR"] = s.adt_arr;
  d["ADT_ARP"] = s.adt_arp;
  d["ADT_ARA"] = s.adt_ara;
  d["OT_E"] = s.ot_e;
  d["OT_S"] = s.ot_s;
  d["SIZ"] = s.siz;
  d["DUR"] = s.dur_ms;
  d["CONVERGED"] = s.converged;
  return d;
}

std::vector<std::string> word_labels(const Word& w, const Alphabet& a) {
  std::vector<std::string> out;
  for (int i : w) out.push_back(a.label(i));
  return out;
}

}  // namespace

PYBIND11_MODULE(_adtl, m) {
  m.doc() = "Active learning of Mealy machines with adaptive "
            "discrimination trees";

  m.def("random_machine_dot",
        [](int n, int k, int o, uint64_t seed) {
          return serialize_dot(random_mealy(n, k, o, seed));
        },
        py::arg("num_states"), py::arg("num_inputs"), py::arg("num_outputs"),
        py::arg("seed"),
        "Seed-deterministic random complete machine as a DOT string.");

  m.def("minimize_dot",
        [](const std::string& dot) {
          return serialize_dot(minimize(parse_dot(dot)));
        },
        py::arg("dot"), "Canonical minimal machine for a DOT machine.");

  m.def("machine_size",
        [](const std::string& dot) { return parse_dot(dot).num_states(); },
        py::arg("dot"));

  m.def("separating_word_dot",
        [](const std::string& a, const std::string& b)
            -> std::optional<std::vector<std::string>> {
          MealyMachine ma = parse_dot(a), mb = parse_dot(b);
          auto w = separating_word(ma, mb);
          if (!w) return std::nullopt;
          return word_labels(*w, ma.inputs());
        },
        py::arg("dot_a"), py::arg("dot_b"),
        "Shortest separating input word, or None when equivalent.");

  m.def("compute_ads_dot",
        [](const std::string& dot, std::optional<std::vector<int>> states,
           const std::string& profile,
           int64_t budget) -> std::optional<std::string> {
          MealyMachine machine = parse_dot(dot);
          std::vector<int> targets;
          if (states) {
            targets = *states;
          } else {
            for (int s = 0; s < machine.num_states(); ++s)
              targets.push_back(s);
          }
          AdsProfile p = AdsProfile::BestEffort;
          if (profile == "ML")
            p = AdsProfile::MinimalLength;
          else if (profile == "MS")
            p = AdsProfile::MinimalSize;
          else if (profile != "BE")
            throw std::invalid_argument("unknown profile: " + profile);
          AdsResult r = compute_ads(machine, targets, p, budget);
          if (!r.ok()) return std::nullopt;
          return adt_to_dot(r.tree.get(), &machine.inputs(),
                            &machine.outputs());
        },
        py::arg("dot"), py::arg("states") = std::nullopt,
        py::arg("profile") = "BE", py::arg("budget") = kDefaultAdsBudget,
        "Adaptive distinguishing sequence as a DOT string, or None.");

  m.def("learn",
        [](const std::string& target_dot, const std::string& learner,
           const std::string& oracle, uint64_t seed) {
          MealyMachine target = parse_dot(target_dot);
          RunResult r =
              run_learning(target, parse_learner_spec(learner), oracle, seed);
          py::dict d;
          d["hypothesis"] = serialize_dot(r.hypothesis);
          d["adt"] = r.adt_dot;
          d["stats"] = stats_dict(r.stats);
          return d;
        },
        py::arg("target_dot"), py::arg("learner") = "ADT[NSE|NIR|NSR]",
        py::arg("oracle") = "exact", py::arg("seed") = 1,
        "One learning run; returns hypothesis DOT, ADT DOT, and stats.");

  m.def("benchmark_csv",
        [](int n, int k, int o, const std::vector<uint64_t>& seeds,
           const std::vector<std::string>& learners,
           const std::string& oracle) {
          BenchmarkConfig cfg;
          cfg.n = n;
          cfg.k = k;
          cfg.o = o;
          cfg.seeds = seeds;
          cfg.learners = learners;
          cfg.oracle = oracle;
          std::ostringstream out;
          run_benchmark(cfg, out);
          return out.str();
        },
        py::arg("n"), py::arg("k"), py::arg("o"), py::arg("seeds"),
        py::arg("learners"), py::arg("oracle") = "exact",
        "Benchmark sweep over seeds x learner specs; returns the CSV text.");

  m.attr("CSV_HEADER") = kCsvHeader;
}
