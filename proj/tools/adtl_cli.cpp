// Command-line front end: learn a machine, run benchmark sweeps, compute
// adaptive distinguishing sequences, and verify hypotheses against targets.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "adtl/harness.hpp"
#include "json.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

adtl::MealyMachine load_machine(const std::string& path) {
  return adtl::parse_dot(read_file(path));
}

int cmd_learn(const std::string& target_path, const std::string& learner,
              const std::string& oracle, uint64_t seed,
              const std::string& emit_hyp, const std::string& emit_adt,
              const std::string& stats_path) {
  adtl::MealyMachine target = load_machine(target_path);
  adtl::LearnerSpec spec = adtl::parse_learner_spec(learner);
  adtl::RunResult r = adtl::run_learning(target, spec, oracle, seed);

  if (!emit_hyp.empty()) write_file(emit_hyp, adtl::serialize_dot(r.hypothesis));
  if (!emit_adt.empty()) {
    if (r.adt_dot.empty())
      throw std::runtime_error("the baseline learner has no ADT to emit");
    write_file(emit_adt, r.adt_dot);
  }
  if (!stats_path.empty()) {
    if (stats_path.size() > 4 &&
        stats_path.compare(stats_path.size() - 4, 4, ".csv") == 0)
      write_file(stats_path, std::string(adtl::kCsvHeader) + "\n" +
                                 adtl::stats_to_csv_row(learner, seed, r.stats) +
                                 "\n");
    else
      write_file(stats_path, adtl::stats_to_json(r.stats) + "\n");
  }
  std::cout << adtl::stats_to_json(r.stats) << "\n";
  return r.stats.converged ? 0 : 1;
}

int cmd_bench(const std::string& config_path, const std::string& out_path) {
  nlohmann::json j = nlohmann::json::parse(read_file(config_path));
  adtl::BenchmarkConfig cfg;
  cfg.n = j.value("n", cfg.n);
  cfg.k = j.value("k", cfg.k);
  cfg.o = j.value("o", cfg.o);
  cfg.dot_path = j.value("dot", std::string());
  cfg.oracle = j.value("oracle", cfg.oracle);
  if (j.contains("seeds")) {
    for (uint64_t s : j["seeds"]) cfg.seeds.push_back(s);
  } else {
    uint64_t start = j.value("seed_start", 1);
    uint64_t count = j.value("seed_count", 10);
    for (uint64_t s = 0; s < count; ++s) cfg.seeds.push_back(start + s);
  }
  for (const std::string& l : j.at("learners")) cfg.learners.push_back(l);

  if (out_path.empty()) {
    adtl::run_benchmark(cfg, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    adtl::run_benchmark(cfg, out);
  }
  return 0;
}

int cmd_ads(const std::string& target_path, const std::string& states_arg,
            const std::string& profile_arg, int64_t budget,
            const std::string& out_path) {
  adtl::MealyMachine m = load_machine(target_path);
  std::vector<int> states;
  if (states_arg.empty()) {
    for (int s = 0; s < m.num_states(); ++s) states.push_back(s);
  } else {
    std::istringstream ss(states_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) states.push_back(std::stoi(tok));
  }
  adtl::AdsProfile profile = adtl::AdsProfile::BestEffort;
  if (profile_arg == "ML")
    profile = adtl::AdsProfile::MinimalLength;
  else if (profile_arg == "MS")
    profile = adtl::AdsProfile::MinimalSize;
  else if (profile_arg != "BE")
    throw std::runtime_error("unknown profile: " + profile_arg);

  adtl::AdsResult r = adtl::compute_ads(m, states, profile, budget);
  if (!r.ok()) {
    std::cerr << (r.status == adtl::AdsStatus::None
                      ? "no adaptive distinguishing sequence exists\n"
                      : "search budget exhausted\n");
    return 1;
  }
  std::string dot = adtl::adt_to_dot(r.tree.get(), &m.inputs(), &m.outputs());
  if (out_path.empty())
    std::cout << dot;
  else
    write_file(out_path, dot);
  return 0;
}

int cmd_verify(const std::string& hyp_path, const std::string& target_path) {
  adtl::MealyMachine hyp = load_machine(hyp_path);
  adtl::MealyMachine target = load_machine(target_path);
  auto sep = adtl::separating_word(hyp, target);
  if (!sep) {
    std::cout << "equivalent\n";
    return 0;
  }
  std::cout << "inequivalent: " << adtl::word_to_string(*sep, hyp.inputs())
            << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active learning of Mealy machines with adaptive "
               "discrimination trees"};
  app.require_subcommand(1);

  std::string target, learner = "ADT[NSE|NIR|NSR]", oracle = "exact";
  std::string emit_hyp, emit_adt, stats_path, out_path;
  std::string config_path, states_arg, profile_arg = "BE", hyp_path;
  uint64_t seed = 1;
  int64_t budget = adtl::kDefaultAdsBudget;

  CLI::App* learn = app.add_subcommand("learn", "learn a target machine");
  learn->add_option("--target", target, "target machine (DOT)")->required();
  learn->add_option("--learner", learner, "learner spec, e.g. ADT[SE|IR_BE|LR_BE] or Baseline");
  learn->add_option("--oracle", oracle, "equivalence oracle spec");
  learn->add_option("--seed", seed, "run seed");
  learn->add_option("--emit-hypothesis", emit_hyp, "write final hypothesis DOT");
  learn->add_option("--emit-adt", emit_adt, "write final discrimination tree DOT");
  learn->add_option("--stats", stats_path, "write stats (.csv or .json)");

  CLI::App* bench = app.add_subcommand("bench", "run a benchmark sweep");
  bench->add_option("--config", config_path, "JSON benchmark config")->required();
  bench->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI::App* ads = app.add_subcommand(
      "ads", "compute an adaptive distinguishing sequence");
  ads->add_option("--target", target, "machine (DOT)")->required();
  ads->add_option("--states", states_arg, "comma-separated state subset");
  ads->add_option("--profile", profile_arg, "BE | ML | MS");
  ads->add_option("--budget", budget, "search budget");
  ads->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "compare two machines");
  verify->add_option("--hypothesis", hyp_path, "hypothesis (DOT)")->required();
  verify->add_option("--target", target, "target (DOT)")->required();

  try {
    app.parse(argc, argv);
    if (learn->parsed())
      return cmd_learn(target, learner, oracle, seed, emit_hyp, emit_adt,
                       stats_path);
    if (bench->parsed()) return cmd_bench(config_path, out_path);
    if (ads->parsed())
      return cmd_ads(target, states_arg, profile_arg, budget, out_path);
    if (verify->parsed()) return cmd_verify(hyp_path, target);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
