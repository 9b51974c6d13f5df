#include "adtl/harness.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace adtl {

namespace {

AdsProfile parse_profile(const std::string& s) {
  if (s == "BE") return AdsProfile::BestEffort;
  if (s == "ML") return AdsProfile::MinimalLength;
  if (s == "MS") return AdsProfile::MinimalSize;
  throw std::invalid_argument("unknown ADS profile: " + s);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// "name" or "name[a1,a2,...]"
std::pair<std::string, std::vector<uint64_t>> parse_call(const std::string& s) {
  auto open = s.find('[');
  if (open == std::string::npos) return {s, {}};
  if (s.back() != ']')
    throw std::invalid_argument("unbalanced brackets in spec: " + s);
  std::vector<uint64_t> args;
  for (const std::string& a : split(s.substr(open + 1, s.size() - open - 2), ','))
    args.push_back(std::stoull(a));
  return {s.substr(0, open), args};
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Classic non-adaptive discrimination tree: every inner node holds one input
// suffix, children are keyed by the full output word of a fresh membership
// query (reset + access sequence + suffix).
struct DtNode {
  Word suffix;
  std::map<Word, std::unique_ptr<DtNode>> children;
  int reference = -1;
  bool leaf = true;
};

class BaselineLearner {
 public:
  explicit BaselineLearner(CachingOracle& oracle, Alphabet inputs,
                           Alphabet outputs)
      : oracle_(&oracle),
        hyp_(std::move(inputs), std::move(outputs), 1),
        root_(std::make_unique<DtNode>()) {}

  void initialize() {
    root_->reference = 0;
    acc_ = {Word{}};
    for (int i = 0; i < hyp_.num_inputs(); ++i) open_.emplace_back(0, i);
    close_transitions();
  }

  const MealyMachine& hypothesis() const { return hyp_; }

  bool refine(const Word& in, const Word& out) {
    bool changed = false;
    while (hyp_.run(in) != out) {
      split(in);
      changed = true;
    }
    return changed;
  }

 private:
  DtNode* sift(const Word& u) {
    DtNode* node = root_.get();
    while (!node->leaf) {
      Word o = mq(*oracle_, u, node->suffix);
      auto& child = node->children[o];
      if (!child) child = std::make_unique<DtNode>();
      node = child.get();
    }
    return node;
  }

  void close_transitions() {
    while (!open_.empty()) {
      auto [s, i] = open_.front();
      open_.pop_front();
      Word w = acc_[s];
      w.push_back(i);
      int out = mq(*oracle_, w).back();
      DtNode* f = sift(w);
      if (f->reference < 0) {
        int n = hyp_.add_state();
        acc_.push_back(w);
        f->reference = n;
        leaf_of_[n] = f;
        hyp_.set_transition(s, i, n, out);
        for (int j = 0; j < hyp_.num_inputs(); ++j) open_.emplace_back(n, j);
      } else {
        hyp_.set_transition(s, i, f->reference, out);
      }
    }
  }

  void split(const Word& ce) {
    Word hout = hyp_.run(ce);
    Word sout = mq(*oracle_, ce);
    size_t p0 = 0;
    while (p0 < ce.size() && hout[p0] == sout[p0]) ++p0;
    if (p0 == 0 || p0 == ce.size())
      throw std::logic_error("baseline: not a counterexample");
    auto a_of = [&](size_t i) {
      int st = hyp_.step(hyp_.initial(), Word(ce.begin(), ce.begin() + i));
      return mq(*oracle_, acc_[st], Word(ce.begin() + i, ce.begin() + p0 + 1))
          .back();
    };
    int a_lo = sout[p0];
    size_t lo = 0, hi = p0;
    while (hi - lo > 1) {
      size_t mid = lo + (hi - lo) / 2;
      if (a_of(mid) == a_lo)
        lo = mid;
      else
        hi = mid;
    }
    int u_state = hyp_.step(hyp_.initial(), Word(ce.begin(), ce.begin() + lo));
    int a = ce[lo];
    Word v(ce.begin() + lo + 1, ce.begin() + p0 + 1);
    int old_state = hyp_.delta(u_state, a);

    int n = hyp_.add_state();
    Word acc_n = acc_[u_state];
    acc_n.push_back(a);
    acc_.push_back(acc_n);
    hyp_.set_transition(u_state, a, n, hyp_.lambda(u_state, a));

    DtNode* leaf = leaf_of_.count(old_state) ? leaf_of_[old_state] : root_.get();
    leaf->leaf = false;
    leaf->suffix = v;
    leaf->reference = -1;
    auto add = [&](int state, const Word& acc) {
      auto& child = leaf->children[mq(*oracle_, acc, v)];
      child = std::make_unique<DtNode>();
      child->reference = state;
      leaf_of_[state] = child.get();
    };
    add(old_state, acc_[old_state]);
    add(n, acc_n);
    if (leaf->children.size() != 2)
      throw std::logic_error("baseline: discriminator failed to separate");

    for (int j = 0; j < hyp_.num_inputs(); ++j) open_.emplace_back(n, j);
    for (int s = 0; s < hyp_.num_states(); ++s)
      for (int j = 0; j < hyp_.num_inputs(); ++j)
        if (hyp_.delta_or(s, j) == old_state) open_.emplace_back(s, j);
    close_transitions();
  }

  CachingOracle* oracle_;
  MealyMachine hyp_;
  std::vector<Word> acc_;
  std::deque<std::pair<int, int>> open_;
  std::unique_ptr<DtNode> root_;
  std::map<int, DtNode*> leaf_of_;
};

}  // namespace

LearnerSpec parse_learner_spec(const std::string& spec) {
  LearnerSpec out;
  out.name = spec;
  if (spec == "Baseline") {
    out.baseline = true;
    return out;
  }
  if (spec.rfind("ADT[", 0) != 0 || spec.back() != ']')
    throw std::invalid_argument("bad learner spec: " + spec);
  std::vector<std::string> parts =
      split(spec.substr(4, spec.size() - 5), '|');
  if (parts.size() != 3)
    throw std::invalid_argument("bad learner spec: " + spec);

  if (parts[0] == "SE")
    out.config.use_subtree_extension = true;
  else if (parts[0] != "NSE")
    throw std::invalid_argument("bad learner spec: " + spec);

  if (parts[1] != "NIR") {
    if (parts[1].rfind("IR_", 0) != 0)
      throw std::invalid_argument("bad learner spec: " + spec);
    out.config.immediate_replacement = parse_profile(parts[1].substr(3));
  }

  if (parts[2] != "NSR") {
    if (parts[2].size() < 4 || parts[2][2] != '_')
      throw std::invalid_argument("bad learner spec: " + spec);
    std::string kind = parts[2].substr(0, 2);
    out.config.subtree_profile = parse_profile(parts[2].substr(3));
    if (kind == "LR")
      out.config.subtree_heuristic = SubtreeHeuristic::Leveled;
    else if (kind == "ER")
      out.config.subtree_heuristic = SubtreeHeuristic::Exhaustive;
    else if (kind == "SR")
      out.config.subtree_heuristic = SubtreeHeuristic::Single;
    else
      throw std::invalid_argument("bad learner spec: " + spec);
  }
  return out;
}

std::unique_ptr<EquivalenceOracle> parse_oracle_spec(const std::string& spec,
                                                     const MealyMachine& target,
                                                     CachingOracle& oracle,
                                                     uint64_t seed) {
  std::vector<std::unique_ptr<EquivalenceOracle>> members;
  for (const std::string& part : split(spec, '+')) {
    auto [name, args] = parse_call(part);
    if (name == "exact") {
      members.push_back(std::make_unique<ExactOracle>(target));
    } else if (name == "expanded") {
      members.push_back(std::make_unique<ExpandedOracle>(
          target, args.empty() ? 500 : args[0]));
    } else if (name == "cache") {
      members.push_back(std::make_unique<CacheSweepOracle>(oracle));
    } else if (name == "random") {
      int q = args.size() > 0 ? static_cast<int>(args[0]) : 200;
      size_t lmin = args.size() > 1 ? args[1] : 20;
      size_t lmax = args.size() > 2 ? args[2] : 400;
      members.push_back(
          std::make_unique<RandomWordOracle>(oracle, q, lmin, lmax, seed));
    } else if (name == "wp") {
      members.push_back(std::make_unique<WpMethodOracle>(
          oracle, args.empty() ? 1 : static_cast<int>(args[0])));
    } else {
      throw std::invalid_argument("unknown oracle spec: " + part);
    }
  }
  if (members.empty()) throw std::invalid_argument("empty oracle spec");
  if (members.size() == 1) return std::move(members.front());
  auto chain = std::make_unique<ChainOracle>();
  for (auto& m : members) chain->add(std::move(m));
  return chain;
}

RunResult run_learning(const MealyMachine& target, const LearnerSpec& learner,
                       const std::string& oracle_spec, uint64_t seed) {
  CachingOracle oracle(std::make_unique<SimulatedSul>(target));
  auto eq = parse_oracle_spec(oracle_spec, target, oracle, seed);

  RunResult res;
  RunStats& st = res.stats;
  double dur_ns = 0;
  auto timed = [&](auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    dur_ns += std::chrono::duration<double, std::nano>(t1 - t0).count();
  };

  if (learner.baseline) {
    BaselineLearner bl(oracle, target.inputs(), target.outputs());
    timed([&] { bl.initialize(); });
    while (true) {
      ++st.ce;
      auto ce = eq->find_counterexample(bl.hypothesis());
      if (!ce) break;
      timed([&] { bl.refine(ce->first, ce->second); });
    }
    res.hypothesis = bl.hypothesis();
  } else {
    AdtLearner al(oracle, target.inputs(), target.outputs(), learner.config);
    timed([&] { al.initialize(); });
    while (true) {
      ++st.ce;
      auto ce = eq->find_counterexample(al.hypothesis());
      if (!ce) break;
      timed([&] { al.refine_hypothesis(ce->first, ce->second); });
    }
    res.hypothesis = al.hypothesis();
    const LearnerStats& ls = al.stats;
    st.adt_pr = ls.adt_pr;
    st.adt_pran = ls.adt_pran;
    st.adt_prs = ls.adt_prs;
    st.adt_ars = ls.adt_ars;
    st.adt_arr = ls.adt_arr;
    st.adt_arp = ls.adt_arp;
    st.adt_ara = ls.adt_ara;
    st.ot_e = ls.ot_e;
    st.ot_s = ls.ot_s;
    const AdtNode* root = al.adt().root();
    st.adt_rn = count_reset_nodes(root);
    size_t leaves = referenced_states(root).size();
    st.adt_rr = leaves ? effective_reset_count(root) / double(leaves) : 0.0;
    res.adt_dot = adt_to_dot(root, &target.inputs(), &target.outputs());
  }

  st.r = oracle.counters().resets;
  st.sq = oracle.counters().symbols;
  st.siz = res.hypothesis.num_states();
  st.dur_ms = dur_ns / 1e6;
  st.converged = !separating_word(res.hypothesis, target).has_value();
  return res;
}

const char* const kCsvHeader =
    "LEARNER,SEED,CONVERGED,R,SQ,CE,ADT_RN,ADT_RR,ADT_PR,ADT_PRAN,ADT_PRS,"
    "ADT_ARS,ADT_ARR,ADT_ARP,ADT_ARA,OT_E,OT_S,SIZ,DUR";

std::string stats_to_csv_row(const std::string& learner, uint64_t seed,
                             const RunStats& s) {
  std::ostringstream os;
  os << learner << ',' << seed << ',' << (s.converged ? "true" : "false") << ','
     << s.r << ',' << s.sq << ',' << s.ce << ',' << s.adt_rn << ','
     << fmt(s.adt_rr) << ',' << s.adt_pr << ',' << s.adt_pran << ','
     << s.adt_prs << ',' << s.adt_ars << ',' << s.adt_arr << ',' << s.adt_arp
     << ',' << s.adt_ara << ',' << s.ot_e << ',' << s.ot_s << ',' << s.siz
     << ',' << fmt(s.dur_ms);
  return os.str();
}

std::string stats_to_json(const RunStats& s) {
  std::ostringstream os;
  os << "{\"R\":" << s.r << ",\"SQ\":" << s.sq << ",\"CE\":" << s.ce
     << ",\"ADT_RN\":" << s.adt_rn << ",\"ADT_RR\":" << fmt(s.adt_rr)
     << ",\"ADT_PR\":" << s.adt_pr << ",\"ADT_PRAN\":" << s.adt_pran
     << ",\"ADT_PRS\":" << s.adt_prs << ",\"ADT_ARS\":" << s.adt_ars
     << ",\"ADT_ARR\":" << s.adt_arr << ",\"ADT_ARP\":" << s.adt_arp
     << ",\"ADT_ARA\":" << s.adt_ara << ",\"OT_E\":" << s.ot_e
     << ",\"OT_S\":" << s.ot_s << ",\"SIZ\":" << s.siz
     << ",\"DUR\":" << fmt(s.dur_ms)
     << ",\"CONVERGED\":" << (s.converged ? "true" : "false") << "}";
  return os.str();
}

void run_benchmark(const BenchmarkConfig& cfg, std::ostream& out) {
  if (cfg.seeds.empty() || cfg.learners.empty())
    throw std::invalid_argument("benchmark needs seeds and learner configs");
  out << kCsvHeader << '\n';
  for (const std::string& name : cfg.learners) {
    LearnerSpec spec = parse_learner_spec(name);
    std::vector<std::vector<double>> cols(16);
    int converged = 0, ok_runs = 0;
    for (uint64_t seed : cfg.seeds) {
      try {
        MealyMachine target =
            cfg.dot_path.empty()
                ? random_mealy(cfg.n, cfg.k, cfg.o, seed)
                : parse_dot([&] {
                    std::ifstream in(cfg.dot_path);
                    std::ostringstream ss;
                    ss << in.rdbuf();
                    return ss.str();
                  }());
        RunResult r = run_learning(target, spec, cfg.oracle, seed);
        out << stats_to_csv_row(name, seed, r.stats) << '\n';
        const RunStats& s = r.stats;
        double vals[16] = {double(s.r),        double(s.sq),
                           double(s.ce),       double(s.adt_rn),
                           s.adt_rr,           double(s.adt_pr),
                           double(s.adt_pran), double(s.adt_prs),
                           double(s.adt_ars),  double(s.adt_arr),
                           double(s.adt_arp),  double(s.adt_ara),
                           double(s.ot_e),     double(s.ot_s),
                           double(s.siz),      s.dur_ms};
        for (int c = 0; c < 16; ++c) cols[c].push_back(vals[c]);
        converged += s.converged;
        ++ok_runs;
      } catch (const std::exception& e) {
        out << name << ',' << seed << ",ERROR,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n";
      }
    }
    auto emit_summary = [&](const char* tag, auto&& reduce) {
      out << name << ',' << tag << ',';
      out << (ok_runs ? fmt(double(converged) / ok_runs) : "0");
      for (int c = 0; c < 16; ++c) out << ',' << fmt(reduce(cols[c]));
      out << '\n';
    };
    emit_summary("MEAN", [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return v.empty() ? 0.0 : s / v.size();
    });
    emit_summary("STDDEV", [](const std::vector<double>& v) {
      if (v.empty()) return 0.0;
      double m = 0;
      for (double x : v) m += x;
      m /= v.size();
      double acc = 0;
      for (double x : v) acc += (x - m) * (x - m);
      return std::sqrt(acc / v.size());
    });
  }
}

}  // namespace adtl
