// Finite deterministic Mealy machines: representation, simulation,
// equivalence checking, minimization, random generation, DOT i/o.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace adtl {

// Input/output words are sequences of symbol ids into an Alphabet.
using Word = std::vector<int>;

std::string word_to_string(const Word& w, const class Alphabet& a,
                           const std::string& sep = "\xc2\xb7");  // middle dot

// Interned symbol table. Ids are dense, insertion-ordered.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> labels);

  int intern(const std::string& label);           // add if missing
  int id(const std::string& label) const;         // -1 if missing
  const std::string& label(int id) const;
  int size() const { return static_cast<int>(labels_.size()); }
  bool operator==(const Alphabet& o) const { return labels_ == o.labels_; }

  Word word(const std::vector<std::string>& labels) const;  // throws on unknown

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", col " +
                           std::to_string(col_) + ")"),
        line(line_), col(col_) {}
};

struct UndefinedTransition : std::runtime_error {
  int state, input;
  UndefinedTransition(int s, int i)
      : std::runtime_error("undefined transition from state " +
                           std::to_string(s) + " on input " + std::to_string(i)),
        state(s), input(i) {}
};

// Deterministic Mealy machine (S, s0, I, O, delta, lambda); possibly partial.
class MealyMachine {
 public:
  MealyMachine() = default;
  MealyMachine(Alphabet inputs, Alphabet outputs, int num_states,
               int initial = 0);

  int num_states() const { return num_states_; }
  int initial() const { return initial_; }
  int num_inputs() const { return inputs_.size(); }
  const Alphabet& inputs() const { return inputs_; }
  const Alphabet& outputs() const { return outputs_; }
  Alphabet& outputs() { return outputs_; }

  int add_state();  // returns new state id; transitions undefined

  void set_transition(int s, int in, int succ, int out);
  bool defined(int s, int in) const {
    return delta_[idx(s, in)] >= 0;
  }
  bool complete() const;

  int delta(int s, int in) const {
    int t = delta_[idx(s, in)];
    if (t < 0) throw UndefinedTransition(s, in);
    return t;
  }
  int lambda(int s, int in) const {
    if (delta_[idx(s, in)] < 0) throw UndefinedTransition(s, in);
    return lambda_[idx(s, in)];
  }
  // Raw accessors that return -1 instead of throwing.
  int delta_or(int s, int in) const { return delta_[idx(s, in)]; }
  int lambda_or(int s, int in) const {
    return delta_[idx(s, in)] < 0 ? -1 : lambda_[idx(s, in)];
  }

  int step(int s, const Word& in) const;       // delta extended to words
  Word trace(int s, const Word& in) const;     // lambda extended to words
  Word run(const Word& in) const { return trace(initial_, in); }

  // States reachable from the initial state, in BFS order.
  std::vector<int> reachable_states() const;

 private:
  size_t idx(int s, int in) const {
    return static_cast<size_t>(s) * inputs_.size() + in;
  }
  Alphabet inputs_, outputs_;
  int num_states_ = 0;
  int initial_ = 0;
  std::vector<int> delta_, lambda_;
};

// Shortest input word on which the two machines' initial states disagree,
// or nullopt if they are equivalent. BFS over the pair graph; ties between
// equal-length words break toward the lower input id. Both machines must be
// complete and share the input alphabet.
std::optional<Word> separating_word(const MealyMachine& a,
                                    const MealyMachine& b);

// Shortest input word distinguishing two states of the same machine
// (nullopt if the states are equivalent). Undefined transitions are not
// traversed; an input defined for one state but not the other does not
// separate them.
std::optional<Word> separating_word(const MealyMachine& m, int s, int t);

// Canonical minimal machine equivalent to m (reachable part, partition
// refinement). Requires a complete machine.
MealyMachine minimize(const MealyMachine& m);

// Uniformly random complete machine with the given sizes, restricted to its
// reachable part (so num_states() may come out smaller than requested).
// Deterministic for a fixed seed across platforms.
MealyMachine random_mealy(int num_states, int num_inputs, int num_outputs,
                          uint64_t seed);

// Redundancy transform for benchmark targets: copy of m where for every
// state x the transition on input (x mod |I|) becomes a self loop, keeping
// its original output.
MealyMachine with_self_loops(const MealyMachine& m);

std::string serialize_dot(const MealyMachine& m,
                          const std::vector<std::string>* state_names = nullptr);
MealyMachine parse_dot(const std::string& text);

}  // namespace adtl
