#include "adtl/mealy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <sstream>

namespace adtl {

std::string word_to_string(const Word& w, const Alphabet& a,
                           const std::string& sep) {
  if (w.empty()) return "\xce\xb5";  // epsilon
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += a.label(w[i]);
  }
  return out;
}

Alphabet::Alphabet(std::vector<std::string> labels) {
  for (auto& l : labels) intern(l);
}

int Alphabet::intern(const std::string& label) {
  auto it = index_.find(label);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(labels_.size());
  labels_.push_back(label);
  index_.emplace(label, id);
  return id;
}

int Alphabet::id(const std::string& label) const {
  auto it = index_.find(label);
  return it == index_.end() ? -1 : it->second;
}

const std::string& Alphabet::label(int id) const {
  return labels_.at(static_cast<size_t>(id));
}

Word Alphabet::word(const std::vector<std::string>& labels) const {
  Word w;
  w.reserve(labels.size());
  for (auto& l : labels) {
    int i = id(l);
    if (i < 0) throw std::invalid_argument("unknown symbol: " + l);
    w.push_back(i);
  }
  return w;
}

MealyMachine::MealyMachine(Alphabet inputs, Alphabet outputs, int num_states,
                           int initial)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      num_states_(num_states),
      initial_(initial),
      delta_(static_cast<size_t>(num_states) * inputs_.size(), -1),
      lambda_(static_cast<size_t>(num_states) * inputs_.size(), -1) {
  if (initial < 0 || initial >= num_states)
    throw std::invalid_argument("initial state out of range");
}

int MealyMachine::add_state() {
  delta_.resize(delta_.size() + inputs_.size(), -1);
  lambda_.resize(lambda_.size() + inputs_.size(), -1);
  return num_states_++;
}

void MealyMachine::set_transition(int s, int in, int succ, int out) {
  if (s < 0 || s >= num_states_ || succ < 0 || succ >= num_states_)
    throw std::invalid_argument("state out of range");
  if (in < 0 || in >= inputs_.size())
    throw std::invalid_argument("input out of range");
  if (out < 0 || out >= outputs_.size())
    throw std::invalid_argument("output out of range");
  delta_[idx(s, in)] = succ;
  lambda_[idx(s, in)] = out;
}

bool MealyMachine::complete() const {
  for (int v : delta_)
    if (v < 0) return false;
  return true;
}

int MealyMachine::step(int s, const Word& in) const {
  for (int i : in) s = delta(s, i);
  return s;
}

Word MealyMachine::trace(int s, const Word& in) const {
  Word out;
  out.reserve(in.size());
  for (int i : in) {
    out.push_back(lambda(s, i));
    s = delta(s, i);
  }
  return out;
}

std::vector<int> MealyMachine::reachable_states() const {
  std::vector<int> order;
  std::vector<char> seen(num_states_, 0);
  std::deque<int> queue{initial_};
  seen[initial_] = 1;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    order.push_back(s);
    for (int i = 0; i < inputs_.size(); ++i) {
      int t = delta_or(s, i);
      if (t >= 0 && !seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
    }
  }
  return order;
}

namespace {

// Shared pair-graph BFS. step(a_state, b_state, input) -> (a', b', equal
// outputs?); returns shortest input word hitting an output mismatch.
template <typename MA, typename MB>
std::optional<Word> pair_bfs(const MA& ma, const MB& mb, int sa, int sb,
                             int num_inputs, bool skip_undefined) {
  struct Entry {
    int64_t pair;
    int parent;  // index into entries, -1 for root
    int input;
  };
  auto pack = [](int a, int b) {
    return (static_cast<int64_t>(a) << 32) | static_cast<uint32_t>(b);
  };
  std::vector<Entry> entries{{pack(sa, sb), -1, -1}};
  std::unordered_map<int64_t, char> seen{{pack(sa, sb), 1}};
  auto reconstruct = [&](int at, int last_input) {
    Word w{last_input};
    while (at >= 0 && entries[at].input >= 0) {
      w.push_back(entries[at].input);
      at = entries[at].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
  };
  for (size_t head = 0; head < entries.size(); ++head) {
    int a = static_cast<int>(entries[head].pair >> 32);
    int b = static_cast<int>(entries[head].pair & 0xffffffff);
    for (int i = 0; i < num_inputs; ++i) {
      if (skip_undefined && (!ma.defined(a, i) || !mb.defined(b, i))) continue;
      if (ma.lambda(a, i) != mb.lambda(b, i))
        return reconstruct(static_cast<int>(head), i);
      int64_t next = pack(ma.delta(a, i), mb.delta(b, i));
      if (seen.emplace(next, 1).second)
        entries.push_back({next, static_cast<int>(head), i});
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Word> separating_word(const MealyMachine& a,
                                    const MealyMachine& b) {
  if (!(a.inputs() == b.inputs()))
    throw std::invalid_argument("separating_word: input alphabets differ");
  if (!a.complete() || !b.complete())
    throw std::invalid_argument("separating_word: machines must be complete");
  // Output alphabets may differ; compare by label.
  struct View {
    const MealyMachine& m;
    const Alphabet& out;  // shared label space
    bool defined(int s, int i) const { return m.defined(s, i); }
    int delta(int s, int i) const { return m.delta(s, i); }
    int lambda(int s, int i) const {
      return out.id(m.outputs().label(m.lambda(s, i)));
    }
  };
  Alphabet shared = a.outputs();
  for (int i = 0; i < b.outputs().size(); ++i) shared.intern(b.outputs().label(i));
  View va{a, shared}, vb{b, shared};
  return pair_bfs(va, vb, a.initial(), b.initial(), a.num_inputs(), false);
}

std::optional<Word> separating_word(const MealyMachine& m, int s, int t) {
  return pair_bfs(m, m, s, t, m.num_inputs(), true);
}

MealyMachine minimize(const MealyMachine& m) {
  if (!m.complete())
    throw std::invalid_argument("minimize: machine must be complete");
  std::vector<int> reach = m.reachable_states();
  std::vector<int> cls(m.num_states(), -1);
  // Initial partition: output row signature.
  {
    std::map<std::vector<int>, int> sig_ids;
    for (int s : reach) {
      std::vector<int> sig;
      for (int i = 0; i < m.num_inputs(); ++i) sig.push_back(m.lambda(s, i));
      auto [it, _] = sig_ids.emplace(sig, static_cast<int>(sig_ids.size()));
      cls[s] = it->second;
    }
  }
  // Refine until stable: signature = (class, successor class row).
  for (;;) {
    std::map<std::vector<int>, int> sig_ids;
    std::vector<int> next(m.num_states(), -1);
    for (int s : reach) {
      std::vector<int> sig{cls[s]};
      for (int i = 0; i < m.num_inputs(); ++i) sig.push_back(cls[m.delta(s, i)]);
      auto [it, _] = sig_ids.emplace(sig, static_cast<int>(sig_ids.size()));
      next[s] = it->second;
    }
    bool changed = false;
    for (int s : reach)
      if (next[s] != cls[s]) { changed = true; break; }
    cls = std::move(next);
    if (!changed) break;
  }
  // Canonical numbering: BFS over quotient from the initial class.
  int num_classes = 0;
  for (int s : reach) num_classes = std::max(num_classes, cls[s] + 1);
  std::vector<int> repr(num_classes, -1);
  for (int s : reach)
    if (repr[cls[s]] < 0) repr[cls[s]] = s;
  std::vector<int> renum(num_classes, -1);
  std::deque<int> queue{cls[m.initial()]};
  renum[cls[m.initial()]] = 0;
  int assigned = 1;
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    for (int i = 0; i < m.num_inputs(); ++i) {
      int d = cls[m.delta(repr[c], i)];
      if (renum[d] < 0) {
        renum[d] = assigned++;
        queue.push_back(d);
      }
    }
  }
  MealyMachine out(m.inputs(), m.outputs(), assigned, 0);
  for (int c = 0; c < num_classes; ++c) {
    if (renum[c] < 0) continue;
    int s = repr[c];
    for (int i = 0; i < m.num_inputs(); ++i)
      out.set_transition(renum[c], i, renum[cls[m.delta(s, i)]],
                         m.lambda(s, i));
  }
  return out;
}

MealyMachine random_mealy(int num_states, int num_inputs, int num_outputs,
                          uint64_t seed) {
  // mt19937_64 raw output with rejection sampling: identical sequences on
  // every conforming standard library.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](uint64_t n) {
    uint64_t limit = std::numeric_limits<uint64_t>::max() -
                     std::numeric_limits<uint64_t>::max() % n;
    uint64_t v;
    do { v = rng(); } while (v >= limit);
    return v % n;
  };
  Alphabet ins, outs;
  for (int i = 0; i < num_inputs; ++i) ins.intern("i" + std::to_string(i));
  for (int o = 0; o < num_outputs; ++o) outs.intern("o" + std::to_string(o));
  MealyMachine m(ins, outs, num_states, 0);
  for (int s = 0; s < num_states; ++s)
    for (int i = 0; i < num_inputs; ++i)
      m.set_transition(s, i, static_cast<int>(uniform(num_states)),
                       static_cast<int>(uniform(num_outputs)));
  std::vector<int> reach = m.reachable_states();
  if (static_cast<int>(reach.size()) == num_states) return m;
  std::vector<int> renum(num_states, -1);
  for (size_t k = 0; k < reach.size(); ++k) renum[reach[k]] = static_cast<int>(k);
  MealyMachine out(ins, outs, static_cast<int>(reach.size()), 0);
  for (int s : reach)
    for (int i = 0; i < num_inputs; ++i)
      out.set_transition(renum[s], i, renum[m.delta(s, i)], m.lambda(s, i));
  return out;
}

MealyMachine with_self_loops(const MealyMachine& m) {
  if (!m.complete())
    throw std::invalid_argument("with_self_loops: machine must be complete");
  MealyMachine out = m;
  for (int s = 0; s < out.num_states(); ++s) {
    int i = s % out.num_inputs();
    out.set_transition(s, i, s, out.lambda(s, i));
  }
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string serialize_dot(const MealyMachine& m,
                          const std::vector<std::string>* state_names) {
  auto name = [&](int s) {
    return state_names ? (*state_names)[s] : "s" + std::to_string(s);
  };
  std::ostringstream os;
  os << "digraph mealy {\n";
  os << "  __start [shape=none, label=\"\"];\n";
  for (int s = 0; s < m.num_states(); ++s)
    os << "  \"" << dot_escape(name(s)) << "\" [shape=circle];\n";
  os << "  __start -> \"" << dot_escape(name(m.initial())) << "\";\n";
  for (int s = 0; s < m.num_states(); ++s)
    for (int i = 0; i < m.num_inputs(); ++i)
      if (m.defined(s, i))
        os << "  \"" << dot_escape(name(s)) << "\" -> \""
           << dot_escape(name(m.delta(s, i))) << "\" [label=\""
           << dot_escape(m.inputs().label(i)) << " / "
           << dot_escape(m.outputs().label(m.lambda(s, i))) << "\"];\n";
  os << "}\n";
  return os.str();
}

namespace {

struct DotToken {
  enum Kind { Id, Arrow, LBracket, RBracket, LBrace, RBrace, Semi, Comma,
              Equals, End } kind;
  std::string text;
  int line, col;
};

class DotLexer {
 public:
  explicit DotLexer(const std::string& text) : text_(text) {}

  DotToken next() {
    skip_space();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {DotToken::End, "", line, col};
    char c = text_[pos_];
    switch (c) {
      case '{': advance(); return {DotToken::LBrace, "{", line, col};
      case '}': advance(); return {DotToken::RBrace, "}", line, col};
      case '[': advance(); return {DotToken::LBracket, "[", line, col};
      case ']': advance(); return {DotToken::RBracket, "]", line, col};
      case ';': advance(); return {DotToken::Semi, ";", line, col};
      case ',': advance(); return {DotToken::Comma, ",", line, col};
      case '=': advance(); return {DotToken::Equals, "=", line, col};
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          advance(); advance();
          return {DotToken::Arrow, "->", line, col};
        }
        throw ParseError("unexpected '-'", line, col);
      case '"': {
        advance();
        std::string s;
        while (pos_ < text_.size() && text_[pos_] != '"') {
          if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance();
          s += text_[pos_];
          advance();
        }
        if (pos_ >= text_.size())
          throw ParseError("unterminated string", line, col);
        advance();
        return {DotToken::Id, s, line, col};
      }
      default: {
        if (!is_id_char(c)) throw ParseError(std::string("unexpected '") + c + "'", line, col);
        std::string s;
        while (pos_ < text_.size() && is_id_char(text_[pos_])) {
          s += text_[pos_];
          advance();
        }
        return {DotToken::Id, s, line, col};
      }
    }
  }

 private:
  static bool is_id_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '.' || c == '\'' ||
           static_cast<unsigned char>(c) >= 0x80;  // utf-8 continuation
  }
  void skip_space() {
    for (;;) {
      while (pos_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[pos_])))
        advance();
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
          text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      break;
    }
  }
  void advance() {
    if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
    ++pos_;
  }
  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace

MealyMachine parse_dot(const std::string& text) {
  DotLexer lex(text);
  DotToken tok = lex.next();
  if (tok.kind == DotToken::Id && tok.text == "digraph") {
    tok = lex.next();
    if (tok.kind == DotToken::Id) tok = lex.next();  // optional graph name
  }
  if (tok.kind != DotToken::LBrace)
    throw ParseError("expected '{'", tok.line, tok.col);

  struct Edge { std::string from, to, in, out; int line, col; };
  std::vector<Edge> edges;
  std::vector<std::string> node_order;
  std::unordered_map<std::string, int> node_ids;
  std::string start_marker;
  std::string explicit_initial;
  auto is_marker = [](const std::string& n) {
    return n.rfind("__", 0) == 0;  // names like __start carry no state
  };
  auto touch_node = [&](const std::string& n) {
    if (is_marker(n)) return;
    if (node_ids.emplace(n, static_cast<int>(node_order.size())).second)
      node_order.push_back(n);
  };

  tok = lex.next();
  while (tok.kind != DotToken::RBrace) {
    if (tok.kind == DotToken::End)
      throw ParseError("expected '}'", tok.line, tok.col);
    if (tok.kind != DotToken::Id)
      throw ParseError("expected node name", tok.line, tok.col);
    std::string lhs = tok.text;
    tok = lex.next();
    // Attribute-only statements like `rankdir=LR;`.
    if (tok.kind == DotToken::Equals) {
      tok = lex.next();
      if (tok.kind != DotToken::Id)
        throw ParseError("expected attribute value", tok.line, tok.col);
      tok = lex.next();
      if (tok.kind == DotToken::Semi) tok = lex.next();
      continue;
    }
    auto parse_attrs = [&](std::unordered_map<std::string, std::string>& attrs) {
      // caller saw '['
      for (;;) {
        tok = lex.next();
        if (tok.kind == DotToken::RBracket) break;
        if (tok.kind == DotToken::Comma) continue;
        if (tok.kind != DotToken::Id)
          throw ParseError("expected attribute name", tok.line, tok.col);
        std::string key = tok.text;
        tok = lex.next();
        if (tok.kind != DotToken::Equals)
          throw ParseError("expected '='", tok.line, tok.col);
        tok = lex.next();
        if (tok.kind != DotToken::Id)
          throw ParseError("expected attribute value", tok.line, tok.col);
        attrs[key] = tok.text;
      }
      tok = lex.next();
    };
    if (tok.kind == DotToken::Arrow) {
      tok = lex.next();
      if (tok.kind != DotToken::Id)
        throw ParseError("expected edge target", tok.line, tok.col);
      Edge e{lhs, tok.text, "", "", tok.line, tok.col};
      tok = lex.next();
      std::unordered_map<std::string, std::string> attrs;
      if (tok.kind == DotToken::LBracket) parse_attrs(attrs);
      auto it = attrs.find("label");
      if (is_marker(e.from)) {
        explicit_initial = e.to;
        touch_node(e.to);
      } else {
        if (it == attrs.end())
          throw ParseError("edge needs a \"input / output\" label", e.line,
                           e.col);
        size_t slash = it->second.find('/');
        if (slash == std::string::npos)
          throw ParseError("edge label must be \"input / output\"", e.line,
                           e.col);
        auto trim = [](std::string s) {
          size_t b = s.find_first_not_of(" \t");
          size_t e2 = s.find_last_not_of(" \t");
          return b == std::string::npos ? std::string()
                                        : s.substr(b, e2 - b + 1);
        };
        e.in = trim(it->second.substr(0, slash));
        e.out = trim(it->second.substr(slash + 1));
        if (e.in.empty() || e.out.empty())
          throw ParseError("edge label must be \"input / output\"", e.line,
                           e.col);
        touch_node(e.from);
        touch_node(e.to);
        edges.push_back(e);
      }
    } else {
      // Node statement.
      std::unordered_map<std::string, std::string> attrs;
      if (tok.kind == DotToken::LBracket) parse_attrs(attrs);
      auto shape = attrs.find("shape");
      bool marker = is_marker(lhs) ||
                    (shape != attrs.end() &&
                     (shape->second == "none" || shape->second == "point"));
      if (!marker) touch_node(lhs);
      if (marker) start_marker = lhs;
    }
    if (tok.kind == DotToken::Semi) tok = lex.next();
  }
  (void)start_marker;
  if (node_order.empty())
    throw ParseError("no states found", 1, 1);

  Alphabet ins, outs;
  for (auto& e : edges) {
    ins.intern(e.in);
    outs.intern(e.out);
  }
  if (explicit_initial.empty())
    throw ParseError("no initial state designated (missing __start arrow)", 1, 1);
  auto init_it = node_ids.find(explicit_initial);
  if (init_it == node_ids.end())
    throw ParseError("initial state has no transitions: " + explicit_initial, 1, 1);
  int initial = init_it->second;
  MealyMachine m(ins, outs, static_cast<int>(node_order.size()), initial);
  for (auto& e : edges) {
    int s = node_ids[e.from], t = node_ids[e.to];
    int i = ins.id(e.in), o = outs.id(e.out);
    if (m.defined(s, i) && (m.delta(s, i) != t || m.lambda(s, i) != o))
      throw ParseError("conflicting transition from " + e.from + " on " + e.in,
                       e.line, e.col);
    m.set_transition(s, i, t, o);
  }
  return m;
}

}  // namespace adtl
