#include "adtl/adt.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace adtl {

std::unique_ptr<AdtNode> make_final(int reference) {
  auto n = std::make_unique<AdtNode>();
  n->kind = AdtNode::Kind::Final;
  n->reference = reference;
  return n;
}

std::unique_ptr<AdtNode> make_symbol(int input) {
  auto n = std::make_unique<AdtNode>();
  n->kind = AdtNode::Kind::Symbol;
  n->input = input;
  return n;
}

std::unique_ptr<AdtNode> make_reset(std::unique_ptr<AdtNode> child) {
  auto n = std::make_unique<AdtNode>();
  n->kind = AdtNode::Kind::Reset;
  child->parent = n.get();
  child->incoming_output = -1;
  n->reset_child = std::move(child);
  return n;
}

AdtNode* add_child(AdtNode* symbol, int output,
                   std::unique_ptr<AdtNode> child) {
  child->parent = symbol;
  child->incoming_output = output;
  auto [it, fresh] = symbol->children.emplace(output, std::move(child));
  if (!fresh) throw std::logic_error("duplicate output edge on symbol node");
  return it->second.get();
}

std::unique_ptr<AdtNode> clone(const AdtNode* n) {
  auto c = std::make_unique<AdtNode>();
  c->kind = n->kind;
  c->input = n->input;
  c->reference = n->reference;
  c->incoming_output = n->incoming_output;
  for (auto& [o, child] : n->children) {
    auto cc = clone(child.get());
    cc->parent = c.get();
    c->children.emplace(o, std::move(cc));
  }
  if (n->reset_child) {
    c->reset_child = clone(n->reset_child.get());
    c->reset_child->parent = c.get();
  }
  return c;
}

std::vector<const AdtNode*> path(const AdtNode* n) {
  std::vector<const AdtNode*> p;
  for (const AdtNode* a = n->parent; a; a = a->parent) p.push_back(a);
  return p;
}

Trace trace(const AdtNode* n) {
  Trace t;
  for (const AdtNode* cur = n; cur->parent && !cur->parent->is_reset();
       cur = cur->parent) {
    t.inputs.push_back(cur->parent->input);
    t.outputs.push_back(cur->incoming_output);
  }
  std::reverse(t.inputs.begin(), t.inputs.end());
  std::reverse(t.outputs.begin(), t.outputs.end());
  return t;
}

std::vector<Trace> traces(const AdtNode* n) {
  std::vector<Trace> ts;
  const AdtNode* cur = n;
  while (cur && cur->parent) {
    ts.push_back(trace(cur));
    // hop above the nearest reset (or stop at the root)
    while (cur->parent && !cur->parent->is_reset()) cur = cur->parent;
    cur = cur->parent;  // the reset node itself, or null past the root
  }
  return ts;
}

AdtNode* Adt::find_final(int state) const {
  AdtNode* found = nullptr;
  std::function<void(AdtNode*)> walk = [&](AdtNode* n) {
    if (found) return;
    if (n->is_final()) {
      if (n->reference == state) found = n;
      return;
    }
    if (n->is_reset()) return walk(n->reset_child.get());
    for (auto& [o, c] : n->children) walk(c.get());
  };
  walk(root_.get());
  return found;
}

std::unique_ptr<AdtNode>& Adt::slot_of(AdtNode* n) {
  if (n == root_.get()) return root_;
  AdtNode* p = n->parent;
  if (p->is_reset()) return p->reset_child;
  auto it = p->children.find(n->incoming_output);
  if (it == p->children.end() || it->second.get() != n)
    throw std::logic_error("node not linked from its parent");
  return it->second;
}

AdtNode* Adt::splice(AdtNode* target, std::unique_ptr<AdtNode> repl) {
  repl->parent = target->parent;
  repl->incoming_output = target->incoming_output;
  auto& slot = slot_of(target);
  slot = std::move(repl);
  return slot.get();
}

AdtNode* sift(Adt& adt, const Word& access, SymbolQueryOracle& o) {
  AdtNode* cur = adt.root();
  bool positioned = false;
  auto ensure = [&] {
    if (positioned) return;
    o.reset();
    o.query_word(access);
    positioned = true;
  };
  for (;;) {
    switch (cur->kind) {
      case AdtNode::Kind::Final:
        return cur;
      case AdtNode::Kind::Reset:
        positioned = false;
        cur = cur->reset_child.get();
        break;
      case AdtNode::Kind::Symbol: {
        ensure();
        int out = o.query(cur->input);
        auto it = cur->children.find(out);
        if (it == cur->children.end())
          return add_child(cur, out, make_final());
        cur = it->second.get();
        break;
      }
    }
  }
}

SplitResult split_leaf(Adt& adt, const Word& acc_old, const Word& acc_new,
                       int old_state, int new_state, const Word& v,
                       SymbolQueryOracle& o, bool extend) {
  AdtNode* f = adt.find_final(old_state);
  if (!f) throw StateNotInTree(old_state);
  Word o_old = mq(o, acc_old, v);
  Word o_new = mq(o, acc_new, v);
  size_t d = 0;
  while (d < v.size() && o_old[d] == o_new[d]) ++d;
  if (d == v.size()) throw NotADiscriminator();

  Trace pt = trace(f);
  size_t start = 0;
  bool extended = false;
  if (extend && !pt.inputs.empty() && pt.inputs.size() < v.size() &&
      std::equal(pt.inputs.begin(), pt.inputs.end(), v.begin()) &&
      std::equal(pt.outputs.begin(), pt.outputs.end(), o_old.begin()) &&
      std::equal(pt.outputs.begin(), pt.outputs.end(), o_new.begin())) {
    start = pt.inputs.size();  // graft the suffix in place, reset-free
    extended = true;
  }

  // Build the chain bottom-up from the diverging node.
  auto branch = make_symbol(v[d]);
  add_child(branch.get(), o_old[d], make_final(old_state));
  add_child(branch.get(), o_new[d], make_final(new_state));
  std::unique_ptr<AdtNode> chain = std::move(branch);
  for (size_t k = d; k > start; --k) {
    auto sym = make_symbol(v[k - 1]);
    add_child(sym.get(), o_old[k - 1], std::move(chain));
    chain = std::move(sym);
  }
  AdtNode* chain_root = chain.get();
  bool need_reset = !extended && !trace(f).inputs.empty();
  if (need_reset) chain = make_reset(std::move(chain));
  adt.splice(f, std::move(chain));
  return {chain_root, extended};
}

namespace {

void count_resets_to_leaves(const AdtNode* n, int resets_above, int& total) {
  switch (n->kind) {
    case AdtNode::Kind::Final:
      total += resets_above;
      return;
    case AdtNode::Kind::Reset:
      return count_resets_to_leaves(n->reset_child.get(), resets_above + 1,
                                    total);
    case AdtNode::Kind::Symbol:
      for (auto& [o, c] : n->children)
        count_resets_to_leaves(c.get(), resets_above, total);
      return;
  }
}

}  // namespace

int effective_reset_count(const AdtNode* n) {
  int total = 0;
  count_resets_to_leaves(n, 0, total);
  return total;
}

std::vector<AdtNode*> collect_leaves(AdtNode* n) {
  std::vector<AdtNode*> out;
  std::function<void(AdtNode*)> walk = [&](AdtNode* c) {
    if (c->is_final()) { out.push_back(c); return; }
    if (c->is_reset()) return walk(c->reset_child.get());
    for (auto& [o, ch] : c->children) walk(ch.get());
  };
  walk(n);
  return out;
}

std::vector<const AdtNode*> collect_leaves(const AdtNode* n) {
  auto v = collect_leaves(const_cast<AdtNode*>(n));
  return {v.begin(), v.end()};
}

std::vector<AdtNode*> collect_reset_nodes(AdtNode* n) {
  std::vector<AdtNode*> out;
  std::function<void(AdtNode*)> walk = [&](AdtNode* c) {
    if (c->is_reset()) {
      out.push_back(c);
      return walk(c->reset_child.get());
    }
    for (auto& [o, ch] : c->children) walk(ch.get());
  };
  walk(n);
  return out;
}

std::vector<AdtNode*> collect_sub_adts(AdtNode* n, bool immediate_only) {
  std::vector<AdtNode*> out;
  std::function<void(AdtNode*)> walk = [&](AdtNode* c) {
    if (c->is_reset()) {
      out.push_back(c->reset_child.get());
      if (immediate_only) return;
      return walk(c->reset_child.get());
    }
    for (auto& [o, ch] : c->children) walk(ch.get());
  };
  walk(n);
  return out;
}

AdtNode* find_lca(const Adt& adt, int s1, int s2) {
  AdtNode* f1 = adt.find_final(s1);
  AdtNode* f2 = adt.find_final(s2);
  if (!f1) throw StateNotInTree(s1);
  if (!f2) throw StateNotInTree(s2);
  std::set<const AdtNode*> anc;
  for (const AdtNode* a = f1; a; a = a->parent) anc.insert(a);
  for (AdtNode* a = f2->parent; a; a = a->parent)
    if (anc.count(a)) {
      if (!a->is_symbol())
        throw std::logic_error("LCA of two finals is not a symbol node");
      return a;
    }
  throw std::logic_error("finals share no ancestor");
}

std::vector<int> referenced_states(const AdtNode* n) {
  std::vector<int> out;
  for (const AdtNode* f : collect_leaves(n))
    if (f->reference >= 0) out.push_back(f->reference);
  std::sort(out.begin(), out.end());
  return out;
}

int count_symbol_nodes(const AdtNode* n) {
  int total = n->is_symbol() ? 1 : 0;
  if (n->reset_child) total += count_symbol_nodes(n->reset_child.get());
  for (auto& [o, c] : n->children) total += count_symbol_nodes(c.get());
  return total;
}

int count_reset_nodes(const AdtNode* n) {
  int total = n->is_reset() ? 1 : 0;
  if (n->reset_child) total += count_reset_nodes(n->reset_child.get());
  for (auto& [o, c] : n->children) total += count_reset_nodes(c.get());
  return total;
}

void validate_structure(const AdtNode* root) {
  if (root->parent) throw std::logic_error("root has a parent");
  if (!root->is_final() && !root->is_symbol())
    throw std::logic_error("root must be a symbol node (or a lone final)");
  std::set<int> refs;
  std::function<void(const AdtNode*)> walk = [&](const AdtNode* n) {
    switch (n->kind) {
      case AdtNode::Kind::Final:
        if (n->reset_child || !n->children.empty())
          throw std::logic_error("final node has children");
        if (n->reference >= 0 && !refs.insert(n->reference).second)
          throw std::logic_error("state referenced twice: " +
                                 std::to_string(n->reference));
        return;
      case AdtNode::Kind::Reset:
        if (!n->reset_child || !n->children.empty())
          throw std::logic_error("reset node must have exactly one child");
        if (n->reset_child->parent != n)
          throw std::logic_error("broken parent link");
        return walk(n->reset_child.get());
      case AdtNode::Kind::Symbol:
        if (n->children.empty())
          throw std::logic_error("symbol node without children");
        if (n->reset_child) throw std::logic_error("symbol with reset child");
        for (auto& [o, c] : n->children) {
          if (c->parent != n || c->incoming_output != o)
            throw std::logic_error("broken child link");
          walk(c.get());
        }
        return;
    }
  };
  walk(root);
}

bool verify_against(const Adt& adt, const std::function<Word(int)>& access_of,
                    SymbolQueryOracle& o) {
  for (const AdtNode* f : collect_leaves(adt.root())) {
    if (f->reference < 0) continue;
    Word acc = access_of(f->reference);
    for (const Trace& t : traces(f))
      if (mq(o, acc, t.inputs) != t.outputs) return false;
  }
  return true;
}

std::string adt_to_dot(const AdtNode* root, const Alphabet* inputs,
                       const Alphabet* outputs) {
  std::ostringstream os;
  os << "digraph adt {\n";
  int next_id = 0;
  std::function<int(const AdtNode*)> walk = [&](const AdtNode* n) {
    int id = next_id++;
    switch (n->kind) {
      case AdtNode::Kind::Symbol:
        os << "  n" << id << " [shape=ellipse, label=\""
           << (inputs ? inputs->label(n->input) : std::to_string(n->input))
           << "\"];\n";
        break;
      case AdtNode::Kind::Reset:
        os << "  n" << id << " [shape=point, label=\"\"];\n";
        break;
      case AdtNode::Kind::Final:
        os << "  n" << id << " [shape=box, label=\""
           << (n->reference < 0 ? std::string("?")
                                : "s" + std::to_string(n->reference))
           << "\"];\n";
        break;
    }
    if (n->reset_child) {
      int c = walk(n->reset_child.get());
      os << "  n" << id << " -> n" << c << " [style=dashed];\n";
    }
    for (auto& [out, child] : n->children) {
      int c = walk(child.get());
      os << "  n" << id << " -> n" << c << " [label=\""
         << (outputs ? outputs->label(out) : std::to_string(out)) << "\"];\n";
    }
    return id;
  };
  walk(root);
  os << "}\n";
  return os.str();
}

}  // namespace adtl
