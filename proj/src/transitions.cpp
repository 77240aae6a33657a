#include "depparse/transitions.hpp"

#include <algorithm>

namespace depparse {

bool is_arc_kind(TransitionKind kind) {
  return kind == TransitionKind::LeftArc || kind == TransitionKind::RightArc;
}

const char* transition_kind_name(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::Shift: return "SHIFT";
    case TransitionKind::Reduce: return "REDUCE";
    case TransitionKind::LeftArc: return "LEFT-ARC";
    case TransitionKind::RightArc: return "RIGHT-ARC";
    case TransitionKind::NoArc: return "NO-ARC";
  }
  return "?";
}

std::string transition_to_string(const Transition& t) {
  std::string out = transition_kind_name(t.kind);
  if (is_arc_kind(t.kind)) {
    out += ':';
    out += t.label;
  }
  return out;
}

Transition transition_from_string(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string kind_name = text.substr(0, colon);
  std::optional<TransitionKind> kind;
  for (TransitionKind k : {TransitionKind::Shift, TransitionKind::Reduce, TransitionKind::LeftArc,
                           TransitionKind::RightArc, TransitionKind::NoArc}) {
    if (kind_name == transition_kind_name(k)) kind = k;
  }
  if (!kind) throw Error("unknown transition '" + text + "'");
  Transition t{*kind, {}};
  if (colon != std::string::npos) t.label = text.substr(colon + 1);
  if (is_arc_kind(t.kind) == t.label.empty()) {
    throw Error("transition '" + text + "' " +
                (t.label.empty() ? "requires a label" : "does not take a label"));
  }
  return t;
}

std::optional<int> Configuration::head_of(int node) const {
  if (const Arc* a = arc_to(node)) return a->head;
  return std::nullopt;
}

const Arc* Configuration::arc_to(int dependent) const {
  for (const Arc& a : arcs) {
    if (a.dependent == dependent) return &a;
  }
  return nullptr;
}

std::optional<int> Configuration::leftmost_dep(int node) const {
  std::optional<int> best;
  for (const Arc& a : arcs) {
    if (a.head == node && (!best || a.dependent < *best)) best = a.dependent;
  }
  return best;
}

std::optional<int> Configuration::rightmost_dep(int node) const {
  std::optional<int> best;
  for (const Arc& a : arcs) {
    if (a.head == node && (!best || a.dependent > *best)) best = a.dependent;
  }
  return best;
}

bool Configuration::has_dependent(int head, int dependent) const {
  for (const Arc& a : arcs) {
    if (a.head == head && a.dependent == dependent) return true;
  }
  return false;
}

namespace {

[[noreturn]] void illegal(const Transition& t, const std::string& precondition) {
  throw Error(std::string(transition_kind_name(t.kind)) + " precondition violated: " +
              precondition);
}

void require_label_shape(const Transition& t) {
  if (is_arc_kind(t.kind) && t.label.empty()) illegal(t, "arc transition needs a label");
  if (!is_arc_kind(t.kind) && !t.label.empty()) illegal(t, "transition does not take a label");
}

int pop_buffer(Configuration& c) {
  const int front = c.buffer.front();
  c.buffer.erase(c.buffer.begin());
  return front;
}

Configuration stack_initial(const Sentence& s) {
  Configuration c;
  c.stack.push_back(0);
  c.buffer.reserve(s.size());
  for (int i = 1; i <= static_cast<int>(s.size()); ++i) c.buffer.push_back(i);
  return c;
}

const Token* gold_token(const Sentence& gold, int node) {
  if (node < 1 || node > static_cast<int>(gold.size())) return nullptr;
  return &gold.token(node);
}

int gold_head(const Sentence& gold, int node) {
  const Token* t = gold_token(gold, node);
  if (!t || !t->head) throw Error("oracle: gold sentence is not fully annotated");
  return *t->head;
}

std::string gold_label(const Sentence& gold, int node) {
  const Token* t = gold_token(gold, node);
  if (!t || !t->deprel) throw Error("oracle: gold sentence is not fully annotated");
  return *t->deprel;
}

// All gold dependents of `head` already have their arc in c.
bool gold_deps_attached(const Configuration& c, const Sentence& gold, int head) {
  for (const Token& tok : gold.tokens) {
    if (tok.head && *tok.head == head && !c.arc_to(tok.id)) return false;
  }
  return true;
}

void require_projective(const Sentence& gold, std::string_view system) {
  if (!is_projective(gold)) {
    throw Error("non-projective sentence cannot be derived with " + std::string(system));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Arc-eager: SHIFT, REDUCE, LEFT-ARC, RIGHT-ARC. LEFT-ARC attaches the stack
// top under the buffer front and pops it; RIGHT-ARC attaches the buffer front
// under the stack top and pushes it. Terminal when the buffer is empty;
// whatever is left on the stack is handled by extract_tree's fallback.
// ---------------------------------------------------------------------------
class ArcEagerSystem final : public TransitionSystem {
 public:
  std::string_view name() const override { return "arc-eager"; }
  bool handles_nonprojective() const override { return false; }

  const std::vector<TransitionKind>& kinds() const override {
    static const std::vector<TransitionKind> k{TransitionKind::Shift, TransitionKind::Reduce,
                                               TransitionKind::LeftArc, TransitionKind::RightArc};
    return k;
  }

  Configuration initial(const Sentence& s) const override { return stack_initial(s); }

  bool is_terminal(const Configuration& c) const override { return c.buffer.empty(); }

  std::vector<TransitionKind> legal(const Configuration& c) const override {
    std::vector<TransitionKind> out;
    if (c.buffer.empty()) return out;
    const int top = c.stack.back();
    out.push_back(TransitionKind::Shift);
    if (top != 0 && c.head_of(top)) out.push_back(TransitionKind::Reduce);
    if (top != 0 && !c.head_of(top)) out.push_back(TransitionKind::LeftArc);
    out.push_back(TransitionKind::RightArc);
    return out;
  }

  Configuration apply(const Configuration& c, const Transition& t) const override {
    require_label_shape(t);
    if (c.buffer.empty()) illegal(t, "buffer is empty (terminal configuration)");
    Configuration next = c;
    const int top = c.stack.back();
    switch (t.kind) {
      case TransitionKind::Shift:
        next.stack.push_back(pop_buffer(next));
        return next;
      case TransitionKind::LeftArc:
        if (top == 0) illegal(t, "stack top is the artificial root");
        if (c.head_of(top)) illegal(t, "stack top already has a head");
        next.arcs.push_back({c.buffer.front(), t.label, top});
        next.stack.pop_back();
        return next;
      case TransitionKind::RightArc:
        next.arcs.push_back({top, t.label, c.buffer.front()});
        next.stack.push_back(pop_buffer(next));
        return next;
      case TransitionKind::Reduce:
        if (!c.head_of(top)) illegal(t, "stack top has no head");
        next.stack.pop_back();
        return next;
      default:
        illegal(t, "not an arc-eager transition");
    }
  }

  Transition oracle_step(const Configuration& c, const Sentence& gold) const override {
    if (c.buffer.empty()) throw Error("oracle: configuration is terminal");
    const int top = c.stack.back();
    const int front = c.buffer.front();
    if (top != 0 && gold_head(gold, top) == front) {
      return {TransitionKind::LeftArc, gold_label(gold, top)};
    }
    if (gold_head(gold, front) == top) {
      return {TransitionKind::RightArc, gold_label(gold, front)};
    }
    // Reduce only once the top is complete: head assigned and every gold
    // dependent attached, so no future arc can involve it.
    if (top != 0 && c.head_of(top) && gold_deps_attached(c, gold, top)) {
      return {TransitionKind::Reduce, {}};
    }
    return {TransitionKind::Shift, {}};
  }
};

// ---------------------------------------------------------------------------
// Arc-standard: SHIFT, LEFT-ARC, RIGHT-ARC over the two topmost stack items.
// Bottom-up: a token is attached only after collecting all its dependents.
// ---------------------------------------------------------------------------
class ArcStandardSystem final : public TransitionSystem {
 public:
  std::string_view name() const override { return "arc-standard"; }
  bool handles_nonprojective() const override { return false; }

  const std::vector<TransitionKind>& kinds() const override {
    static const std::vector<TransitionKind> k{TransitionKind::Shift, TransitionKind::LeftArc,
                                               TransitionKind::RightArc};
    return k;
  }

  Configuration initial(const Sentence& s) const override { return stack_initial(s); }

  bool is_terminal(const Configuration& c) const override {
    return c.buffer.empty() && c.stack.size() < 2;
  }

  std::vector<TransitionKind> legal(const Configuration& c) const override {
    std::vector<TransitionKind> out;
    if (!c.buffer.empty()) out.push_back(TransitionKind::Shift);
    if (c.stack.size() >= 2) {
      if (c.stack[c.stack.size() - 2] != 0) out.push_back(TransitionKind::LeftArc);
      out.push_back(TransitionKind::RightArc);
    }
    return out;
  }

  Configuration apply(const Configuration& c, const Transition& t) const override {
    require_label_shape(t);
    Configuration next = c;
    switch (t.kind) {
      case TransitionKind::Shift:
        if (c.buffer.empty()) illegal(t, "buffer is empty");
        next.stack.push_back(pop_buffer(next));
        return next;
      case TransitionKind::LeftArc: {
        if (c.stack.size() < 2) illegal(t, "needs two stack items");
        const int top = c.stack.back();
        const int second = c.stack[c.stack.size() - 2];
        if (second == 0) illegal(t, "second stack item is the artificial root");
        next.arcs.push_back({top, t.label, second});
        next.stack.erase(next.stack.end() - 2);
        return next;
      }
      case TransitionKind::RightArc: {
        if (c.stack.size() < 2) illegal(t, "needs two stack items");
        const int top = c.stack.back();
        const int second = c.stack[c.stack.size() - 2];
        next.arcs.push_back({second, t.label, top});
        next.stack.pop_back();
        return next;
      }
      default:
        illegal(t, "not an arc-standard transition");
    }
  }

  Transition oracle_step(const Configuration& c, const Sentence& gold) const override {
    if (c.stack.size() >= 2) {
      const int top = c.stack.back();
      const int second = c.stack[c.stack.size() - 2];
      if (second != 0 && gold_head(gold, second) == top) {
        return {TransitionKind::LeftArc, gold_label(gold, second)};
      }
      if (gold_head(gold, top) == second && gold_deps_attached(c, gold, top)) {
        return {TransitionKind::RightArc, gold_label(gold, top)};
      }
    }
    if (c.buffer.empty()) throw Error("oracle: no derivable transition (arc-standard)");
    return {TransitionKind::Shift, {}};
  }
};

// ---------------------------------------------------------------------------
// Covington, non-projective variant. The buffer front j is paired with each
// candidate i from the stack top downward; LEFT-ARC/RIGHT-ARC link the pair
// and NO-ARC skips it, moving i to `pending`. SHIFT restores the set-aside
// candidates and pushes j. When the stack runs out, the artificial root is
// the one remaining candidate, so RIGHT-ARC can still attach j to node 0.
// Arc moves enforce single-head and acyclicity, which makes every reachable
// arc set a forest.
// ---------------------------------------------------------------------------
class CovingtonSystem final : public TransitionSystem {
 public:
  std::string_view name() const override { return "covington"; }
  bool handles_nonprojective() const override { return true; }

  const std::vector<TransitionKind>& kinds() const override {
    static const std::vector<TransitionKind> k{TransitionKind::Shift, TransitionKind::NoArc,
                                               TransitionKind::LeftArc, TransitionKind::RightArc};
    return k;
  }

  Configuration initial(const Sentence& s) const override {
    Configuration c;
    c.buffer.reserve(s.size());
    for (int i = 1; i <= static_cast<int>(s.size()); ++i) c.buffer.push_back(i);
    return c;
  }

  bool is_terminal(const Configuration& c) const override { return c.buffer.empty(); }

  std::vector<TransitionKind> legal(const Configuration& c) const override {
    std::vector<TransitionKind> out;
    if (c.buffer.empty()) return out;
    const int front = c.buffer.front();
    out.push_back(TransitionKind::Shift);
    if (!c.stack.empty()) out.push_back(TransitionKind::NoArc);
    if (!c.stack.empty() && !c.head_of(c.stack.back()) &&
        !creates_cycle(c, front, c.stack.back())) {
      out.push_back(TransitionKind::LeftArc);
    }
    const int candidate = c.stack.empty() ? 0 : c.stack.back();
    if (!c.head_of(front) && !creates_cycle(c, candidate, front)) {
      out.push_back(TransitionKind::RightArc);
    }
    return out;
  }

  Configuration apply(const Configuration& c, const Transition& t) const override {
    require_label_shape(t);
    if (c.buffer.empty()) illegal(t, "buffer is empty (terminal configuration)");
    Configuration next = c;
    const int front = c.buffer.front();
    switch (t.kind) {
      case TransitionKind::Shift: {
        // Restore set-aside candidates below the new stack top.
        for (auto it = next.pending.rbegin(); it != next.pending.rend(); ++it) {
          next.stack.push_back(*it);
        }
        next.pending.clear();
        next.stack.push_back(pop_buffer(next));
        return next;
      }
      case TransitionKind::NoArc:
        if (c.stack.empty()) illegal(t, "no candidate to skip");
        next.pending.push_back(next.stack.back());
        next.stack.pop_back();
        return next;
      case TransitionKind::LeftArc: {
        if (c.stack.empty()) illegal(t, "no candidate on the stack");
        const int candidate = c.stack.back();
        if (c.head_of(candidate)) illegal(t, "candidate already has a head");
        if (creates_cycle(c, front, candidate)) illegal(t, "arc would create a cycle");
        next.arcs.push_back({front, t.label, candidate});
        next.pending.push_back(next.stack.back());
        next.stack.pop_back();
        return next;
      }
      case TransitionKind::RightArc: {
        const int candidate = c.stack.empty() ? 0 : c.stack.back();
        if (c.head_of(front)) illegal(t, "buffer front already has a head");
        if (creates_cycle(c, candidate, front)) illegal(t, "arc would create a cycle");
        next.arcs.push_back({candidate, t.label, front});
        if (!next.stack.empty()) {
          next.pending.push_back(next.stack.back());
          next.stack.pop_back();
        }
        return next;
      }
      default:
        illegal(t, "not a covington transition");
    }
  }

  Transition oracle_step(const Configuration& c, const Sentence& gold) const override {
    if (c.buffer.empty()) throw Error("oracle: configuration is terminal");
    const int front = c.buffer.front();
    const int candidate = c.stack.empty() ? 0 : c.stack.back();
    if (candidate != 0 && gold_head(gold, candidate) == front && !c.arc_to(candidate)) {
      return {TransitionKind::LeftArc, gold_label(gold, candidate)};
    }
    if (gold_head(gold, front) == candidate && !c.arc_to(front)) {
      return {TransitionKind::RightArc, gold_label(gold, front)};
    }
    if (!c.stack.empty() && pending_arc_below(c, gold, front)) {
      return {TransitionKind::NoArc, {}};
    }
    return {TransitionKind::Shift, {}};
  }

 private:
  // Adding arc head->dep closes a cycle iff dep already dominates head.
  static bool creates_cycle(const Configuration& c, int head, int dep) {
    int cur = head;
    while (cur != 0) {
      if (cur == dep) return true;
      const auto h = c.head_of(cur);
      if (!h) break;
      cur = *h;
    }
    return false;
  }

  // Is there a gold arc between `front` and some candidate still below the
  // stack top (or the artificial root) that has not been built yet?
  static bool pending_arc_below(const Configuration& c, const Sentence& gold, int front) {
    const int front_head = gold_head(gold, front);
    for (std::size_t i = 0; i + 1 < c.stack.size(); ++i) {
      const int node = c.stack[i];
      if (gold_head(gold, node) == front && !c.arc_to(node)) return true;
      if (front_head == node && !c.arc_to(front)) return true;
    }
    if (front_head == 0 && !c.arc_to(front)) return true;
    return false;
  }
};

std::unique_ptr<TransitionSystem> make_transition_system(std::string_view name) {
  if (name == "arc-eager" || name == "nivreeager") return std::make_unique<ArcEagerSystem>();
  if (name == "arc-standard" || name == "nivrestandard") {
    return std::make_unique<ArcStandardSystem>();
  }
  if (name == "covington" || name == "covington-nonprojective" || name == "covnonproj") {
    return std::make_unique<CovingtonSystem>();
  }
  throw Error("unknown transition system '" + std::string(name) + "'");
}

Transition TransitionSystem::oracle(const Configuration& c, const Sentence& gold) const {
  if (!handles_nonprojective()) require_projective(gold, name());
  return oracle_step(c, gold);
}

std::vector<Transition> derive_sequence(const Sentence& gold, const TransitionSystem& sys) {
  if (!sys.handles_nonprojective()) require_projective(gold, sys.name());
  std::vector<Transition> sequence;
  Configuration c = sys.initial(gold);
  while (!sys.is_terminal(c)) {
    Transition t = sys.oracle_step(c, gold);
    c = sys.apply(c, t);
    sequence.push_back(std::move(t));
  }
  return sequence;
}

ExtractedTree extract_tree(const Configuration& c, int token_count,
                           const std::string& fallback_label) {
  ExtractedTree tree;
  tree.heads.assign(static_cast<std::size_t>(token_count), 0);
  tree.labels.assign(static_cast<std::size_t>(token_count), fallback_label);
  std::vector<char> attached(static_cast<std::size_t>(token_count) + 1, 0);
  for (const Arc& a : c.arcs) {
    if (a.dependent < 1 || a.dependent > token_count) continue;
    tree.heads[static_cast<std::size_t>(a.dependent - 1)] = a.head;
    tree.labels[static_cast<std::size_t>(a.dependent - 1)] = a.label;
    attached[static_cast<std::size_t>(a.dependent)] = 1;
  }
  // Unattached tokens already default to the root with the fallback label.
  // Keep the first root and fold any others under it.
  int first_root = 0;
  for (int id = 1; id <= token_count; ++id) {
    if (tree.heads[static_cast<std::size_t>(id - 1)] == 0) {
      if (first_root == 0) {
        first_root = id;
      } else {
        tree.heads[static_cast<std::size_t>(id - 1)] = first_root;
        tree.labels[static_cast<std::size_t>(id - 1)] = fallback_label;
      }
    }
  }
  return tree;
}

std::vector<Arc> gold_arcs(const Sentence& s) {
  std::vector<Arc> arcs;
  arcs.reserve(s.size());
  for (const Token& tok : s.tokens) {
    if (!tok.head || !tok.deprel) {
      throw Error("gold_arcs: token " + std::to_string(tok.id) + " is not annotated");
    }
    arcs.push_back({*tok.head, *tok.deprel, tok.id});
  }
  return arcs;
}

}  // namespace depparse
