#ifndef DEPPARSE_TRANSITIONS_HPP
#define DEPPARSE_TRANSITIONS_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depparse/core.hpp"

namespace depparse {

enum class TransitionKind { Shift, Reduce, LeftArc, RightArc, NoArc };

bool is_arc_kind(TransitionKind kind);
const char* transition_kind_name(TransitionKind kind);

struct Transition {
  TransitionKind kind{};
  std::string label;  // non-empty iff kind is an arc kind

  bool operator==(const Transition&) const = default;
};

// "SHIFT", "REDUCE", "NO-ARC", "LEFT-ARC:label", "RIGHT-ARC:label".
std::string transition_to_string(const Transition& t);
Transition transition_from_string(const std::string& text);

struct Arc {
  int head = 0;
  std::string label;
  int dependent = 0;

  bool operator==(const Arc&) const = default;
};

// Parser state. Node 0 is the artificial root; it can sit on the stack but
// never in the buffer and never receives a head. `pending` is Covington's
// consumed left context: candidates set aside for the current buffer front,
// restored to the stack on SHIFT. Stack-based systems leave it empty.
struct Configuration {
  std::vector<int> stack;    // back = top
  std::vector<int> buffer;   // front = next input token, ascending
  std::vector<Arc> arcs;     // insertion order
  std::vector<int> pending;

  std::optional<int> head_of(int node) const;
  const Arc* arc_to(int dependent) const;
  std::optional<int> leftmost_dep(int node) const;
  std::optional<int> rightmost_dep(int node) const;
  bool has_dependent(int head, int dependent) const;
};

// A deterministic parsing state machine plus the static oracle that derives
// gold transition sequences from annotated sentences. All operations are
// value-oriented: apply returns a new configuration.
class TransitionSystem {
 public:
  virtual ~TransitionSystem() = default;

  virtual std::string_view name() const = 0;
  virtual bool handles_nonprojective() const = 0;
  // Transition kinds in declaration order; fixes the classifier class layout.
  virtual const std::vector<TransitionKind>& kinds() const = 0;

  virtual Configuration initial(const Sentence& s) const = 0;
  // Kinds applicable in c. Empty exactly when c is terminal.
  virtual std::vector<TransitionKind> legal(const Configuration& c) const = 0;
  virtual bool is_terminal(const Configuration& c) const = 0;
  // Throws when t's preconditions do not hold in c, naming the transition.
  virtual Configuration apply(const Configuration& c, const Transition& t) const = 0;

  // Next gold transition. `gold` must be fully annotated; systems that only
  // derive projective trees reject non-projective input here.
  Transition oracle(const Configuration& c, const Sentence& gold) const;

  // Same as oracle but assumes the projectivity precondition was already
  // checked; derive_sequence checks once and then steps through this.
  virtual Transition oracle_step(const Configuration& c, const Sentence& gold) const = 0;
};

// Accepts "arc-eager", "arc-standard", "covington" (also the historical
// spellings "nivreeager", "nivrestandard", "covnonproj").
std::unique_ptr<TransitionSystem> make_transition_system(std::string_view name);

// Runs the oracle from the initial configuration to a terminal one.
// Replaying the returned sequence reproduces gold's arc set exactly.
std::vector<Transition> derive_sequence(const Sentence& gold, const TransitionSystem& sys);

// Reads heads and labels for tokens 1..n out of a terminal configuration.
// Unattached tokens fall back to node 0 with fallback_label; if that leaves
// several head-0 tokens, all but the first are re-attached to the first root
// so the result is always a single-rooted tree.
struct ExtractedTree {
  std::vector<int> heads;             // index i -> head of token i+1
  std::vector<std::string> labels;
};
ExtractedTree extract_tree(const Configuration& c, int token_count,
                           const std::string& fallback_label);

// Gold arcs of a fully annotated sentence, in token order.
std::vector<Arc> gold_arcs(const Sentence& s);

}  // namespace depparse

#endif  // DEPPARSE_TRANSITIONS_HPP
