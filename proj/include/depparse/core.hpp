#ifndef DEPPARSE_CORE_HPP
#define DEPPARSE_CORE_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace depparse {

// Data or format problem severe enough to abort the operation. Structural
// problems found while validating a treebank are not errors; they go into
// a ValidationReport instead.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// One CoNLL row. `head == 0` means the token attaches to the artificial
// root node, which is positional and never materialized as a Token.
struct Token {
  int id = 0;                      // 1-based position in the sentence
  std::string form;                // surface word, never empty
  std::optional<std::string> lemma;
  std::string cpostag;
  std::string postag;
  std::vector<std::pair<std::string, std::string>> feats;  // ordered attr=value pairs
  std::optional<int> head;         // 0 = artificial root
  std::optional<std::string> deprel;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::optional<std::string> metadata;  // source line range, informational only

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  // 1-based access to match CoNLL ids.
  const Token& token(int id) const { return tokens.at(static_cast<std::size_t>(id) - 1); }

  // Metadata is provenance, not content; two sentences with the same tokens
  // compare equal no matter where they were read from.
  bool operator==(const Sentence& other) const { return tokens == other.tokens; }
};

// Validating vocabulary for dependency relations and, optionally, POS tags.
// Label matching is case-insensitive; the canonical spelling given at
// construction is preserved for output. Aliases map alternative spellings
// onto a canonical label and are reported as notes when used.
class Tagset {
 public:
  Tagset(std::vector<std::string> deprels, std::string root_label);

  // The 22-relation vocabulary this toolkit ships with
  // (Root, Subj, Dobj, ..., Vcomp, Comp) with root label "Root".
  static Tagset default_tagset();

  void add_alias(const std::string& alias, const std::string& canonical);
  void set_postags(std::vector<std::string> postags);

  struct Match {
    std::string canonical;
    bool via_alias = false;
  };
  // Case-insensitive lookup; empty result means the label is unknown.
  std::optional<Match> find_deprel(const std::string& label) const;
  bool has_postag(const std::string& tag) const;

  const std::vector<std::string>& deprels() const { return deprels_; }
  const std::string& root_label() const { return root_label_; }
  const std::vector<std::string>& postags() const { return postags_; }
  bool restricts_postags() const { return !postags_.empty(); }
  const std::vector<std::pair<std::string, std::string>>& aliases() const { return aliases_; }

  bool operator==(const Tagset&) const = default;

  // Reads a tagset description: one whitespace-separated directive per line,
  // '#' comments allowed. Directives: "root <label>", "deprel <label>",
  // "postag <tag>", "alias <alias> <canonical>". The root label is added to
  // the relation inventory automatically.
  static Tagset read(std::istream& in);
  static Tagset read_file(const std::string& path);

 private:
  std::vector<std::string> deprels_;   // canonical order, canonical casing
  std::string root_label_;
  std::vector<std::string> postags_;   // empty = unrestricted
  std::vector<std::pair<std::string, std::string>> aliases_;  // alias -> canonical
};

enum class IssueKind {
  NonContiguousIds,
  EmptyForm,
  MissingHead,
  MissingDeprel,
  HeadOutOfRange,
  SelfLoop,
  UnknownDeprel,
  UnknownPostag,
  NoRoot,
  MultipleRoots,
  Cycle,
};

const char* issue_kind_name(IssueKind kind);

struct ValidationIssue {
  int sentence_index = 0;
  int token_id = 0;  // 0 for sentence-level issues
  IssueKind kind{};
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
  // Informational only (e.g. a deprel matched through an alias); does not
  // affect `ok`.
  std::vector<std::string> notes;
};

// Checks one sentence against the structural contract: contiguous 1..n ids,
// heads in range without self-loops or cycles, exactly one root, and labels
// drawn from the tagset. With require_annotation, missing HEAD/DEPREL are
// issues too. Never throws; every problem becomes a report entry, ordered by
// token id and then issue kind.
ValidationReport validate_sentence(const Sentence& s, const Tagset& tagset,
                                   bool require_annotation, int sentence_index = 0);

// True iff no two arcs cross in the linear order. Arcs from the artificial
// root use position 0. Requires a fully annotated sentence.
bool is_projective(const Sentence& s);

// ASCII-only lowercasing used for all label comparisons. Multibyte UTF-8
// sequences pass through untouched.
std::string ascii_lower(std::string_view text);

}  // namespace depparse

#endif  // DEPPARSE_CORE_HPP
