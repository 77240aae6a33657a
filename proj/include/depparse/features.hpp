#ifndef DEPPARSE_FEATURES_HPP
#define DEPPARSE_FEATURES_HPP

#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "depparse/core.hpp"
#include "depparse/transitions.hpp"

namespace depparse {

// Where a template starts looking: k-th item from the stack top or from the
// buffer front (k = 0 is the top/front).
enum class AddressBase { Stack, Buffer };

// One navigation step from the base node, following arcs built so far.
enum class AddressStep { Head, LeftmostDep, RightmostDep };

// Which field of the resolved token becomes the feature value.
enum class Attribute { Form, Lemma, Postag, Cpostag, Deprel, Feats };

struct FeatureTemplate {
  AddressBase base = AddressBase::Stack;
  int index = 0;                    // k in STACK[k] / BUFFER[k], 0..3
  std::vector<AddressStep> steps;   // at most 2
  Attribute attribute = Attribute::Form;
  std::string feats_key;            // only for Attribute::Feats

  bool operator==(const FeatureTemplate&) const = default;
};

// Canonical text form, e.g. "STACK[0].ldep.DEPREL" or "BUFFER[0].FEATS[G]".
std::string template_to_string(const FeatureTemplate& t);

// Parses one template from its text form. Keywords are case-insensitive;
// a FEATS key keeps its spelling. Throws Error on malformed input.
FeatureTemplate parse_template(std::string_view text);

// One template per non-empty, non-comment ('#') line. Errors carry the
// 1-based line number.
std::vector<FeatureTemplate> parse_feature_spec(std::istream& in);
std::vector<FeatureTemplate> parse_feature_spec(const std::string& text);

// The built-in 14-template model used when no spec file is given.
std::vector<FeatureTemplate> default_feature_model();

// Sparse one-hot vector: sorted, duplicate-free active indices.
struct FeatureVector {
  std::vector<int> indices;

  bool operator==(const FeatureVector&) const = default;
};

// Maps (template ordinal, value text) to dense feature indices. Growing is
// only allowed while unfrozen; a frozen vocabulary drops unseen pairs.
class FeatureVocabulary {
 public:
  // Returns the index for (ordinal, value), inserting when unfrozen.
  // Returns -1 for an unseen pair on a frozen vocabulary.
  int lookup(int ordinal, const std::string& value);
  // Read-only probe; never inserts. -1 when absent.
  int find(int ordinal, const std::string& value) const;

  void insert(int ordinal, const std::string& value, int index);  // for load
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  int size() const { return static_cast<int>(entries_.size()); }

  struct Entry {
    int ordinal;
    std::string value;

    bool operator==(const Entry&) const = default;
  };
  // Entries in index order (entry i has feature index i).
  const std::vector<Entry>& entries() const { return entries_; }

  bool operator==(const FeatureVocabulary& other) const {
    return frozen_ == other.frozen_ && entries_ == other.entries_;
  }

 private:
  std::map<std::pair<int, std::string>, int> index_;
  std::vector<Entry> entries_;
  bool frozen_ = false;
};

// Distinguished values for unresolvable addresses and the artificial root.
inline constexpr std::string_view kNullValue = "NULL";
inline constexpr std::string_view kRootValue = "ROOT";

// Resolves one template against a configuration; always produces a value
// (possibly NULL/ROOT), never fails.
std::string evaluate_template(const FeatureTemplate& t, const Configuration& c,
                              const Sentence& s);

// Evaluates every template and maps the (ordinal, value) pairs through the
// vocabulary. Unfrozen vocabularies grow in first-seen order.
FeatureVector extract(const Configuration& c, const Sentence& s,
                      const std::vector<FeatureTemplate>& templates,
                      FeatureVocabulary& vocab);

// Read-only variant: never grows the vocabulary, unseen values are dropped.
FeatureVector extract(const Configuration& c, const Sentence& s,
                      const std::vector<FeatureTemplate>& templates,
                      const FeatureVocabulary& vocab);

}  // namespace depparse

#endif  // DEPPARSE_FEATURES_HPP
