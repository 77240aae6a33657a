#ifndef DEPPARSE_PIPELINE_HPP
#define DEPPARSE_PIPELINE_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "depparse/core.hpp"
#include "depparse/features.hpp"
#include "depparse/learner.hpp"
#include "depparse/transitions.hpp"

namespace depparse {

inline constexpr int kModelFormatVersion = 1;

// Everything needed to parse: the transition system's name, the label
// vocabulary, the feature model, the frozen feature vocabulary, the trained
// classifier, and the class <-> transition mapping.
struct ParserModel {
  int format_version = kModelFormatVersion;
  std::string system_name;
  Tagset tagset = Tagset::default_tagset();
  std::string fallback_label;  // label used when tree repair must invent arcs
  std::vector<FeatureTemplate> templates;
  FeatureVocabulary vocab;
  std::vector<Transition> classes;  // class index -> transition
  LinearModel classifier;

  bool operator==(const ParserModel&) const = default;
};

struct TrainReport {
  int sentences_used = 0;
  int sentences_skipped = 0;  // non-projective input to a projective-only system
  int instance_count = 0;
  std::vector<int> mistakes_per_epoch;
};

// The fixed class layout: transition kinds in system declaration order,
// arc transitions fanned out over the tagset's labels in tagset order.
std::vector<Transition> class_transitions(const TransitionSystem& sys, const Tagset& tagset);

// Oracle-derives training instances from every usable sentence, then fits
// the classifier. Sentences must pass validation with annotation required.
// Non-projective sentences are skipped (and counted) unless the system
// handles them. Throws Error when nothing remains to train on.
std::pair<ParserModel, TrainReport> train_parser(const std::vector<Sentence>& treebank,
                                                 const TransitionSystem& sys,
                                                 std::vector<FeatureTemplate> templates,
                                                 Tagset tagset, const TrainOptions& opts);

// Greedy transition parsing. Only HEAD and DEPREL are written; every other
// column passes through. The result is always a valid single-rooted tree.
Sentence parse_sentence(const ParserModel& m, const Sentence& s);

// Line-oriented text persistence. Doubles are rendered with shortest
// round-trip decimals, so load(save(m)) reproduces m exactly.
void save_model(const ParserModel& m, std::ostream& out);
ParserModel load_model(std::istream& in);
void save_model_file(const ParserModel& m, const std::string& path);
ParserModel load_model_file(const std::string& path);

}  // namespace depparse

#endif  // DEPPARSE_PIPELINE_HPP
