#include <sstream>

#include "doctest.h"

#include "depparse/conll.hpp"
#include "depparse/eval.hpp"
#include "depparse/pipeline.hpp"
#include "testutil.hpp"

using namespace depparse;
using testutil::make_sentence;

namespace {

std::vector<Sentence> load_golden() {
  return read_conll_file(std::string(DEPPARSE_TEST_DATA_DIR) + "/golden.conll");
}

TrainOptions quick_options() {
  TrainOptions opts;
  opts.epochs = 8;
  return opts;
}

ParserModel train_on_golden(const std::string& system, TrainReport* report_out = nullptr) {
  auto sys = make_transition_system(system);
  auto [model, report] = train_parser(load_golden(), *sys, default_feature_model(),
                                      Tagset::default_tagset(), quick_options());
  if (report_out) *report_out = report;
  return model;
}

// One crossing pair: arcs (1,3) and (2,4) interleave.
Sentence crossing_sentence() {
  return make_sentence({0, 3, 1, 2}, {"Root", "Subj", "Dobj", "Nmod"});
}

std::string save_to_string(const ParserModel& m) {
  std::ostringstream out;
  save_model(m, out);
  return out.str();
}

ParserModel load_from_string(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

}  // namespace

TEST_CASE("class layout fans arc kinds out over the tagset") {
  Tagset tagset = Tagset::default_tagset();
  auto eager = make_transition_system("arc-eager");
  auto classes = class_transitions(*eager, tagset);
  REQUIRE(classes.size() == 46);  // SHIFT + REDUCE + 2 * 22 labels
  CHECK(transition_to_string(classes[0]) == "SHIFT");
  CHECK(transition_to_string(classes[1]) == "REDUCE");
  CHECK(transition_to_string(classes[2]) == "LEFT-ARC:Root");
  CHECK(transition_to_string(classes[3]) == "LEFT-ARC:Subj");
  CHECK(transition_to_string(classes[23]) == "LEFT-ARC:Comp");
  CHECK(transition_to_string(classes[24]) == "RIGHT-ARC:Root");
  CHECK(transition_to_string(classes[45]) == "RIGHT-ARC:Comp");

  auto standard = make_transition_system("arc-standard");
  CHECK(class_transitions(*standard, tagset).size() == 45);
  auto covington = make_transition_system("covington");
  auto cov = class_transitions(*covington, tagset);
  REQUIRE(cov.size() == 46);
  CHECK(transition_to_string(cov[1]) == "NO-ARC");
}

TEST_CASE("training memorizes the golden sentence") {
  for (const char* system : {"arc-eager", "arc-standard", "covington"}) {
    CAPTURE(system);
    TrainReport report;
    ParserModel model = train_on_golden(system, &report);

    CHECK(report.sentences_used == 1);
    CHECK(report.sentences_skipped == 0);
    CHECK(report.instance_count > 0);
    CHECK(report.mistakes_per_epoch.size() == 8);
    CHECK(model.vocab.frozen());
    CHECK(model.system_name == system);
    CHECK(model.fallback_label == "Root");

    auto gold = load_golden();
    Sentence parsed = parse_sentence(model, gold[0]);
    EvalReport scores = attachment_scores(gold, {parsed});
    CHECK(scores.las == 1.0);
    CHECK(scores.uas == 1.0);
  }
}

TEST_CASE("the arc-eager oracle on the golden sentence yields 33 instances") {
  // 17 tokens: one SHIFT per non-left-attaching token plus one transition per
  // arc plus the REDUCEs needed to expose deeper heads.
  TrainReport report;
  train_on_golden("arc-eager", &report);
  CHECK(report.instance_count == 33);
}

TEST_CASE("projective-only systems reject an all-crossing treebank") {
  std::vector<Sentence> treebank = {crossing_sentence()};
  auto eager = make_transition_system("arc-eager");
  CHECK_THROWS_WITH_AS(train_parser(treebank, *eager, default_feature_model(),
                                    Tagset::default_tagset(), quick_options()),
                       "no trainable sentences: all 1 input sentences are non-projective "
                       "for arc-eager",
                       Error);

  auto covington = make_transition_system("covington");
  auto [model, report] = train_parser(treebank, *covington, default_feature_model(),
                                      Tagset::default_tagset(), quick_options());
  CHECK(report.sentences_used == 1);
  Sentence parsed = parse_sentence(model, treebank[0]);
  EvalReport scores = attachment_scores(treebank, {parsed});
  CHECK(scores.las == 1.0);  // covington can represent and memorize the crossing tree
}

TEST_CASE("non-projective sentences are skipped, not fatal, when others remain") {
  std::vector<Sentence> treebank = {
      make_sentence({2, 0, 2}, {"Subj", "Root", "Dobj"}, "a"),
      crossing_sentence(),
  };
  auto eager = make_transition_system("arc-eager");
  auto [model, report] = train_parser(treebank, *eager, default_feature_model(),
                                      Tagset::default_tagset(), quick_options());
  (void)model;
  CHECK(report.sentences_used == 1);
  CHECK(report.sentences_skipped == 1);
}

TEST_CASE("training validates its input and names the sentence") {
  std::vector<Sentence> treebank = {make_sentence({1, 0}, {"Subj", "Root"})};  // self-headed
  auto eager = make_transition_system("arc-eager");
  try {
    train_parser(treebank, *eager, default_feature_model(), Tagset::default_tagset(),
                 quick_options());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("sentence 1: ", 0) == 0);
  }

  CHECK_THROWS_WITH_AS(train_parser({}, *eager, default_feature_model(),
                                    Tagset::default_tagset(), quick_options()),
                       "empty treebank", Error);
}

TEST_CASE("alias labels are canonicalized before they reach the class layout") {
  // "lobj" is an accepted alias of Iobj in the default tagset.
  std::vector<Sentence> treebank = {make_sentence({2, 0}, {"lobj", "Root"})};
  auto eager = make_transition_system("arc-eager");
  auto [model, report] = train_parser(treebank, *eager, default_feature_model(),
                                      Tagset::default_tagset(), quick_options());
  (void)report;
  Sentence parsed = parse_sentence(model, treebank[0]);
  CHECK(parsed.tokens[0].deprel == "Iobj");  // canonical spelling, not the alias
  CHECK(parsed.tokens[0].head == 2);
  CHECK(parsed.tokens[1].deprel == "Root");
}

TEST_CASE("parsing writes only HEAD and DEPREL") {
  ParserModel model = train_on_golden("arc-eager");
  auto gold = load_golden();
  Sentence input = gold[0];
  input.metadata = "lines 1-17";
  Sentence parsed = parse_sentence(model, input);

  REQUIRE(parsed.tokens.size() == input.tokens.size());
  CHECK(parsed.metadata == input.metadata);
  for (std::size_t i = 0; i < parsed.tokens.size(); ++i) {
    CHECK(parsed.tokens[i].form == input.tokens[i].form);
    CHECK(parsed.tokens[i].lemma == input.tokens[i].lemma);
    CHECK(parsed.tokens[i].cpostag == input.tokens[i].cpostag);
    CHECK(parsed.tokens[i].postag == input.tokens[i].postag);
    CHECK(parsed.tokens[i].feats == input.tokens[i].feats);
    CHECK(parsed.tokens[i].head.has_value());
    CHECK(parsed.tokens[i].deprel.has_value());
  }
}

TEST_CASE("parsing an empty sentence is a no-op") {
  ParserModel model = train_on_golden("arc-eager");
  Sentence empty;
  CHECK(parse_sentence(model, empty).empty());
}

TEST_CASE("parse rejects out-of-order token ids") {
  ParserModel model = train_on_golden("arc-eager");
  Sentence s = make_sentence({0, 1}, {"Root", "Nmod"});
  s.tokens[1].id = 5;
  CHECK_THROWS_WITH_AS(parse_sentence(model, s), "parse: token ids must be 1..n", Error);
}

TEST_CASE("unseen words still produce a valid single-rooted tree") {
  for (const char* system : {"arc-eager", "arc-standard", "covington"}) {
    CAPTURE(system);
    ParserModel model = train_on_golden(system);
    // Entirely fresh vocabulary, no annotation on the input.
    Sentence s;
    for (int i = 1; i <= 7; ++i) {
      Token t;
      t.id = i;
      t.form = "neu" + std::to_string(i);
      t.postag = "XX";
      t.cpostag = "XX";
      s.tokens.push_back(t);
    }
    Sentence parsed = parse_sentence(model, s);
    std::vector<int> heads;
    for (const Token& t : parsed.tokens) {
      REQUIRE(t.head.has_value());
      REQUIRE(t.deprel.has_value());
      CHECK(model.tagset.find_deprel(*t.deprel).has_value());
      heads.push_back(*t.head);
    }
    CHECK(testutil::is_valid_tree(heads));
  }
}

TEST_CASE("models survive a save/load round trip exactly") {
  ParserModel model = train_on_golden("arc-eager");
  std::string text = save_to_string(model);
  ParserModel loaded = load_from_string(text);
  CHECK(loaded == model);
  // Saving the loaded model reproduces the bytes, too.
  CHECK(save_to_string(loaded) == text);

  // And the loaded model parses identically.
  auto gold = load_golden();
  CHECK(parse_sentence(loaded, gold[0]) == parse_sentence(model, gold[0]));
}

TEST_CASE("model files are written and read back from disk") {
  ParserModel model = train_on_golden("arc-standard");
  std::string path = "/tmp/depparse_test_model.model";
  save_model_file(model, path);
  ParserModel loaded = load_model_file(path);
  CHECK(loaded == model);
  CHECK_THROWS_AS(load_model_file("/tmp/depparse_no_such_model.model"), Error);
}

TEST_CASE("training is deterministic") {
  ParserModel a = train_on_golden("arc-eager");
  ParserModel b = train_on_golden("arc-eager");
  CHECK(a == b);
  CHECK(save_to_string(a) == save_to_string(b));
}

TEST_CASE("a handwritten model file parses a one-token sentence") {
  std::string text =
      "depparse-model 1\n"
      "[system]\n"
      "arc-eager\n"
      "[fallback]\n"
      "Root\n"
      "[tagset]\n"
      "root\tRoot\n"
      "deprel\tRoot\n"
      "[templates]\n"
      "STACK[0].POSTAG\n"
      "[classes]\n"
      "0\tSHIFT\n"
      "1\tREDUCE\n"
      "2\tLEFT-ARC:Root\n"
      "3\tRIGHT-ARC:Root\n"
      "[vocabulary]\n"
      "0\tROOT\t0\n"
      "[weights]\n"
      "0\t3\t2.5\n"
      "[end]\n";
  ParserModel m = load_from_string(text);
  CHECK(m.system_name == "arc-eager");
  CHECK(m.classes.size() == 4);
  CHECK(m.vocab.size() == 1);
  CHECK(m.classifier.weight(0, 3) == 2.5);

  Sentence s;
  Token t;
  t.id = 1;
  t.form = "word";
  t.postag = "NN";
  s.tokens.push_back(t);
  Sentence parsed = parse_sentence(m, s);
  // With the stack at ROOT, feature 0 fires and RIGHT-ARC:Root outscores SHIFT.
  CHECK(parsed.tokens[0].head == 0);
  CHECK(parsed.tokens[0].deprel == "Root");
}

TEST_CASE("defective model files are named precisely") {
  ParserModel model = train_on_golden("arc-eager");
  std::string good = save_to_string(model);

  CHECK_THROWS_WITH_AS(load_from_string(""), "empty model file", Error);
  CHECK_THROWS_WITH_AS(load_from_string("hello\n"), "not a model file (bad header)", Error);
  CHECK_THROWS_WITH_AS(load_from_string("depparse-model 99\n"),
                       "unsupported model format version 99", Error);

  // Unknown transition system is rejected before anything else is parsed.
  std::string bad_system = good;
  std::size_t pos = bad_system.find("arc-eager");
  bad_system.replace(pos, 9, "dijkstra!");
  CHECK_THROWS_WITH_AS(load_from_string(bad_system), "unknown transition system 'dijkstra!'",
                       Error);

  // Chopping off the tail leaves a truncated [weights] section.
  std::string truncated = good.substr(0, good.rfind("[end]"));
  try {
    load_from_string(truncated);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "model file truncated in section [weights]");
  }

  // Sections must appear in their documented order.
  std::string reordered = good;
  pos = reordered.find("[fallback]");
  reordered.replace(pos, 10, "[LATEbacks]");
  try {
    load_from_string(reordered);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("expected section [fallback], found", 0) == 0);
  }
}

TEST_CASE("vocabulary and weight lines are range-checked on load") {
  std::string prefix =
      "depparse-model 1\n"
      "[system]\n"
      "arc-eager\n"
      "[fallback]\n"
      "Root\n"
      "[tagset]\n"
      "root\tRoot\n"
      "deprel\tRoot\n"
      "[templates]\n"
      "STACK[0].POSTAG\n"
      "[classes]\n"
      "0\tSHIFT\n"
      "1\tREDUCE\n"
      "2\tLEFT-ARC:Root\n"
      "3\tRIGHT-ARC:Root\n";

  CHECK_THROWS_WITH_AS(
      load_from_string(prefix + "[vocabulary]\n7\tROOT\t0\n[weights]\n[end]\n"),
      "model file, section [vocabulary]: template ordinal 7 out of range", Error);

  CHECK_THROWS_WITH_AS(
      load_from_string(prefix + "[vocabulary]\n0\tROOT\t1\n[weights]\n[end]\n"),
      "model file, section [vocabulary]: vocabulary entries must be inserted in index order",
      Error);

  CHECK_THROWS_WITH_AS(
      load_from_string(prefix + "[vocabulary]\n0\tROOT\t0\n[weights]\n9\t0\t1.5\n[end]\n"),
      "model file, section [weights]: feature index 9 out of range", Error);

  CHECK_THROWS_WITH_AS(
      load_from_string(prefix + "[vocabulary]\n0\tROOT\t0\n[weights]\n0\t44\t1.5\n[end]\n"),
      "model file, section [weights]: class index 44 out of range", Error);

  CHECK_THROWS_WITH_AS(
      load_from_string(prefix + "[vocabulary]\n0\tROOT\t0\n[weights]\n0\t0\tx\n[end]\n"),
      "model file, section [weights]: 'x' is not a number", Error);

  CHECK_THROWS_WITH_AS(
      load_from_string(prefix +
                       "[vocabulary]\n0\tROOT\t0\n[weights]\n0\t0\t1.5\textra\n[end]\n"),
      "model file, section [weights]: bad line '0\t0\t1.5\textra'", Error);

  // Class indices must count up from zero.
  std::string skewed =
      "depparse-model 1\n[system]\narc-eager\n[fallback]\nRoot\n[tagset]\n"
      "root\tRoot\ndeprel\tRoot\n[templates]\nSTACK[0].POSTAG\n[classes]\n"
      "0\tSHIFT\n2\tREDUCE\n[vocabulary]\n[weights]\n[end]\n";
  CHECK_THROWS_WITH_AS(load_from_string(skewed),
                       "model file, section [classes]: class indices must be consecutive from 0",
                       Error);
}
