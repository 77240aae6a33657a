#include <cmath>
#include <random>

#include "doctest.h"

#include "depparse/conll.hpp"
#include "depparse/eval.hpp"
#include "testutil.hpp"

using namespace depparse;
using testutil::make_sentence;

namespace {

std::vector<Sentence> one(const Sentence& s) { return {s}; }

// The worked four-token example: one wrong head, one wrong label, on
// different tokens except token 3 which keeps its head but loses its label.
std::vector<Sentence> example_gold() {
  return one(make_sentence({2, 0, 2, 2}, {"Subj", "Root", "Dobj", "Nmod"}));
}
std::vector<Sentence> example_system() {
  return one(make_sentence({2, 0, 2, 3}, {"Subj", "Root", "Iobj", "Nmod"}));
}

std::vector<Sentence> label_run(const std::vector<std::string>& labels) {
  std::vector<int> heads(labels.size(), 0);
  return one(make_sentence(heads, labels));
}

}  // namespace

TEST_CASE("a treebank scored against itself is perfect") {
  auto gold = read_conll_file(std::string(DEPPARSE_TEST_DATA_DIR) + "/golden.conll");
  EvalReport r = attachment_scores(gold, gold);
  CHECK(r.las == 1.0);
  CHECK(r.uas == 1.0);
  CHECK(r.la == 1.0);
  CHECK(r.token_count == 17);
  REQUIRE(!r.per_deprel.empty());
  for (const auto& [label, m] : r.per_deprel) {
    CAPTURE(label);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.fscore == 1.0);
    CHECK(m.las == 1.0);
    CHECK(m.uas == 1.0);
    CHECK(m.gold_count == m.system_count);
  }
  // Spot checks against the annotation: P appears 4 times, Root once.
  CHECK(r.per_deprel.at("P").gold_count == 4);
  CHECK(r.per_deprel.at("Root").gold_count == 1);
}

TEST_CASE("the four-token example scores exactly") {
  EvalReport r = attachment_scores(example_gold(), example_system());
  CHECK(r.token_count == 4);
  CHECK(r.uas == 0.75);
  CHECK(r.la == 0.75);
  CHECK(r.las == 0.50);
}

TEST_CASE("per-label metrics on the four-token example") {
  EvalReport r = attachment_scores(example_gold(), example_system());
  REQUIRE(r.per_deprel.size() == 5);  // Subj Root Dobj Iobj Nmod

  const DeprelMetrics& dobj = r.per_deprel.at("Dobj");
  CHECK(!dobj.precision.has_value());  // system never produced Dobj
  CHECK(dobj.recall == 0.0);
  CHECK(!dobj.fscore.has_value());
  CHECK(dobj.uas == 1.0);  // head of the gold-Dobj token was right
  CHECK(dobj.las == 0.0);
  CHECK(dobj.gold_count == 1);
  CHECK(dobj.system_count == 0);

  const DeprelMetrics& iobj = r.per_deprel.at("Iobj");
  CHECK(iobj.precision == 0.0);
  CHECK(!iobj.recall.has_value());  // gold never contains Iobj
  CHECK(!iobj.fscore.has_value());
  CHECK(!iobj.las.has_value());     // no gold tokens to group
  CHECK(!iobj.uas.has_value());
  CHECK(iobj.gold_count == 0);
  CHECK(iobj.system_count == 1);

  const DeprelMetrics& nmod = r.per_deprel.at("Nmod");
  CHECK(nmod.precision == 1.0);  // label was right even though the head moved
  CHECK(nmod.recall == 1.0);
  CHECK(nmod.uas == 0.0);
  CHECK(nmod.las == 0.0);

  for (const char* exact : {"Subj", "Root"}) {
    const DeprelMetrics& m = r.per_deprel.at(exact);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.fscore == 1.0);
    CHECK(m.las == 1.0);
    CHECK(m.uas == 1.0);
  }
}

TEST_CASE("f_score arithmetic and undefined propagation") {
  REQUIRE(f_score(0.8, 0.923).has_value());
  CHECK(*f_score(0.8, 0.923) == doctest::Approx(0.857).epsilon(0.0015));
  CHECK(*f_score(1.0, 1.0) == 1.0);
  CHECK(*f_score(0.5, 0.5) == 0.5);
  CHECK(!f_score(std::nullopt, 1.0).has_value());
  CHECK(!f_score(1.0, std::nullopt).has_value());
  CHECK(!f_score(std::nullopt, std::nullopt).has_value());
  CHECK(!f_score(0.0, 0.0).has_value());  // P+R = 0
}

TEST_CASE("label comparison ignores case but reports keep the gold spelling") {
  auto gold = label_run({"Root", "Subj"});
  auto system = label_run({"ROOT", "subj"});
  auto prf = prf_by_deprel(gold, system);
  REQUIRE(prf.size() == 2);
  CHECK(prf.count("Root") == 1);
  CHECK(prf.count("Subj") == 1);
  CHECK(prf.at("Root").precision == 1.0);
  CHECK(prf.at("Subj").recall == 1.0);
}

TEST_CASE("excluded POSTAGs drop out of every count") {
  // make_sentence assigns postags T0 T1 T2 T0 cyclically.
  auto gold = example_gold();
  auto system = example_system();

  EvalOptions opts;
  opts.exclude_postags = {"t0"};  // case-insensitive; removes tokens 1 and 4
  EvalReport r = attachment_scores(gold, system, opts);
  CHECK(r.token_count == 2);
  CHECK(r.uas == 1.0);   // tokens 2 and 3 both have correct heads
  CHECK(r.la == 0.5);    // token 3's label is wrong
  CHECK(r.las == 0.5);
  CHECK(r.per_deprel.count("Nmod") == 0);  // its only token was excluded

  opts.exclude_postags = {"T0", "T1", "T2"};
  CHECK_THROWS_WITH_AS(attachment_scores(gold, system, opts), "no tokens to evaluate", Error);
}

TEST_CASE("misaligned inputs are rejected with a precise message") {
  auto gold = example_gold();
  CHECK_THROWS_WITH_AS(attachment_scores(gold, {}),
                       "gold has 1 sentences, system has 0", Error);

  auto short_system = one(make_sentence({2, 0, 2}, {"Subj", "Root", "Dobj"}));
  CHECK_THROWS_WITH_AS(attachment_scores(gold, short_system),
                       "sentence 1: gold has 4 tokens, system has 3", Error);

  auto renamed = example_system();
  renamed[0].tokens[1].form = "other";
  CHECK_THROWS_WITH_AS(attachment_scores(gold, renamed),
                       "sentence 1, token 2: FORM 'w2' in gold does not match 'other' in system",
                       Error);

  auto missing_head = example_system();
  missing_head[0].tokens[2].head.reset();
  CHECK_THROWS_WITH_AS(attachment_scores(gold, missing_head),
                       "sentence 1, token 3: missing HEAD in system", Error);

  auto missing_label = example_gold();
  missing_label[0].tokens[0].deprel.reset();
  CHECK_THROWS_WITH_AS(attachment_scores(missing_label, example_system()),
                       "sentence 1, token 1: missing DEPREL in gold", Error);
}

TEST_CASE("random pairs obey LAS <= min(UAS, LA) and the counts add up") {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> inventory = {"Root", "Subj", "Dobj", "Nmod", "P"};
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng() % 9);
    auto gold_heads = testutil::random_tree(rng, n);
    auto system_heads = testutil::random_tree(rng, n);
    auto gold_labels = testutil::labels_for(gold_heads, inventory, rng);
    auto system_labels = testutil::labels_for(system_heads, inventory, rng);
    auto gold = one(make_sentence(gold_heads, gold_labels));
    auto system = one(make_sentence(system_heads, system_labels));

    EvalReport r = attachment_scores(gold, system);
    CHECK(r.las <= r.uas);
    CHECK(r.las <= r.la);
    CHECK(r.uas >= 0.0);
    CHECK(r.uas <= 1.0);

    int gold_total = 0, system_total = 0;
    double las_weighted = 0.0, uas_weighted = 0.0;
    for (const auto& [label, m] : r.per_deprel) {
      gold_total += m.gold_count;
      system_total += m.system_count;
      if (m.las) {
        CHECK(*m.las <= *m.uas);  // same grouping, stricter predicate
        las_weighted += *m.las * m.gold_count;
        uas_weighted += *m.uas * m.gold_count;
      } else {
        CHECK(m.gold_count == 0);
      }
    }
    CHECK(gold_total == n);
    CHECK(system_total == n);
    // Gold-grouped attachment metrics re-aggregate to the global ones.
    CHECK(std::abs(las_weighted / n - r.las) < 1e-12);
    CHECK(std::abs(uas_weighted / n - r.uas) < 1e-12);
  }
}

TEST_CASE("the ten-token agreement example lands exactly on 0.8") {
  auto first = label_run({"A", "A", "A", "A", "A", "A", "B", "B", "B", "B"});
  auto second = label_run({"A", "A", "A", "A", "A", "B", "B", "B", "B", "B"});
  KappaResult r = cohen_kappa(first, second, KappaTarget::Label);
  CHECK(r.p_observed == 0.9);
  CHECK(r.p_expected == 0.5);
  CHECK(r.kappa == 0.8);  // exact: (0.9 - 0.5) / 0.5 in doubles
  CHECK(r.band == "Substantial");
  CHECK(!r.degenerate);
}

TEST_CASE("kappa against itself is exactly one") {
  auto a = label_run({"Root", "Subj", "Dobj", "Subj"});
  KappaResult r = cohen_kappa(a, a, KappaTarget::Label);
  CHECK(r.kappa == 1.0);
  CHECK(r.p_observed == 1.0);
  CHECK(r.band == "Almost Perfect");
  CHECK(!r.degenerate);
}

TEST_CASE("one shared category everywhere is flagged degenerate") {
  auto a = label_run({"X", "X", "X"});
  KappaResult r = cohen_kappa(a, a, KappaTarget::Label);
  CHECK(r.degenerate);
  CHECK(r.kappa == 1.0);
  CHECK(r.p_expected == 1.0);
  CHECK(r.band == "Almost Perfect");
}

TEST_CASE("kappa can compare heads or head-label pairs") {
  auto a = one(make_sentence({2, 0, 2, 2}, {"Subj", "Root", "Dobj", "Nmod"}));
  auto b = one(make_sentence({2, 0, 2, 3}, {"Subj", "Root", "Iobj", "Nmod"}));

  KappaResult heads = cohen_kappa(a, b, KappaTarget::Head);
  CHECK(heads.p_observed == 0.75);
  // count_a: {2:3, 0:1}; count_b: {2:2, 0:1, 3:1}; chance = 3*2 + 1*1 = 7.
  CHECK(heads.p_expected == doctest::Approx(7.0 / 16.0));
  CHECK(heads.kappa == doctest::Approx(5.0 / 9.0));

  KappaResult both = cohen_kappa(a, b, KappaTarget::Both);
  CHECK(both.p_observed == 0.5);  // tokens 3 and 4 each differ in one part
  CHECK(both.kappa < heads.kappa);

  // Labels alone: disagree on one of four.
  KappaResult labels = cohen_kappa(a, b, KappaTarget::Label);
  CHECK(labels.p_observed == 0.75);
}

TEST_CASE("kappa is symmetric in its arguments") {
  std::mt19937_64 rng(515);
  const std::vector<std::string> inventory = {"Root", "Subj", "Dobj", "Nmod"};
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng() % 8);
    auto ha = testutil::random_tree(rng, n);
    auto hb = testutil::random_tree(rng, n);
    auto a = one(make_sentence(ha, testutil::labels_for(ha, inventory, rng)));
    auto b = one(make_sentence(hb, testutil::labels_for(hb, inventory, rng)));
    for (KappaTarget on : {KappaTarget::Label, KappaTarget::Head, KappaTarget::Both}) {
      KappaResult ab = cohen_kappa(a, b, on);
      KappaResult ba = cohen_kappa(b, a, on);
      CHECK(std::abs(ab.kappa - ba.kappa) < 1e-12);
      CHECK(ab.p_observed == ba.p_observed);
      CHECK(ab.p_expected == ba.p_expected);
      CHECK(ab.kappa <= 1.0);
    }
  }
}

TEST_CASE("kappa alignment errors use first/second naming") {
  auto a = label_run({"A", "B"});
  CHECK_THROWS_WITH_AS(cohen_kappa(a, {}, KappaTarget::Label),
                       "first has 1 sentences, second has 0", Error);
  CHECK_THROWS_WITH_AS(cohen_kappa({}, {}, KappaTarget::Label), "no tokens to compare", Error);

  auto b = label_run({"A", "B"});
  b[0].tokens[1].deprel.reset();
  CHECK_THROWS_WITH_AS(cohen_kappa(a, b, KappaTarget::Label),
                       "sentence 1, token 2: missing DEPREL in second", Error);
  // The head target does not require labels at all.
  CHECK_NOTHROW(cohen_kappa(a, b, KappaTarget::Head));
}

TEST_CASE("agreement bands cover their documented intervals") {
  CHECK(kappa_band(-0.3) == "No agreement");
  CHECK(kappa_band(0.0) == "No agreement");
  CHECK(kappa_band(0.1) == "None to slight");
  CHECK(kappa_band(0.20) == "None to slight");
  CHECK(kappa_band(0.21) == "Fair");
  CHECK(kappa_band(0.40) == "Fair");
  CHECK(kappa_band(0.55) == "Moderate");
  CHECK(kappa_band(0.60) == "Moderate");
  CHECK(kappa_band(0.61) == "Substantial");
  CHECK(kappa_band(0.80) == "Substantial");
  CHECK(kappa_band(0.81) == "Almost Perfect");
  CHECK(kappa_band(0.93) == "Almost Perfect");
  CHECK(kappa_band(1.0) == "Almost Perfect");
  CHECK_THROWS_AS(kappa_band(1.0001), Error);
}
