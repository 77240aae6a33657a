#include "depparse/eval.hpp"

#include <cstdint>
#include <set>
#include <string_view>

namespace depparse {

namespace {

struct TokenPair {
  const Token* a;
  const Token* b;
};

// Zips two treebanks token-by-token, checking shape, surface forms, and the
// annotation each caller needs. Errors name the first divergence.
std::vector<TokenPair> align(const std::vector<Sentence>& a, const std::vector<Sentence>& b,
                             std::string_view a_name, std::string_view b_name,
                             bool need_heads, bool need_labels) {
  auto prefix = [](std::size_t sent, int tok) {
    std::string p = "sentence " + std::to_string(sent + 1);
    if (tok > 0) p += ", token " + std::to_string(tok);
    return p + ": ";
  };
  if (a.size() != b.size()) {
    throw Error(std::string(a_name) + " has " + std::to_string(a.size()) + " sentences, " +
                std::string(b_name) + " has " + std::to_string(b.size()));
  }
  std::vector<TokenPair> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& ta = a[i].tokens;
    const auto& tb = b[i].tokens;
    if (ta.size() != tb.size()) {
      throw Error(prefix(i, 0) + std::string(a_name) + " has " + std::to_string(ta.size()) +
                  " tokens, " + std::string(b_name) + " has " + std::to_string(tb.size()));
    }
    for (std::size_t j = 0; j < ta.size(); ++j) {
      const Token& x = ta[j];
      const Token& y = tb[j];
      if (x.form != y.form) {
        throw Error(prefix(i, x.id) + "FORM '" + x.form + "' in " + std::string(a_name) +
                    " does not match '" + y.form + "' in " + std::string(b_name));
      }
      if (need_heads) {
        if (!x.head) throw Error(prefix(i, x.id) + "missing HEAD in " + std::string(a_name));
        if (!y.head) throw Error(prefix(i, x.id) + "missing HEAD in " + std::string(b_name));
      }
      if (need_labels) {
        if (!x.deprel) throw Error(prefix(i, x.id) + "missing DEPREL in " + std::string(a_name));
        if (!y.deprel) throw Error(prefix(i, x.id) + "missing DEPREL in " + std::string(b_name));
      }
      pairs.push_back({&x, &y});
    }
  }
  return pairs;
}

std::set<std::string> lowered_set(const std::vector<std::string>& items) {
  std::set<std::string> out;
  for (const std::string& s : items) out.insert(ascii_lower(s));
  return out;
}

// Drops pairs whose gold POSTAG is excluded.
void apply_exclusion(std::vector<TokenPair>& pairs, const EvalOptions& opts) {
  if (opts.exclude_postags.empty()) return;
  std::set<std::string> excluded = lowered_set(opts.exclude_postags);
  std::erase_if(pairs, [&](const TokenPair& p) {
    return excluded.count(ascii_lower(p.a->postag)) > 0;
  });
}

// Labels compare case-insensitively but reports keep the spelling seen first
// (gold side wins over system side).
class LabelNames {
 public:
  const std::string& display(const std::string& label) {
    auto [it, fresh] = names_.emplace(ascii_lower(label), label);
    (void)fresh;
    return it->second;
  }

 private:
  std::map<std::string, std::string> names_;
};

}  // namespace

std::optional<double> f_score(std::optional<double> precision, std::optional<double> recall) {
  if (!precision || !recall) return std::nullopt;
  double sum = *precision + *recall;
  if (sum == 0.0) return std::nullopt;
  return 2.0 * *precision * *recall / sum;
}

std::map<std::string, DeprelMetrics> prf_by_deprel(const std::vector<Sentence>& gold,
                                                   const std::vector<Sentence>& system,
                                                   const EvalOptions& opts) {
  std::vector<TokenPair> pairs = align(gold, system, "gold", "system", false, true);
  apply_exclusion(pairs, opts);

  LabelNames names;
  std::map<std::string, int> gold_count, system_count, true_positive;
  for (const TokenPair& p : pairs) {
    std::string g = ascii_lower(*p.a->deprel);
    std::string s = ascii_lower(*p.b->deprel);
    names.display(*p.a->deprel);
    names.display(*p.b->deprel);
    ++gold_count[g];
    ++system_count[s];
    if (g == s) ++true_positive[g];
  }

  std::map<std::string, DeprelMetrics> out;
  std::set<std::string> labels;
  for (const auto& [l, n] : gold_count) labels.insert(l);
  for (const auto& [l, n] : system_count) labels.insert(l);
  for (const std::string& l : labels) {
    DeprelMetrics m;
    m.gold_count = gold_count.count(l) ? gold_count[l] : 0;
    m.system_count = system_count.count(l) ? system_count[l] : 0;
    int tp = true_positive.count(l) ? true_positive[l] : 0;
    if (m.system_count > 0) m.precision = static_cast<double>(tp) / m.system_count;
    if (m.gold_count > 0) m.recall = static_cast<double>(tp) / m.gold_count;
    m.fscore = f_score(m.precision, m.recall);
    out.emplace(names.display(l), m);
  }
  return out;
}

std::map<std::string, DeprelMetrics> attachment_by_deprel(const std::vector<Sentence>& gold,
                                                          const std::vector<Sentence>& system,
                                                          const EvalOptions& opts) {
  std::vector<TokenPair> pairs = align(gold, system, "gold", "system", true, true);
  apply_exclusion(pairs, opts);

  LabelNames names;
  std::map<std::string, int> gold_count, system_count, head_ok, both_ok;
  for (const TokenPair& p : pairs) {
    std::string g = ascii_lower(*p.a->deprel);
    std::string s = ascii_lower(*p.b->deprel);
    names.display(*p.a->deprel);
    names.display(*p.b->deprel);
    ++gold_count[g];
    ++system_count[s];
    bool heads_match = *p.a->head == *p.b->head;
    if (heads_match) ++head_ok[g];
    if (heads_match && g == s) ++both_ok[g];
  }

  std::map<std::string, DeprelMetrics> out;
  std::set<std::string> labels;
  for (const auto& [l, n] : gold_count) labels.insert(l);
  for (const auto& [l, n] : system_count) labels.insert(l);
  for (const std::string& l : labels) {
    DeprelMetrics m;
    m.gold_count = gold_count.count(l) ? gold_count[l] : 0;
    m.system_count = system_count.count(l) ? system_count[l] : 0;
    if (m.gold_count > 0) {
      int heads = head_ok.count(l) ? head_ok[l] : 0;
      int both = both_ok.count(l) ? both_ok[l] : 0;
      m.uas = static_cast<double>(heads) / m.gold_count;
      m.las = static_cast<double>(both) / m.gold_count;
    }
    out.emplace(names.display(l), m);
  }
  return out;
}

EvalReport attachment_scores(const std::vector<Sentence>& gold,
                             const std::vector<Sentence>& system,
                             const EvalOptions& opts) {
  std::vector<TokenPair> pairs = align(gold, system, "gold", "system", true, true);
  apply_exclusion(pairs, opts);
  if (pairs.empty()) throw Error("no tokens to evaluate");

  int head_ok = 0, label_ok = 0, both_ok = 0;
  for (const TokenPair& p : pairs) {
    bool h = *p.a->head == *p.b->head;
    bool l = ascii_lower(*p.a->deprel) == ascii_lower(*p.b->deprel);
    if (h) ++head_ok;
    if (l) ++label_ok;
    if (h && l) ++both_ok;
  }

  EvalReport report;
  report.token_count = static_cast<int>(pairs.size());
  report.las = static_cast<double>(both_ok) / report.token_count;
  report.uas = static_cast<double>(head_ok) / report.token_count;
  report.la = static_cast<double>(label_ok) / report.token_count;

  // Merge the two per-label views into one table.
  report.per_deprel = prf_by_deprel(gold, system, opts);
  for (auto& [label, attach] : attachment_by_deprel(gold, system, opts)) {
    DeprelMetrics& m = report.per_deprel[label];
    m.las = attach.las;
    m.uas = attach.uas;
    m.gold_count = attach.gold_count;
    m.system_count = attach.system_count;
  }
  return report;
}

KappaResult cohen_kappa(const std::vector<Sentence>& a, const std::vector<Sentence>& b,
                        KappaTarget on) {
  bool need_heads = on != KappaTarget::Label;
  bool need_labels = on != KappaTarget::Head;
  std::vector<TokenPair> pairs = align(a, b, "first", "second", need_heads, need_labels);
  if (pairs.empty()) throw Error("no tokens to compare");

  auto category = [on](const Token& t) -> std::string {
    switch (on) {
      case KappaTarget::Label:
        return ascii_lower(*t.deprel);
      case KappaTarget::Head:
        return std::to_string(*t.head);
      case KappaTarget::Both:
        return std::to_string(*t.head) + '\t' + ascii_lower(*t.deprel);
    }
    return {};
  };

  std::map<std::string, std::int64_t> count_a, count_b;
  std::int64_t agree = 0;
  for (const TokenPair& p : pairs) {
    std::string ca = category(*p.a);
    std::string cb = category(*p.b);
    ++count_a[ca];
    ++count_b[cb];
    if (ca == cb) ++agree;
  }

  const auto n = static_cast<std::int64_t>(pairs.size());
  std::int64_t chance = 0;  // sum over categories of count_a * count_b
  for (const auto& [cat, ca] : count_a) {
    auto it = count_b.find(cat);
    if (it != count_b.end()) chance += ca * it->second;
  }

  KappaResult result;
  result.p_observed = static_cast<double>(agree) / static_cast<double>(n);
  result.p_expected = static_cast<double>(chance) / (static_cast<double>(n) * static_cast<double>(n));
  if (chance == n * n) {
    // Single shared category: chance agreement is certain, observed is too.
    result.degenerate = true;
    result.kappa = 1.0;
  } else {
    result.kappa = (result.p_observed - result.p_expected) / (1.0 - result.p_expected);
  }
  result.band = kappa_band(result.kappa);
  return result;
}

std::string kappa_band(double k) {
  if (k > 1.0) throw Error("kappa " + std::to_string(k) + " exceeds 1");
  if (k <= 0.0) return "No agreement";
  if (k <= 0.20) return "None to slight";
  if (k <= 0.40) return "Fair";
  if (k <= 0.60) return "Moderate";
  if (k <= 0.80) return "Substantial";
  return "Almost Perfect";
}

}  // namespace depparse
