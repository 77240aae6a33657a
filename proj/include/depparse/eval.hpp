#ifndef DEPPARSE_EVAL_HPP
#define DEPPARSE_EVAL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "depparse/core.hpp"

namespace depparse {

// Per-label metrics. absent optional = undefined (denominator was zero),
// rendered "-" in text reports and null in JSON.
struct DeprelMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> fscore;
  std::optional<double> las;   // over tokens whose gold label is this one
  std::optional<double> uas;   // likewise
  int gold_count = 0;
  int system_count = 0;
};

struct EvalReport {
  double las = 0.0;
  double uas = 0.0;
  double la = 0.0;
  int token_count = 0;
  std::map<std::string, DeprelMetrics> per_deprel;
};

struct EvalOptions {
  // Tokens whose gold POSTAG matches one of these (case-insensitively) are
  // left out of every count.
  std::vector<std::string> exclude_postags;
};

// Both inputs must align sentence-by-sentence and token-by-token (same
// counts, same forms) and carry full HEAD/DEPREL annotation; the first
// divergence is named in the error. Label comparison is case-insensitive.
EvalReport attachment_scores(const std::vector<Sentence>& gold,
                             const std::vector<Sentence>& system,
                             const EvalOptions& opts = {});

// Labels-only precision/recall/F per label: precision over tokens the system
// labeled d, recall over tokens gold labels d.
std::map<std::string, DeprelMetrics> prf_by_deprel(const std::vector<Sentence>& gold,
                                                   const std::vector<Sentence>& system,
                                                   const EvalOptions& opts = {});

// Attachment scores grouped by gold label.
std::map<std::string, DeprelMetrics> attachment_by_deprel(
    const std::vector<Sentence>& gold, const std::vector<Sentence>& system,
    const EvalOptions& opts = {});

// 2PR/(P+R); undefined when either input is undefined or P+R = 0.
std::optional<double> f_score(std::optional<double> precision,
                              std::optional<double> recall);

enum class KappaTarget { Label, Head, Both };

struct KappaResult {
  double kappa = 0.0;
  double p_observed = 0.0;
  double p_expected = 0.0;
  std::string band;
  // Both annotators used one identical category everywhere, so chance
  // agreement is 1; kappa is defined as 1 in that case.
  bool degenerate = false;
};

// Cohen's kappa over aligned annotations. `on` picks the compared category:
// the dependency label, the head id, or the (head, label) pair.
KappaResult cohen_kappa(const std::vector<Sentence>& a, const std::vector<Sentence>& b,
                        KappaTarget on);

// Maps kappa to its agreement band. Intervals are half-open with inclusive
// upper bounds: <=0, (0,0.2], (0.2,0.4], (0.4,0.6], (0.6,0.8], (0.8,1].
// Throws Error for k > 1.
std::string kappa_band(double k);

}  // namespace depparse

#endif  // DEPPARSE_EVAL_HPP
