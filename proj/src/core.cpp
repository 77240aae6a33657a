#include "depparse/core.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace depparse {

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

Tagset::Tagset(std::vector<std::string> deprels, std::string root_label)
    : deprels_(std::move(deprels)), root_label_(std::move(root_label)) {
  if (deprels_.empty()) throw Error("tagset: deprel set is empty");
  if (!find_deprel(root_label_)) {
    throw Error("tagset: root label '" + root_label_ + "' is not in the deprel set");
  }
}

Tagset Tagset::default_tagset() {
  Tagset t({"Root", "Subj", "Dobj", "Iobj", "Nmod",   "Vmod",  "Nummod", "Adjmod",
            "Advmod", "Poss", "Aaux", "Taux", "Conj",  "Cc",    "Tp",     "P",
            "Loc",    "Q",    "R",    "NEG",  "Vcomp", "Comp"},
           "Root");
  // Spellings that show up in print next to the canonical abbreviations.
  t.add_alias("Reason", "R");
  t.add_alias("Poss.", "Poss");
  t.add_alias("lobj", "Iobj");
  return t;
}

void Tagset::add_alias(const std::string& alias, const std::string& canonical) {
  auto m = find_deprel(canonical);
  if (!m) throw Error("tagset: alias target '" + canonical + "' is not a known deprel");
  if (find_deprel(alias)) throw Error("tagset: alias '" + alias + "' collides with an existing label");
  aliases_.emplace_back(alias, m->canonical);
}

void Tagset::set_postags(std::vector<std::string> postags) { postags_ = std::move(postags); }

std::optional<Tagset::Match> Tagset::find_deprel(const std::string& label) const {
  const std::string key = ascii_lower(label);
  for (const auto& d : deprels_) {
    if (ascii_lower(d) == key) return Match{d, false};
  }
  for (const auto& [alias, canonical] : aliases_) {
    if (ascii_lower(alias) == key) return Match{canonical, true};
  }
  return std::nullopt;
}

bool Tagset::has_postag(const std::string& tag) const {
  const std::string key = ascii_lower(tag);
  return std::any_of(postags_.begin(), postags_.end(),
                     [&](const std::string& p) { return ascii_lower(p) == key; });
}

const char* issue_kind_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::NonContiguousIds: return "non-contiguous-ids";
    case IssueKind::EmptyForm: return "empty-form";
    case IssueKind::MissingHead: return "missing-head";
    case IssueKind::MissingDeprel: return "missing-deprel";
    case IssueKind::HeadOutOfRange: return "head-out-of-range";
    case IssueKind::SelfLoop: return "self-loop";
    case IssueKind::UnknownDeprel: return "unknown-deprel";
    case IssueKind::UnknownPostag: return "unknown-postag";
    case IssueKind::NoRoot: return "no-root";
    case IssueKind::MultipleRoots: return "multiple-roots";
    case IssueKind::Cycle: return "cycle";
  }
  return "unknown";
}

namespace {

std::string join_ids(const std::vector<int>& ids) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) os << ", ";
    os << ids[i];
  }
  return os.str();
}

}  // namespace

ValidationReport validate_sentence(const Sentence& s, const Tagset& tagset,
                                   bool require_annotation, int sentence_index) {
  ValidationReport report;
  auto add = [&](int token_id, IssueKind kind, std::string message) {
    report.issues.push_back({sentence_index, token_id, kind, std::move(message)});
  };

  const int n = static_cast<int>(s.tokens.size());

  bool ids_ok = true;
  for (int i = 0; i < n; ++i) {
    const Token& tok = s.tokens[static_cast<std::size_t>(i)];
    if (tok.id != i + 1) {
      add(i + 1, IssueKind::NonContiguousIds,
          "token at position " + std::to_string(i + 1) + " has id " + std::to_string(tok.id) +
              ", expected " + std::to_string(i + 1));
      ids_ok = false;
    }
  }

  for (const Token& tok : s.tokens) {
    if (tok.form.empty()) add(tok.id, IssueKind::EmptyForm, "FORM is empty");
    if (require_annotation && !tok.head) add(tok.id, IssueKind::MissingHead, "HEAD is missing");
    if (require_annotation && !tok.deprel) add(tok.id, IssueKind::MissingDeprel, "DEPREL is missing");
    if (tok.deprel) {
      auto match = tagset.find_deprel(*tok.deprel);
      if (!match) {
        add(tok.id, IssueKind::UnknownDeprel, "deprel '" + *tok.deprel + "' is not in the tagset");
      } else if (match->via_alias) {
        report.notes.push_back("sentence " + std::to_string(sentence_index) + " token " +
                               std::to_string(tok.id) + ": deprel '" + *tok.deprel +
                               "' matched via alias of '" + match->canonical + "'");
      }
    }
    if (tagset.restricts_postags() && !tok.postag.empty() && !tagset.has_postag(tok.postag)) {
      add(tok.id, IssueKind::UnknownPostag, "postag '" + tok.postag + "' is not in the tagset");
    }
  }

  // Head-graph checks presume a well-formed 1..n id space.
  if (ids_ok) {
    for (const Token& tok : s.tokens) {
      if (!tok.head) continue;
      if (*tok.head < 0 || *tok.head > n) {
        add(tok.id, IssueKind::HeadOutOfRange,
            "HEAD " + std::to_string(*tok.head) + " is outside 0.." + std::to_string(n));
      } else if (*tok.head == tok.id) {
        add(tok.id, IssueKind::SelfLoop, "token is its own head");
      }
    }

    const bool all_heads =
        n > 0 && std::all_of(s.tokens.begin(), s.tokens.end(),
                             [](const Token& t) { return t.head.has_value(); });
    if (all_heads) {
      std::vector<int> roots;
      for (const Token& tok : s.tokens) {
        if (*tok.head == 0) roots.push_back(tok.id);
      }
      if (roots.empty()) {
        add(0, IssueKind::NoRoot, "no token has head 0");
      } else if (roots.size() > 1) {
        add(0, IssueKind::MultipleRoots, "tokens " + join_ids(roots) + " all have head 0");
      }

      // Walk the head chain from every token; a walk that runs for more than
      // n steps without reaching node 0 is stuck on a cycle. Report each
      // distinct cycle once, keyed by its smallest member.
      std::vector<char> on_cycle(static_cast<std::size_t>(n) + 1, 0);
      for (const Token& tok : s.tokens) {
        int cur = tok.id;
        for (int steps = 0; steps <= n && cur != 0; ++steps) {
          const int h = *s.token(cur).head;
          if (h < 0 || h > n || h == cur) { cur = 0; break; }  // already reported
          cur = h;
          if (cur == tok.id) {
            on_cycle[static_cast<std::size_t>(tok.id)] = 1;
            break;
          }
        }
      }
      std::vector<char> reported(static_cast<std::size_t>(n) + 1, 0);
      for (int id = 1; id <= n; ++id) {
        if (!on_cycle[static_cast<std::size_t>(id)] || reported[static_cast<std::size_t>(id)]) continue;
        std::vector<int> members{id};
        reported[static_cast<std::size_t>(id)] = 1;
        int cur = *s.token(id).head;
        while (cur != id) {
          members.push_back(cur);
          reported[static_cast<std::size_t>(cur)] = 1;
          cur = *s.token(cur).head;
        }
        add(id, IssueKind::Cycle, "head chain loops through tokens " + join_ids(members));
      }
    }
  }

  std::stable_sort(report.issues.begin(), report.issues.end(),
                   [](const ValidationIssue& a, const ValidationIssue& b) {
                     if (a.token_id != b.token_id) return a.token_id < b.token_id;
                     return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                   });
  report.ok = report.issues.empty();
  return report;
}

Tagset Tagset::read(std::istream& in) {
  std::string root;
  std::vector<std::string> deprels, postags;
  std::vector<std::pair<std::string, std::string>> aliases;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string directive;
    if (!(fields >> directive) || directive[0] == '#') continue;
    std::string first, second, extra;
    auto context = [&] { return " (tagset line " + std::to_string(line_no) + ")"; };
    if (directive == "root") {
      if (!(fields >> first) || (fields >> extra)) throw Error("root takes one label" + context());
      if (!root.empty()) throw Error("duplicate root directive" + context());
      root = first;
    } else if (directive == "deprel") {
      if (!(fields >> first) || (fields >> extra)) throw Error("deprel takes one label" + context());
      deprels.push_back(first);
    } else if (directive == "postag") {
      if (!(fields >> first) || (fields >> extra)) throw Error("postag takes one tag" + context());
      postags.push_back(first);
    } else if (directive == "alias") {
      if (!(fields >> first >> second) || (fields >> extra)) {
        throw Error("alias takes an alias and a canonical label" + context());
      }
      aliases.emplace_back(first, second);
    } else {
      throw Error("unknown tagset directive '" + directive + "'" + context());
    }
  }
  if (root.empty()) throw Error("tagset needs a root directive");
  bool root_listed = std::any_of(deprels.begin(), deprels.end(), [&](const std::string& d) {
    return ascii_lower(d) == ascii_lower(root);
  });
  if (!root_listed) deprels.insert(deprels.begin(), root);
  Tagset tagset(std::move(deprels), std::move(root));
  tagset.set_postags(std::move(postags));
  for (const auto& [alias, canonical] : aliases) tagset.add_alias(alias, canonical);
  return tagset;
}

Tagset Tagset::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open tagset file '" + path + "'");
  return read(in);
}

bool is_projective(const Sentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  for (const Token& tok : s.tokens) {
    if (!tok.head) throw Error("is_projective: token " + std::to_string(tok.id) + " has no head");
  }
  // An arc (h, d) is projective when every token strictly inside its span is
  // a descendant of h. For trees this is equivalent to the no-crossing-arcs
  // condition, which the tests check independently by pair enumeration.
  auto is_ancestor = [&](int ancestor, int node) {
    int cur = node;
    for (int steps = 0; steps <= n; ++steps) {
      if (cur == ancestor) return true;
      if (cur == 0) return false;
      cur = *s.token(cur).head;
    }
    return false;  // cycle; treat as non-dominated
  };
  for (const Token& tok : s.tokens) {
    const int h = *tok.head;
    const int d = tok.id;
    const int lo = std::min(h, d);
    const int hi = std::max(h, d);
    for (int k = lo + 1; k < hi; ++k) {
      if (!is_ancestor(h, k)) return false;
    }
  }
  return true;
}

}  // namespace depparse
