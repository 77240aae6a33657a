#ifndef DEPPARSE_CONLL_HPP
#define DEPPARSE_CONLL_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "depparse/core.hpp"

namespace depparse {

// Tab-separated treebank format: one token per line with fields
// ID FORM LEMMA CPOSTAG POSTAG FEATS HEAD DEPREL, sentences separated by a
// blank line, "_" for absent values. The 10-column dialect carries two
// trailing placeholder columns that are ignored on read and written as "_".
struct ConllDialect {
  int columns = 10;  // 8 or 10
  std::string comment_prefix = "#";
};

inline ConllDialect conll8() { return ConllDialect{8, "#"}; }
inline ConllDialect conll10() { return ConllDialect{10, "#"}; }

// Splits a FEATS value into ordered attribute=value pairs. "_" yields an
// empty list. Throws on items without "=" and on duplicate attributes.
std::vector<std::pair<std::string, std::string>> parse_feats(const std::string& text);

// Inverse of parse_feats; an empty list renders as "_".
std::string format_feats(const std::vector<std::pair<std::string, std::string>>& feats);

// Reads every sentence from the stream. Comment lines are skipped, a leading
// UTF-8 byte-order mark is tolerated, and "-" in the LEMMA column is read as
// absent alongside "_". Malformed lines (wrong column count, non-integer ID
// or HEAD) throw an Error naming the line number.
std::vector<Sentence> read_conll(std::istream& in, const ConllDialect& dialect);

void write_conll(std::ostream& out, const std::vector<Sentence>& sentences,
                 const ConllDialect& dialect);
std::string write_conll_string(const std::vector<Sentence>& sentences,
                               const ConllDialect& dialect);

// File helpers used by the command-line tools. Reading inspects the first
// token line to pick the 8- or 10-column dialect.
ConllDialect detect_dialect(const std::string& text);
std::vector<Sentence> read_conll_file(const std::string& path);
void write_conll_file(const std::string& path, const std::vector<Sentence>& sentences,
                      const ConllDialect& dialect);

}  // namespace depparse

#endif  // DEPPARSE_CONLL_HPP
