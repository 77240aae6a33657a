#include "depparse/conll.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace depparse {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool parse_nonneg_int(const std::string& text, int& out) {
  if (text.empty()) return false;
  long value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
    if (value > 1000000) return false;
  }
  out = static_cast<int>(value);
  return true;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_feats(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> feats;
  if (text == "_" || text.empty()) return feats;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t bar = text.find('|', start);
    if (bar == std::string::npos) bar = text.size();
    const std::string item = text.substr(start, bar - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error("FEATS item '" + item + "' has no '='");
    }
    std::string attr = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    for (const auto& [existing, _] : feats) {
      if (existing == attr) throw Error("duplicate attribute " + attr + " in FEATS");
    }
    feats.emplace_back(std::move(attr), std::move(value));
    start = bar + 1;
  }
  return feats;
}

std::string format_feats(const std::vector<std::pair<std::string, std::string>>& feats) {
  if (feats.empty()) return "_";
  std::string out;
  for (std::size_t i = 0; i < feats.size(); ++i) {
    if (i) out += '|';
    out += feats[i].first;
    out += '=';
    out += feats[i].second;
  }
  return out;
}

namespace {

void check_dialect(const ConllDialect& dialect) {
  if (dialect.columns != 8 && dialect.columns != 10) {
    throw Error("CoNLL dialect must have 8 or 10 columns, got " +
                std::to_string(dialect.columns));
  }
}

}  // namespace

std::vector<Sentence> read_conll(std::istream& in, const ConllDialect& dialect) {
  check_dialect(dialect);
  std::vector<Sentence> sentences;
  Sentence current;
  int line_no = 0;
  int first_line = 0;
  std::string line;
  bool first = true;

  auto flush = [&](int last_line) {
    if (current.tokens.empty()) return;
    current.metadata = "lines " + std::to_string(first_line) + "-" + std::to_string(last_line);
    sentences.push_back(std::move(current));
    current = Sentence{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      first = false;
    }
    if (is_blank(line)) {
      flush(line_no - 1);
      continue;
    }
    if (!dialect.comment_prefix.empty() && line.rfind(dialect.comment_prefix, 0) == 0) continue;

    const std::vector<std::string> fields = split_tabs(line);
    if (static_cast<int>(fields.size()) != dialect.columns) {
      throw Error("expected " + std::to_string(dialect.columns) + " columns, got " +
                  std::to_string(fields.size()) + ", line " + std::to_string(line_no));
    }

    Token tok;
    if (!parse_nonneg_int(fields[0], tok.id) || tok.id < 1) {
      throw Error("ID '" + fields[0] + "' is not a positive integer, line " +
                  std::to_string(line_no));
    }
    tok.form = fields[1];
    if (fields[2] != "_" && fields[2] != "-" && !fields[2].empty()) tok.lemma = fields[2];
    tok.cpostag = fields[3];
    tok.postag = fields[4];
    try {
      tok.feats = parse_feats(fields[5]);
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + ", line " + std::to_string(line_no));
    }
    if (fields[6] != "_" && !fields[6].empty()) {
      int head = 0;
      if (!parse_nonneg_int(fields[6], head)) {
        throw Error("HEAD '" + fields[6] + "' is not a non-negative integer, line " +
                    std::to_string(line_no));
      }
      tok.head = head;
    }
    if (fields[7] != "_" && !fields[7].empty()) tok.deprel = fields[7];
    // Columns 9-10 of the 10-column dialect are placeholders; ignore them.

    if (current.tokens.empty()) first_line = line_no;
    current.tokens.push_back(std::move(tok));
  }
  flush(line_no);
  return sentences;
}

void write_conll(std::ostream& out, const std::vector<Sentence>& sentences,
                 const ConllDialect& dialect) {
  check_dialect(dialect);
  for (const Sentence& s : sentences) {
    for (const Token& tok : s.tokens) {
      out << tok.id << '\t' << tok.form << '\t' << (tok.lemma ? *tok.lemma : "_") << '\t'
          << tok.cpostag << '\t' << tok.postag << '\t' << format_feats(tok.feats) << '\t';
      if (tok.head) {
        out << *tok.head;
      } else {
        out << '_';
      }
      out << '\t' << (tok.deprel ? *tok.deprel : "_");
      if (dialect.columns == 10) out << "\t_\t_";
      out << '\n';
    }
    out << '\n';
  }
}

std::string write_conll_string(const std::vector<Sentence>& sentences,
                               const ConllDialect& dialect) {
  std::ostringstream os;
  write_conll(os, sentences, dialect);
  return os.str();
}

ConllDialect detect_dialect(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      first = false;
    }
    if (is_blank(line) || line.rfind("#", 0) == 0) continue;
    const std::size_t n = split_tabs(line).size();
    if (n == 8) return conll8();
    if (n == 10) return conll10();
    throw Error("cannot detect CoNLL dialect: first token line has " + std::to_string(n) +
                " columns, expected 8 or 10");
  }
  return conll10();  // empty input; dialect is irrelevant
}

std::vector<Sentence> read_conll_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::istringstream stream(text);
  return read_conll(stream, detect_dialect(text));
}

void write_conll_file(const std::string& path, const std::vector<Sentence>& sentences,
                      const ConllDialect& dialect) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_conll(out, sentences, dialect);
}

}  // namespace depparse
