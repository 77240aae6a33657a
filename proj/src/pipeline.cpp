#include "depparse/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace depparse {

namespace {

std::string render_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("cannot render weight value");
  return std::string(buf, end);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* last = s.data() + s.size();
  auto [end, ec] = std::from_chars(s.data(), last, v);
  if (ec != std::errc() || end != last) throw Error("'" + s + "' is not a number");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const char* last = s.data() + s.size();
  auto [end, ec] = std::from_chars(s.data(), last, v);
  if (ec != std::errc() || end != last) throw Error("'" + s + "' is not an integer");
  return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

// Gold labels may arrive in any casing or through an alias; classes are
// keyed by the canonical spelling.
Transition canonicalize(const Transition& t, const Tagset& tagset) {
  if (!is_arc_kind(t.kind)) return t;
  auto match = tagset.find_deprel(t.label);
  if (!match) throw Error("unknown dependency label '" + t.label + "'");
  return Transition{t.kind, match->canonical};
}

std::map<std::string, int> class_index_map(const std::vector<Transition>& classes) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    index.emplace(transition_to_string(classes[i]), static_cast<int>(i));
  }
  return index;
}

}  // namespace

std::vector<Transition> class_transitions(const TransitionSystem& sys, const Tagset& tagset) {
  std::vector<Transition> classes;
  for (TransitionKind kind : sys.kinds()) {
    if (is_arc_kind(kind)) {
      for (const std::string& label : tagset.deprels()) {
        classes.push_back({kind, label});
      }
    } else {
      classes.push_back({kind, std::string()});
    }
  }
  return classes;
}

std::pair<ParserModel, TrainReport> train_parser(const std::vector<Sentence>& treebank,
                                                 const TransitionSystem& sys,
                                                 std::vector<FeatureTemplate> templates,
                                                 Tagset tagset, const TrainOptions& opts) {
  for (std::size_t i = 0; i < treebank.size(); ++i) {
    ValidationReport report = validate_sentence(treebank[i], tagset, true, i);
    if (!report.ok) {
      throw Error("sentence " + std::to_string(i + 1) + ": " + report.issues.front().message);
    }
  }

  ParserModel model;
  model.system_name = std::string(sys.name());
  model.fallback_label = tagset.root_label();
  model.tagset = std::move(tagset);
  model.templates = std::move(templates);
  model.classes = class_transitions(sys, model.tagset);
  std::map<std::string, int> class_index = class_index_map(model.classes);

  TrainReport report;
  std::vector<TrainingInstance> instances;
  for (const Sentence& sentence : treebank) {
    if (!sys.handles_nonprojective() && !is_projective(sentence)) {
      ++report.sentences_skipped;
      continue;
    }
    ++report.sentences_used;
    Configuration c = sys.initial(sentence);
    while (!sys.is_terminal(c)) {
      Transition gold = canonicalize(sys.oracle_step(c, sentence), model.tagset);
      auto it = class_index.find(transition_to_string(gold));
      if (it == class_index.end()) {
        throw Error("oracle produced a transition outside the class layout: " +
                    transition_to_string(gold));
      }
      TrainingInstance inst;
      inst.features = extract(c, sentence, model.templates, model.vocab);
      inst.cls = it->second;
      instances.push_back(std::move(inst));
      c = sys.apply(c, gold);
    }
  }

  if (report.sentences_used == 0) {
    if (treebank.empty()) throw Error("empty treebank");
    throw Error("no trainable sentences: all " + std::to_string(report.sentences_skipped) +
                " input sentences are non-projective for " + std::string(sys.name()));
  }
  if (instances.empty()) throw Error("no training instances derived");

  model.vocab.freeze();
  report.instance_count = static_cast<int>(instances.size());
  model.classifier =
      train_classifier(instances, static_cast<int>(model.classes.size()), model.vocab.size(),
                       opts, &report.mistakes_per_epoch);
  return {std::move(model), std::move(report)};
}

Sentence parse_sentence(const ParserModel& m, const Sentence& s) {
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (s.tokens[i].id != static_cast<int>(i) + 1) {
      throw Error("parse: token ids must be 1..n");
    }
  }
  Sentence out = s;
  if (s.empty()) return out;

  auto sys = make_transition_system(m.system_name);
  Configuration c = sys->initial(s);
  while (!sys->is_terminal(c)) {
    std::set<TransitionKind> legal_kinds;
    for (TransitionKind k : sys->legal(c)) legal_kinds.insert(k);
    std::vector<int> legal;
    for (std::size_t i = 0; i < m.classes.size(); ++i) {
      if (legal_kinds.count(m.classes[i].kind)) legal.push_back(static_cast<int>(i));
    }
    FeatureVector v = extract(c, s, m.templates, m.vocab);
    int cls = predict_legal(m.classifier, v, legal);
    c = sys->apply(c, m.classes[static_cast<std::size_t>(cls)]);
  }

  ExtractedTree tree = extract_tree(c, static_cast<int>(s.tokens.size()), m.fallback_label);
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    out.tokens[i].head = tree.heads[i];
    out.tokens[i].deprel = tree.labels[i];
  }
  return out;
}

void save_model(const ParserModel& m, std::ostream& out) {
  out << "depparse-model " << m.format_version << '\n';
  out << "[system]\n" << m.system_name << '\n';
  out << "[fallback]\n" << m.fallback_label << '\n';
  out << "[tagset]\n";
  out << "root\t" << m.tagset.root_label() << '\n';
  for (const std::string& d : m.tagset.deprels()) out << "deprel\t" << d << '\n';
  for (const std::string& p : m.tagset.postags()) out << "postag\t" << p << '\n';
  for (const auto& [alias, canonical] : m.tagset.aliases()) {
    out << "alias\t" << alias << '\t' << canonical << '\n';
  }
  out << "[templates]\n";
  for (const FeatureTemplate& t : m.templates) out << template_to_string(t) << '\n';
  out << "[classes]\n";
  for (std::size_t i = 0; i < m.classes.size(); ++i) {
    out << i << '\t' << transition_to_string(m.classes[i]) << '\n';
  }
  out << "[vocabulary]\n";
  for (std::size_t i = 0; i < m.vocab.entries().size(); ++i) {
    const auto& e = m.vocab.entries()[i];
    out << e.ordinal << '\t' << e.value << '\t' << i << '\n';
  }
  out << "[weights]\n";
  for (int f = 0; f < m.classifier.feature_count; ++f) {
    for (int c = 0; c < m.classifier.class_count; ++c) {
      double w = m.classifier.weight(f, c);
      if (w != 0.0) out << f << '\t' << c << '\t' << render_double(w) << '\n';
    }
  }
  out << "[end]\n";
}

namespace {

struct SectionReader {
  std::vector<std::string> lines;
  std::size_t pos = 0;

  bool done() const { return pos >= lines.size(); }
  const std::string& peek() const { return lines[pos]; }

  // Consumes a "[name]" marker line.
  void expect_section(const std::string& name) {
    std::string want = "[" + name + "]";
    if (done()) throw Error("model file truncated before section " + want);
    if (lines[pos] != want) {
      throw Error("expected section " + want + ", found '" + lines[pos] + "'");
    }
    ++pos;
  }

  // Consumes content lines up to the next section marker.
  std::vector<std::string> body(const std::string& name) {
    std::vector<std::string> out;
    while (!done() && !(peek().size() >= 2 && peek().front() == '[')) {
      out.push_back(lines[pos++]);
    }
    if (done()) throw Error("model file truncated in section [" + name + "]");
    return out;
  }
};

}  // namespace

ParserModel load_model(std::istream& in) {
  SectionReader reader;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    reader.lines.push_back(line);
  }
  if (reader.lines.empty()) throw Error("empty model file");

  std::istringstream header(reader.lines[0]);
  std::string magic;
  int version = -1;
  header >> magic >> version;
  if (magic != "depparse-model") throw Error("not a model file (bad header)");
  if (version != kModelFormatVersion) {
    throw Error("unsupported model format version " + std::to_string(version));
  }
  reader.pos = 1;

  ParserModel m;
  m.format_version = version;

  reader.expect_section("system");
  std::vector<std::string> body = reader.body("system");
  if (body.size() != 1) throw Error("model file, section [system]: expected one line");
  m.system_name = body[0];
  make_transition_system(m.system_name);  // rejects unknown names early

  reader.expect_section("fallback");
  body = reader.body("fallback");
  if (body.size() != 1) throw Error("model file, section [fallback]: expected one line");
  m.fallback_label = body[0];

  reader.expect_section("tagset");
  body = reader.body("tagset");
  {
    std::string root;
    std::vector<std::string> deprels, postags;
    std::vector<std::pair<std::string, std::string>> aliases;
    for (const std::string& l : body) {
      std::vector<std::string> f = split_tabs(l);
      if (f[0] == "root" && f.size() == 2) {
        root = f[1];
      } else if (f[0] == "deprel" && f.size() == 2) {
        deprels.push_back(f[1]);
      } else if (f[0] == "postag" && f.size() == 2) {
        postags.push_back(f[1]);
      } else if (f[0] == "alias" && f.size() == 3) {
        aliases.emplace_back(f[1], f[2]);
      } else {
        throw Error("model file, section [tagset]: bad line '" + l + "'");
      }
    }
    if (root.empty() || deprels.empty()) {
      throw Error("model file, section [tagset]: missing root or labels");
    }
    try {
      Tagset tagset(std::move(deprels), std::move(root));
      tagset.set_postags(std::move(postags));
      for (const auto& [alias, canonical] : aliases) tagset.add_alias(alias, canonical);
      m.tagset = std::move(tagset);
    } catch (const Error& e) {
      throw Error("model file, section [tagset]: " + std::string(e.what()));
    }
  }

  reader.expect_section("templates");
  body = reader.body("templates");
  try {
    for (const std::string& l : body) m.templates.push_back(parse_template(l));
  } catch (const Error& e) {
    throw Error("model file, section [templates]: " + std::string(e.what()));
  }

  reader.expect_section("classes");
  body = reader.body("classes");
  try {
    for (const std::string& l : body) {
      std::vector<std::string> f = split_tabs(l);
      if (f.size() != 2) throw Error("bad line '" + l + "'");
      if (parse_int(f[0]) != static_cast<int>(m.classes.size())) {
        throw Error("class indices must be consecutive from 0");
      }
      m.classes.push_back(transition_from_string(f[1]));
    }
    if (m.classes.empty()) throw Error("no classes");
  } catch (const Error& e) {
    throw Error("model file, section [classes]: " + std::string(e.what()));
  }

  reader.expect_section("vocabulary");
  body = reader.body("vocabulary");
  try {
    for (const std::string& l : body) {
      std::vector<std::string> f = split_tabs(l);
      if (f.size() != 3) throw Error("bad line '" + l + "'");
      int ordinal = parse_int(f[0]);
      if (ordinal < 0 || ordinal >= static_cast<int>(m.templates.size())) {
        throw Error("template ordinal " + f[0] + " out of range");
      }
      m.vocab.insert(ordinal, f[1], parse_int(f[2]));
    }
  } catch (const Error& e) {
    throw Error("model file, section [vocabulary]: " + std::string(e.what()));
  }
  m.vocab.freeze();

  reader.expect_section("weights");
  body = reader.body("weights");
  m.classifier.feature_count = m.vocab.size();
  m.classifier.class_count = static_cast<int>(m.classes.size());
  m.classifier.weights.assign(static_cast<std::size_t>(m.classifier.feature_count) *
                                  static_cast<std::size_t>(m.classifier.class_count),
                              0.0);
  try {
    for (const std::string& l : body) {
      std::vector<std::string> f = split_tabs(l);
      if (f.size() != 3) throw Error("bad line '" + l + "'");
      int feature = parse_int(f[0]);
      int cls = parse_int(f[1]);
      if (feature < 0 || feature >= m.classifier.feature_count) {
        throw Error("feature index " + f[0] + " out of range");
      }
      if (cls < 0 || cls >= m.classifier.class_count) {
        throw Error("class index " + f[1] + " out of range");
      }
      m.classifier.weight(feature, cls) = parse_double(f[2]);
    }
  } catch (const Error& e) {
    throw Error("model file, section [weights]: " + std::string(e.what()));
  }

  reader.expect_section("end");
  return m;
}

void save_model_file(const ParserModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_model(m, out);
  out.flush();
  if (!out) throw Error("error writing '" + path + "'");
}

ParserModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_model(in);
}

}  // namespace depparse
