#include "depparse/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "depparse/conll.hpp"
#include "depparse/core.hpp"
#include "depparse/eval.hpp"
#include "depparse/pipeline.hpp"
#include "depparse/transitions.hpp"

namespace depparse {

namespace {

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string opt4(const std::optional<double>& v) { return v ? fmt4(*v) : "-"; }

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct LoadedConll {
  std::vector<Sentence> sentences;
  ConllDialect dialect;
};

// Empty or "-" reads standard input. The dialect is detected from the data
// so 8- and 10-column files both work and round-trip.
LoadedConll load_conll(const std::string& path) {
  std::string text;
  if (path.empty() || path == "-") {
    text = slurp(std::cin);
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    text = slurp(in);
  }
  LoadedConll loaded{{}, detect_dialect(text)};
  std::istringstream ss(text);
  loaded.sentences = read_conll(ss, loaded.dialect);
  return loaded;
}

Tagset tagset_from(const std::string& path) {
  return path.empty() ? Tagset::default_tagset() : Tagset::read_file(path);
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct ValidateArgs {
  std::string file, tagset;
  bool strict = false;
};

int cmd_validate(const ValidateArgs& args) {
  Tagset tagset = tagset_from(args.tagset);
  LoadedConll loaded = load_conll(args.file);

  int issue_count = 0;
  int token_count = 0;
  std::vector<std::string> notes;
  for (std::size_t i = 0; i < loaded.sentences.size(); ++i) {
    const Sentence& s = loaded.sentences[i];
    token_count += static_cast<int>(s.tokens.size());
    ValidationReport report = validate_sentence(s, tagset, args.strict,
                                                static_cast<int>(i) + 1);
    for (const ValidationIssue& issue : report.issues) {
      ++issue_count;
      std::cout << "sentence " << issue.sentence_index;
      if (issue.token_id > 0) std::cout << ", token " << issue.token_id;
      std::cout << ": " << issue.message << " [" << issue_kind_name(issue.kind) << "]\n";
    }
    for (const std::string& note : report.notes) notes.push_back(note);
  }
  for (const std::string& note : notes) std::cout << "note: " << note << '\n';
  std::cout << loaded.sentences.size() << " sentences, " << token_count << " tokens, "
            << issue_count << " issues\n";
  return issue_count == 0 ? 0 : 1;
}

struct TrainArgs {
  std::string train, algorithm, features, tagset, model;
  int epochs = 10;
  std::uint64_t seed = 1;
};

int cmd_train(const TrainArgs& args) {
  auto sys = make_transition_system(args.algorithm);
  Tagset tagset = tagset_from(args.tagset);
  std::vector<FeatureTemplate> templates;
  if (args.features.empty()) {
    templates = default_feature_model();
  } else {
    std::ifstream in(args.features, std::ios::binary);
    if (!in) throw Error("cannot open '" + args.features + "'");
    templates = parse_feature_spec(in);
    if (templates.empty()) throw Error("feature spec '" + args.features + "' has no templates");
  }
  LoadedConll loaded = load_conll(args.train);

  TrainOptions opts;
  opts.epochs = args.epochs;
  opts.seed = args.seed;
  auto [model, report] = train_parser(loaded.sentences, *sys, std::move(templates),
                                      std::move(tagset), opts);
  save_model_file(model, args.model);

  std::cout << "system " << model.system_name << '\n';
  std::cout << "sentences used " << report.sentences_used << '\n';
  std::cout << "sentences skipped " << report.sentences_skipped << '\n';
  std::cout << "instances " << report.instance_count << '\n';
  std::cout << "features " << model.vocab.size() << '\n';
  std::cout << "classes " << model.classes.size() << '\n';
  for (std::size_t e = 0; e < report.mistakes_per_epoch.size(); ++e) {
    std::cout << "epoch " << e + 1 << " mistakes " << report.mistakes_per_epoch[e] << '\n';
  }
  std::cout << "model written: " << args.model << '\n';
  return 0;
}

struct ParseArgs {
  std::string model, input, output;
};

int cmd_parse(const ParseArgs& args) {
  ParserModel model = load_model_file(args.model);
  LoadedConll loaded = load_conll(args.input);

  std::vector<Sentence> parsed;
  parsed.reserve(loaded.sentences.size());
  for (const Sentence& s : loaded.sentences) parsed.push_back(parse_sentence(model, s));

  if (args.output.empty() || args.output == "-") {
    write_conll(std::cout, parsed, loaded.dialect);
  } else {
    write_conll_file(args.output, parsed, loaded.dialect);
  }
  return 0;
}

struct EvalArgs {
  std::string gold, system, exclude_pos;
  std::string format = "text";
  bool by_deprel = false;
};

int cmd_eval(const EvalArgs& args) {
  LoadedConll gold = load_conll(args.gold);
  LoadedConll system = load_conll(args.system);
  EvalOptions opts;
  opts.exclude_postags = split_csv(args.exclude_pos);
  EvalReport report = attachment_scores(gold.sentences, system.sentences, opts);

  if (args.format == "text") {
    std::cout << "LAS " << fmt4(report.las) << " UAS " << fmt4(report.uas) << " LA "
              << fmt4(report.la) << '\n';
    std::cout << "tokens " << report.token_count << '\n';
    if (args.by_deprel) {
      std::printf("%-12s %6s %7s %10s %10s %10s %10s %10s\n", "deprel", "gold", "system",
                  "precision", "recall", "fscore", "las", "uas");
      for (const auto& [label, m] : report.per_deprel) {
        std::printf("%-12s %6d %7d %10s %10s %10s %10s %10s\n", label.c_str(), m.gold_count,
                    m.system_count, opt4(m.precision).c_str(), opt4(m.recall).c_str(),
                    opt4(m.fscore).c_str(), opt4(m.las).c_str(), opt4(m.uas).c_str());
      }
    }
  } else if (args.format == "tsv") {
    std::cout << "LAS\t" << fmt4(report.las) << '\n';
    std::cout << "UAS\t" << fmt4(report.uas) << '\n';
    std::cout << "LA\t" << fmt4(report.la) << '\n';
    std::cout << "tokens\t" << report.token_count << '\n';
    if (args.by_deprel) {
      std::cout << "deprel\tgold\tsystem\tprecision\trecall\tfscore\tlas\tuas\n";
      for (const auto& [label, m] : report.per_deprel) {
        std::cout << label << '\t' << m.gold_count << '\t' << m.system_count << '\t'
                  << opt4(m.precision) << '\t' << opt4(m.recall) << '\t' << opt4(m.fscore)
                  << '\t' << opt4(m.las) << '\t' << opt4(m.uas) << '\n';
      }
    }
  } else {  // json
    nlohmann::ordered_json j;
    j["las"] = report.las;
    j["uas"] = report.uas;
    j["la"] = report.la;
    j["tokens"] = report.token_count;
    if (args.by_deprel) {
      nlohmann::ordered_json table = nlohmann::ordered_json::object();
      auto num_or_null = [](const std::optional<double>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
      };
      for (const auto& [label, m] : report.per_deprel) {
        nlohmann::ordered_json row;
        row["gold"] = m.gold_count;
        row["system"] = m.system_count;
        row["precision"] = num_or_null(m.precision);
        row["recall"] = num_or_null(m.recall);
        row["fscore"] = num_or_null(m.fscore);
        row["las"] = num_or_null(m.las);
        row["uas"] = num_or_null(m.uas);
        table[label] = std::move(row);
      }
      j["per_deprel"] = std::move(table);
    }
    std::cout << j.dump(2) << '\n';
  }
  return 0;
}

struct KappaArgs {
  std::string a, b;
  std::string on = "label";
};

int cmd_kappa(const KappaArgs& args) {
  LoadedConll a = load_conll(args.a);
  LoadedConll b = load_conll(args.b);
  KappaTarget target = KappaTarget::Label;
  if (args.on == "head") target = KappaTarget::Head;
  if (args.on == "both") target = KappaTarget::Both;

  KappaResult result = cohen_kappa(a.sentences, b.sentences, target);
  std::cout << "kappa " << fmt4(result.kappa) << '\n';
  std::cout << "p_observed " << fmt4(result.p_observed) << '\n';
  std::cout << "p_expected " << fmt4(result.p_expected) << '\n';
  std::cout << "band " << result.band << '\n';
  if (result.degenerate) {
    std::cerr << "note: both annotations use one identical category; kappa defined as 1\n";
  }
  return 0;
}

struct OracleArgs {
  std::string train, algorithm;
};

int cmd_oracle(const OracleArgs& args) {
  auto sys = make_transition_system(args.algorithm);
  Tagset tagset = Tagset::default_tagset();
  LoadedConll loaded = load_conll(args.train);

  for (std::size_t i = 0; i < loaded.sentences.size(); ++i) {
    ValidationReport report =
        validate_sentence(loaded.sentences[i], tagset, true, static_cast<int>(i) + 1);
    if (!report.ok) {
      throw Error("sentence " + std::to_string(i + 1) + ": " +
                  report.issues.front().message);
    }
  }

  int derived = 0;
  int skipped = 0;
  for (std::size_t i = 0; i < loaded.sentences.size(); ++i) {
    const Sentence& s = loaded.sentences[i];
    if (!sys->handles_nonprojective() && !is_projective(s)) {
      ++skipped;
      std::cout << "# sentence " << i + 1 << " skipped: non-projective\n\n";
      continue;
    }
    ++derived;
    std::cout << "# sentence " << i + 1 << '\n';
    for (const Transition& t : derive_sequence(s, *sys)) {
      std::cout << transition_to_string(t) << '\n';
    }
    std::cout << '\n';
  }
  if (derived == 0 && skipped > 0) {
    throw Error("no derivable sentences: all " + std::to_string(skipped) +
                " are non-projective for " + std::string(sys->name()));
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"depparse: trainable transition-based dependency parser for CoNLL treebanks"};
  app.require_subcommand(1);

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check a CoNLL file against the tagset");
  validate->add_option("file", validate_args.file, "CoNLL file (default: stdin)");
  validate->add_option("--tagset", validate_args.tagset, "tagset description file");
  validate->add_flag("--strict", validate_args.strict, "require HEAD/DEPREL on every token");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train a parsing model");
  train->add_option("--train", train_args.train, "annotated CoNLL training file")->required();
  train->add_option("--algorithm", train_args.algorithm,
                    "arc-eager | arc-standard | covington")->required();
  train->add_option("--features", train_args.features, "feature template spec file");
  train->add_option("--tagset", train_args.tagset, "tagset description file");
  train->add_option("--epochs", train_args.epochs, "training epochs")
      ->check(CLI::PositiveNumber);
  train->add_option("--seed", train_args.seed, "shuffle seed");
  train->add_option("--model", train_args.model, "output model path")->required();

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Parse CoNLL input with a trained model");
  parse->add_option("--model", parse_args.model, "model file")->required();
  parse->add_option("--input", parse_args.input, "CoNLL input (default: stdin)");
  parse->add_option("--output", parse_args.output, "CoNLL output (default: stdout)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Score a parse against gold annotation");
  eval->add_option("--gold", eval_args.gold, "gold CoNLL file")->required();
  eval->add_option("--system", eval_args.system, "system CoNLL file")->required();
  eval->add_flag("--by-deprel", eval_args.by_deprel, "include per-label tables");
  eval->add_option("--exclude-pos", eval_args.exclude_pos,
                   "comma-separated POSTAGs to leave unscored");
  eval->add_option("--format", eval_args.format, "text | tsv | json")
      ->check(CLI::IsMember({"text", "tsv", "json"}));

  KappaArgs kappa_args;
  auto* kappa = app.add_subcommand("kappa", "Inter-annotator agreement between two files");
  kappa->add_option("--a", kappa_args.a, "first annotation")->required();
  kappa->add_option("--b", kappa_args.b, "second annotation")->required();
  kappa->add_option("--on", kappa_args.on, "label | head | both")
      ->check(CLI::IsMember({"label", "head", "both"}));

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Dump gold transition sequences");
  oracle->add_option("--train", oracle_args.train, "annotated CoNLL file")->required();
  oracle->add_option("--algorithm", oracle_args.algorithm,
                     "arc-eager | arc-standard | covington")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(validate_args);
    if (app.got_subcommand(train)) return cmd_train(train_args);
    if (app.got_subcommand(parse)) return cmd_parse(parse_args);
    if (app.got_subcommand(eval)) return cmd_eval(eval_args);
    if (app.got_subcommand(kappa)) return cmd_kappa(kappa_args);
    if (app.got_subcommand(oracle)) return cmd_oracle(oracle_args);
  } catch (const std::exception& e) {
    std::cerr << "depparse: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace depparse
