#include "depparse/features.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace depparse {

namespace {

constexpr int kMaxAddressIndex = 3;
constexpr int kMaxSteps = 2;

std::string attribute_name(Attribute a) {
  switch (a) {
    case Attribute::Form: return "FORM";
    case Attribute::Lemma: return "LEMMA";
    case Attribute::Postag: return "POSTAG";
    case Attribute::Cpostag: return "CPOSTAG";
    case Attribute::Deprel: return "DEPREL";
    case Attribute::Feats: return "FEATS";
  }
  return "?";
}

std::string step_name(AddressStep s) {
  switch (s) {
    case AddressStep::Head: return "head";
    case AddressStep::LeftmostDep: return "ldep";
    case AddressStep::RightmostDep: return "rdep";
  }
  return "?";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string template_to_string(const FeatureTemplate& t) {
  std::string out = t.base == AddressBase::Stack ? "STACK[" : "BUFFER[";
  out += std::to_string(t.index);
  out += ']';
  for (AddressStep s : t.steps) {
    out += '.';
    out += step_name(s);
  }
  out += '.';
  if (t.attribute == Attribute::Feats) {
    out += "FEATS[";
    out += t.feats_key;
    out += ']';
  } else {
    out += attribute_name(t.attribute);
  }
  return out;
}

FeatureTemplate parse_template(std::string_view text) {
  std::string_view rest = trim(text);
  FeatureTemplate t;

  std::size_t bracket = rest.find('[');
  if (bracket == std::string_view::npos) {
    throw Error("expected STACK[k] or BUFFER[k] in '" + std::string(text) + "'");
  }
  std::string base = ascii_lower(std::string(rest.substr(0, bracket)));
  if (base == "stack") {
    t.base = AddressBase::Stack;
  } else if (base == "buffer") {
    t.base = AddressBase::Buffer;
  } else {
    throw Error("unknown address base '" + std::string(rest.substr(0, bracket)) + "'");
  }
  std::size_t close = rest.find(']', bracket);
  if (close == std::string_view::npos) {
    throw Error("missing ']' in '" + std::string(text) + "'");
  }
  std::string_view digits = rest.substr(bracket + 1, close - bracket - 1);
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
    throw Error("address index '" + std::string(digits) + "' is not a non-negative integer");
  }
  if (digits.size() > 2) {
    throw Error("address index k exceeds 3 in '" + std::string(text) + "'");
  }
  int k = 0;
  for (char ch : digits) k = k * 10 + (ch - '0');
  if (k > kMaxAddressIndex) {
    throw Error("address index k exceeds 3 in '" + std::string(text) + "'");
  }
  t.index = k;

  rest.remove_prefix(close + 1);
  if (rest.empty() || rest.front() != '.') {
    throw Error("expected '.' after address in '" + std::string(text) + "'");
  }
  rest.remove_prefix(1);

  // Dot-separated path: zero or more steps, then a final attribute.
  std::vector<std::string> parts;
  while (true) {
    std::size_t dot = rest.find('.');
    if (dot == std::string_view::npos) {
      parts.emplace_back(rest);
      break;
    }
    parts.emplace_back(rest.substr(0, dot));
    rest.remove_prefix(dot + 1);
  }
  if (parts.back().empty()) throw Error("missing attribute in '" + std::string(text) + "'");

  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    std::string step = ascii_lower(parts[i]);
    if (step == "head") {
      t.steps.push_back(AddressStep::Head);
    } else if (step == "ldep") {
      t.steps.push_back(AddressStep::LeftmostDep);
    } else if (step == "rdep") {
      t.steps.push_back(AddressStep::RightmostDep);
    } else {
      throw Error("unknown step '" + parts[i] + "'");
    }
  }
  if (t.steps.size() > kMaxSteps) {
    throw Error("at most 2 path steps allowed in '" + std::string(text) + "'");
  }

  std::string attr = parts.back();
  std::string attr_lower = ascii_lower(attr);
  if (attr_lower.rfind("feats[", 0) == 0) {
    if (attr.back() != ']') throw Error("missing ']' in '" + attr + "'");
    t.attribute = Attribute::Feats;
    t.feats_key = attr.substr(6, attr.size() - 7);
    if (t.feats_key.empty()) throw Error("empty FEATS key in '" + attr + "'");
  } else if (attr_lower == "form") {
    t.attribute = Attribute::Form;
  } else if (attr_lower == "lemma") {
    t.attribute = Attribute::Lemma;
  } else if (attr_lower == "postag") {
    t.attribute = Attribute::Postag;
  } else if (attr_lower == "cpostag") {
    t.attribute = Attribute::Cpostag;
  } else if (attr_lower == "deprel") {
    t.attribute = Attribute::Deprel;
  } else {
    throw Error("unknown attribute '" + attr + "'");
  }
  return t;
}

std::vector<FeatureTemplate> parse_feature_spec(std::istream& in) {
  std::vector<FeatureTemplate> templates;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    try {
      templates.push_back(parse_template(body));
    } catch (const Error& e) {
      throw Error("feature spec line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return templates;
}

std::vector<FeatureTemplate> parse_feature_spec(const std::string& text) {
  std::istringstream in(text);
  return parse_feature_spec(in);
}

std::vector<FeatureTemplate> default_feature_model() {
  static const char* kSpec[] = {
      "STACK[0].FORM",       "STACK[0].POSTAG",      "BUFFER[0].FORM",
      "BUFFER[0].POSTAG",    "BUFFER[1].FORM",       "BUFFER[1].POSTAG",
      "STACK[1].POSTAG",     "BUFFER[2].POSTAG",     "STACK[0].DEPREL",
      "STACK[0].ldep.DEPREL", "STACK[0].rdep.DEPREL", "BUFFER[0].ldep.DEPREL",
      "STACK[0].FEATS[G]",   "BUFFER[0].FEATS[N]",
  };
  std::vector<FeatureTemplate> templates;
  templates.reserve(std::size(kSpec));
  for (const char* s : kSpec) templates.push_back(parse_template(s));
  return templates;
}

int FeatureVocabulary::lookup(int ordinal, const std::string& value) {
  auto it = index_.find({ordinal, value});
  if (it != index_.end()) return it->second;
  if (frozen_) return -1;
  int id = static_cast<int>(entries_.size());
  index_.emplace(std::make_pair(ordinal, value), id);
  entries_.push_back({ordinal, value});
  return id;
}

int FeatureVocabulary::find(int ordinal, const std::string& value) const {
  auto it = index_.find({ordinal, value});
  return it == index_.end() ? -1 : it->second;
}

void FeatureVocabulary::insert(int ordinal, const std::string& value, int index) {
  if (index != static_cast<int>(entries_.size())) {
    throw Error("vocabulary entries must be inserted in index order");
  }
  auto [it, fresh] = index_.emplace(std::make_pair(ordinal, value), index);
  (void)it;
  if (!fresh) throw Error("duplicate vocabulary entry");
  entries_.push_back({ordinal, value});
}

namespace {

// "" and the CoNLL placeholder "_" both mean the field carries no value.
std::string value_or_null(const std::string& v) {
  if (v.empty() || v == "_") return std::string(kNullValue);
  return v;
}

}  // namespace

std::string evaluate_template(const FeatureTemplate& t, const Configuration& c,
                              const Sentence& s) {
  // Resolve the base node; -1 marks an unresolvable address.
  int node = -1;
  if (t.base == AddressBase::Stack) {
    if (t.index < static_cast<int>(c.stack.size())) {
      node = c.stack[c.stack.size() - 1 - static_cast<std::size_t>(t.index)];
    }
  } else {
    if (t.index < static_cast<int>(c.buffer.size())) {
      node = c.buffer[static_cast<std::size_t>(t.index)];
    }
  }
  for (AddressStep step : t.steps) {
    if (node < 0) break;
    std::optional<int> next;
    switch (step) {
      case AddressStep::Head:
        if (node != 0) next = c.head_of(node);
        break;
      case AddressStep::LeftmostDep:
        next = c.leftmost_dep(node);
        break;
      case AddressStep::RightmostDep:
        next = c.rightmost_dep(node);
        break;
    }
    node = next ? *next : -1;
  }

  if (node < 0) return std::string(kNullValue);
  if (node == 0) {
    // The artificial root has a surface placeholder but no lemma, label, or
    // morphology.
    switch (t.attribute) {
      case Attribute::Form:
      case Attribute::Postag:
      case Attribute::Cpostag:
        return std::string(kRootValue);
      default:
        return std::string(kNullValue);
    }
  }
  const Token& tok = s.tokens[static_cast<std::size_t>(node - 1)];
  switch (t.attribute) {
    case Attribute::Form:
      return value_or_null(tok.form);
    case Attribute::Lemma:
      return tok.lemma ? value_or_null(*tok.lemma) : std::string(kNullValue);
    case Attribute::Postag:
      return value_or_null(tok.postag);
    case Attribute::Cpostag:
      return value_or_null(tok.cpostag);
    case Attribute::Deprel: {
      // The label of the arc built so far, not the gold annotation.
      const Arc* arc = c.arc_to(node);
      return arc ? arc->label : std::string(kNullValue);
    }
    case Attribute::Feats: {
      for (const auto& [key, value] : tok.feats) {
        if (key == t.feats_key) return value_or_null(value);
      }
      return std::string(kNullValue);
    }
  }
  return std::string(kNullValue);
}

namespace {

template <typename Lookup>
FeatureVector extract_with(const Configuration& c, const Sentence& s,
                           const std::vector<FeatureTemplate>& templates, Lookup&& lookup) {
  FeatureVector v;
  v.indices.reserve(templates.size());
  for (std::size_t i = 0; i < templates.size(); ++i) {
    std::string value = evaluate_template(templates[i], c, s);
    int id = lookup(static_cast<int>(i), value);
    if (id >= 0) v.indices.push_back(id);
  }
  std::sort(v.indices.begin(), v.indices.end());
  v.indices.erase(std::unique(v.indices.begin(), v.indices.end()), v.indices.end());
  return v;
}

}  // namespace

FeatureVector extract(const Configuration& c, const Sentence& s,
                      const std::vector<FeatureTemplate>& templates,
                      FeatureVocabulary& vocab) {
  return extract_with(c, s, templates, [&vocab](int ordinal, const std::string& value) {
    return vocab.lookup(ordinal, value);
  });
}

FeatureVector extract(const Configuration& c, const Sentence& s,
                      const std::vector<FeatureTemplate>& templates,
                      const FeatureVocabulary& vocab) {
  return extract_with(c, s, templates, [&vocab](int ordinal, const std::string& value) {
    return vocab.find(ordinal, value);
  });
}

}  // namespace depparse
