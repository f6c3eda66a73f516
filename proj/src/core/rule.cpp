// Copyright 2026 The tblcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/rule.hpp"

#include "core/error.hpp"
#include "core/text.hpp"

namespace tblcheck {

std::string_view FeatureName(Feature f) {
  switch (f) {
    case Feature::kSurface:
      return "SURFACE";
    case Feature::kTag:
      return "TAG";
    case Feature::kClass:
      return "CLASS";
  }
  return "SURFACE";
}

std::string AtomSchema::ToString() const {
  std::string out(FeatureName(feature));
  if (range) {
    out += '[' + std::to_string(lo) + ',' + std::to_string(hi) + ']';
  } else {
    out += '@' + std::to_string(lo);
  }
  return out;
}

std::string Atom::ToString() const { return schema.ToString() + '=' + value; }

std::string Template::ToString() const {
  std::string out;
  for (const auto& a : atoms) {
    if (!out.empty()) out += " " + std::string(kConjunction) + " ";
    out += a.ToString() + "=*";
  }
  return out;
}

std::string TransformationRule::CanonicalText() const {
  std::string out = "CLASS=" + from_class;
  for (const auto& a : atoms) {
    out += ' ';
    out += kConjunction;
    out += ' ';
    out += a.ToString();
  }
  out += " => ";
  out += to_class;
  return out;
}

std::string TransformationRule::ToString() const {
  return CanonicalText() + " ; good=" + std::to_string(good) + " bad=" + std::to_string(bad) +
         " score=" + std::to_string(score);
}

namespace {

// Parses "FEATURE@k=value" or "FEATURE[a,b]=value".
Atom ParseAtom(std::string_view s, const std::string& where) {
  size_t spec_end = s.find_first_of("@[");
  if (spec_end == std::string_view::npos) {
    throw ParseError(where + ": atom '" + std::string(s) + "' lacks a position");
  }
  std::string_view name = s.substr(0, spec_end);
  Atom atom;
  if (name == "SURFACE") {
    atom.schema.feature = Feature::kSurface;
  } else if (name == "TAG") {
    atom.schema.feature = Feature::kTag;
  } else if (name == "CLASS") {
    atom.schema.feature = Feature::kClass;
  } else {
    throw ParseError(where + ": unknown feature '" + std::string(name) + "'");
  }
  size_t eq;
  if (s[spec_end] == '@') {
    eq = s.find('=', spec_end);
    if (eq == std::string_view::npos) throw ParseError(where + ": atom lacks '='");
    int k = static_cast<int>(text::ParseInt(s.substr(spec_end + 1, eq - spec_end - 1), where));
    atom.schema.lo = atom.schema.hi = k;
    atom.schema.range = false;
  } else {
    size_t close = s.find(']', spec_end);
    if (close == std::string_view::npos || close + 1 >= s.size() || s[close + 1] != '=') {
      throw ParseError(where + ": malformed window in '" + std::string(s) + "'");
    }
    auto bounds = text::Split(s.substr(spec_end + 1, close - spec_end - 1), ',');
    if (bounds.size() != 2) throw ParseError(where + ": window needs two bounds");
    atom.schema.lo = static_cast<int>(text::ParseInt(bounds[0], where));
    atom.schema.hi = static_cast<int>(text::ParseInt(bounds[1], where));
    atom.schema.range = true;
    eq = close + 1;
  }
  atom.value = std::string(s.substr(eq + 1));
  if (atom.value.empty()) throw ParseError(where + ": atom '" + std::string(s) + "' has no value");
  return atom;
}

void ValidateSchema(const AtomSchema& a, const std::string& where) {
  if (a.range) {
    if (a.lo > a.hi) throw ValidationError(where + ": window " + a.ToString() + " has lo > hi");
    if (a.lo <= 0 && a.hi >= 0) {
      throw ValidationError(where + ": window " + a.ToString() + " must not contain offset 0");
    }
  }
  if (a.feature == Feature::kClass) {
    throw ValidationError(where + ": CLASS may only be tested at offset 0 of the rule head");
  }
}

long long ParseCount(std::string_view field, std::string_view key, const std::string& where) {
  std::string prefix = std::string(key) + "=";
  if (field.substr(0, prefix.size()) != prefix) {
    throw ParseError(where + ": expected '" + prefix + "...'");
  }
  return text::ParseInt(field.substr(prefix.size()), where);
}

}  // namespace

TransformationRule ParseRule(std::string_view line) {
  const std::string where = "rule '" + std::string(line) + "'";
  // Values never contain whitespace, so the line splits into fields on ' '.
  auto f = text::Split(text::Trim(line), ' ');
  size_t i = 0;
  auto need = [&](size_t n) {
    if (i + n > f.size()) throw ParseError(where + ": truncated");
  };
  need(1);
  if (f[0].rfind("CLASS=", 0) != 0 || f[0].size() == 6) {
    throw ParseError(where + ": must start with CLASS=<from>");
  }
  TransformationRule rule;
  rule.from_class = f[0].substr(6);
  i = 1;
  while (i < f.size() && f[i] == kConjunction) {
    need(2);
    rule.atoms.push_back(ParseAtom(f[i + 1], where));
    ValidateSchema(rule.atoms.back().schema, where);
    i += 2;
  }
  need(2);
  if (f[i] != "=>") throw ParseError(where + ": expected '=>'");
  rule.to_class = f[i + 1];
  i += 2;
  if (i == f.size()) {
    rule.good = rule.bad = rule.score = 0;
  } else {
    need(4);
    if (f[i] != ";") throw ParseError(where + ": expected ';' before counts");
    rule.good = ParseCount(f[i + 1], "good", where);
    rule.bad = ParseCount(f[i + 2], "bad", where);
    rule.score = ParseCount(f[i + 3], "score", where);
    i += 4;
    if (i != f.size()) throw ParseError(where + ": trailing fields");
  }
  if (rule.from_class == rule.to_class) {
    throw ValidationError(where + ": from and to class are identical");
  }
  if (rule.score != rule.good - rule.bad) {
    throw ValidationError(where + ": score must equal good - bad");
  }
  return rule;
}

std::vector<TransformationRule> ParseRules(std::string_view contents) {
  std::vector<TransformationRule> rules;
  for (const auto& line : text::Lines(contents)) {
    auto t = text::Trim(line);
    if (t.empty() || t.front() == '#') continue;
    rules.push_back(ParseRule(t));
  }
  return rules;
}

std::string FormatRules(std::span<const TransformationRule> rules) {
  std::string out;
  for (const auto& r : rules) out += r.ToString() + '\n';
  return out;
}

std::vector<TransformationRule> LoadRules(const std::string& path) {
  return ParseRules(text::ReadFile(path));
}

void SaveRules(std::span<const TransformationRule> rules, const std::string& path) {
  text::WriteFile(path, FormatRules(rules));
}

Template ParseTemplate(std::string_view line) {
  const std::string where = "template '" + std::string(line) + "'";
  Template t;
  auto f = text::Split(text::Trim(line), ' ');
  for (size_t i = 0; i < f.size(); ++i) {
    if (i % 2 == 1) {
      if (f[i] != kConjunction) throw ParseError(where + ": atoms must be joined by ∧");
      continue;
    }
    Atom atom = ParseAtom(f[i], where);
    if (atom.value != "*") throw ParseError(where + ": template values must be '*'");
    if (atom.schema.feature == Feature::kClass && !atom.schema.range && atom.schema.lo == 0) {
      continue;  // the implicit CLASS@0 binding may be spelled out
    }
    ValidateSchema(atom.schema, where);
    t.atoms.push_back(atom.schema);
  }
  if (f.size() % 2 == 0) throw ParseError(where + ": dangling ∧");
  if (t.atoms.empty() || t.atoms.size() > 3) {
    throw ValidationError(where + ": a template needs 1-3 atoms besides CLASS@0");
  }
  return t;
}

std::vector<Template> ParseTemplates(std::string_view contents) {
  std::vector<Template> out;
  for (const auto& line : text::Lines(contents)) {
    auto t = text::Trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(ParseTemplate(t));
  }
  return out;
}

std::vector<Template> LoadTemplates(const std::string& path) {
  return ParseTemplates(text::ReadFile(path));
}

std::string FormatTemplates(std::span<const Template> templates) {
  std::string out;
  for (const auto& t : templates) out += t.ToString() + '\n';
  return out;
}

std::vector<Template> DefaultTemplates(bool far_offsets) {
  std::vector<Template> out;
  out.push_back({{AtomSchema::At(Feature::kSurface, 0)}});
  for (int k : {-3, -2, -1, 1, 2, 3}) out.push_back({{AtomSchema::At(Feature::kSurface, k)}});
  for (int k : {-3, -2, -1, 1, 2, 3}) out.push_back({{AtomSchema::At(Feature::kTag, k)}});
  out.push_back({{AtomSchema::Window(Feature::kSurface, -3, -1)}});
  out.push_back({{AtomSchema::Window(Feature::kSurface, 1, 3)}});
  out.push_back({{AtomSchema::Window(Feature::kTag, 1, 3)}});
  if (far_offsets) out.push_back({{AtomSchema::At(Feature::kTag, 5)}});
  return out;
}

std::string_view FeatureAt(const Sentence& sentence, long j, Feature f) {
  if (j < 0) return kSentStart;
  if (j >= static_cast<long>(sentence.tokens.size())) return kSentEnd;
  const Token& t = sentence.tokens[static_cast<size_t>(j)];
  switch (f) {
    case Feature::kSurface:
      return t.surface;
    case Feature::kTag:
      return t.tag;
    case Feature::kClass:
      return t.class_label;
  }
  return t.surface;
}

bool Match(const TransformationRule& rule, const Sentence& sentence, size_t i) {
  if (i >= sentence.tokens.size() || sentence.tokens[i].class_label != rule.from_class) {
    return false;
  }
  const long pos = static_cast<long>(i);
  for (const auto& atom : rule.atoms) {
    const auto& s = atom.schema;
    bool ok = false;
    for (long k = s.lo; k <= s.hi && !ok; ++k) {
      ok = FeatureAt(sentence, pos + k, s.feature) == atom.value;
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace tblcheck
