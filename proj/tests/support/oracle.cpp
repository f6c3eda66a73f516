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

#include "support/oracle.hpp"

#include <algorithm>
#include <map>

namespace tblcheck::oracle {

namespace {

const char* Name(Feature f) {
  switch (f) {
    case Feature::kSurface:
      return "SURFACE";
    case Feature::kTag:
      return "TAG";
    case Feature::kClass:
      return "CLASS";
  }
  return "?";
}

std::string Value(const Sentence& s, long j, Feature f) {
  if (j < 0) return "SENT_START";
  if (j >= static_cast<long>(s.tokens.size())) return "SENT_END";
  const Token& t = s.tokens[static_cast<size_t>(j)];
  if (f == Feature::kSurface) return t.surface;
  if (f == Feature::kTag) return t.tag;
  return t.class_label;
}

bool SharesSet(const std::vector<ConfusionSet>& sets, const std::string& a, const std::string& b) {
  for (const auto& set : sets) {
    const auto& m = set.members();
    if (std::find(m.begin(), m.end(), a) != m.end() && std::find(m.begin(), m.end(), b) != m.end()) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::string Canonical(const TransformationRule& rule) {
  std::string out = "CLASS=" + rule.from_class;
  for (const auto& a : rule.atoms) {
    out += " \xE2\x88\xA7 ";
    out += Name(a.schema.feature);
    if (a.schema.range) {
      out += "[" + std::to_string(a.schema.lo) + "," + std::to_string(a.schema.hi) + "]";
    } else {
      out += "@" + std::to_string(a.schema.lo);
    }
    out += "=" + a.value;
  }
  return out + " => " + rule.to_class;
}

bool Matches(const TransformationRule& rule, const Sentence& sentence, size_t i) {
  if (sentence.tokens[i].class_label != rule.from_class) return false;
  for (const auto& a : rule.atoms) {
    bool any = false;
    for (int k = a.schema.lo; k <= a.schema.hi; ++k) {
      if (Value(sentence, static_cast<long>(i) + k, a.schema.feature) == a.value) any = true;
    }
    if (!any) return false;
  }
  return true;
}

Score ScoreOf(const TransformationRule& rule, const Corpus& corpus) {
  Score s;
  for (const auto& sentence : corpus.sentences) {
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      if (!Matches(rule, sentence, i)) continue;
      const Token& t = sentence.tokens[i];
      if (t.true_label == rule.to_class) ++s.good;
      else if (t.class_label == t.true_label) ++s.bad;
    }
  }
  return s;
}

std::vector<TransformationRule> Enumerate(const Corpus& corpus,
                                          const std::vector<Template>& templates,
                                          const std::vector<ConfusionSet>* sets) {
  std::map<std::string, TransformationRule> found;
  for (const auto& sentence : corpus.sentences) {
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      const Token& t = sentence.tokens[i];
      if (t.is_sentinel || t.class_label == t.true_label) continue;
      if (sets && !SharesSet(*sets, t.class_label, t.true_label)) continue;
      for (const auto& tmpl : templates) {
        // Odometer over one chosen offset per atom.
        std::vector<int> pick;
        for (const auto& a : tmpl.atoms) pick.push_back(a.lo);
        while (true) {
          TransformationRule r;
          r.from_class = t.class_label;
          r.to_class = t.true_label;
          for (size_t k = 0; k < tmpl.atoms.size(); ++k) {
            r.atoms.push_back(
                {tmpl.atoms[k], Value(sentence, static_cast<long>(i) + pick[k], tmpl.atoms[k].feature)});
          }
          found.emplace(Canonical(r), r);
          size_t k = 0;
          while (k < pick.size() && pick[k] == tmpl.atoms[k].hi) {
            pick[k] = tmpl.atoms[k].lo;
            ++k;
          }
          if (k == pick.size()) break;
          ++pick[k];
        }
      }
    }
  }
  std::vector<TransformationRule> out;
  for (auto& [text, r] : found) out.push_back(std::move(r));
  return out;
}

std::optional<TransformationRule> Best(const Corpus& corpus, const std::vector<Template>& templates,
                                       long long threshold, const std::vector<ConfusionSet>* sets) {
  std::optional<TransformationRule> best;
  // Enumerate returns rules in ascending canonical order, so a strict `>`
  // keeps the smallest text among equal scores.
  for (auto& r : Enumerate(corpus, templates, sets)) {
    Score s = ScoreOf(r, corpus);
    long long score = s.good - s.bad;
    if (score < threshold) continue;
    if (!best || score > best->score) {
      r.good = s.good;
      r.bad = s.bad;
      r.score = score;
      best = r;
    }
  }
  return best;
}

Corpus Apply(const TransformationRule& rule, const Corpus& corpus) {
  Corpus out = corpus;
  for (size_t s = 0; s < corpus.sentences.size(); ++s) {
    for (size_t i = 0; i < corpus.sentences[s].tokens.size(); ++i) {
      if (Matches(rule, corpus.sentences[s], i)) out.sentences[s].tokens[i].class_label = rule.to_class;
    }
  }
  return out;
}

long long Errors(const Corpus& corpus) {
  long long n = 0;
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s.tokens) n += t.class_label != t.true_label;
  }
  return n;
}

}  // namespace tblcheck::oracle
