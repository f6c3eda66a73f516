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

// Transformation rules and the templates they are instantiated from.
//
// Text form of a rule (one per line):
//
//   CLASS=end ∧ SURFACE[-3,-1]=, => and ; good=4845 bad=0 score=4845
//
// A template uses the same atom syntax with `*` for the unbound value:
//
//   SURFACE@-1=* ∧ TAG@1=*

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/corpus.hpp"

namespace tblcheck {

inline constexpr std::string_view kConjunction = "∧";

enum class Feature { kSurface, kTag, kClass };

std::string_view FeatureName(Feature f);

// Either an exact offset (lo == hi, range == false) or an inclusive window
// [lo, hi] in which some position must carry the value. Windows never
// contain offset 0.
struct AtomSchema {
  Feature feature = Feature::kSurface;
  int lo = 0;
  int hi = 0;
  bool range = false;

  static AtomSchema At(Feature f, int offset) { return {f, offset, offset, false}; }
  static AtomSchema Window(Feature f, int lo, int hi) { return {f, lo, hi, true}; }

  std::string ToString() const;  // e.g. "TAG@-2", "SURFACE[1,3]"
  friend auto operator<=>(const AtomSchema&, const AtomSchema&) = default;
};

struct Atom {
  AtomSchema schema;
  std::string value;

  std::string ToString() const;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Template {
  std::vector<AtomSchema> atoms;

  std::string ToString() const;
  friend bool operator==(const Template&, const Template&) = default;
};

struct TransformationRule {
  std::vector<Atom> atoms;  // conjunction, besides the implicit CLASS@0 test
  std::string from_class;
  std::string to_class;
  long long good = 0;
  long long bad = 0;
  long long score = 0;

  // Rule without its counts; this is the tie-break key during learning.
  std::string CanonicalText() const;
  std::string ToString() const;

  friend bool operator==(const TransformationRule&, const TransformationRule&) = default;
};

TransformationRule ParseRule(std::string_view line);
std::vector<TransformationRule> ParseRules(std::string_view contents);
std::string FormatRules(std::span<const TransformationRule> rules);
std::vector<TransformationRule> LoadRules(const std::string& path);
void SaveRules(std::span<const TransformationRule> rules, const std::string& path);

Template ParseTemplate(std::string_view line);
std::vector<Template> ParseTemplates(std::string_view contents);
std::vector<Template> LoadTemplates(const std::string& path);
std::string FormatTemplates(std::span<const Template> templates);

// Identity, SURFACE@k and TAG@k for k in -3..-1,1..3, SURFACE[-3,-1],
// SURFACE[1,3] and TAG[1,3] (16 templates). `far_offsets` appends TAG@5.
std::vector<Template> DefaultTemplates(bool far_offsets = false);

// Feature value at index `j` of `sentence`; indexes before the sentence read
// SENT_START and indexes after it read SENT_END.
std::string_view FeatureAt(const Sentence& sentence, long j, Feature f);

// True iff token i has class_label == from_class and every atom holds.
bool Match(const TransformationRule& rule, const Sentence& sentence, size_t i);

}  // namespace tblcheck
