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

// Declarative token-pattern rules compiled from learned transformations, the
// grammar checker that runs them, and their XML form.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/corpus.hpp"
#include "core/rule.hpp"

namespace tblcheck {

// Tests one token. Empty alternative lists do not constrain; a test with both
// lists empty matches anything.
struct TokenTest {
  std::vector<std::string> surface;
  std::vector<std::string> postag;

  bool Matches(const Token& token) const;
  friend bool operator==(const TokenTest&, const TokenTest&) = default;
};

struct Pattern {
  std::vector<TokenTest> tokens;
  size_t mark = 0;  // index of the flagged token

  // Matches with tokens[mark] on sentence.tokens[i]. Slots falling outside
  // the sentence see SENT_START / SENT_END tokens.
  bool MatchesAt(const Sentence& sentence, size_t i) const;
  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct PatternRule {
  std::string id;
  // Sibling variants sharing one id; the rule fires if any variant matches.
  std::vector<Pattern> patterns;
  std::string suggestion;
  std::string message;
  long long good = 0;
  long long bad = 0;
  long long score = 0;

  bool MatchesAt(const Sentence& sentence, size_t i) const;
  // Trigger is a NULL placeholder, i.e. the rule proposes inserting a word.
  bool is_insertion() const;
  friend bool operator==(const PatternRule&, const PatternRule&) = default;
};

struct RulePack {
  std::string lang = "en";
  std::string source;
  std::vector<PatternRule> rules;

  friend bool operator==(const RulePack&, const RulePack&) = default;
};

struct Diagnostic {
  size_t sentence = 0;
  size_t start = 0;  // token span, half-open; empty for insertion points
  size_t end = 0;
  std::string rule_id;
  std::string observed;
  std::string suggestion;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline constexpr int kMaxPatternOffset = 9;

// Compiles one transformation. Window atoms expand into one sibling pattern
// per window position. Throws ValidationError for offsets beyond
// ±kMaxPatternOffset; returns nullopt when no variant can fire on text whose
// class labels equal its surfaces.
std::optional<PatternRule> CompileRule(const TransformationRule& rule, std::string id);

struct CompiledPack {
  RulePack pack;
  std::vector<size_t> never_fire;  // indexes of rules CompileRule rejected
};

CompiledPack CompilePack(std::span<const TransformationRule> rules, std::string lang = "en",
                         std::string source = {});

// Runs the pack on sentences in the learner's view (placeholders and run-on
// composites present as tokens). First matching rule wins per token; the
// result is sorted by position.
std::vector<Diagnostic> Check(const Corpus& corpus, const RulePack& pack);

// Runs the pack on plain text: adjacent words forming a composite known to the
// pack are merged, insertion rules are tried at every gap between tokens, and
// spans are reported in the plain token indexes.
std::vector<Diagnostic> CheckText(const Corpus& corpus, const RulePack& pack);

// Fires per rule on plain text (as CheckText sees it), ignoring rule priority.
std::vector<size_t> CountFires(const RulePack& pack, const Corpus& corpus);

struct FilterResult {
  RulePack kept;
  std::vector<std::pair<PatternRule, size_t>> dropped;  // rule, fires
};

// Drops rules that fire more than max_matches times on a clean corpus.
FilterResult FilterNoisyRules(const RulePack& pack, const Corpus& clean,
                              std::optional<size_t> max_matches);

std::string ExportXml(const RulePack& pack);
RulePack ImportXml(std::string_view document);
void SaveXml(const RulePack& pack, const std::string& path);
RulePack LoadXml(const std::string& path);

std::string FormatDiagnostics(std::span<const Diagnostic> diagnostics);

}  // namespace tblcheck
