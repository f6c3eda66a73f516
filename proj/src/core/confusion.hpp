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

// Confusion sets and the ways a clean corpus is corrupted with them.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/corpus.hpp"

namespace tblcheck {

using WordSet = std::set<std::string, std::less<>>;

// Exact match, then ASCII-lowercase fallback.
bool InDictionary(const WordSet& dictionary, std::string_view word);
// One word per line; only the first tab-separated column is used, so a
// lexicon file doubles as a dictionary.
WordSet LoadDictionary(const std::string& path);

// Two or more distinct forms, kept sorted so that equal sets compare equal.
class ConfusionSet {
 public:
  ConfusionSet() = default;
  // Throws ValidationError on fewer than two members or duplicates.
  explicit ConfusionSet(std::vector<std::string> members);

  const std::vector<std::string>& members() const { return members_; }
  bool Contains(std::string_view word) const;
  // Members other than `word`, in set order.
  std::vector<std::string> AlternativesTo(std::string_view word) const;
  std::string ToString() const;  // comma-joined

  friend auto operator<=>(const ConfusionSet&, const ConfusionSet&) = default;

 private:
  std::vector<std::string> members_;
};

std::vector<ConfusionSet> ParseConfusionSets(std::string_view contents);
std::string FormatConfusionSets(std::span<const ConfusionSet> sets);
std::vector<ConfusionSet> LoadConfusionSets(const std::string& path);
void SaveConfusionSets(std::span<const ConfusionSet> sets, const std::string& path);

// Pairs {observed, target} for every distinct usable annotation, sorted.
// With a dictionary, sets containing a non-dictionary member are dropped.
std::vector<ConfusionSet> ExtractConfusionSets(std::span<const ErrAnnotation> annotations,
                                               const WordSet* dictionary = nullptr);

// Single-character substitution channel (keyboard slips, OCR glyph
// confusions). Characters are UTF-8 code points.
class CharConfusionModel {
 public:
  struct Replacement {
    std::string to;
    double weight = 0;
  };

  explicit CharConfusionModel(std::string kind = "custom") : kind_(std::move(kind)) {}

  // Physical neighbours on a QWERTY layout, weight 1 each.
  static CharConfusionModel Keyboard();
  // A small table of visually similar glyphs (l/1, O/0, ...).
  static CharConfusionModel Ocr();
  // TSV lines source<TAB>replacement<TAB>weight.
  static CharConfusionModel Parse(std::string_view contents, std::string kind = "custom");
  static CharConfusionModel Load(const std::string& path);

  void Add(const std::string& from, const std::string& to, double weight);

  const std::string& kind() const { return kind_; }
  // Replacements ordered by descending weight, then by character.
  std::span<const Replacement> ReplacementsFor(std::string_view ch) const;
  size_t max_replacements() const;
  bool empty() const { return table_.empty(); }

 private:
  std::string kind_;
  std::map<std::string, std::vector<Replacement>, std::less<>> table_;
};

std::vector<ConfusionSet> GenerateTypoVariants(std::string_view word,
                                               const CharConfusionModel& model,
                                               const WordSet* dictionary = nullptr);

struct SeedPolicy {
  enum class Mode { kReplaceAll, kRoundRobin, kSample };
  Mode mode = Mode::kReplaceAll;
  double rate = 1.0;  // sample mode only
  uint64_t seed = 0;  // sample mode only
};

std::string_view ToString(SeedPolicy::Mode mode);
SeedPolicy::Mode ParseSeedMode(std::string_view name);

// Replaces confusion-set members with another member of their set, moving the
// original into true_label. With a lexicon, corrupted tokens are re-tagged.
// Throws ValidationError when a surface that occurs in the corpus belongs to
// more than one set.
Corpus SeedErrors(Corpus clean, std::span<const ConfusionSet> sets, const SeedPolicy& policy,
                  const Lexicon* lexicon = nullptr);

// Replaces each occurrence of `word` by a NULL placeholder whose true label is
// `word`, and puts a NULL placeholder with true label NULL in every other gap.
Corpus SeedMissingWord(Corpus clean, std::string_view word);

// Each set pairs a composite ("no-body") with its joined form ("nobody");
// occurrences of the joined form become the composite.
Corpus SeedRunOnSplits(Corpus clean, std::span<const ConfusionSet> pairs);

}  // namespace tblcheck
