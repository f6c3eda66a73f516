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

// Transformation-based learning over class labels.
//
// A rule rewrites class_label from one value to another at every position
// where its atoms hold. Scoring follows the usual error-driven objective:
//
//   good  = matched positions whose true_label is the rule's to_class
//   bad   = matched positions that are currently correct
//   score = good - bad
//
// Matched positions that are wrong before and after the rewrite are neutral,
// so applying a rule lowers the residual error count by exactly `score`.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "core/confusion.hpp"
#include "core/corpus.hpp"
#include "core/rule.hpp"

namespace tblcheck {

struct LearnerConfig {
  std::vector<Template> templates = DefaultTemplates();
  long long threshold = 2;
  std::optional<size_t> max_rules;
  // When present, a rule's from/to classes must share one of these sets.
  std::optional<std::vector<ConfusionSet>> sets;
  // 0 picks the hardware concurrency. Results do not depend on this.
  size_t threads = 1;
};

struct RuleScore {
  long long good = 0;
  long long bad = 0;
  long long score = 0;
  friend bool operator==(const RuleScore&, const RuleScore&) = default;
};

RuleScore ScoreRule(const TransformationRule& rule, const Corpus& corpus);

// Rules obtained by binding every template at every error site (class !=
// true) to the values present there. Deduplicated, ordered by canonical text,
// counts left at zero.
std::vector<TransformationRule> InstantiateCandidates(const Corpus& corpus,
                                                      const std::vector<Template>& templates,
                                                      const std::vector<ConfusionSet>* sets = nullptr);

// Rewrites class_label to to_class at every matching position.
Corpus ApplyRule(const TransformationRule& rule, Corpus corpus);

// Greedy learning loop. Each iteration selects the highest-scoring candidate
// (ties: smallest canonical text), records its counts, applies it, and stops
// once the best score falls below the threshold or max_rules is reached.
std::vector<TransformationRule> Learn(const Corpus& corpus, const LearnerConfig& config);

}  // namespace tblcheck
