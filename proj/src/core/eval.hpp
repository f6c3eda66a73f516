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

// Precision/recall of rule packs on gold corpora, and the naive-vs-mixed
// learning experiment.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/checker.hpp"
#include "core/confusion.hpp"
#include "core/corpus.hpp"
#include "core/learner.hpp"

namespace tblcheck {

// numerator / denominator, with 0/0 reported as 0 and flagged.
struct Ratio {
  long long numerator = 0;
  long long denominator = 0;

  double value() const {
    return denominator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  bool undefined() const { return denominator == 0; }
};

struct EvalReport {
  std::string corpus;
  long long true_positives = 0;
  long long false_positives = 0;
  long long false_negatives = 0;
  std::map<std::string, long long> fires;  // rule id -> diagnostics raised

  Ratio precision() const { return {true_positives, true_positives + false_positives}; }
  Ratio recall() const { return {true_positives, true_positives + false_negatives}; }
};

// A diagnostic is a true positive iff its token is an error (class != true)
// and the suggestion equals the true label. Every other diagnostic is a false
// positive; every error without a true positive is a false negative.
EvalReport Evaluate(const RulePack& pack, const Corpus& gold);

struct ExperimentConfig {
  LearnerConfig learner;  // `sets` is ignored; the mixed arm uses the extracted ones
  SeedPolicy policy;
  const Lexicon* lexicon = nullptr;     // re-tags corrupted tokens when set
  const WordSet* dictionary = nullptr;  // filters extracted sets when set
};

enum class Method { kNaive = 0, kMixed = 1 };
enum class EvalCorpus { kTraining = 0, kHeldOut = 1 };

struct ExperimentResult {
  std::vector<ConfusionSet> sets;
  std::array<std::vector<TransformationRule>, 2> rules;  // indexed by Method
  std::array<std::array<EvalReport, 2>, 2> grid;         // [Method][EvalCorpus]

  const EvalReport& at(Method m, EvalCorpus c) const {
    return grid[static_cast<size_t>(m)][static_cast<size_t>(c)];
  }
};

// Naive arm: learn on the error corpus itself. Mixed arm: extract confusion
// sets from its annotations, seed them into clean_train and learn there. Both
// packs are scored on their own training corpus and on heldout seeded with
// the same sets and policy.
ExperimentResult RunExperiment(const ErrDocument& error_corpus, const Corpus& clean_train,
                               const Corpus& heldout, const ExperimentConfig& config);

std::string FormatReport(const EvalReport& report, const std::string& format);
std::string FormatExperiment(const ExperimentResult& result, const std::string& format);

}  // namespace tblcheck
