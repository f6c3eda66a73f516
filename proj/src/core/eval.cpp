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

#include "core/eval.hpp"

#include <cstdio>
#include <future>

#include "core/error.hpp"

namespace tblcheck {

EvalReport Evaluate(const RulePack& pack, const Corpus& gold) {
  EvalReport report;
  report.corpus = gold.name;
  for (const auto& rule : pack.rules) report.fires[rule.id] = 0;
  for (const auto& d : Check(gold, pack)) {
    const Token& tok = gold.sentences[d.sentence].tokens[d.start];
    ++report.fires[d.rule_id];
    if (tok.is_error() && d.suggestion == tok.true_label) {
      ++report.true_positives;
    } else {
      ++report.false_positives;
    }
  }
  report.false_negatives =
      static_cast<long long>(gold.error_count()) - report.true_positives;
  return report;
}

namespace {

struct Arm {
  std::vector<TransformationRule> rules;
  EvalReport training;
  EvalReport heldout;
};

Arm RunArm(const Corpus& training, const Corpus& heldout_seeded, const LearnerConfig& config,
           const std::string& label) {
  Arm arm;
  arm.rules = Learn(training, config);
  RulePack pack = CompilePack(arm.rules, "en", label).pack;
  arm.training = Evaluate(pack, training);
  arm.heldout = Evaluate(pack, heldout_seeded);
  return arm;
}

}  // namespace

ExperimentResult RunExperiment(const ErrDocument& error_corpus, const Corpus& clean_train,
                               const Corpus& heldout, const ExperimentConfig& config) {
  ExperimentResult result;
  result.sets = ExtractConfusionSets(error_corpus.annotations, config.dictionary);

  Corpus seeded_train = SeedErrors(clean_train, result.sets, config.policy, config.lexicon);
  Corpus seeded_heldout = SeedErrors(heldout, result.sets, config.policy, config.lexicon);

  LearnerConfig naive_cfg = config.learner;
  naive_cfg.sets.reset();
  LearnerConfig mixed_cfg = config.learner;
  mixed_cfg.sets = result.sets;

  // The arms share nothing mutable, so they may run side by side.
  std::launch policy = config.learner.threads == 1 ? std::launch::deferred : std::launch::async;
  auto naive = std::async(policy, [&] {
    return RunArm(error_corpus.corpus, seeded_heldout, naive_cfg, "naive");
  });
  Arm mixed = RunArm(seeded_train, seeded_heldout, mixed_cfg, "mixed");
  Arm naive_arm = naive.get();

  auto fill = [&](Method m, Arm& arm) {
    auto mi = static_cast<size_t>(m);
    result.rules[mi] = std::move(arm.rules);
    result.grid[mi][static_cast<size_t>(EvalCorpus::kTraining)] = std::move(arm.training);
    result.grid[mi][static_cast<size_t>(EvalCorpus::kHeldOut)] = std::move(arm.heldout);
  };
  fill(Method::kNaive, naive_arm);
  fill(Method::kMixed, mixed);
  return result;
}

// --- Formatting ------------------------------------------------------------

namespace {

std::string Percent(const Ratio& r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%%s", r.value() * 100.0, r.undefined() ? "*" : "");
  return buf;
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string TsvRow(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += '\t';
    out += c;
  }
  return out + '\n';
}

std::string RatioCells(const Ratio& r) {
  return Fixed(r.value()) + '\t' + (r.undefined() ? "1" : "0") + '\t' +
         std::to_string(r.numerator) + '\t' + std::to_string(r.denominator);
}

std::string Pad(std::string s, size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void CheckFormat(const std::string& format) {
  if (format != "tsv" && format != "table") {
    throw ValidationError("unknown report format '" + format + "' (expected tsv or table)");
  }
}

}  // namespace

std::string FormatReport(const EvalReport& report, const std::string& format) {
  CheckFormat(format);
  if (format == "tsv") {
    std::string out = TsvRow({"corpus", "measure", "value", "undefined", "numerator", "denominator"});
    out += TsvRow({report.corpus, "recall", RatioCells(report.recall())});
    out += TsvRow({report.corpus, "precision", RatioCells(report.precision())});
    return out;
  }
  std::string out = "Corpus: " + report.corpus + "\n";
  out += Pad("Measure", 11) + "Value\n";
  out += Pad("Recall", 11) + Percent(report.recall()) + "\n";
  out += Pad("Precision", 11) + Percent(report.precision()) + "\n";
  out += "TP=" + std::to_string(report.true_positives) +
         " FP=" + std::to_string(report.false_positives) +
         " FN=" + std::to_string(report.false_negatives) + "\n";
  if (report.recall().undefined() || report.precision().undefined()) {
    out += "* undefined (0/0), printed as 0\n";
  }
  if (!report.fires.empty()) {
    out += "Fires per rule:\n";
    for (const auto& [id, n] : report.fires) out += "  " + Pad(id, 12) + std::to_string(n) + "\n";
  }
  return out;
}

std::string FormatExperiment(const ExperimentResult& result, const std::string& format) {
  CheckFormat(format);
  const std::array<std::string, 2> corpus_names = {"Training corpus", "Held-out corpus"};
  const std::array<std::string, 2> method_names = {"Naive learning", "Mixed learning"};
  bool any_undefined = false;
  if (format == "tsv") {
    std::string out = TsvRow(
        {"corpus", "measure", "method", "value", "undefined", "numerator", "denominator"});
    const std::array<std::string, 2> corpus_keys = {"training", "heldout"};
    const std::array<std::string, 2> method_keys = {"naive", "mixed"};
    for (size_t c = 0; c < 2; ++c) {
      for (const char* measure : {"recall", "precision"}) {
        for (size_t m = 0; m < 2; ++m) {
          const EvalReport& r = result.grid[m][c];
          Ratio ratio = std::string(measure) == "recall" ? r.recall() : r.precision();
          out += TsvRow({corpus_keys[c], measure, method_keys[m], RatioCells(ratio)});
        }
      }
    }
    return out;
  }
  std::string out = Pad("Corpus type", 17) + Pad("Measure", 11) + Pad(method_names[0], 16) +
                    method_names[1] + "\n";
  for (size_t c = 0; c < 2; ++c) {
    for (int row = 0; row < 2; ++row) {
      out += Pad(row == 0 ? corpus_names[c] : "", 17);
      out += Pad(row == 0 ? "Recall" : "Precision", 11);
      for (size_t m = 0; m < 2; ++m) {
        const EvalReport& r = result.grid[m][c];
        Ratio ratio = row == 0 ? r.recall() : r.precision();
        any_undefined = any_undefined || ratio.undefined();
        std::string cell = Percent(ratio);
        out += m == 0 ? Pad(cell, 16) : cell;
      }
      out += "\n";
    }
  }
  if (any_undefined) out += "* undefined (0/0), printed as 0\n";
  return out;
}

}  // namespace tblcheck
