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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/checker.hpp"
#include "core/confusion.hpp"
#include "core/corpus.hpp"
#include "core/eval.hpp"
#include "core/learner.hpp"
#include "core/rule.hpp"
#include "core/text.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace tblcheck;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string Fixed(double v, int digits = 2) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

std::string Quote(const std::string& s) { return "'" + s + "'"; }

int RunCli(const std::string& args, const std::string& out_path) {
  std::string cmd = Quote(TBLCHECK_CLI) + " " + args + " >" + Quote(out_path) + " 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---- 1: extraction on the excerpt ----

Outcome HolbrookExtract() {
  fixtures::TempDir dir("accept1");
  Stopwatch clock;
  int code = RunCli("extract " + Quote(TBLCHECK_FIXTURES "/holbrook_excerpt.txt"), dir / "out");
  double secs = clock.seconds();
  std::set<std::set<std::string>> got;
  for (const auto& set : ParseConfusionSets(text::ReadFile(dir / "out"))) {
    got.insert(std::set<std::string>(set.members().begin(), set.members().end()));
  }
  const std::set<std::set<std::string>> want = {{"two", "to"},     {"pictures", "pictyres"},
                                                {"manager", "maneger"}, {"stairs", "stars"},
                                                {"woman", "women"}, {"she", "he"}};
  bool ok = code == 0 && got == want && secs < 1.0;
  return {ok, std::to_string(got.size()) + " sets, exit " + std::to_string(code) + ", " +
                  Fixed(secs, 3) + " s"};
}

// ---- 2 and 3: oracle equivalence and score accounting ----

struct OracleRun {
  size_t corpora = 0;
  size_t rules = 0;
  size_t mismatches = 0;
  size_t accounting_errors = 0;
  double seconds = 0;
  std::string first_problem;
};

const OracleRun& OracleRuns() {
  static const OracleRun run = [] {
    OracleRun r;
    Stopwatch clock;
    std::mt19937_64 rng(20260);
    for (size_t trial = 0; trial < 30; ++trial) {
      auto rc = synthetic::Random(rng, {200, 0.3});
      LearnerConfig cfg;
      cfg.templates = rc.templates;
      cfg.threshold = 1;
      const std::vector<ConfusionSet>* sets = nullptr;
      if (trial % 3 == 2) {
        cfg.sets = rc.sets;
        sets = &rc.sets;
      }
      auto learned = Learn(rc.corpus, cfg);
      Corpus work = rc.corpus;
      for (const auto& rule : learned) {
        ++r.rules;
        auto best = oracle::Best(work, rc.templates, 1, sets);
        if (!best || oracle::Canonical(*best) != rule.CanonicalText() || best->good != rule.good ||
            best->bad != rule.bad) {
          ++r.mismatches;
          if (r.first_problem.empty()) {
            r.first_problem = "trial " + std::to_string(trial) + ": learned '" + rule.ToString() +
                              "', oracle '" + (best ? best->ToString() : "none") + "'";
          }
          break;
        }
        Corpus next = ApplyRule(rule, work);
        if (oracle::Errors(work) - oracle::Errors(next) != rule.good - rule.bad) {
          ++r.accounting_errors;
        }
        work = std::move(next);
      }
      if (r.mismatches == 0 && oracle::Best(work, rc.templates, 1, sets).has_value()) {
        ++r.mismatches;
        if (r.first_problem.empty()) {
          r.first_problem = "trial " + std::to_string(trial) + ": learner stopped early";
        }
      }
      ++r.corpora;
    }
    r.seconds = clock.seconds();
    return r;
  }();
  return run;
}

Outcome OracleEquivalence() {
  const auto& r = OracleRuns();
  bool ok = r.corpora >= 25 && r.mismatches == 0 && r.seconds < 60.0;
  std::string detail = std::to_string(r.corpora) + " corpora, " + std::to_string(r.rules) +
                       " rules, " + std::to_string(r.mismatches) + " mismatches, " +
                       Fixed(r.seconds) + " s";
  if (!r.first_problem.empty()) detail += "; " + r.first_problem;
  return {ok, detail};
}

Outcome ScoreAccounting() {
  const auto& r = OracleRuns();
  return {r.rules > 0 && r.accounting_errors == 0,
          std::to_string(r.rules) + " rules, " + std::to_string(r.accounting_errors) +
              " with error drop != good - bad"};
}

// ---- 4: training recall on a non-conflicting seeded corpus ----

Outcome TrainingRecall() {
  Corpus clean = synthetic::Grammar(300, 41, "typos");
  auto lex = synthetic::GrammarLexicon();
  std::set<std::string> vocabulary;
  for (const auto& s : clean.sentences) {
    for (const auto& t : s.tokens) vocabulary.insert(t.surface);
  }
  // Each noun gets one keyboard typo outside the vocabulary, so a wrong
  // form never occurs as a correct token and always has one true label.
  auto model = CharConfusionModel::Keyboard();
  std::vector<ConfusionSet> sets;
  std::set<std::string> used;
  for (const auto& pair : synthetic::NounSets()) {
    for (const auto& noun : pair.members()) {
      for (const auto& v : GenerateTypoVariants(noun, model)) {
        const std::string& typo = v.members()[0] == noun ? v.members()[1] : v.members()[0];
        if (vocabulary.contains(typo) || used.contains(typo)) continue;
        used.insert(typo);
        sets.push_back(v);
        break;
      }
    }
  }
  SeedPolicy policy;
  policy.mode = SeedPolicy::Mode::kSample;
  policy.rate = 0.5;
  policy.seed = 17;
  Corpus seeded = SeedErrors(clean, sets, policy, &lex);

  std::map<std::string, std::set<std::string>> truths_of_wrong;
  std::set<std::string> correct_surfaces;
  for (const auto& s : seeded.sentences) {
    for (const auto& t : s.tokens) {
      if (t.is_sentinel) continue;
      if (t.class_label == t.true_label) correct_surfaces.insert(t.surface);
      else truths_of_wrong[t.surface].insert(t.true_label);
    }
  }
  for (const auto& [wrong, truths] : truths_of_wrong) {
    if (truths.size() != 1 || correct_surfaces.contains(wrong)) {
      return {false, "fixture is conflicting at '" + wrong + "'"};
    }
  }

  LearnerConfig cfg;
  cfg.templates = DefaultTemplates();
  cfg.threshold = 1;
  auto rules = Learn(seeded, cfg);
  auto report = Evaluate(CompilePack(rules).pack, seeded);
  bool ok = seeded.error_count() > 0 && report.recall().value() == 1.0 &&
            !report.recall().undefined();
  return {ok, std::to_string(seeded.error_count()) + " errors, " + std::to_string(rules.size()) +
                  " rules, recall " + Fixed(100 * report.recall().value()) + "%"};
}

// ---- 5: naive versus mixed ----

Corpus Disjoint(const Corpus& heldout, const Corpus& train) {
  std::set<std::vector<std::string>> seen;
  auto key = [](const Sentence& s) {
    std::vector<std::string> k;
    for (const auto& t : s.tokens) k.push_back(t.surface);
    return k;
  };
  for (const auto& s : train.sentences) seen.insert(key(s));
  Corpus out;
  out.name = heldout.name;
  for (const auto& s : heldout.sentences) {
    if (!seen.contains(key(s))) out.sentences.push_back(s);
  }
  return out;
}

Outcome NaiveVersusMixed() {
  Stopwatch clock;
  auto lex = synthetic::GrammarLexicon();
  auto doc = ParseErrMarkup(synthetic::ErrText(20, 7), "errors");
  doc.corpus = TagCorpus(doc.corpus, lex);
  Corpus train = synthetic::Grammar(500, 11, "train");
  Corpus heldout = Disjoint(synthetic::Grammar(200, 13, "heldout"), train);
  ExperimentConfig cfg;
  cfg.policy.mode = SeedPolicy::Mode::kSample;
  cfg.policy.rate = 0.5;
  cfg.policy.seed = 5;
  cfg.lexicon = &lex;
  cfg.learner.threads = 0;
  auto result = RunExperiment(doc, train, heldout, cfg);
  double secs = clock.seconds();
  const auto& naive = result.at(Method::kNaive, EvalCorpus::kHeldOut);
  const auto& mixed = result.at(Method::kMixed, EvalCorpus::kHeldOut);
  bool ok = result.sets.size() == 5 && mixed.precision().value() > naive.precision().value() &&
            mixed.recall().value() == 1.0 && !mixed.recall().undefined() && secs < 120.0;
  return {ok, std::to_string(result.sets.size()) + " sets, " + std::to_string(train.sentences.size()) +
                  " clean / " + std::to_string(heldout.sentences.size()) +
                  " held-out sentences; held-out precision naive " +
                  Fixed(100 * naive.precision().value()) + "% vs mixed " +
                  Fixed(100 * mixed.precision().value()) + "%, mixed recall " +
                  Fixed(100 * mixed.recall().value()) + "%, " + Fixed(secs) + " s"};
}

// ---- 6: compiled rules fire where the learner matches ----

Outcome CompileFidelity() {
  std::mt19937_64 rng(606);
  static const std::vector<std::string> kNoise = {"a", "b", "c", "N", "V", "SENT_START", "SENT_END"};
  size_t pairs = 0, mismatches = 0, fires = 0, never = 0;
  std::string first;
  while (pairs < 1000) {
    auto rc = synthetic::Random(rng, {40, 0.2});
    for (const Sentence& s : rc.corpus.sentences) {
      if (pairs >= 1000) break;
      if (s.tokens.size() < 3) continue;
      size_t anchor = 1 + rng() % (s.tokens.size() - 2);
      TransformationRule rule;
      rule.from_class = s.tokens[anchor].surface;
      rule.to_class = "zz";
      for (const auto& schema : synthetic::RandomTemplate(rng).atoms) {
        long at = static_cast<long>(anchor) + schema.lo + static_cast<long>(rng() % (schema.hi - schema.lo + 1));
        std::string value(FeatureAt(s, at, schema.feature));
        if (rng() % 4 == 0) value = kNoise[rng() % kNoise.size()];
        rule.atoms.push_back({schema, value});
      }
      if (rng() % 8 == 0) rule.atoms.push_back({AtomSchema::At(Feature::kSurface, 0), kNoise[rng() % 3]});
      if (rule.atoms.size() > 3) rule.atoms.erase(rule.atoms.begin());
      Corpus one;
      one.sentences.push_back(s);
      auto compiled = CompilePack(std::vector<TransformationRule>{rule});
      if (!compiled.never_fire.empty()) ++never;
      std::set<size_t> fired;
      for (const auto& d : Check(one, compiled.pack)) fired.insert(d.start);
      std::set<size_t> matched;
      for (size_t i = 0; i < s.tokens.size(); ++i) {
        if (Match(rule, s, i)) matched.insert(i);
      }
      fires += fired.size();
      if (fired != matched) {
        ++mismatches;
        if (first.empty()) first = "; first: " + rule.CanonicalText();
      }
      ++pairs;
    }
  }
  return {mismatches == 0, std::to_string(pairs) + " pairs, " + std::to_string(fires) +
                               " firings, " + std::to_string(never) + " never-fire rules, " +
                               std::to_string(mismatches) + " mismatches" + first};
}

// ---- 7: missing-word seeding ----

Outcome MissingWord() {
  Corpus clean = synthetic::Grammar(200, 71, "missing");
  const std::string word = "to";
  Corpus seeded = SeedMissingWord(clean, word);
  LearnerConfig cfg;
  cfg.threshold = 1;
  auto rules = Learn(seeded, cfg);
  size_t insertion = 0;
  std::string example;
  for (const auto& r : rules) {
    if (r.from_class == "NULL" && r.to_class == word) {
      if (insertion++ == 0) example = r.ToString();
    }
  }
  return {insertion >= 1, std::to_string(insertion) + " of " + std::to_string(rules.size()) +
                              " rules insert '" + word + "'" +
                              (example.empty() ? "" : "; top: " + example)};
}

// ---- 8: round trips ----

Outcome RoundTrips() {
  fixtures::TempDir dir("accept8");
  auto lex = synthetic::GrammarLexicon();
  SeedPolicy policy;
  policy.mode = SeedPolicy::Mode::kSample;
  policy.rate = 0.5;
  policy.seed = 8;
  Corpus base = synthetic::Grammar(200, 81, "roundtrip");
  Corpus seeded = SeedErrors(base, synthetic::CoreSets(), policy, &lex);
  Corpus with_null = SeedMissingWord(base, "the");
  std::string problems;

  for (const Corpus* c : {&seeded, &with_null}) {
    std::string a = dir / "a.tsv", b = dir / "b.tsv";
    SaveColumnCorpus(*c, a);
    SaveColumnCorpus(LoadColumnCorpus(a), b);
    if (text::ReadFile(a) != text::ReadFile(b)) problems += " column";
    if (LoadColumnCorpus(a).sentences != c->sentences) problems += " column-value";
  }

  LearnerConfig cfg;
  cfg.threshold = 1;
  auto rules = Learn(seeded, cfg);
  auto null_rules = Learn(with_null, cfg);
  rules.insert(rules.end(), null_rules.begin(), null_rules.end());
  std::string printed = FormatRules(rules);
  auto parsed = ParseRules(printed);
  if (parsed != rules || FormatRules(parsed) != printed) problems += " rule-text";

  RulePack pack = CompilePack(rules, "en", "round <trip> & \"quotes\"").pack;
  RulePack back = ImportXml(ExportXml(pack));
  if (back != pack) problems += " xml";
  SaveXml(pack, dir / "pack.xml");
  if (LoadXml(dir / "pack.xml") != pack) problems += " xml-file";

  return {problems.empty(), std::to_string(rules.size()) + " rules, " +
                                std::to_string(pack.rules.size()) + " pattern rules" +
                                (problems.empty() ? "" : "; failed:" + problems)};
}

// ---- 9: determinism of the command-line pipeline ----

std::map<std::string, std::string> Pipeline(const fs::path& inputs, const fixtures::TempDir& out,
                                            const std::string& threads, std::string& log) {
  auto in = [&](const char* name) { return Quote((inputs / name).string()); };
  auto at = [&](const char* name) { return Quote(out / name); };
  const std::string lex = " --lexicon " + in("lexicon.tsv");
  const std::string seeding = " --policy sample --rate 0.5 --seed 3";
  const std::string learning = " --templates default --threads " + threads;
  const std::vector<std::string> steps = {
      "extract -o " + at("sets.txt") + " " + in("errors.txt"),
      "seed --sets " + at("sets.txt") + seeding + lex + " -o " + at("seeded.tsv") + " " + in("train.txt"),
      "seed --sets " + at("sets.txt") + seeding + lex + " -o " + at("heldout.tsv") + " " + in("heldout.txt"),
      "seed-null --word to" + lex + " -o " + at("null.tsv") + " " + in("train.txt"),
      "learn" + learning + " --threshold 2 -o " + at("rules.txt") + " " + at("seeded.tsv"),
      "learn" + learning + " --threshold 1 -o " + at("null_rules.txt") + " " + at("null.tsv"),
      "filter --max-matches 50" + lex + " -o " + at("kept.txt") + " " + at("rules.txt") + " " + in("train.txt"),
      "export --source pipeline -o " + at("pack.xml") + " " + at("kept.txt"),
      "check --pack " + at("pack.xml") + lex + " -o " + at("diagnostics.tsv") + " " + in("heldout.txt"),
      "eval --format tsv --pack " + at("pack.xml") + " -o " + at("eval.tsv") + " " + at("heldout.tsv"),
      "experiment --format tsv --threshold 2" + seeding + learning + lex + " -o " + at("experiment.tsv") + " " +
          in("errors.txt") + " " + in("train.txt") + " " + in("heldout.txt"),
  };
  for (const auto& step : steps) {
    int code = RunCli(step, out / "log.txt");
    if (code != 0) {
      log += "step failed (" + std::to_string(code) + "): " + step + ": " +
             text::ReadFile(out / "log.txt");
      return {};
    }
  }
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(out.path())) {
    std::string name = entry.path().filename().string();
    if (name != "log.txt") files[name] = text::ReadFile(entry.path().string());
  }
  return files;
}

Outcome Determinism() {
  fixtures::TempDir inputs("accept9in");
  auto lex = synthetic::GrammarLexicon();
  text::WriteFile(inputs / "errors.txt", synthetic::ErrText(20, 7));
  text::WriteFile(inputs / "train.txt", synthetic::PlainText(synthetic::Grammar(400, 91)));
  text::WriteFile(inputs / "heldout.txt", synthetic::PlainText(synthetic::Grammar(150, 92)));
  text::WriteFile(inputs / "lexicon.tsv", synthetic::LexiconText());

  fixtures::TempDir a("accept9a"), b("accept9b"), serial("accept9s");
  std::string log;
  const std::string max_threads = "64";
  auto first = Pipeline(inputs.path(), a, max_threads, log);
  auto second = Pipeline(inputs.path(), b, max_threads, log);
  auto one = Pipeline(inputs.path(), serial, "1", log);
  if (!log.empty()) return {false, log};

  bool identical = !first.empty() && first == second;
  // The serial run differs only in the recorded thread count.
  size_t compared = 0;
  std::string differing;
  for (const auto& [name, bytes] : first) {
    if (name.ends_with(".meta.json")) continue;
    ++compared;
    if (one[name] != bytes) differing += " " + name;
  }
  bool ok = identical && differing.empty();
  return {ok, std::to_string(first.size()) + " artifacts byte-identical across two runs at " +
                  max_threads + " threads: " + (identical ? "yes" : "no") + "; " +
                  std::to_string(compared) + " outputs equal to the 1-thread run" +
                  (differing.empty() ? "" : "; differing:" + differing)};
}

// ---- 10: throughput ----

Outcome Throughput() {
  auto lex = synthetic::GrammarLexicon();
  Corpus clean;
  for (size_t n = 4000;; n += 250) {
    clean = synthetic::Grammar(n, 101, "large");
    if (clean.token_count() >= 100000) break;
  }
  auto sets = synthetic::CoreSets();
  for (const auto& s : synthetic::NounSets()) sets.push_back(s);
  SeedPolicy policy;
  policy.mode = SeedPolicy::Mode::kSample;
  policy.rate = 0.3;
  policy.seed = 10;
  Corpus seeded = SeedErrors(clean, sets, policy, &lex);
  LearnerConfig cfg;
  cfg.templates = DefaultTemplates();
  Stopwatch clock;
  auto rules = Learn(seeded, cfg);
  double secs = clock.seconds();
  return {sets.size() == 20 && secs < 300.0,
          std::to_string(seeded.token_count()) + " tokens, " + std::to_string(sets.size()) +
              " sets, " + std::to_string(seeded.error_count()) + " errors, " +
              std::to_string(rules.size()) + " rules, " + Fixed(secs) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"extract yields the six excerpt pairs", HolbrookExtract},
      {"learned rules equal the brute-force argmax", OracleEquivalence},
      {"error count drops by good - bad per rule", ScoreAccounting},
      {"identity template reaches full training recall", TrainingRecall},
      {"mixed beats naive on held-out text", NaiveVersusMixed},
      {"compiled rules fire where rules match", CompileFidelity},
      {"missing-word seeding learns insertion rules", MissingWord},
      {"column, rule text and XML round trips", RoundTrips},
      {"pipeline output is deterministic", Determinism},
      {"learning 100k tokens is fast", Throughput},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first
              << " (" << outcome.detail << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
