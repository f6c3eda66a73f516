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

#include "tblcheck/tblcheck.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "core/checker.hpp"
#include "core/confusion.hpp"
#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/learner.hpp"
#include "core/rule.hpp"
#include "core/text.hpp"

struct tbl_corpus {
  tblcheck::Corpus value;
};
struct tbl_annotations {
  std::vector<tblcheck::ErrAnnotation> value;
};
struct tbl_lexicon {
  tblcheck::Lexicon value;
};
struct tbl_sets {
  std::vector<tblcheck::ConfusionSet> value;
};
struct tbl_templates {
  std::vector<tblcheck::Template> value;
};
struct tbl_rules {
  std::vector<tblcheck::TransformationRule> value;
};
struct tbl_pack {
  tblcheck::RulePack value;
};
struct tbl_report {
  tblcheck::EvalReport value;
};
struct tbl_experiment {
  tblcheck::ExperimentResult value;
};

namespace {

thread_local std::string g_last_error;

// Corpora read from files are named by file name, so reports do not depend
// on where the inputs live.
std::string BaseName(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

struct ArgumentError {
  const char* what;
};

template <typename F>
tbl_status Guard(F&& body) {
  try {
    g_last_error.clear();
    body();
    return TBL_OK;
  } catch (const ArgumentError& e) {
    g_last_error = e.what;
    return TBL_ERR_ARGUMENT;
  } catch (const tblcheck::Error& e) {
    g_last_error = e.what();
    switch (e.kind()) {
      case tblcheck::ErrorKind::kValidation:
        return TBL_ERR_VALIDATION;
      case tblcheck::ErrorKind::kParse:
        return TBL_ERR_PARSE;
      case tblcheck::ErrorKind::kIo:
        return TBL_ERR_IO;
    }
    return TBL_ERR_INTERNAL;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TBL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TBL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TBL_ERR_INTERNAL;
  }
}

template <typename T>
T& Need(T* p, const char* what) {
  if (p == nullptr) throw ArgumentError{what};
  return *p;
}

std::string Str(const char* s, const char* what) {
  if (s == nullptr) throw ArgumentError{what};
  return s;
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

template <typename H, typename V>
void Emit(H** out, V&& value) {
  *out = new H{std::forward<V>(value)};
}

std::optional<tblcheck::WordSet> MaybeDictionary(const char* path) {
  if (path == nullptr) return std::nullopt;
  return tblcheck::LoadDictionary(path);
}

tblcheck::SeedPolicy ToPolicy(const tbl_seed_policy& p) {
  tblcheck::SeedPolicy policy;
  switch (p.mode) {
    case TBL_SEED_REPLACE_ALL:
      policy.mode = tblcheck::SeedPolicy::Mode::kReplaceAll;
      break;
    case TBL_SEED_ROUND_ROBIN:
      policy.mode = tblcheck::SeedPolicy::Mode::kRoundRobin;
      break;
    case TBL_SEED_SAMPLE:
      policy.mode = tblcheck::SeedPolicy::Mode::kSample;
      break;
    default:
      throw tblcheck::ValidationError("unknown seed mode");
  }
  policy.rate = p.rate;
  policy.seed = p.seed;
  return policy;
}

tblcheck::LearnerConfig ToLearnerConfig(const tbl_learn_config& c) {
  tblcheck::LearnerConfig config;
  if (c.templates != nullptr) config.templates = c.templates->value;
  config.threshold = c.threshold;
  if (c.max_rules >= 0) config.max_rules = static_cast<size_t>(c.max_rules);
  if (c.sets != nullptr) config.sets = c.sets->value;
  config.threads = c.threads;
  return config;
}

std::optional<size_t> MaxMatches(long long n) {
  if (n < 0) return std::nullopt;
  return static_cast<size_t>(n);
}

std::string DroppedTsv(const tblcheck::FilterResult& result) {
  std::string out;
  for (const auto& [rule, fires] : result.dropped) {
    out += rule.id + '\t' + std::to_string(fires) + '\n';
  }
  return out;
}

}  // namespace

extern "C" {

const char* tbl_version(void) { return "1.0.0"; }

const char* tbl_last_error(void) { return g_last_error.c_str(); }

void tbl_string_free(char* s) { std::free(s); }

// ---- corpus ----

tbl_status tbl_corpus_tokenize(const char* text, const char* name, tbl_corpus** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::TokenizeCorpus(Str(text, "text"), name ? name : ""));
  });
}

tbl_status tbl_corpus_load_text(const char* path, tbl_corpus** out) {
  return Guard([&] {
    Need(out, "out");
    std::string p = Str(path, "path");
    Emit(out, tblcheck::TokenizeCorpus(tblcheck::text::ReadFile(p), BaseName(p)));
  });
}

tbl_status tbl_corpus_parse_err(const char* text, const char* name, tbl_corpus** corpus,
                                tbl_annotations** annotations) {
  return Guard([&] {
    Need(corpus, "corpus");
    tblcheck::ErrDocument doc = tblcheck::ParseErrMarkup(Str(text, "text"), name ? name : "");
    std::unique_ptr<tbl_annotations> ann;
    if (annotations != nullptr) ann.reset(new tbl_annotations{std::move(doc.annotations)});
    Emit(corpus, std::move(doc.corpus));
    if (annotations != nullptr) *annotations = ann.release();
  });
}

tbl_status tbl_corpus_load_err(const char* path, tbl_corpus** corpus,
                               tbl_annotations** annotations) {
  return Guard([&] {
    Need(corpus, "corpus");
    std::string p = Str(path, "path");
    tblcheck::ErrDocument doc = tblcheck::ParseErrMarkup(tblcheck::text::ReadFile(p), p);
    doc.corpus.name = BaseName(p);
    std::unique_ptr<tbl_annotations> ann;
    if (annotations != nullptr) ann.reset(new tbl_annotations{std::move(doc.annotations)});
    Emit(corpus, std::move(doc.corpus));
    if (annotations != nullptr) *annotations = ann.release();
  });
}

tbl_status tbl_corpus_load_column(const char* path, tbl_corpus** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::LoadColumnCorpus(Str(path, "path")));
  });
}

tbl_status tbl_corpus_save_column(const tbl_corpus* corpus, const char* path) {
  return Guard([&] { tblcheck::SaveColumnCorpus(Need(corpus, "corpus").value, Str(path, "path")); });
}

tbl_status tbl_corpus_to_column(const tbl_corpus* corpus, char** out) {
  return Guard([&] {
    Need(out, "out");
    *out = Dup(tblcheck::FormatColumnCorpus(Need(corpus, "corpus").value));
  });
}

tbl_status tbl_corpus_tag(tbl_corpus* corpus, const tbl_lexicon* lexicon) {
  return Guard([&] {
    auto& c = Need(corpus, "corpus");
    c.value = tblcheck::TagCorpus(std::move(c.value), Need(lexicon, "lexicon").value);
  });
}

size_t tbl_corpus_sentence_count(const tbl_corpus* corpus) {
  return corpus ? corpus->value.sentences.size() : 0;
}
size_t tbl_corpus_token_count(const tbl_corpus* corpus) {
  return corpus ? corpus->value.token_count() : 0;
}
size_t tbl_corpus_error_count(const tbl_corpus* corpus) {
  return corpus ? corpus->value.error_count() : 0;
}
void tbl_corpus_free(tbl_corpus* corpus) { delete corpus; }

size_t tbl_annotations_count(const tbl_annotations* annotations) {
  return annotations ? annotations->value.size() : 0;
}
void tbl_annotations_free(tbl_annotations* annotations) { delete annotations; }

tbl_status tbl_lexicon_load(const char* path, tbl_lexicon** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::LoadLexicon(Str(path, "path")));
  });
}
void tbl_lexicon_free(tbl_lexicon* lexicon) { delete lexicon; }

// ---- confusion sets and seeding ----

tbl_status tbl_sets_load(const char* path, tbl_sets** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::LoadConfusionSets(Str(path, "path")));
  });
}

tbl_status tbl_sets_parse(const char* text, tbl_sets** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::ParseConfusionSets(Str(text, "text")));
  });
}

tbl_status tbl_sets_save(const tbl_sets* sets, const char* path) {
  return Guard([&] { tblcheck::SaveConfusionSets(Need(sets, "sets").value, Str(path, "path")); });
}

tbl_status tbl_sets_to_string(const tbl_sets* sets, char** out) {
  return Guard([&] {
    Need(out, "out");
    *out = Dup(tblcheck::FormatConfusionSets(Need(sets, "sets").value));
  });
}

size_t tbl_sets_count(const tbl_sets* sets) { return sets ? sets->value.size() : 0; }
void tbl_sets_free(tbl_sets* sets) { delete sets; }

tbl_status tbl_sets_extract(const tbl_annotations* annotations, const char* dictionary_path,
                            tbl_sets** out) {
  return Guard([&] {
    Need(out, "out");
    auto dict = MaybeDictionary(dictionary_path);
    Emit(out, tblcheck::ExtractConfusionSets(Need(annotations, "annotations").value,
                                             dict ? &*dict : nullptr));
  });
}

tbl_status tbl_sets_typo_variants(const char* word, const char* model,
                                  const char* dictionary_path, tbl_sets** out) {
  return Guard([&] {
    Need(out, "out");
    std::string kind = Str(model, "model");
    tblcheck::CharConfusionModel m = kind == "keyboard" ? tblcheck::CharConfusionModel::Keyboard()
                                     : kind == "ocr"    ? tblcheck::CharConfusionModel::Ocr()
                                                        : tblcheck::CharConfusionModel::Load(kind);
    auto dict = MaybeDictionary(dictionary_path);
    Emit(out, tblcheck::GenerateTypoVariants(Str(word, "word"), m, dict ? &*dict : nullptr));
  });
}

tbl_status tbl_seed_errors(const tbl_corpus* clean, const tbl_sets* sets,
                           const tbl_seed_policy* policy, const tbl_lexicon* lexicon,
                           tbl_corpus** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::SeedErrors(Need(clean, "clean").value, Need(sets, "sets").value,
                                   ToPolicy(Need(policy, "policy")),
                                   lexicon ? &lexicon->value : nullptr));
  });
}

tbl_status tbl_seed_missing_word(const tbl_corpus* clean, const char* word, tbl_corpus** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::SeedMissingWord(Need(clean, "clean").value, Str(word, "word")));
  });
}

tbl_status tbl_seed_runon(const tbl_corpus* clean, const tbl_sets* pairs, tbl_corpus** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::SeedRunOnSplits(Need(clean, "clean").value, Need(pairs, "pairs").value));
  });
}

// ---- learning ----

tbl_status tbl_templates_default(int far_offsets, tbl_templates** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::DefaultTemplates(far_offsets != 0));
  });
}

tbl_status tbl_templates_load(const char* path, tbl_templates** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::LoadTemplates(Str(path, "path")));
  });
}

size_t tbl_templates_count(const tbl_templates* templates) {
  return templates ? templates->value.size() : 0;
}
void tbl_templates_free(tbl_templates* templates) { delete templates; }

void tbl_learn_config_init(tbl_learn_config* config) {
  if (config == nullptr) return;
  config->templates = nullptr;
  config->threshold = 2;
  config->max_rules = -1;
  config->sets = nullptr;
  config->threads = 1;
}

tbl_status tbl_learn(const tbl_corpus* corpus, const tbl_learn_config* config, tbl_rules** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::Learn(Need(corpus, "corpus").value, ToLearnerConfig(Need(config, "config"))));
  });
}

tbl_status tbl_rules_load(const char* path, tbl_rules** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::LoadRules(Str(path, "path")));
  });
}

tbl_status tbl_rules_parse(const char* text, tbl_rules** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::ParseRules(Str(text, "text")));
  });
}

tbl_status tbl_rules_save(const tbl_rules* rules, const char* path) {
  return Guard([&] { tblcheck::SaveRules(Need(rules, "rules").value, Str(path, "path")); });
}

tbl_status tbl_rules_to_string(const tbl_rules* rules, char** out) {
  return Guard([&] {
    Need(out, "out");
    *out = Dup(tblcheck::FormatRules(Need(rules, "rules").value));
  });
}

size_t tbl_rules_count(const tbl_rules* rules) { return rules ? rules->value.size() : 0; }

tbl_status tbl_rules_filter(const tbl_rules* rules, const tbl_corpus* clean,
                            long long max_matches, tbl_rules** kept, char** dropped_tsv) {
  return Guard([&] {
    Need(kept, "kept");
    const auto& source = Need(rules, "rules").value;
    // Filter through the compiled form; pack ids are 1-based rule ranks.
    tblcheck::CompiledPack compiled = tblcheck::CompilePack(source);
    tblcheck::FilterResult result = tblcheck::FilterNoisyRules(
        compiled.pack, Need(clean, "clean").value, MaxMatches(max_matches));
    std::vector<bool> drop(source.size(), false);
    std::string dropped;
    for (const auto& [rule, fires] : result.dropped) {
      size_t index = std::stoul(rule.id.substr(4)) - 1;
      drop[index] = true;
      dropped += source[index].ToString() + '\t' + std::to_string(fires) + '\n';
    }
    std::vector<tblcheck::TransformationRule> out;
    for (size_t i = 0; i < source.size(); ++i) {
      if (!drop[i]) out.push_back(source[i]);
    }
    std::unique_ptr<char, decltype(&std::free)> text(
        dropped_tsv != nullptr ? Dup(dropped) : nullptr, &std::free);
    Emit(kept, std::move(out));
    if (dropped_tsv != nullptr) *dropped_tsv = text.release();
  });
}

void tbl_rules_free(tbl_rules* rules) { delete rules; }

// ---- checking ----

tbl_status tbl_pack_compile(const tbl_rules* rules, const char* lang, const char* source,
                            tbl_pack** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::CompilePack(Need(rules, "rules").value, lang ? lang : "en",
                                    source ? source : "")
                  .pack);
  });
}

tbl_status tbl_pack_load_xml(const char* path, tbl_pack** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::LoadXml(Str(path, "path")));
  });
}

tbl_status tbl_pack_parse_xml(const char* document, tbl_pack** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::ImportXml(Str(document, "document")));
  });
}

tbl_status tbl_pack_save_xml(const tbl_pack* pack, const char* path) {
  return Guard([&] { tblcheck::SaveXml(Need(pack, "pack").value, Str(path, "path")); });
}

tbl_status tbl_pack_to_xml(const tbl_pack* pack, char** out) {
  return Guard([&] {
    Need(out, "out");
    *out = Dup(tblcheck::ExportXml(Need(pack, "pack").value));
  });
}

size_t tbl_pack_count(const tbl_pack* pack) { return pack ? pack->value.rules.size() : 0; }

tbl_status tbl_pack_filter(const tbl_pack* pack, const tbl_corpus* clean, long long max_matches,
                           tbl_pack** kept, char** dropped_tsv) {
  return Guard([&] {
    Need(kept, "kept");
    tblcheck::FilterResult result = tblcheck::FilterNoisyRules(
        Need(pack, "pack").value, Need(clean, "clean").value, MaxMatches(max_matches));
    std::unique_ptr<char, decltype(&std::free)> text(
        dropped_tsv != nullptr ? Dup(DroppedTsv(result)) : nullptr, &std::free);
    Emit(kept, std::move(result.kept));
    if (dropped_tsv != nullptr) *dropped_tsv = text.release();
  });
}

void tbl_pack_free(tbl_pack* pack) { delete pack; }

tbl_status tbl_check_text(const tbl_pack* pack, const tbl_corpus* text, char** tsv,
                          size_t* count) {
  return Guard([&] {
    Need(tsv, "tsv");
    auto diagnostics = tblcheck::CheckText(Need(text, "text").value, Need(pack, "pack").value);
    *tsv = Dup(tblcheck::FormatDiagnostics(diagnostics));
    if (count != nullptr) *count = diagnostics.size();
  });
}

// ---- evaluation ----

tbl_status tbl_evaluate(const tbl_pack* pack, const tbl_corpus* gold, tbl_report** out) {
  return Guard([&] {
    Need(out, "out");
    Emit(out, tblcheck::Evaluate(Need(pack, "pack").value, Need(gold, "gold").value));
  });
}

double tbl_report_precision(const tbl_report* report) {
  return report ? report->value.precision().value() : 0.0;
}
double tbl_report_recall(const tbl_report* report) {
  return report ? report->value.recall().value() : 0.0;
}
int tbl_report_precision_undefined(const tbl_report* report) {
  return report ? report->value.precision().undefined() : 1;
}
int tbl_report_recall_undefined(const tbl_report* report) {
  return report ? report->value.recall().undefined() : 1;
}

tbl_status tbl_report_format(const tbl_report* report, const char* format, char** out) {
  return Guard([&] {
    Need(out, "out");
    *out = Dup(tblcheck::FormatReport(Need(report, "report").value, Str(format, "format")));
  });
}

void tbl_report_free(tbl_report* report) { delete report; }

void tbl_experiment_config_init(tbl_experiment_config* config) {
  if (config == nullptr) return;
  tbl_learn_config_init(&config->learn);
  config->policy.mode = TBL_SEED_REPLACE_ALL;
  config->policy.rate = 1.0;
  config->policy.seed = 0;
  config->lexicon = nullptr;
  config->dictionary_path = nullptr;
}

tbl_status tbl_experiment_run(const tbl_corpus* error_corpus, const tbl_annotations* annotations,
                              const tbl_corpus* clean_train, const tbl_corpus* heldout,
                              const tbl_experiment_config* config, tbl_experiment** out) {
  return Guard([&] {
    Need(out, "out");
    const auto& cfg = Need(config, "config");
    tblcheck::ErrDocument doc{Need(error_corpus, "error_corpus").value,
                              Need(annotations, "annotations").value};
    auto dict = MaybeDictionary(cfg.dictionary_path);
    tblcheck::ExperimentConfig ec;
    ec.learner = ToLearnerConfig(cfg.learn);
    ec.policy = ToPolicy(cfg.policy);
    ec.lexicon = cfg.lexicon ? &cfg.lexicon->value : nullptr;
    ec.dictionary = dict ? &*dict : nullptr;
    Emit(out, tblcheck::RunExperiment(doc, Need(clean_train, "clean_train").value,
                                      Need(heldout, "heldout").value, ec));
  });
}

namespace {
const tblcheck::EvalReport* Cell(const tbl_experiment* e, int method, int corpus) {
  if (e == nullptr || method < 0 || method > 1 || corpus < 0 || corpus > 1) return nullptr;
  return &e->value.grid[static_cast<size_t>(method)][static_cast<size_t>(corpus)];
}
}  // namespace

double tbl_experiment_precision(const tbl_experiment* e, int method, int corpus) {
  const auto* r = Cell(e, method, corpus);
  return r ? r->precision().value() : 0.0;
}

double tbl_experiment_recall(const tbl_experiment* e, int method, int corpus) {
  const auto* r = Cell(e, method, corpus);
  return r ? r->recall().value() : 0.0;
}

tbl_status tbl_experiment_format(const tbl_experiment* e, const char* format, char** out) {
  return Guard([&] {
    Need(out, "out");
    *out = Dup(tblcheck::FormatExperiment(Need(e, "experiment").value, Str(format, "format")));
  });
}

void tbl_experiment_free(tbl_experiment* e) { delete e; }

}  // extern "C"
