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

// tblcheck: learn error-detection rules and run them as a grammar checker.
// Built on the C interface only.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

#include "tblcheck/tblcheck.h"

namespace {

// Raised by a failing C call; carries the process exit code.
struct Failure {
  int code;
  std::string message;
};

int ExitCode(tbl_status status) {
  switch (status) {
    case TBL_OK:
      return 0;
    case TBL_ERR_IO:
      return 2;
    case TBL_ERR_VALIDATION:
    case TBL_ERR_PARSE:
    case TBL_ERR_ARGUMENT:
      return 1;
    default:
      return 3;
  }
}

void Ok(tbl_status status) {
  if (status != TBL_OK) throw Failure{ExitCode(status), tbl_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Corpus = std::unique_ptr<tbl_corpus, Deleter<tbl_corpus, tbl_corpus_free>>;
using Annotations =
    std::unique_ptr<tbl_annotations, Deleter<tbl_annotations, tbl_annotations_free>>;
using Lexicon = std::unique_ptr<tbl_lexicon, Deleter<tbl_lexicon, tbl_lexicon_free>>;
using Sets = std::unique_ptr<tbl_sets, Deleter<tbl_sets, tbl_sets_free>>;
using Templates = std::unique_ptr<tbl_templates, Deleter<tbl_templates, tbl_templates_free>>;
using Rules = std::unique_ptr<tbl_rules, Deleter<tbl_rules, tbl_rules_free>>;
using Pack = std::unique_ptr<tbl_pack, Deleter<tbl_pack, tbl_pack_free>>;
using Report = std::unique_ptr<tbl_report, Deleter<tbl_report, tbl_report_free>>;
using Experiment = std::unique_ptr<tbl_experiment, Deleter<tbl_experiment, tbl_experiment_free>>;

// Takes ownership of a library string.
std::string Take(char* s) {
  std::string out = s ? s : "";
  tbl_string_free(s);
  return out;
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{2, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::fwrite(contents.data(), 1, contents.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(contents.data(), static_cast<std::streamsize>(contents.size()))) {
    throw Failure{2, "cannot write '" + path + "'"};
  }
}

struct Options {
  std::string output;
  std::string lexicon;
  std::string sets;
  std::string dictionary;
  std::string policy = "replace-all";
  double rate = 1.0;
  uint64_t seed = 0;
  std::string templates = "default";
  long long threshold = 2;
  long long max_rules = -1;
  long long max_matches = -1;
  std::string format;
  size_t threads = 1;
  std::string word;
  std::string lang = "en";
  std::string source;
  std::string pack;
  std::string dropped;
  std::string input_format = "auto";
  std::vector<std::string> inputs;
};

// The effective configuration of a run, written next to `-o FILE` as
// FILE.meta.json. Input paths are reduced to file names so that runs in
// different directories produce identical metadata.
void WriteMeta(const std::string& subcommand, const Options& o, nlohmann::ordered_json params) {
  if (o.output.empty() || o.output == "-") return;
  nlohmann::ordered_json meta;
  meta["tool"] = "tblcheck";
  meta["version"] = tbl_version();
  meta["subcommand"] = subcommand;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const auto& in : o.inputs) inputs.push_back(std::filesystem::path(in).filename().string());
  meta["inputs"] = inputs;
  meta["params"] = std::move(params);
  WriteText(o.output + ".meta.json", meta.dump(2) + "\n");
}

Corpus LoadCorpus(const std::string& path, const std::string& format) {
  std::string kind = format;
  if (kind == "auto") kind = ReadText(path).find('\t') != std::string::npos ? "column" : "text";
  tbl_corpus* c = nullptr;
  if (kind == "column") {
    Ok(tbl_corpus_load_column(path.c_str(), &c));
  } else if (kind == "text") {
    Ok(tbl_corpus_load_text(path.c_str(), &c));
  } else {
    throw Failure{1, "unknown input format '" + format + "'"};
  }
  return Corpus(c);
}

Lexicon MaybeLexicon(const std::string& path) {
  if (path.empty()) return nullptr;
  tbl_lexicon* l = nullptr;
  Ok(tbl_lexicon_load(path.c_str(), &l));
  return Lexicon(l);
}

Sets LoadSets(const std::string& path) {
  if (path.empty()) throw Failure{1, "--sets is required"};
  tbl_sets* s = nullptr;
  Ok(tbl_sets_load(path.c_str(), &s));
  return Sets(s);
}

Templates LoadTemplates(const std::string& spec) {
  tbl_templates* t = nullptr;
  if (spec == "default") {
    Ok(tbl_templates_default(0, &t));
  } else if (spec == "default+far") {
    Ok(tbl_templates_default(1, &t));
  } else {
    Ok(tbl_templates_load(spec.c_str(), &t));
  }
  return Templates(t);
}

tbl_seed_policy SeedPolicy(const Options& o) {
  tbl_seed_policy p{};
  if (o.policy == "replace-all") {
    p.mode = TBL_SEED_REPLACE_ALL;
  } else if (o.policy == "round-robin") {
    p.mode = TBL_SEED_ROUND_ROBIN;
  } else if (o.policy == "sample") {
    p.mode = TBL_SEED_SAMPLE;
  } else {
    throw Failure{1, "unknown policy '" + o.policy + "'"};
  }
  p.rate = o.rate;
  p.seed = o.seed;
  return p;
}

nlohmann::ordered_json SeedParams(const Options& o) {
  return {{"policy", o.policy}, {"rate", o.rate}, {"seed", o.seed}};
}

nlohmann::ordered_json LearnParams(const Options& o) {
  nlohmann::ordered_json p;
  p["templates"] = o.templates == "default" || o.templates == "default+far"
                       ? o.templates
                       : std::filesystem::path(o.templates).filename().string();
  p["threshold"] = o.threshold;
  p["max_rules"] = o.max_rules;
  return p;
}

void RequireFormat(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw Failure{1, "unsupported --format '" + format + "' here (expected " + list + ")"};
}

// ---- subcommands ----

void RunExtract(const Options& o) {
  tbl_corpus* c = nullptr;
  tbl_annotations* a = nullptr;
  Ok(tbl_corpus_load_err(o.inputs[0].c_str(), &c, &a));
  Corpus corpus(c);
  Annotations annotations(a);
  tbl_sets* s = nullptr;
  Ok(tbl_sets_extract(annotations.get(), o.dictionary.empty() ? nullptr : o.dictionary.c_str(),
                      &s));
  Sets sets(s);
  char* text = nullptr;
  Ok(tbl_sets_to_string(sets.get(), &text));
  WriteText(o.output, Take(text));
  WriteMeta("extract", o, {{"dictionary", !o.dictionary.empty()}});
}

void WriteCorpus(const Options& o, const tbl_corpus* corpus) {
  char* text = nullptr;
  Ok(tbl_corpus_to_column(corpus, &text));
  WriteText(o.output, Take(text));
}

void RunSeed(const Options& o) {
  Corpus clean = LoadCorpus(o.inputs[0], o.input_format);
  Lexicon lexicon = MaybeLexicon(o.lexicon);
  if (lexicon) Ok(tbl_corpus_tag(clean.get(), lexicon.get()));
  Sets sets = LoadSets(o.sets);
  tbl_seed_policy policy = SeedPolicy(o);
  tbl_corpus* out = nullptr;
  Ok(tbl_seed_errors(clean.get(), sets.get(), &policy, lexicon.get(), &out));
  Corpus seeded(out);
  WriteCorpus(o, seeded.get());
  WriteMeta("seed", o, SeedParams(o));
}

void RunSeedNull(const Options& o) {
  Corpus clean = LoadCorpus(o.inputs[0], o.input_format);
  Lexicon lexicon = MaybeLexicon(o.lexicon);
  if (lexicon) Ok(tbl_corpus_tag(clean.get(), lexicon.get()));
  tbl_corpus* out = nullptr;
  Ok(tbl_seed_missing_word(clean.get(), o.word.c_str(), &out));
  Corpus seeded(out);
  WriteCorpus(o, seeded.get());
  WriteMeta("seed-null", o, {{"word", o.word}});
}

void RunSeedRunOn(const Options& o) {
  Corpus clean = LoadCorpus(o.inputs[0], o.input_format);
  Lexicon lexicon = MaybeLexicon(o.lexicon);
  if (lexicon) Ok(tbl_corpus_tag(clean.get(), lexicon.get()));
  Sets sets = LoadSets(o.sets);
  tbl_corpus* out = nullptr;
  Ok(tbl_seed_runon(clean.get(), sets.get(), &out));
  Corpus seeded(out);
  WriteCorpus(o, seeded.get());
  WriteMeta("seed-runon", o, nlohmann::ordered_json::object());
}

tbl_learn_config LearnConfig(const Options& o, const Templates& templates, const Sets& sets) {
  tbl_learn_config config;
  tbl_learn_config_init(&config);
  config.templates = templates.get();
  config.threshold = o.threshold;
  config.max_rules = o.max_rules;
  config.sets = sets.get();
  config.threads = o.threads;
  return config;
}

void RunLearn(const Options& o) {
  Corpus corpus = LoadCorpus(o.inputs[0], "column");
  Lexicon lexicon = MaybeLexicon(o.lexicon);
  if (lexicon) Ok(tbl_corpus_tag(corpus.get(), lexicon.get()));
  Templates templates = LoadTemplates(o.templates);
  Sets sets = o.sets.empty() ? nullptr : LoadSets(o.sets);
  tbl_learn_config config = LearnConfig(o, templates, sets);
  tbl_rules* r = nullptr;
  Ok(tbl_learn(corpus.get(), &config, &r));
  Rules rules(r);
  char* text = nullptr;
  Ok(tbl_rules_to_string(rules.get(), &text));
  WriteText(o.output, Take(text));
  auto params = LearnParams(o);
  params["sets"] = !o.sets.empty();
  WriteMeta("learn", o, params);
}

Rules LoadRules(const std::string& path) {
  tbl_rules* r = nullptr;
  Ok(tbl_rules_load(path.c_str(), &r));
  return Rules(r);
}

void RunFilter(const Options& o) {
  Rules rules = LoadRules(o.inputs[0]);
  Corpus clean = LoadCorpus(o.inputs[1], o.input_format);
  Lexicon lexicon = MaybeLexicon(o.lexicon);
  if (lexicon) Ok(tbl_corpus_tag(clean.get(), lexicon.get()));
  tbl_rules* k = nullptr;
  char* dropped = nullptr;
  Ok(tbl_rules_filter(rules.get(), clean.get(), o.max_matches, &k, &dropped));
  Rules kept(k);
  std::string dropped_text = Take(dropped);
  char* text = nullptr;
  Ok(tbl_rules_to_string(kept.get(), &text));
  WriteText(o.output, Take(text));
  std::string dropped_path = o.dropped;
  if (dropped_path.empty() && !o.output.empty() && o.output != "-") {
    dropped_path = o.output + ".dropped.tsv";
  }
  if (!dropped_path.empty()) WriteText(dropped_path, dropped_text);
  WriteMeta("filter", o, {{"max_matches", o.max_matches}});
}

void RunExport(const Options& o) {
  if (!o.format.empty()) RequireFormat(o.format, {"xml"});
  Rules rules = LoadRules(o.inputs[0]);
  tbl_pack* p = nullptr;
  Ok(tbl_pack_compile(rules.get(), o.lang.c_str(), o.source.c_str(), &p));
  Pack pack(p);
  char* xml = nullptr;
  Ok(tbl_pack_to_xml(pack.get(), &xml));
  WriteText(o.output, Take(xml));
  WriteMeta("export", o, {{"lang", o.lang}, {"source", o.source}});
}

Pack LoadPack(const std::string& path) {
  if (path.empty()) throw Failure{1, "--pack is required"};
  tbl_pack* p = nullptr;
  Ok(tbl_pack_load_xml(path.c_str(), &p));
  return Pack(p);
}

void RunCheck(const Options& o) {
  Pack pack = LoadPack(o.pack);
  Corpus text = LoadCorpus(o.inputs[0], o.input_format == "auto" ? "text" : o.input_format);
  Lexicon lexicon = MaybeLexicon(o.lexicon);
  if (lexicon) Ok(tbl_corpus_tag(text.get(), lexicon.get()));
  char* tsv = nullptr;
  size_t count = 0;
  Ok(tbl_check_text(pack.get(), text.get(), &tsv, &count));
  WriteText(o.output, Take(tsv));
  WriteMeta("check", o, {{"pack", std::filesystem::path(o.pack).filename().string()}});
}

void RunEval(const Options& o) {
  std::string format = o.format.empty() ? "table" : o.format;
  RequireFormat(format, {"tsv", "table"});
  Pack pack = LoadPack(o.pack);
  Corpus gold = LoadCorpus(o.inputs[0], "column");
  Lexicon lexicon = MaybeLexicon(o.lexicon);
  if (lexicon) Ok(tbl_corpus_tag(gold.get(), lexicon.get()));
  tbl_report* r = nullptr;
  Ok(tbl_evaluate(pack.get(), gold.get(), &r));
  Report report(r);
  char* text = nullptr;
  Ok(tbl_report_format(report.get(), format.c_str(), &text));
  WriteText(o.output, Take(text));
  WriteMeta("eval", o,
            {{"pack", std::filesystem::path(o.pack).filename().string()}, {"format", format}});
}

void RunExperiment(const Options& o) {
  std::string format = o.format.empty() ? "table" : o.format;
  RequireFormat(format, {"tsv", "table"});
  tbl_corpus* c = nullptr;
  tbl_annotations* a = nullptr;
  Ok(tbl_corpus_load_err(o.inputs[0].c_str(), &c, &a));
  Corpus errors(c);
  Annotations annotations(a);
  Corpus clean = LoadCorpus(o.inputs[1], o.input_format);
  Corpus heldout = LoadCorpus(o.inputs[2], o.input_format);
  Lexicon lexicon = MaybeLexicon(o.lexicon);
  if (lexicon) {
    for (tbl_corpus* corpus : {errors.get(), clean.get(), heldout.get()}) {
      Ok(tbl_corpus_tag(corpus, lexicon.get()));
    }
  }
  Templates templates = LoadTemplates(o.templates);
  tbl_experiment_config config;
  tbl_experiment_config_init(&config);
  config.learn = LearnConfig(o, templates, nullptr);
  config.policy = SeedPolicy(o);
  config.lexicon = lexicon.get();
  config.dictionary_path = o.dictionary.empty() ? nullptr : o.dictionary.c_str();
  tbl_experiment* e = nullptr;
  Ok(tbl_experiment_run(errors.get(), annotations.get(), clean.get(), heldout.get(), &config, &e));
  Experiment result(e);
  char* text = nullptr;
  Ok(tbl_experiment_format(result.get(), format.c_str(), &text));
  WriteText(o.output, Take(text));
  auto params = LearnParams(o);
  params.update(SeedParams(o));
  params["format"] = format;
  WriteMeta("experiment", o, params);
}

// ---- flag wiring ----

void AddOutput(CLI::App* app, Options& o) {
  app->add_option("-o,--output", o.output, "Output file (default: stdout)");
}

void AddLexicon(CLI::App* app, Options& o, const char* what) {
  app->add_option("--lexicon", o.lexicon, what);
}

void AddInputFormat(CLI::App* app, Options& o) {
  app->add_option("--input-format", o.input_format,
                  "Corpus input format: text, column, or auto (column if the file has tabs)")
      ->check(CLI::IsMember({"auto", "text", "column"}));
}

void AddSeedFlags(CLI::App* app, Options& o) {
  app->add_option("--policy", o.policy, "Seeding policy: replace-all, round-robin or sample")
      ->check(CLI::IsMember({"replace-all", "round-robin", "sample"}))
      ->capture_default_str();
  app->add_option("--rate", o.rate, "Sample policy: probability of corrupting an occurrence")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--seed", o.seed, "Sample policy: random seed")->capture_default_str();
}

void AddLearnFlags(CLI::App* app, Options& o) {
  app->add_option("--templates", o.templates, "Template file, default, or default+far")
      ->capture_default_str();
  app->add_option("--threshold", o.threshold, "Minimum score (good - bad) of a selected rule")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--max-rules", o.max_rules, "Stop after this many rules (default: no limit)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--threads", o.threads,
                  "Worker threads, 0 for all cores; output does not depend on it")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tblcheck: learn error-detection rules from corpora and check text with them"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tbl_version()));
  Options o;

  auto* extract = app.add_subcommand("extract", "Extract confusion sets from an ERR-annotated text");
  extract->add_option("input", o.inputs, "ERR-annotated text")->required()->expected(1);
  extract->add_option("--dictionary", o.dictionary,
                      "Word list; keep only sets whose members all appear in it");
  AddOutput(extract, o);

  auto* seed = app.add_subcommand("seed", "Seed confusion-set errors into a clean corpus");
  seed->add_option("input", o.inputs, "Clean corpus (plain text or column format)")
      ->required()
      ->expected(1);
  seed->add_option("--sets", o.sets, "Confusion-set file")->required();
  AddSeedFlags(seed, o);
  AddLexicon(seed, o, "Lexicon for tagging (surface, tag, count per line)");
  AddInputFormat(seed, o);
  AddOutput(seed, o);

  auto* seed_null = app.add_subcommand("seed-null", "Seed missing-word placeholders for one word");
  seed_null->add_option("input", o.inputs, "Clean corpus (plain text or column format)")
      ->required()
      ->expected(1);
  seed_null->add_option("--word", o.word, "Word whose omission is modelled")->required();
  AddLexicon(seed_null, o, "Lexicon for tagging (surface, tag, count per line)");
  AddInputFormat(seed_null, o);
  AddOutput(seed_null, o);

  auto* seed_runon =
      app.add_subcommand("seed-runon", "Seed split-word errors from composite/split pairs");
  seed_runon->add_option("input", o.inputs, "Clean corpus (plain text or column format)")
      ->required()
      ->expected(1);
  seed_runon->add_option("--sets", o.sets, "Pairs such as 'no-body,nobody', one per line")
      ->required();
  AddLexicon(seed_runon, o, "Lexicon for tagging (surface, tag, count per line)");
  AddInputFormat(seed_runon, o);
  AddOutput(seed_runon, o);

  auto* learn = app.add_subcommand("learn", "Learn transformation rules from a column corpus");
  learn->add_option("input", o.inputs, "Column corpus")->required()->expected(1);
  learn->add_option("--sets", o.sets, "Restrict rewrites to these confusion sets");
  AddLexicon(learn, o, "Lexicon for re-tagging the corpus before learning");
  AddLearnFlags(learn, o);
  AddOutput(learn, o);

  auto* filter = app.add_subcommand("filter", "Drop rules that fire too often on clean text");
  filter->add_option("inputs", o.inputs, "Rule file and clean corpus")->required()->expected(2);
  filter->add_option("--max-matches", o.max_matches,
                     "Drop rules firing more often than this (default: keep all)")
      ->check(CLI::NonNegativeNumber);
  filter->add_option("--dropped", o.dropped,
                     "File for dropped rules and their fire counts (default: OUTPUT.dropped.tsv)");
  AddLexicon(filter, o, "Lexicon for tagging the clean corpus");
  AddInputFormat(filter, o);
  AddOutput(filter, o);

  auto* exp = app.add_subcommand("export", "Compile rules to an XML rule pack");
  exp->add_option("input", o.inputs, "Rule file")->required()->expected(1);
  exp->add_option("--lang", o.lang, "Language code written to the pack")->capture_default_str();
  exp->add_option("--source", o.source, "Source label written to the pack");
  exp->add_option("--format", o.format, "Output format (xml)");
  AddOutput(exp, o);

  auto* check = app.add_subcommand("check", "Check text with an XML rule pack");
  check->add_option("input", o.inputs, "Text to check")->required()->expected(1);
  check->add_option("--pack", o.pack, "XML rule pack")->required();
  AddLexicon(check, o, "Lexicon for tagging the text");
  AddInputFormat(check, o);
  AddOutput(check, o);

  auto* eval = app.add_subcommand("eval", "Precision and recall of a rule pack on a gold corpus");
  eval->add_option("input", o.inputs, "Gold column corpus")->required()->expected(1);
  eval->add_option("--pack", o.pack, "XML rule pack")->required();
  AddLexicon(eval, o, "Lexicon for re-tagging the gold corpus");
  eval->add_option("--format", o.format, "Report format: tsv or table (default table)");
  AddOutput(eval, o);

  auto* experiment =
      app.add_subcommand("experiment", "Compare naive and mixed learning on held-out text");
  experiment->add_option("inputs", o.inputs, "ERR-annotated error corpus, clean corpus, held-out corpus")
      ->required()
      ->expected(3);
  experiment->add_option("--dictionary", o.dictionary,
                         "Word list filtering the extracted confusion sets");
  AddSeedFlags(experiment, o);
  AddLearnFlags(experiment, o);
  AddLexicon(experiment, o, "Lexicon for tagging all corpora");
  AddInputFormat(experiment, o);
  experiment->add_option("--format", o.format, "Report format: tsv or table (default table)");
  AddOutput(experiment, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    CLI::App* failed = &app;
    for (CLI::App* sub : app.get_subcommands()) failed = sub;
    std::cerr << failed->help();
    return 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    if (name == "extract") RunExtract(o);
    else if (name == "seed") RunSeed(o);
    else if (name == "seed-null") RunSeedNull(o);
    else if (name == "seed-runon") RunSeedRunOn(o);
    else if (name == "learn") RunLearn(o);
    else if (name == "filter") RunFilter(o);
    else if (name == "export") RunExport(o);
    else if (name == "check") RunCheck(o);
    else if (name == "eval") RunEval(o);
    else if (name == "experiment") RunExperiment(o);
  } catch (const Failure& f) {
    std::cerr << "tblcheck " << name << ": " << f.message << "\n";
    if (f.code == 2) std::cerr << "\n" << chosen->help();
    return f.code;
  }
  return 0;
}
