/* Copyright 2026 The tblcheck Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to tblcheck: learning error-detection rules with
 * transformation-based learning and running them as a grammar checker.
 *
 * Conventions:
 *   - Every object is an opaque handle released with its *_free function;
 *     passing NULL to a *_free function is a no-op.
 *   - Functions return a tbl_status. On failure, tbl_last_error() describes
 *     the problem; the message is per thread and valid until the next call.
 *   - Output handles are written only on success.
 *   - Strings returned through `char**` are allocated by the library and must
 *     be released with tbl_string_free.
 *   - Optional inputs are NULL when absent.
 */

#ifndef TBLCHECK_TBLCHECK_H_
#define TBLCHECK_TBLCHECK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TBL_API __declspec(dllexport)
#elif defined(__GNUC__)
#define TBL_API __attribute__((visibility("default")))
#else
#define TBL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tbl_status {
  TBL_OK = 0,
  TBL_ERR_VALIDATION = 1, /* input violates a contract */
  TBL_ERR_IO = 2,         /* file could not be read or written */
  TBL_ERR_PARSE = 3,      /* malformed file, markup or XML */
  TBL_ERR_ARGUMENT = 4,   /* NULL handle or out-pointer */
  TBL_ERR_INTERNAL = 5
} tbl_status;

typedef struct tbl_corpus tbl_corpus;
typedef struct tbl_annotations tbl_annotations;
typedef struct tbl_lexicon tbl_lexicon;
typedef struct tbl_sets tbl_sets;
typedef struct tbl_templates tbl_templates;
typedef struct tbl_rules tbl_rules;
typedef struct tbl_pack tbl_pack;
typedef struct tbl_report tbl_report;
typedef struct tbl_experiment tbl_experiment;

TBL_API const char* tbl_version(void);
TBL_API const char* tbl_last_error(void);
TBL_API void tbl_string_free(char* s);

/* ---- corpus ---- */

TBL_API tbl_status tbl_corpus_tokenize(const char* text, const char* name, tbl_corpus** out);
TBL_API tbl_status tbl_corpus_load_text(const char* path, tbl_corpus** out);
/* ERR markup: `<ERR targ=X> Y </ERR>`. `annotations` may be NULL. */
TBL_API tbl_status tbl_corpus_parse_err(const char* text, const char* name, tbl_corpus** corpus,
                                        tbl_annotations** annotations);
TBL_API tbl_status tbl_corpus_load_err(const char* path, tbl_corpus** corpus,
                                       tbl_annotations** annotations);
/* Column format: SURFACE<TAB>TAG<TAB>CLASS<TAB>TRUE, blank line between sentences. */
TBL_API tbl_status tbl_corpus_load_column(const char* path, tbl_corpus** out);
TBL_API tbl_status tbl_corpus_save_column(const tbl_corpus* corpus, const char* path);
TBL_API tbl_status tbl_corpus_to_column(const tbl_corpus* corpus, char** out);
/* Re-tags every token in place from the lexicon. */
TBL_API tbl_status tbl_corpus_tag(tbl_corpus* corpus, const tbl_lexicon* lexicon);
TBL_API size_t tbl_corpus_sentence_count(const tbl_corpus* corpus);
TBL_API size_t tbl_corpus_token_count(const tbl_corpus* corpus);
TBL_API size_t tbl_corpus_error_count(const tbl_corpus* corpus);
TBL_API void tbl_corpus_free(tbl_corpus* corpus);

TBL_API size_t tbl_annotations_count(const tbl_annotations* annotations);
TBL_API void tbl_annotations_free(tbl_annotations* annotations);

/* Lexicon file: surface<TAB>tag<TAB>count. */
TBL_API tbl_status tbl_lexicon_load(const char* path, tbl_lexicon** out);
TBL_API void tbl_lexicon_free(tbl_lexicon* lexicon);

/* ---- confusion sets and seeding ---- */

/* One set per line, members separated by commas. */
TBL_API tbl_status tbl_sets_load(const char* path, tbl_sets** out);
TBL_API tbl_status tbl_sets_parse(const char* text, tbl_sets** out);
TBL_API tbl_status tbl_sets_save(const tbl_sets* sets, const char* path);
TBL_API tbl_status tbl_sets_to_string(const tbl_sets* sets, char** out);
TBL_API size_t tbl_sets_count(const tbl_sets* sets);
TBL_API void tbl_sets_free(tbl_sets* sets);

/* `dictionary_path` names a word list (first column of each line is used). */
TBL_API tbl_status tbl_sets_extract(const tbl_annotations* annotations,
                                    const char* dictionary_path, tbl_sets** out);
/* model: "keyboard", "ocr", or a path to a source<TAB>replacement<TAB>weight file. */
TBL_API tbl_status tbl_sets_typo_variants(const char* word, const char* model,
                                          const char* dictionary_path, tbl_sets** out);

typedef enum tbl_seed_mode {
  TBL_SEED_REPLACE_ALL = 0,
  TBL_SEED_ROUND_ROBIN = 1,
  TBL_SEED_SAMPLE = 2
} tbl_seed_mode;

typedef struct tbl_seed_policy {
  tbl_seed_mode mode;
  double rate;   /* sample mode: per-occurrence probability in [0,1] */
  uint64_t seed; /* sample mode */
} tbl_seed_policy;

TBL_API tbl_status tbl_seed_errors(const tbl_corpus* clean, const tbl_sets* sets,
                                   const tbl_seed_policy* policy, const tbl_lexicon* lexicon,
                                   tbl_corpus** out);
TBL_API tbl_status tbl_seed_missing_word(const tbl_corpus* clean, const char* word,
                                         tbl_corpus** out);
TBL_API tbl_status tbl_seed_runon(const tbl_corpus* clean, const tbl_sets* pairs,
                                  tbl_corpus** out);

/* ---- learning ---- */

TBL_API tbl_status tbl_templates_default(int far_offsets, tbl_templates** out);
TBL_API tbl_status tbl_templates_load(const char* path, tbl_templates** out);
TBL_API size_t tbl_templates_count(const tbl_templates* templates);
TBL_API void tbl_templates_free(tbl_templates* templates);

typedef struct tbl_learn_config {
  const tbl_templates* templates; /* NULL: default set */
  long long threshold;            /* >= 1 */
  long long max_rules;            /* < 0: unlimited */
  const tbl_sets* sets;           /* NULL: unconstrained */
  size_t threads;                 /* 0: hardware concurrency */
} tbl_learn_config;

TBL_API void tbl_learn_config_init(tbl_learn_config* config);
TBL_API tbl_status tbl_learn(const tbl_corpus* corpus, const tbl_learn_config* config,
                             tbl_rules** out);

/* Rule text: `CLASS=from [∧ FEATURE@k=v | FEATURE[a,b]=v]* => to ; good=G bad=B score=S` */
TBL_API tbl_status tbl_rules_load(const char* path, tbl_rules** out);
TBL_API tbl_status tbl_rules_parse(const char* text, tbl_rules** out);
TBL_API tbl_status tbl_rules_save(const tbl_rules* rules, const char* path);
TBL_API tbl_status tbl_rules_to_string(const tbl_rules* rules, char** out);
TBL_API size_t tbl_rules_count(const tbl_rules* rules);
/* Drops rules firing more than max_matches times on clean text (< 0: keep all).
 * `dropped_tsv` (optional) receives `rule<TAB>fires` lines. */
TBL_API tbl_status tbl_rules_filter(const tbl_rules* rules, const tbl_corpus* clean,
                                    long long max_matches, tbl_rules** kept, char** dropped_tsv);
TBL_API void tbl_rules_free(tbl_rules* rules);

/* ---- checking ---- */

TBL_API tbl_status tbl_pack_compile(const tbl_rules* rules, const char* lang, const char* source,
                                    tbl_pack** out);
TBL_API tbl_status tbl_pack_load_xml(const char* path, tbl_pack** out);
TBL_API tbl_status tbl_pack_parse_xml(const char* document, tbl_pack** out);
TBL_API tbl_status tbl_pack_save_xml(const tbl_pack* pack, const char* path);
TBL_API tbl_status tbl_pack_to_xml(const tbl_pack* pack, char** out);
TBL_API size_t tbl_pack_count(const tbl_pack* pack);
/* `dropped_tsv` (optional) receives `id<TAB>fires` lines. */
TBL_API tbl_status tbl_pack_filter(const tbl_pack* pack, const tbl_corpus* clean,
                                   long long max_matches, tbl_pack** kept, char** dropped_tsv);
TBL_API void tbl_pack_free(tbl_pack* pack);

/* Checks plain text; writes a TSV of diagnostics and their count. */
TBL_API tbl_status tbl_check_text(const tbl_pack* pack, const tbl_corpus* text, char** tsv,
                                  size_t* count);

/* ---- evaluation ---- */

TBL_API tbl_status tbl_evaluate(const tbl_pack* pack, const tbl_corpus* gold, tbl_report** out);
TBL_API double tbl_report_precision(const tbl_report* report);
TBL_API double tbl_report_recall(const tbl_report* report);
TBL_API int tbl_report_precision_undefined(const tbl_report* report);
TBL_API int tbl_report_recall_undefined(const tbl_report* report);
/* format: "tsv" or "table". */
TBL_API tbl_status tbl_report_format(const tbl_report* report, const char* format, char** out);
TBL_API void tbl_report_free(tbl_report* report);

typedef struct tbl_experiment_config {
  tbl_learn_config learn; /* `sets` is ignored */
  tbl_seed_policy policy;
  const tbl_lexicon* lexicon;  /* optional: re-tags seeded tokens */
  const char* dictionary_path; /* optional: filters extracted sets */
} tbl_experiment_config;

TBL_API void tbl_experiment_config_init(tbl_experiment_config* config);
TBL_API tbl_status tbl_experiment_run(const tbl_corpus* error_corpus,
                                      const tbl_annotations* annotations,
                                      const tbl_corpus* clean_train, const tbl_corpus* heldout,
                                      const tbl_experiment_config* config, tbl_experiment** out);
/* method: 0 naive, 1 mixed; corpus: 0 training, 1 held-out. */
TBL_API double tbl_experiment_precision(const tbl_experiment* e, int method, int corpus);
TBL_API double tbl_experiment_recall(const tbl_experiment* e, int method, int corpus);
TBL_API tbl_status tbl_experiment_format(const tbl_experiment* e, const char* format, char** out);
TBL_API void tbl_experiment_free(tbl_experiment* e);

#ifdef __cplusplus
}
#endif

#endif /* TBLCHECK_TBLCHECK_H_ */
