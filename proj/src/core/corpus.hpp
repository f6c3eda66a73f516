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

// Corpus representation: tokens carrying a surface form, a POS tag, the
// learnable class label and its gold value, grouped into sentences framed by
// SENT_START / SENT_END sentinel tokens.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tblcheck {

inline constexpr std::string_view kSentStart = "SENT_START";
inline constexpr std::string_view kSentEnd = "SENT_END";
inline constexpr std::string_view kNullToken = "NULL";
inline constexpr std::string_view kUnknownTag = "UNK";
inline constexpr char kJoinMarker = '-';

struct Token {
  std::string surface;
  std::string tag;
  std::string class_label;
  std::string true_label;
  bool is_sentinel = false;

  // Clean-text token: class and true label both equal the surface.
  static Token Word(std::string surface, std::string tag = std::string(kUnknownTag));
  static Token Sentinel(std::string_view name);
  // Missing-word placeholder whose gold value is `true_label`.
  static Token Placeholder(std::string true_label);

  bool is_error() const { return class_label != true_label; }
  bool is_placeholder() const { return !is_sentinel && surface == kNullToken; }

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;

  // Adds sentinels if missing, so tokens.front() is SENT_START and
  // tokens.back() is SENT_END.
  void Normalize();
  // Number of non-sentinel tokens.
  size_t word_count() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Corpus {
  std::string name;
  std::vector<Sentence> sentences;

  size_t token_count() const;  // non-sentinel tokens
  size_t error_count() const;  // tokens with class_label != true_label

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Surface form -> tags ranked by descending frequency, ties broken
// lexicographically by tag.
class Lexicon {
 public:
  struct Entry {
    std::string tag;
    long long count = 0;
  };

  // Adds `count` occurrences of (surface, tag). count must be positive.
  void Add(const std::string& surface, const std::string& tag, long long count);

  // Exact-case lookup, then ASCII-lowercase fallback. nullopt if unknown.
  std::optional<std::string> TopTag(std::string_view surface) const;
  bool Contains(std::string_view surface) const;
  const std::vector<Entry>* Find(std::string_view surface) const;
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<Entry>, std::less<>> entries_;
};

Lexicon LoadLexicon(const std::string& path);
Lexicon ParseLexicon(std::string_view contents);

struct ErrAnnotation {
  size_t sentence = 0;
  size_t begin = 0;  // token indexes into the sentence, half-open
  size_t end = 0;
  std::string observed;
  std::string target;
  // False for multi-token or empty spans/targets, which single-token
  // learning cannot use.
  bool usable = true;

  friend bool operator==(const ErrAnnotation&, const ErrAnnotation&) = default;
};

struct ErrDocument {
  Corpus corpus;
  std::vector<ErrAnnotation> annotations;
};

std::vector<Sentence> Tokenize(std::string_view text);
Corpus TokenizeCorpus(std::string_view text, std::string name = {});

ErrDocument ParseErrMarkup(std::string_view text, std::string name = {});

Corpus ParseColumnCorpus(std::string_view contents, std::string name = {});
std::string FormatColumnCorpus(const Corpus& corpus);
Corpus LoadColumnCorpus(const std::string& path);
void SaveColumnCorpus(const Corpus& corpus, const std::string& path);

// Assigns each token the lexicon's top-ranked tag for its surface, "UNK" when
// unknown. Sentinels and NULL placeholders keep their tags.
Corpus TagCorpus(Corpus corpus, const Lexicon& lexicon);

}  // namespace tblcheck
