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

#include "core/corpus.hpp"

#include <algorithm>
#include <filesystem>

#include "core/error.hpp"
#include "core/text.hpp"

namespace tblcheck {

Token Token::Word(std::string surface, std::string tag) {
  Token t;
  t.class_label = surface;
  t.true_label = surface;
  t.surface = std::move(surface);
  t.tag = std::move(tag);
  return t;
}

Token Token::Sentinel(std::string_view name) {
  Token t;
  t.surface = t.tag = t.class_label = t.true_label = std::string(name);
  t.is_sentinel = true;
  return t;
}

Token Token::Placeholder(std::string true_label) {
  Token t;
  t.surface = t.tag = t.class_label = std::string(kNullToken);
  t.true_label = std::move(true_label);
  return t;
}

void Sentence::Normalize() {
  if (tokens.empty() || tokens.front().surface != kSentStart ||
      !tokens.front().is_sentinel) {
    tokens.insert(tokens.begin(), Token::Sentinel(kSentStart));
  }
  if (tokens.size() < 2 || tokens.back().surface != kSentEnd ||
      !tokens.back().is_sentinel) {
    tokens.push_back(Token::Sentinel(kSentEnd));
  }
}

size_t Sentence::word_count() const {
  return static_cast<size_t>(std::count_if(
      tokens.begin(), tokens.end(), [](const Token& t) { return !t.is_sentinel; }));
}

size_t Corpus::token_count() const {
  size_t n = 0;
  for (const auto& s : sentences) n += s.word_count();
  return n;
}

size_t Corpus::error_count() const {
  size_t n = 0;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) n += t.is_error() ? 1 : 0;
  }
  return n;
}

// --- Lexicon ---------------------------------------------------------------

void Lexicon::Add(const std::string& surface, const std::string& tag,
                  long long count) {
  if (count <= 0) {
    throw ValidationError("lexicon count for '" + surface + "/" + tag +
                          "' must be positive");
  }
  auto& list = entries_[surface];
  auto it = std::find_if(list.begin(), list.end(),
                         [&](const Entry& e) { return e.tag == tag; });
  if (it == list.end()) {
    list.push_back({tag, count});
  } else {
    it->count += count;
  }
  std::sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.tag < b.tag;
  });
}

const std::vector<Lexicon::Entry>* Lexicon::Find(std::string_view surface) const {
  if (auto it = entries_.find(surface); it != entries_.end()) return &it->second;
  std::string lower = text::AsciiLower(surface);
  if (auto it = entries_.find(lower); it != entries_.end()) return &it->second;
  return nullptr;
}

std::optional<std::string> Lexicon::TopTag(std::string_view surface) const {
  const auto* list = Find(surface);
  if (list == nullptr || list->empty()) return std::nullopt;
  return list->front().tag;
}

bool Lexicon::Contains(std::string_view surface) const {
  return Find(surface) != nullptr;
}

Lexicon ParseLexicon(std::string_view contents) {
  Lexicon lex;
  size_t line_no = 0;
  for (const auto& line : text::Lines(contents)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    auto fields = text::Split(line, '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw ParseError("lexicon line " + std::to_string(line_no) +
                       ": expected surface<TAB>tag<TAB>count");
    }
    lex.Add(fields[0], fields[1],
            text::ParseInt(fields[2], "lexicon line " + std::to_string(line_no)));
  }
  return lex;
}

Lexicon LoadLexicon(const std::string& path) {
  return ParseLexicon(text::ReadFile(path));
}

// --- Tokenizer -------------------------------------------------------------

namespace {

struct SpanToken {
  std::string text;
  size_t begin = 0;  // byte offsets into the tokenized text
  size_t end = 0;
};

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool IsTerminalPunct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
}

bool IsSentenceFinal(std::string_view tok) {
  return tok == "." || tok == "!" || tok == "?";
}

// Splits text into sentences of offset-carrying tokens. Trailing terminal
// punctuation is split off each whitespace chunk; a sentence ends after a
// final . ! ? when the next chunk starts with an ASCII capital or the input
// ends.
std::vector<std::vector<SpanToken>> TokenizeSpans(std::string_view text) {
  struct Chunk {
    size_t begin, end;
  };
  std::vector<Chunk> chunks;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    if (i >= text.size()) break;
    size_t b = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    chunks.push_back({b, i});
  }

  std::vector<std::vector<SpanToken>> sentences;
  std::vector<SpanToken> current;
  for (size_t c = 0; c < chunks.size(); ++c) {
    auto [b, e] = chunks[c];
    size_t word_end = e;
    while (word_end > b && IsTerminalPunct(text[word_end - 1])) --word_end;
    if (word_end > b) {
      current.push_back({std::string(text.substr(b, word_end - b)), b, word_end});
    }
    for (size_t p = word_end; p < e; ++p) {
      current.push_back({std::string(1, text[p]), p, p + 1});
    }
    bool last_chunk = c + 1 == chunks.size();
    if (!current.empty() && IsSentenceFinal(current.back().text)) {
      char next = last_chunk ? '\0' : text[chunks[c + 1].begin];
      if (last_chunk || (next >= 'A' && next <= 'Z')) {
        sentences.push_back(std::move(current));
        current.clear();
      }
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

Sentence ToSentence(const std::vector<SpanToken>& spans) {
  Sentence s;
  for (const auto& sp : spans) s.tokens.push_back(Token::Word(sp.text));
  s.Normalize();
  return s;
}

size_t LineOf(std::string_view text, size_t offset) {
  return 1 + static_cast<size_t>(std::count(text.begin(),
                                            text.begin() + static_cast<long>(offset), '\n'));
}

}  // namespace

std::vector<Sentence> Tokenize(std::string_view text) {
  std::vector<Sentence> out;
  for (const auto& spans : TokenizeSpans(text)) out.push_back(ToSentence(spans));
  return out;
}

Corpus TokenizeCorpus(std::string_view text, std::string name) {
  Corpus c;
  c.name = std::move(name);
  c.sentences = Tokenize(text);
  return c;
}

// --- ERR markup ------------------------------------------------------------

ErrDocument ParseErrMarkup(std::string_view text, std::string name) {
  static constexpr std::string_view kOpen = "<ERR";
  static constexpr std::string_view kClose = "</ERR>";

  struct Region {
    size_t content_begin, content_end;
    std::string target;
  };

  // Tags are blanked to spaces so token offsets match the original text.
  std::string stripped(text);
  std::vector<Region> regions;
  size_t pos = 0;
  while (true) {
    size_t open = text.find(kOpen, pos);
    size_t stray = text.find(kClose, pos);
    if (stray != std::string_view::npos &&
        (open == std::string_view::npos || stray < open)) {
      throw ParseError("malformed ERR markup at line " +
                       std::to_string(LineOf(text, stray)) +
                       ": closing </ERR> without opening tag");
    }
    if (open == std::string_view::npos) break;
    size_t gt = text.find('>', open);
    if (gt == std::string_view::npos) {
      throw ParseError("malformed ERR markup at line " +
                       std::to_string(LineOf(text, open)) + ": unclosed ERR tag");
    }
    std::string_view attrs = text.substr(open + kOpen.size(), gt - open - kOpen.size());
    size_t targ = attrs.find("targ=");
    if (targ == std::string_view::npos) {
      throw ParseError("malformed ERR markup at line " +
                       std::to_string(LineOf(text, open)) + ": missing targ attribute");
    }
    std::string_view value = text::Trim(attrs.substr(targ + 5));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = text::Trim(value.substr(1, value.size() - 2));
    }
    size_t close = text.find(kClose, gt + 1);
    size_t nested = text.find(kOpen, gt + 1);
    if (close == std::string_view::npos) {
      throw ParseError("malformed ERR markup at line " +
                       std::to_string(LineOf(text, open)) + ": unclosed ERR tag");
    }
    if (nested != std::string_view::npos && nested < close) {
      throw ParseError("malformed ERR markup at line " +
                       std::to_string(LineOf(text, nested)) + ": nested ERR tag");
    }
    regions.push_back({gt + 1, close, std::string(value)});
    std::fill(stripped.begin() + static_cast<long>(open),
              stripped.begin() + static_cast<long>(gt + 1), ' ');
    std::fill(stripped.begin() + static_cast<long>(close),
              stripped.begin() + static_cast<long>(close + kClose.size()), ' ');
    pos = close + kClose.size();
  }

  ErrDocument doc;
  doc.corpus.name = std::move(name);
  auto spans = TokenizeSpans(stripped);
  for (const auto& s : spans) doc.corpus.sentences.push_back(ToSentence(s));

  for (const auto& region : regions) {
    // Locate tokens inside the region; sentence token index is +1 for SENT_START.
    std::vector<std::pair<size_t, size_t>> inside;
    for (size_t si = 0; si < spans.size(); ++si) {
      for (size_t ti = 0; ti < spans[si].size(); ++ti) {
        const auto& sp = spans[si][ti];
        if (sp.begin >= region.content_begin && sp.end <= region.content_end) {
          inside.emplace_back(si, ti + 1);
        }
      }
    }
    ErrAnnotation ann;
    ann.target = region.target;
    std::string observed;
    for (auto [si, ti] : inside) {
      if (!observed.empty()) observed += ' ';
      observed += doc.corpus.sentences[si].tokens[ti].surface;
    }
    ann.observed = observed;
    if (ann.observed == ann.target) continue;
    if (inside.empty()) {
      // Empty span (missing word): nothing to anchor to.
      ann.usable = false;
      doc.annotations.push_back(std::move(ann));
      continue;
    }
    ann.sentence = inside.front().first;
    ann.begin = inside.front().second;
    ann.end = ann.begin;
    for (auto [si, ti] : inside) {
      if (si == ann.sentence) ann.end = ti + 1;
    }
    bool multi_target = ann.target.empty() ||
                        ann.target.find_first_of(" \t\r\n") != std::string::npos;
    ann.usable = inside.size() == 1 && !multi_target;
    if (ann.usable) {
      doc.corpus.sentences[ann.sentence].tokens[ann.begin].true_label = ann.target;
    }
    doc.annotations.push_back(std::move(ann));
  }
  return doc;
}

// --- Column format ---------------------------------------------------------

Corpus ParseColumnCorpus(std::string_view contents, std::string name) {
  Corpus corpus;
  corpus.name = std::move(name);
  Sentence current;
  auto flush = [&] {
    if (!current.tokens.empty()) {
      current.Normalize();
      corpus.sentences.push_back(std::move(current));
      current = Sentence();
    }
  };
  size_t line_no = 0;
  for (const auto& line : text::Lines(contents)) {
    ++line_no;
    if (line.empty()) {
      flush();
      continue;
    }
    auto f = text::Split(line, '\t');
    bool empty_field = std::any_of(f.begin(), f.end(),
                                   [](const std::string& s) { return s.empty(); });
    if (f.size() > 4 || empty_field) {
      throw ParseError("column corpus line " + std::to_string(line_no) +
                       ": expected 1-4 non-empty tab-separated columns, got " +
                       std::to_string(f.size()));
    }
    if (f[0] == kSentStart || f[0] == kSentEnd) continue;
    Token t;
    t.surface = f[0];
    switch (f.size()) {
      case 1:
        t = Token::Word(f[0]);
        break;
      case 2:
        t = Token::Word(f[0], f[1]);
        break;
      case 3:
        t.tag = std::string(kUnknownTag);
        t.class_label = f[1];
        t.true_label = f[2];
        break;
      default:
        t.tag = f[1];
        t.class_label = f[2];
        t.true_label = f[3];
        break;
    }
    current.tokens.push_back(std::move(t));
  }
  flush();
  return corpus;
}

std::string FormatColumnCorpus(const Corpus& corpus) {
  std::string out;
  bool first = true;
  for (const auto& s : corpus.sentences) {
    if (s.word_count() == 0) continue;
    if (!first) out += '\n';
    first = false;
    for (const auto& t : s.tokens) {
      if (t.is_sentinel) continue;
      out += t.surface;
      out += '\t';
      out += t.tag;
      out += '\t';
      out += t.class_label;
      out += '\t';
      out += t.true_label;
      out += '\n';
    }
  }
  return out;
}

Corpus LoadColumnCorpus(const std::string& path) {
  Corpus corpus = ParseColumnCorpus(text::ReadFile(path), path);
  corpus.name = std::filesystem::path(path).filename().string();
  return corpus;
}

void SaveColumnCorpus(const Corpus& corpus, const std::string& path) {
  text::WriteFile(path, FormatColumnCorpus(corpus));
}

// --- Tagging ---------------------------------------------------------------

Corpus TagCorpus(Corpus corpus, const Lexicon& lexicon) {
  for (auto& s : corpus.sentences) {
    for (auto& t : s.tokens) {
      if (t.is_sentinel || t.is_placeholder()) continue;
      t.tag = lexicon.TopTag(t.surface).value_or(std::string(kUnknownTag));
    }
  }
  return corpus;
}

}  // namespace tblcheck
