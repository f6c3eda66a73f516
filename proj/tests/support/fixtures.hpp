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

// Shorthand for building small corpora in tests.

#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "core/corpus.hpp"

namespace tblcheck::fixtures {

// "word" is a clean token tagged UNK; "word/TAG" sets the tag;
// "seen>meant" is an error (class seen, true meant); "seen>meant/TAG" both.
inline Token Tok(const std::string& spec) {
  std::string body = spec;
  std::string tag(kUnknownTag);
  if (auto slash = body.rfind('/'); slash != std::string::npos && slash > 0) {
    tag = body.substr(slash + 1);
    body = body.substr(0, slash);
  }
  if (auto gt = body.find('>'); gt != std::string::npos && gt > 0) {
    Token t = Token::Word(body.substr(0, gt), tag);
    t.true_label = body.substr(gt + 1);
    return t;
  }
  return Token::Word(body, tag);
}

inline Sentence Sent(std::initializer_list<std::string> specs) {
  Sentence s;
  for (const auto& spec : specs) s.tokens.push_back(Tok(spec));
  s.Normalize();
  return s;
}

inline Corpus MakeCorpus(std::vector<Sentence> sentences, std::string name = "fixture") {
  Corpus c;
  c.name = std::move(name);
  c.sentences = std::move(sentences);
  return c;
}

// Surfaces without sentinels.
inline std::vector<std::string> Surfaces(const Sentence& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) {
    if (!t.is_sentinel) out.push_back(t.surface);
  }
  return out;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0;; ++i) {
      path_ = base / ("tblcheck_" + tag + "_" + std::to_string(i));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace tblcheck::fixtures
