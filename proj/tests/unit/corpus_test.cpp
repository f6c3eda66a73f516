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

#include <doctest.h>

#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/text.hpp"
#include "support/fixtures.hpp"

using namespace tblcheck;
using fixtures::Surfaces;

TEST_CASE("tokenize: empty input has no sentences") { CHECK(Tokenize("").empty()); }

TEST_CASE("tokenize: whitespace split with sentinels") {
  auto s = Tokenize("and he went down");
  REQUIRE(s.size() == 1);
  CHECK(Surfaces(s[0]) == std::vector<std::string>{"and", "he", "went", "down"});
  CHECK(s[0].tokens.front().surface == kSentStart);
  CHECK(s[0].tokens.back().surface == kSentEnd);
  CHECK(s[0].tokens.front().is_sentinel);
}

TEST_CASE("tokenize: apostrophes stay inside tokens") {
  auto s = Tokenize("thats oclock don't");
  REQUIRE(s.size() == 1);
  CHECK(Surfaces(s[0]) == std::vector<std::string>{"thats", "oclock", "don't"});
}

TEST_CASE("tokenize: trailing punctuation and sentence breaks") {
  auto s = Tokenize("We went home. Then, it rained!\nNo");
  REQUIRE(s.size() == 3);
  CHECK(Surfaces(s[0]) == std::vector<std::string>{"We", "went", "home", "."});
  CHECK(Surfaces(s[1]) == std::vector<std::string>{"Then", ",", "it", "rained", "!"});
  CHECK(Surfaces(s[2]) == std::vector<std::string>{"No"});
}

TEST_CASE("tokenize: a period before a lowercase word does not end the sentence") {
  auto s = Tokenize("at 5 p.m. yesterday");
  REQUIRE(s.size() == 1);
  CHECK(Surfaces(s[0]) == std::vector<std::string>{"at", "5", "p.m", ".", "yesterday"});
}

TEST_CASE("tokenize: clean tokens have class == true == surface") {
  auto sentences = Tokenize("We home.");
  for (const auto& t : sentences[0].tokens) {
    CHECK(t.class_label == t.surface);
    CHECK(t.true_label == t.surface);
  }
}

TEST_CASE("ERR markup: single-token annotation sets the true label") {
  auto doc = ParseErrMarkup("went <ERR targ=two> to </ERR> the");
  REQUIRE(doc.corpus.sentences.size() == 1);
  const auto& toks = doc.corpus.sentences[0].tokens;
  REQUIRE(toks.size() == 5);
  CHECK(toks[2].surface == "to");
  CHECK(toks[2].class_label == "to");
  CHECK(toks[2].true_label == "two");
  CHECK(toks[1].true_label == "went");
  REQUIRE(doc.annotations.size() == 1);
  CHECK(doc.annotations[0].observed == "to");
  CHECK(doc.annotations[0].target == "two");
  CHECK(doc.annotations[0].usable);
  CHECK(doc.annotations[0].begin == 2);
  CHECK(doc.annotations[0].end == 3);
}

TEST_CASE("ERR markup: annotation at sentence start") {
  auto doc = ParseErrMarkup("<ERR targ=she> he </ERR> fainted");
  const auto& toks = doc.corpus.sentences.at(0).tokens;
  CHECK(toks[1].surface == "he");
  CHECK(toks[1].true_label == "she");
  CHECK(doc.corpus.error_count() == 1);
}

TEST_CASE("ERR markup: text without markup is clean") {
  auto doc = ParseErrMarkup("We home.");
  CHECK(doc.annotations.empty());
  CHECK(doc.corpus.error_count() == 0);
}

TEST_CASE("ERR markup: tags may span lines and targets may contain spaces") {
  auto doc = ParseErrMarkup("hit the <ERR\ntarg=manager> maneger </ERR> and <ERR targ=a lot> alot </ERR>");
  REQUIRE(doc.annotations.size() == 2);
  CHECK(doc.annotations[0].target == "manager");
  CHECK(doc.annotations[0].usable);
  CHECK(doc.annotations[1].target == "a lot");
  CHECK_FALSE(doc.annotations[1].usable);
  // The multi-word target cannot be a single class, so the token stays clean.
  CHECK(doc.corpus.error_count() == 1);
}

TEST_CASE("ERR markup: multi-token span is recorded but unusable") {
  auto doc = ParseErrMarkup("I <ERR targ=cannot> can not </ERR> go");
  REQUIRE(doc.annotations.size() == 1);
  CHECK(doc.annotations[0].end - doc.annotations[0].begin == 2);
  CHECK_FALSE(doc.annotations[0].usable);
  CHECK(doc.corpus.error_count() == 0);
}

TEST_CASE("ERR markup: malformed input names the line") {
  auto kind_of = [](const char* text) {
    try {
      ParseErrMarkup(text);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(kind_of("a\n<ERR targ=x> y").find("line 2") != std::string::npos);
  CHECK(kind_of("a <ERR> y </ERR>").find("targ") != std::string::npos);
  CHECK(kind_of("a </ERR>").find("line 1") != std::string::npos);
  CHECK(kind_of("<ERR targ=x> <ERR targ=y> z </ERR> </ERR>") != "");
  CHECK_THROWS_AS(ParseErrMarkup("<ERR targ=x y"), Error);
}

TEST_CASE("column format: four columns") {
  auto c = ParseColumnCorpus("advice\tNN\tadvice\tadvise\n");
  REQUIRE(c.sentences.size() == 1);
  const Token& t = c.sentences[0].tokens[1];
  CHECK(t.surface == "advice");
  CHECK(t.tag == "NN");
  CHECK(t.class_label == "advice");
  CHECK(t.true_label == "advise");
  CHECK(t.is_error());
}

TEST_CASE("column format: empty file is an empty corpus") {
  CHECK(ParseColumnCorpus("").sentences.empty());
}

TEST_CASE("column format: shorter rows default the missing columns") {
  auto c = ParseColumnCorpus("one\ntwo\tCD\n\nthree\tx\ty\n");
  REQUIRE(c.sentences.size() == 2);
  CHECK(c.sentences[0].tokens[1] == Token::Word("one"));
  CHECK(c.sentences[0].tokens[2] == Token::Word("two", "CD"));
  const Token& t = c.sentences[1].tokens[1];
  CHECK(t.tag == kUnknownTag);
  CHECK(t.class_label == "x");
  CHECK(t.true_label == "y");
}

TEST_CASE("column format: malformed rows are rejected") {
  CHECK_THROWS_AS(ParseColumnCorpus("a\tb\tc\td\te\n"), Error);
  CHECK_THROWS_AS(ParseColumnCorpus("a\t\tc\n"), Error);
}

TEST_CASE("column format: format then parse is the identity") {
  auto c = fixtures::MakeCorpus({fixtures::Sent({"I/PRP", "need/VBP", "advise>advice/NN", "./."}),
                                 fixtures::Sent({"NULL>się", "ok"})});
  c.sentences[1].tokens[1].tag = c.sentences[1].tokens[1].surface = "NULL";
  std::string text = FormatColumnCorpus(c);
  Corpus back = ParseColumnCorpus(text, c.name);
  CHECK(back == c);
  CHECK(FormatColumnCorpus(back) == text);
}

TEST_CASE("column format: save and load through a file") {
  fixtures::TempDir dir("corpus");
  auto c = fixtures::MakeCorpus({fixtures::Sent({"a/DT", "b>c/NN"})});
  SaveColumnCorpus(c, dir / "c.tsv");
  CHECK(FormatColumnCorpus(LoadColumnCorpus(dir / "c.tsv")) == FormatColumnCorpus(c));
  CHECK_THROWS_AS(LoadColumnCorpus(dir / "missing.tsv"), Error);
  try {
    LoadColumnCorpus(dir / "missing.tsv");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
}

TEST_CASE("lexicon: direct lookup, unknown fallback, most frequent tag") {
  Lexicon lex = ParseLexicon("the\tDT\t100\nend\tNN\t60\nend\tVB\t40\n");
  auto c = TagCorpus(TokenizeCorpus("the end pictyres"), lex);
  const auto& toks = c.sentences[0].tokens;
  CHECK(toks[1].tag == "DT");
  CHECK(toks[2].tag == "NN");
  CHECK(toks[3].tag == kUnknownTag);
}

TEST_CASE("lexicon: tie on count breaks by tag name; lowercase fallback") {
  Lexicon lex = ParseLexicon("run\tVB\t5\nrun\tNN\t5\n");
  CHECK(lex.TopTag("run") == "NN");
  CHECK(lex.TopTag("Run") == "NN");
  CHECK_FALSE(lex.TopTag("walk").has_value());
}

TEST_CASE("lexicon: malformed lines are rejected") {
  CHECK_THROWS_AS(ParseLexicon("the\tDT\n"), Error);
  CHECK_THROWS_AS(ParseLexicon("the\tDT\tmany\n"), Error);
  CHECK_THROWS_AS(ParseLexicon("the\tDT\t0\n"), Error);
}

TEST_CASE("tagging leaves sentinels and placeholders alone") {
  Lexicon lex = ParseLexicon("NULL\tNN\t3\n");
  auto c = fixtures::MakeCorpus({fixtures::Sent({"x"})});
  c.sentences[0].tokens.insert(c.sentences[0].tokens.begin() + 1, Token::Placeholder("x"));
  auto tagged = TagCorpus(c, lex);
  CHECK(tagged.sentences[0].tokens[0].tag == kSentStart);
  CHECK(tagged.sentences[0].tokens[1].tag == kNullToken);
}

TEST_CASE("counts exclude sentinels") {
  auto c = fixtures::MakeCorpus({fixtures::Sent({"a", "b>c"}), fixtures::Sent({"d"})});
  CHECK(c.token_count() == 3);
  CHECK(c.error_count() == 1);
  CHECK(c.sentences[0].word_count() == 2);
}

TEST_CASE("text helpers") {
  CHECK(text::Split("a\tb\t", '\t') == std::vector<std::string>{"a", "b", ""});
  CHECK(text::Trim("  x y \n") == "x y");
  CHECK(text::Utf8Chars("się") == std::vector<std::string>{"s", "i", "ę"});
  CHECK(text::Lines("a\r\nb\n") == std::vector<std::string>{"a", "b"});
  CHECK(text::ParseInt("-12", "n") == -12);
  CHECK_THROWS_AS(text::ParseInt("12x", "n"), Error);
}
