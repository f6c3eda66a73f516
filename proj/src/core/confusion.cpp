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

#include "core/confusion.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

#include "core/error.hpp"
#include "core/text.hpp"

namespace tblcheck {

bool InDictionary(const WordSet& dictionary, std::string_view word) {
  if (dictionary.contains(word)) return true;
  return dictionary.contains(text::AsciiLower(word));
}

WordSet LoadDictionary(const std::string& path) {
  WordSet words;
  for (const auto& line : text::Lines(text::ReadFile(path))) {
    auto first = text::Trim(std::string_view(line).substr(0, line.find('\t')));
    if (!first.empty()) words.emplace(first);
  }
  return words;
}

// --- ConfusionSet ----------------------------------------------------------

ConfusionSet::ConfusionSet(std::vector<std::string> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw ValidationError("confusion set '" + ToString() + "' has duplicate members");
  }
  if (members_.size() < 2) {
    throw ValidationError("confusion set '" + ToString() + "' needs at least two members");
  }
  for (const auto& m : members_) {
    if (m.empty()) throw ValidationError("confusion set has an empty member");
  }
}

bool ConfusionSet::Contains(std::string_view word) const {
  return std::binary_search(members_.begin(), members_.end(), word, std::less<>());
}

std::vector<std::string> ConfusionSet::AlternativesTo(std::string_view word) const {
  std::vector<std::string> alts;
  for (const auto& m : members_) {
    if (m != word) alts.push_back(m);
  }
  return alts;
}

std::string ConfusionSet::ToString() const {
  std::string out;
  for (const auto& m : members_) {
    if (!out.empty()) out += ',';
    out += m;
  }
  return out;
}

std::vector<ConfusionSet> ParseConfusionSets(std::string_view contents) {
  std::vector<ConfusionSet> sets;
  size_t line_no = 0;
  for (const auto& line : text::Lines(contents)) {
    ++line_no;
    auto trimmed = text::Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<std::string> members;
    for (const auto& m : text::Split(trimmed, ',')) members.emplace_back(text::Trim(m));
    try {
      sets.emplace_back(std::move(members));
    } catch (const Error& e) {
      throw ValidationError("confusion-set line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return sets;
}

std::string FormatConfusionSets(std::span<const ConfusionSet> sets) {
  std::string out;
  for (const auto& s : sets) {
    out += s.ToString();
    out += '\n';
  }
  return out;
}

std::vector<ConfusionSet> LoadConfusionSets(const std::string& path) {
  return ParseConfusionSets(text::ReadFile(path));
}

void SaveConfusionSets(std::span<const ConfusionSet> sets, const std::string& path) {
  text::WriteFile(path, FormatConfusionSets(sets));
}

std::vector<ConfusionSet> ExtractConfusionSets(std::span<const ErrAnnotation> annotations,
                                               const WordSet* dictionary) {
  std::set<ConfusionSet> unique;
  for (const auto& ann : annotations) {
    if (!ann.usable || ann.observed == ann.target) continue;
    if (dictionary != nullptr &&
        (!InDictionary(*dictionary, ann.observed) || !InDictionary(*dictionary, ann.target))) {
      continue;
    }
    unique.insert(ConfusionSet({ann.observed, ann.target}));
  }
  return {unique.begin(), unique.end()};
}

// --- Character confusion models --------------------------------------------

void CharConfusionModel::Add(const std::string& from, const std::string& to, double weight) {
  if (!(weight > 0)) {
    throw ValidationError("confusion weight for '" + from + "' -> '" + to + "' must be positive");
  }
  if (from == to) throw ValidationError("character '" + from + "' cannot map to itself");
  if (text::Utf8Chars(from).size() != 1 || text::Utf8Chars(to).size() != 1) {
    throw ValidationError("confusion model entries must be single characters: '" + from +
                          "' -> '" + to + "'");
  }
  auto& list = table_[from];
  auto it = std::find_if(list.begin(), list.end(),
                         [&](const Replacement& r) { return r.to == to; });
  if (it != list.end()) {
    it->weight += weight;
  } else {
    list.push_back({to, weight});
  }
  std::sort(list.begin(), list.end(), [](const Replacement& a, const Replacement& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.to < b.to;
  });
}

CharConfusionModel CharConfusionModel::Keyboard() {
  // Rows are staggered: key (r, c) touches (r, c±1), (r-1, c), (r-1, c+1),
  // (r+1, c-1) and (r+1, c).
  static const std::vector<std::string> rows = {"qwertyuiop", "asdfghjkl", "zxcvbnm"};
  CharConfusionModel model("keyboard");
  auto at = [&](int r, int c) -> std::string {
    if (r < 0 || r >= static_cast<int>(rows.size())) return {};
    if (c < 0 || c >= static_cast<int>(rows[static_cast<size_t>(r)].size())) return {};
    return std::string(1, rows[static_cast<size_t>(r)][static_cast<size_t>(c)]);
  };
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    for (int c = 0; c < static_cast<int>(rows[static_cast<size_t>(r)].size()); ++c) {
      std::string key = at(r, c);
      for (auto [dr, dc] : {std::pair{0, -1}, {0, 1}, {-1, 0}, {-1, 1}, {1, -1}, {1, 0}}) {
        std::string n = at(r + dr, c + dc);
        if (!n.empty()) model.Add(key, n, 1.0);
      }
    }
  }
  return model;
}

CharConfusionModel CharConfusionModel::Ocr() {
  CharConfusionModel model("ocr");
  static const std::vector<std::pair<const char*, const char*>> pairs = {
      {"l", "1"}, {"O", "0"}, {"I", "l"}, {"I", "1"}, {"S", "5"}, {"B", "8"}, {"Z", "2"}};
  for (auto [a, b] : pairs) {
    model.Add(a, b, 1.0);
    model.Add(b, a, 1.0);
  }
  return model;
}

CharConfusionModel CharConfusionModel::Parse(std::string_view contents, std::string kind) {
  CharConfusionModel model(std::move(kind));
  size_t line_no = 0;
  for (const auto& line : text::Lines(contents)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    auto f = text::Split(line, '\t');
    if (f.size() != 3) {
      throw ParseError("confusion-model line " + std::to_string(line_no) +
                       ": expected source<TAB>replacement<TAB>weight");
    }
    double weight = 0;
    try {
      size_t used = 0;
      weight = std::stod(f[2], &used);
      if (used != f[2].size()) throw std::invalid_argument(f[2]);
    } catch (const std::exception&) {
      throw ParseError("confusion-model line " + std::to_string(line_no) + ": bad weight '" +
                       f[2] + "'");
    }
    model.Add(f[0], f[1], weight);
  }
  return model;
}

CharConfusionModel CharConfusionModel::Load(const std::string& path) {
  return Parse(text::ReadFile(path));
}

std::span<const CharConfusionModel::Replacement> CharConfusionModel::ReplacementsFor(
    std::string_view ch) const {
  auto it = table_.find(ch);
  if (it == table_.end()) return {};
  return it->second;
}

size_t CharConfusionModel::max_replacements() const {
  size_t m = 0;
  for (const auto& [_, list] : table_) m = std::max(m, list.size());
  return m;
}

std::vector<ConfusionSet> GenerateTypoVariants(std::string_view word,
                                               const CharConfusionModel& model,
                                               const WordSet* dictionary) {
  if (word.empty()) throw ValidationError("cannot generate typos for an empty word");
  std::vector<ConfusionSet> out;
  WordSet seen;
  auto chars = text::Utf8Chars(word);
  for (size_t i = 0; i < chars.size(); ++i) {
    for (const auto& rep : model.ReplacementsFor(chars[i])) {
      std::string variant;
      for (size_t j = 0; j < chars.size(); ++j) variant += j == i ? rep.to : chars[j];
      if (variant == word || seen.contains(variant)) continue;
      if (dictionary != nullptr && !InDictionary(*dictionary, variant)) continue;
      seen.insert(variant);
      out.emplace_back(std::vector<std::string>{std::string(word), variant});
    }
  }
  return out;
}

// --- Seeding ---------------------------------------------------------------

std::string_view ToString(SeedPolicy::Mode mode) {
  switch (mode) {
    case SeedPolicy::Mode::kReplaceAll:
      return "replace-all";
    case SeedPolicy::Mode::kRoundRobin:
      return "round-robin";
    case SeedPolicy::Mode::kSample:
      return "sample";
  }
  return "replace-all";
}

SeedPolicy::Mode ParseSeedMode(std::string_view name) {
  if (name == "replace-all") return SeedPolicy::Mode::kReplaceAll;
  if (name == "round-robin") return SeedPolicy::Mode::kRoundRobin;
  if (name == "sample") return SeedPolicy::Mode::kSample;
  throw ValidationError("unknown seed policy '" + std::string(name) + "'");
}

namespace {

bool IsCleanWord(const Token& t) {
  return !t.is_sentinel && !t.is_placeholder() && t.class_label == t.true_label &&
         t.surface == t.class_label;
}

}  // namespace

Corpus SeedErrors(Corpus clean, std::span<const ConfusionSet> sets, const SeedPolicy& policy,
                  const Lexicon* lexicon) {
  if (policy.mode == SeedPolicy::Mode::kSample && !(policy.rate >= 0.0 && policy.rate <= 1.0)) {
    throw ValidationError("seed rate must be in [0,1]");
  }
  std::unordered_map<std::string, std::vector<size_t>> owners;
  for (size_t i = 0; i < sets.size(); ++i) {
    for (const auto& m : sets[i].members()) owners[m].push_back(i);
  }
  std::vector<size_t> counters(sets.size(), 0);
  // mt19937_64's output sequence is fixed by the standard, unlike the
  // distributions, so draws are derived from raw outputs.
  std::mt19937_64 rng(policy.seed);

  for (auto& sentence : clean.sentences) {
    for (auto& tok : sentence.tokens) {
      if (!IsCleanWord(tok)) continue;
      auto it = owners.find(tok.surface);
      if (it == owners.end()) continue;
      if (it->second.size() > 1) {
        std::string listed;
        for (size_t idx : it->second) listed += " {" + sets[idx].ToString() + "}";
        throw ValidationError("'" + tok.surface + "' belongs to several confusion sets:" + listed);
      }
      size_t set_index = it->second.front();
      auto alts = sets[set_index].AlternativesTo(tok.surface);
      std::string replacement;
      switch (policy.mode) {
        case SeedPolicy::Mode::kReplaceAll:
          replacement = alts.front();
          break;
        case SeedPolicy::Mode::kRoundRobin:
          replacement = alts[counters[set_index]++ % alts.size()];
          break;
        case SeedPolicy::Mode::kSample: {
          double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          uint64_t pick = rng();
          if (u >= policy.rate) continue;
          replacement = alts[pick % alts.size()];
          break;
        }
      }
      std::string original = tok.surface;
      tok.surface = replacement;
      tok.class_label = replacement;
      tok.true_label = std::move(original);
      if (replacement == kNullToken) {
        tok.tag = std::string(kNullToken);
      } else if (lexicon != nullptr) {
        tok.tag = lexicon->TopTag(replacement).value_or(std::string(kUnknownTag));
      }
    }
  }
  return clean;
}

Corpus SeedMissingWord(Corpus clean, std::string_view word) {
  if (word.empty() || word.find_first_of(" \t\n") != std::string_view::npos) {
    throw ValidationError("missing word must be a single non-empty token");
  }
  for (auto& sentence : clean.sentences) {
    std::vector<Token> out;
    out.reserve(sentence.tokens.size() * 2);
    for (auto& tok : sentence.tokens) {
      Token next = (IsCleanWord(tok) && tok.surface == word)
                       ? Token::Placeholder(std::string(word))
                       : std::move(tok);
      if (!out.empty() && !out.back().is_placeholder() && !next.is_placeholder()) {
        out.push_back(Token::Placeholder(std::string(kNullToken)));
      }
      out.push_back(std::move(next));
    }
    sentence.tokens = std::move(out);
  }
  return clean;
}

Corpus SeedRunOnSplits(Corpus clean, std::span<const ConfusionSet> pairs) {
  std::unordered_map<std::string, std::string> composite_of;
  for (const auto& set : pairs) {
    const auto& m = set.members();
    auto is_composite = [](const std::string& s) {
      size_t p = s.find(kJoinMarker);
      return p != std::string::npos && p > 0 && p + 1 < s.size();
    };
    if (m.size() != 2 || is_composite(m[0]) == is_composite(m[1])) {
      throw ValidationError("run-on set '" + set.ToString() +
                            "' must pair one composite form with one joined word");
    }
    const std::string& composite = is_composite(m[0]) ? m[0] : m[1];
    const std::string& joined = is_composite(m[0]) ? m[1] : m[0];
    std::string unjoined = composite;
    unjoined.erase(std::remove(unjoined.begin(), unjoined.end(), kJoinMarker), unjoined.end());
    if (unjoined != joined) {
      throw ValidationError("run-on set '" + set.ToString() + "': '" + composite +
                            "' does not join to '" + joined + "'");
    }
    composite_of[joined] = composite;
  }
  for (auto& sentence : clean.sentences) {
    for (auto& tok : sentence.tokens) {
      if (!IsCleanWord(tok)) continue;
      auto it = composite_of.find(tok.surface);
      if (it == composite_of.end()) continue;
      tok.surface = it->second;
      tok.class_label = it->second;
    }
  }
  return clean;
}

}  // namespace tblcheck
