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

#include "core/checker.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "core/error.hpp"
#include "core/text.hpp"

namespace tblcheck {

namespace {

bool AnyOf(const std::vector<std::string>& alternatives, std::string_view value) {
  return std::find(alternatives.begin(), alternatives.end(), value) != alternatives.end();
}

const Token& VirtualToken(const Sentence& sentence, long j) {
  static const Token start = Token::Sentinel(kSentStart);
  static const Token end = Token::Sentinel(kSentEnd);
  if (j < 0) return start;
  if (j >= static_cast<long>(sentence.tokens.size())) return end;
  return sentence.tokens[static_cast<size_t>(j)];
}

}  // namespace

bool TokenTest::Matches(const Token& token) const {
  if (!surface.empty() && !AnyOf(surface, token.surface)) return false;
  if (!postag.empty() && !AnyOf(postag, token.tag)) return false;
  return true;
}

bool Pattern::MatchesAt(const Sentence& sentence, size_t i) const {
  long start = static_cast<long>(i) - static_cast<long>(mark);
  for (size_t s = 0; s < tokens.size(); ++s) {
    if (!tokens[s].Matches(VirtualToken(sentence, start + static_cast<long>(s)))) return false;
  }
  return true;
}

bool PatternRule::MatchesAt(const Sentence& sentence, size_t i) const {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const Pattern& p) { return p.MatchesAt(sentence, i); });
}

bool PatternRule::is_insertion() const {
  return std::any_of(patterns.begin(), patterns.end(), [](const Pattern& p) {
    return AnyOf(p.tokens[p.mark].surface, kNullToken);
  });
}

// --- Compilation -----------------------------------------------------------

namespace {

std::string MessageFor(const TransformationRule& rule) {
  if (rule.from_class == kNullToken) {
    return "Possibly missing word: \"" + rule.to_class + "\".";
  }
  if (rule.from_class.find(kJoinMarker) != std::string::npos &&
      rule.to_class.find(kJoinMarker) == std::string::npos) {
    return "Write as one word: \"" + rule.to_class + "\".";
  }
  return "Possible confusion: did you mean \"" + rule.to_class + "\"?";
}

// Adds `value` as the only allowed alternative; false on contradiction.
bool Constrain(std::vector<std::string>& slot, const std::string& value) {
  if (slot.empty()) {
    slot.push_back(value);
    return true;
  }
  return slot.size() == 1 && slot.front() == value;
}

}  // namespace

std::optional<PatternRule> CompileRule(const TransformationRule& rule, std::string id) {
  for (const auto& a : rule.atoms) {
    if (a.schema.lo < -kMaxPatternOffset || a.schema.hi > kMaxPatternOffset) {
      throw ValidationError("unsupported span: atom " + a.ToString() + " in rule '" +
                            rule.CanonicalText() + "' exceeds ±" +
                            std::to_string(kMaxPatternOffset));
    }
    if (a.schema.feature == Feature::kClass) {
      throw ValidationError("cannot compile CLASS context atom in '" + rule.CanonicalText() + "'");
    }
  }

  PatternRule out;
  out.id = std::move(id);
  out.suggestion = rule.to_class;
  out.message = MessageFor(rule);
  out.good = rule.good;
  out.bad = rule.bad;
  out.score = rule.score;

  // One offset choice per atom; window atoms enumerate their positions.
  std::vector<int> choice(rule.atoms.size());
  for (size_t a = 0; a < rule.atoms.size(); ++a) choice[a] = rule.atoms[a].schema.lo;
  while (true) {
    int lo = 0, hi = 0;
    for (int k : choice) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    Pattern p;
    p.tokens.resize(static_cast<size_t>(hi - lo + 1));
    p.mark = static_cast<size_t>(-lo);
    bool ok = Constrain(p.tokens[p.mark].surface, rule.from_class);
    for (size_t a = 0; a < rule.atoms.size() && ok; ++a) {
      TokenTest& slot = p.tokens[static_cast<size_t>(choice[a] - lo)];
      ok = Constrain(rule.atoms[a].schema.feature == Feature::kTag ? slot.postag : slot.surface,
                     rule.atoms[a].value);
    }
    if (ok && std::find(out.patterns.begin(), out.patterns.end(), p) == out.patterns.end()) {
      out.patterns.push_back(std::move(p));
    }
    size_t a = 0;
    while (a < choice.size() && choice[a] == rule.atoms[a].schema.hi) {
      choice[a] = rule.atoms[a].schema.lo;
      ++a;
    }
    if (a == choice.size()) break;
    ++choice[a];
  }
  if (out.patterns.empty()) return std::nullopt;
  return out;
}

CompiledPack CompilePack(std::span<const TransformationRule> rules, std::string lang,
                         std::string source) {
  CompiledPack result;
  result.pack.lang = std::move(lang);
  result.pack.source = std::move(source);
  for (size_t i = 0; i < rules.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "TBL_%04zu", i + 1);
    if (auto compiled = CompileRule(rules[i], id)) {
      result.pack.rules.push_back(std::move(*compiled));
    } else {
      result.never_fire.push_back(i);
    }
  }
  return result;
}

// --- Checking --------------------------------------------------------------

namespace {

bool SortByPosition(const Diagnostic& a, const Diagnostic& b) {
  if (a.sentence != b.sentence) return a.sentence < b.sentence;
  if (a.start != b.start) return a.start < b.start;
  return a.end < b.end;
}

// Token sequence the rules run on, with each token's span in the plain
// sentence.
struct View {
  Sentence sentence;
  std::vector<std::pair<size_t, size_t>> spans;
};

std::set<std::string, std::less<>> CompositeTriggers(const RulePack& pack) {
  std::set<std::string, std::less<>> out;
  for (const auto& rule : pack.rules) {
    for (const auto& p : rule.patterns) {
      for (const auto& s : p.tokens[p.mark].surface) {
        size_t m = s.find(kJoinMarker);
        if (m != std::string::npos && m > 0 && m + 1 < s.size()) out.insert(s);
      }
    }
  }
  return out;
}

View MergedView(const Sentence& plain, const std::set<std::string, std::less<>>& composites) {
  View v;
  const auto& toks = plain.tokens;
  for (size_t j = 0; j < toks.size(); ++j) {
    if (!composites.empty() && j + 1 < toks.size() && !toks[j].is_sentinel &&
        !toks[j + 1].is_sentinel) {
      std::string joined = toks[j].surface + kJoinMarker + toks[j + 1].surface;
      if (composites.contains(joined)) {
        v.sentence.tokens.push_back(Token::Word(joined, toks[j].tag));
        v.spans.emplace_back(j, j + 2);
        ++j;
        continue;
      }
    }
    v.sentence.tokens.push_back(toks[j]);
    v.spans.emplace_back(j, j + 1);
  }
  return v;
}

View GapView(const View& merged) {
  View v;
  const auto& toks = merged.sentence.tokens;
  for (size_t j = 0; j < toks.size(); ++j) {
    if (j > 0) {
      size_t at = merged.spans[j].first;
      v.sentence.tokens.push_back(Token::Placeholder(std::string(kNullToken)));
      v.spans.emplace_back(at, at);
    }
    v.sentence.tokens.push_back(toks[j]);
    v.spans.push_back(merged.spans[j]);
  }
  return v;
}

// First-match-wins over the rules selected by `use`, reporting view spans.
template <class Use>
void RunRules(const View& view, size_t sentence_index, const RulePack& pack, Use use,
              std::vector<Diagnostic>& out) {
  const auto& toks = view.sentence.tokens;
  for (size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].is_sentinel) continue;
    for (const auto& rule : pack.rules) {
      if (!use(rule) || !rule.MatchesAt(view.sentence, i)) continue;
      if (toks[i].surface == rule.suggestion) break;
      out.push_back({sentence_index, view.spans[i].first, view.spans[i].second, rule.id,
                     toks[i].surface, rule.suggestion});
      break;
    }
  }
}

View Identity(const Sentence& s) {
  View v;
  v.sentence = s;
  for (size_t j = 0; j < s.tokens.size(); ++j) v.spans.emplace_back(j, j + 1);
  return v;
}

}  // namespace

std::vector<Diagnostic> Check(const Corpus& corpus, const RulePack& pack) {
  std::vector<Diagnostic> out;
  for (size_t s = 0; s < corpus.sentences.size(); ++s) {
    RunRules(Identity(corpus.sentences[s]), s, pack, [](const PatternRule&) { return true; },
             out);
  }
  std::stable_sort(out.begin(), out.end(), SortByPosition);
  return out;
}

std::vector<Diagnostic> CheckText(const Corpus& corpus, const RulePack& pack) {
  auto composites = CompositeTriggers(pack);
  bool any_insertion = std::any_of(pack.rules.begin(), pack.rules.end(),
                                   [](const PatternRule& r) { return r.is_insertion(); });
  std::vector<Diagnostic> out;
  for (size_t s = 0; s < corpus.sentences.size(); ++s) {
    View merged = MergedView(corpus.sentences[s], composites);
    RunRules(merged, s, pack, [](const PatternRule& r) { return !r.is_insertion(); }, out);
    if (any_insertion) {
      RunRules(GapView(merged), s, pack, [](const PatternRule& r) { return r.is_insertion(); },
               out);
    }
  }
  std::stable_sort(out.begin(), out.end(), SortByPosition);
  return out;
}

std::vector<size_t> CountFires(const RulePack& pack, const Corpus& corpus) {
  auto composites = CompositeTriggers(pack);
  std::vector<size_t> fires(pack.rules.size(), 0);
  for (const auto& sentence : corpus.sentences) {
    View merged = MergedView(sentence, composites);
    std::optional<View> gaps;
    for (size_t r = 0; r < pack.rules.size(); ++r) {
      const PatternRule& rule = pack.rules[r];
      const View* view = &merged;
      if (rule.is_insertion()) {
        if (!gaps) gaps = GapView(merged);
        view = &*gaps;
      }
      const auto& toks = view->sentence.tokens;
      for (size_t i = 0; i < toks.size(); ++i) {
        if (!toks[i].is_sentinel && toks[i].surface != rule.suggestion &&
            rule.MatchesAt(view->sentence, i)) {
          ++fires[r];
        }
      }
    }
  }
  return fires;
}

FilterResult FilterNoisyRules(const RulePack& pack, const Corpus& clean,
                              std::optional<size_t> max_matches) {
  FilterResult result;
  result.kept.lang = pack.lang;
  result.kept.source = pack.source;
  if (!max_matches) {
    result.kept.rules = pack.rules;
    return result;
  }
  auto fires = CountFires(pack, clean);
  for (size_t r = 0; r < pack.rules.size(); ++r) {
    if (fires[r] > *max_matches) {
      result.dropped.emplace_back(pack.rules[r], fires[r]);
    } else {
      result.kept.rules.push_back(pack.rules[r]);
    }
  }
  return result;
}

std::string FormatDiagnostics(std::span<const Diagnostic> diagnostics) {
  std::string out = "sentence\tstart\tend\trule\tobserved\tsuggestion\n";
  for (const auto& d : diagnostics) {
    out += std::to_string(d.sentence) + '\t' + std::to_string(d.start) + '\t' +
           std::to_string(d.end) + '\t' + d.rule_id + '\t' + d.observed + '\t' + d.suggestion +
           '\n';
  }
  return out;
}

// --- XML -------------------------------------------------------------------

namespace {

std::string Escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string JoinAlternatives(const std::vector<std::string>& alts) {
  std::string out;
  for (const auto& a : alts) {
    if (!out.empty()) out += '|';
    out += a;
  }
  return out;
}

}  // namespace

std::string ExportXml(const RulePack& pack) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<rules lang=\"" << Escape(pack.lang) << "\" source=\"" << Escape(pack.source)
      << "\">\n";
  for (const auto& rule : pack.rules) {
    out << "  <rule id=\"" << Escape(rule.id) << "\" good=\"" << rule.good << "\" bad=\""
        << rule.bad << "\" score=\"" << rule.score << "\">\n";
    for (const auto& p : rule.patterns) {
      out << "    <pattern mark=\"" << p.mark << "\">\n";
      for (const auto& t : p.tokens) {
        out << "      <token";
        if (!t.surface.empty()) out << " surface=\"" << Escape(JoinAlternatives(t.surface)) << '"';
        if (!t.postag.empty()) out << " postag=\"" << Escape(JoinAlternatives(t.postag)) << '"';
        out << "/>\n";
      }
      out << "    </pattern>\n";
    }
    out << "    <suggestion>" << Escape(rule.suggestion) << "</suggestion>\n";
    out << "    <message>" << Escape(rule.message) << "</message>\n";
    out << "  </rule>\n";
  }
  out << "</rules>\n";
  return out.str();
}

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void SchemaError(const std::string& path, const std::string& what) {
  throw ParseError("schema violation at " + path + ": " + what);
}

std::optional<std::string> Attr(const pt::ptree& node, const char* name) {
  auto attrs = node.get_child_optional("<xmlattr>");
  if (!attrs) return std::nullopt;
  auto v = attrs->get_optional<std::string>(name);
  if (!v) return std::nullopt;
  return *v;
}

std::string RequiredAttr(const pt::ptree& node, const char* name, const std::string& path) {
  auto v = Attr(node, name);
  if (!v) SchemaError(path, std::string("missing attribute '") + name + "'");
  return *v;
}

long long IntAttr(const pt::ptree& node, const char* name, const std::string& path) {
  std::string v = RequiredAttr(node, name, path);
  try {
    return text::ParseInt(v, path);
  } catch (const Error&) {
    SchemaError(path, std::string("attribute '") + name + "' is not an integer");
  }
}

std::vector<std::string> SplitAlternatives(const std::string& value, const std::string& path) {
  if (value == "|") return {value};
  auto alts = text::Split(value, '|');
  for (const auto& a : alts) {
    if (a.empty()) SchemaError(path, "empty alternative in '" + value + "'");
  }
  return alts;
}

bool IsMarkup(const std::string& name) {
  return name == "<xmlattr>" || name == "<xmlcomment>";
}

}  // namespace

RulePack ImportXml(std::string_view document) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(document)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed XML at line " + std::to_string(e.line()) + ": " + e.message());
  }
  RulePack pack;
  auto root = tree.get_child_optional("rules");
  if (!root) SchemaError("/", "missing <rules> root");
  pack.lang = RequiredAttr(*root, "lang", "/rules");
  pack.source = RequiredAttr(*root, "source", "/rules");
  std::set<std::string> ids;
  size_t rule_no = 0;
  for (const auto& [name, node] : *root) {
    if (IsMarkup(name)) continue;
    std::string rpath = "/rules/" + name + "[" + std::to_string(rule_no + 1) + "]";
    if (name != "rule") SchemaError(rpath, "unexpected element <" + name + ">");
    ++rule_no;
    PatternRule rule;
    rule.id = RequiredAttr(node, "id", rpath);
    if (!ids.insert(rule.id).second) SchemaError(rpath, "duplicate id '" + rule.id + "'");
    rule.good = IntAttr(node, "good", rpath);
    rule.bad = IntAttr(node, "bad", rpath);
    rule.score = IntAttr(node, "score", rpath);
    size_t suggestions = 0, pattern_no = 0;
    for (const auto& [child, cnode] : node) {
      if (IsMarkup(child)) continue;
      if (child == "pattern") {
        std::string ppath = rpath + "/pattern[" + std::to_string(++pattern_no) + "]";
        Pattern p;
        long long mark = IntAttr(cnode, "mark", ppath);
        size_t token_no = 0;
        for (const auto& [tname, tnode] : cnode) {
          if (IsMarkup(tname)) continue;
          std::string tpath = ppath + "/token[" + std::to_string(++token_no) + "]";
          if (tname != "token") SchemaError(tpath, "unexpected element <" + tname + ">");
          TokenTest test;
          if (auto s = Attr(tnode, "surface")) test.surface = SplitAlternatives(*s, tpath);
          if (auto t = Attr(tnode, "postag")) test.postag = SplitAlternatives(*t, tpath);
          p.tokens.push_back(std::move(test));
        }
        if (p.tokens.empty()) SchemaError(ppath, "pattern has no tokens");
        if (mark < 0 || static_cast<size_t>(mark) >= p.tokens.size()) {
          SchemaError(ppath, "mark " + std::to_string(mark) + " outside pattern");
        }
        p.mark = static_cast<size_t>(mark);
        rule.patterns.push_back(std::move(p));
      } else if (child == "suggestion") {
        ++suggestions;
        rule.suggestion = cnode.data();
      } else if (child == "message") {
        rule.message = cnode.data();
      } else {
        SchemaError(rpath, "unexpected element <" + child + ">");
      }
    }
    if (rule.patterns.empty()) SchemaError(rpath, "rule has no <pattern>");
    if (suggestions != 1) SchemaError(rpath, "rule needs exactly one <suggestion>");
    pack.rules.push_back(std::move(rule));
  }
  return pack;
}

void SaveXml(const RulePack& pack, const std::string& path) {
  text::WriteFile(path, ExportXml(pack));
}

RulePack LoadXml(const std::string& path) { return ImportXml(text::ReadFile(path)); }

}  // namespace tblcheck
