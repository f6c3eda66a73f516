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

#include "core/learner.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cstdint>
#include <map>
#include <set>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "core/error.hpp"

namespace tblcheck {

RuleScore ScoreRule(const TransformationRule& rule, const Corpus& corpus) {
  RuleScore s;
  for (const auto& sentence : corpus.sentences) {
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      const Token& t = sentence.tokens[i];
      if (t.is_sentinel || !Match(rule, sentence, i)) continue;
      if (t.true_label == rule.to_class) {
        ++s.good;
      } else if (t.class_label == t.true_label) {
        ++s.bad;
      }
    }
  }
  s.score = s.good - s.bad;
  return s;
}

Corpus ApplyRule(const TransformationRule& rule, Corpus corpus) {
  for (auto& sentence : corpus.sentences) {
    std::vector<size_t> hits;
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      if (!sentence.tokens[i].is_sentinel && Match(rule, sentence, i)) hits.push_back(i);
    }
    for (size_t i : hits) sentence.tokens[i].class_label = rule.to_class;
  }
  return corpus;
}

namespace {

bool SharesSet(const std::vector<ConfusionSet>& sets, std::string_view a, std::string_view b) {
  return std::any_of(sets.begin(), sets.end(),
                     [&](const ConfusionSet& s) { return s.Contains(a) && s.Contains(b); });
}

constexpr size_t kMaxWindow = 32;

void ValidateConfig(const LearnerConfig& config) {
  if (config.threshold < 1) throw ValidationError("learner threshold must be >= 1");
  if (config.templates.empty()) throw ValidationError("learner needs at least one template");
  for (const auto& t : config.templates) {
    if (t.atoms.empty() || t.atoms.size() > 3) {
      throw ValidationError("template '" + t.ToString() + "' needs 1-3 atoms");
    }
    for (const auto& a : t.atoms) {
      if (a.feature == Feature::kClass) {
        throw ValidationError("template '" + t.ToString() + "' tests CLASS away from offset 0");
      }
      if (a.lo > a.hi || static_cast<size_t>(a.hi - a.lo + 1) > kMaxWindow) {
        throw ValidationError("template '" + t.ToString() + "' has an invalid window");
      }
      if (a.range && a.lo <= 0 && a.hi >= 0) {
        throw ValidationError("template '" + t.ToString() + "' has a window covering offset 0");
      }
    }
  }
}

}  // namespace

std::vector<TransformationRule> InstantiateCandidates(const Corpus& corpus,
                                                      const std::vector<Template>& templates,
                                                      const std::vector<ConfusionSet>* sets) {
  std::map<std::string, TransformationRule> unique;
  for (const auto& sentence : corpus.sentences) {
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      const Token& site = sentence.tokens[i];
      if (site.is_sentinel || !site.is_error()) continue;
      if (sets != nullptr && !SharesSet(*sets, site.class_label, site.true_label)) continue;
      for (const auto& tmpl : templates) {
        // Distinct values per atom, then their cartesian product.
        std::vector<std::vector<std::string>> choices;
        for (const auto& schema : tmpl.atoms) {
          std::vector<std::string> values;
          for (long k = schema.lo; k <= schema.hi; ++k) {
            std::string v(FeatureAt(sentence, static_cast<long>(i) + k, schema.feature));
            if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
          }
          choices.push_back(std::move(values));
        }
        std::vector<size_t> idx(choices.size(), 0);
        while (true) {
          TransformationRule rule;
          rule.from_class = site.class_label;
          rule.to_class = site.true_label;
          for (size_t a = 0; a < choices.size(); ++a) {
            rule.atoms.push_back({tmpl.atoms[a], choices[a][idx[a]]});
          }
          unique.emplace(rule.CanonicalText(), std::move(rule));
          size_t a = 0;
          while (a < idx.size() && ++idx[a] == choices[a].size()) idx[a++] = 0;
          if (a == idx.size()) break;
        }
      }
    }
  }
  std::vector<TransformationRule> out;
  out.reserve(unique.size());
  for (auto& [_, rule] : unique) out.push_back(std::move(rule));
  return out;
}

namespace {

class Vocab {
 public:
  int32_t Intern(std::string_view s) {
    auto it = ids_.find(std::string(s));
    if (it != ids_.end()) return it->second;
    auto id = static_cast<int32_t>(strings_.size());
    strings_.emplace_back(s);
    ids_.emplace(strings_.back(), id);
    return id;
  }
  const std::string& Str(int32_t id) const { return strings_[static_cast<size_t>(id)]; }
  size_t size() const { return strings_.size(); }

 private:
  std::unordered_map<std::string, int32_t> ids_;
  std::vector<std::string> strings_;
};

struct Key {
  int32_t tmpl = 0;
  int32_t cls = 0;
  std::array<int32_t, 3> v{-1, -1, -1};
  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  size_t operator()(const Key& k) const {
    uint64_t h = 0x9E3779B97F4A7C15ull;
    auto mix = [&h](int32_t x) {
      h ^= static_cast<uint64_t>(static_cast<uint32_t>(x)) + 0x9E3779B97F4A7C15ull + (h << 6) +
           (h >> 2);
      h *= 0xBF58476D1CE4E5B9ull;
      h ^= h >> 31;
    };
    mix(k.tmpl);
    mix(k.cls);
    mix(k.v[0]);
    mix(k.v[1]);
    mix(k.v[2]);
    return static_cast<size_t>(h);
  }
};

// Counts of true labels among the positions that a key matches.
struct Histogram {
  std::vector<std::pair<int32_t, int32_t>> counts;

  int32_t Get(int32_t label) const {
    for (auto [l, c] : counts) {
      if (l == label) return c;
    }
    return 0;
  }
  void Add(int32_t label, int32_t delta) {
    for (auto& [l, c] : counts) {
      if (l == label) {
        c += delta;
        return;
      }
    }
    counts.emplace_back(label, delta);
  }
};

// Flattened, interned view of the working corpus.
struct Working {
  std::vector<int32_t> surface, tag, cls, truth;
  std::vector<int32_t> begin_of, end_of;  // sentence bounds per position
  std::vector<bool> sentinel;
  int32_t start_id = 0, end_id = 0;

  int32_t Value(size_t pos, int offset, Feature f) const {
    long j = static_cast<long>(pos) + offset;
    if (j < begin_of[pos]) return start_id;
    if (j >= end_of[pos]) return end_id;
    auto u = static_cast<size_t>(j);
    switch (f) {
      case Feature::kSurface:
        return surface[u];
      case Feature::kTag:
        return tag[u];
      case Feature::kClass:
        return cls[u];
    }
    return surface[u];
  }
};

class Learner {
 public:
  Learner(const Corpus& corpus, const LearnerConfig& config)
      : config_(config), templates_(config.templates) {
    threads_ = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                   : config.threads;
    Flatten(corpus);
    if (config.sets) {
      for (const auto& set : *config.sets) {
        for (const auto& a : set.members()) {
          for (const auto& b : set.members()) {
            if (a != b) allowed_.insert(PairKey(vocab_.Intern(a), vocab_.Intern(b)));
          }
        }
      }
    }
    SelectTracked();
    BuildEntries();
  }

  std::vector<TransformationRule> Run() {
    std::vector<TransformationRule> rules;
    while (!config_.max_rules || rules.size() < *config_.max_rules) {
      Best best = FindBest();
      if (!best.valid) break;
      TransformationRule rule = MakeRule(best.entry, best.to);
      const Histogram& h = entries_[best.entry].hist;
      rule.good = h.Get(best.to);
      rule.bad = h.Get(entries_[best.entry].key.cls);
      rule.score = rule.good - rule.bad;
      Apply(best.entry, best.to);
      rules.push_back(std::move(rule));
    }
    return rules;
  }

 private:
  struct Entry {
    Key key;
    Histogram hist;
  };

  struct Best {
    bool valid = false;
    long long score = 0;
    uint32_t entry = 0;
    int32_t to = 0;
    std::string text;  // filled lazily, only needed on ties
  };

  static uint64_t PairKey(int32_t a, int32_t b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) | static_cast<uint32_t>(b);
  }

  void Flatten(const Corpus& corpus) {
    Working& w = work_;
    w.start_id = vocab_.Intern(kSentStart);
    w.end_id = vocab_.Intern(kSentEnd);
    for (const auto& s : corpus.sentences) {
      auto b = static_cast<int32_t>(w.surface.size());
      auto e = b + static_cast<int32_t>(s.tokens.size());
      for (const auto& t : s.tokens) {
        w.surface.push_back(vocab_.Intern(t.surface));
        w.tag.push_back(vocab_.Intern(t.tag));
        w.cls.push_back(vocab_.Intern(t.class_label));
        w.truth.push_back(vocab_.Intern(t.true_label));
        w.begin_of.push_back(b);
        w.end_of.push_back(e);
        w.sentinel.push_back(t.is_sentinel);
      }
    }
  }

  // Only positions whose class can ever be a rule's from_class matter: the
  // classes and true labels seen at the initial error sites.
  void SelectTracked() {
    std::vector<bool> relevant(vocab_.size(), false);
    for (size_t p = 0; p < work_.cls.size(); ++p) {
      if (!work_.sentinel[p] && work_.cls[p] != work_.truth[p]) {
        relevant[static_cast<size_t>(work_.cls[p])] = true;
        relevant[static_cast<size_t>(work_.truth[p])] = true;
      }
    }
    for (size_t p = 0; p < work_.cls.size(); ++p) {
      if (!work_.sentinel[p] && relevant[static_cast<size_t>(work_.cls[p])]) {
        tracked_.push_back(p);
      }
    }
  }

  // Calls f(key) for every instantiation of template t at pos with class cls.
  template <class F>
  void ForEachKey(size_t t, size_t pos, int32_t cls, F&& f) const {
    const auto& atoms = templates_[t].atoms;
    std::array<std::array<int32_t, kMaxWindow>, 3> values{};
    std::array<size_t, 3> counts{};
    for (size_t a = 0; a < atoms.size(); ++a) {
      for (int k = atoms[a].lo; k <= atoms[a].hi; ++k) {
        int32_t v = work_.Value(pos, k, atoms[a].feature);
        auto* end = values[a].begin() + counts[a];
        if (std::find(values[a].begin(), end, v) == end) values[a][counts[a]++] = v;
      }
    }
    Key key;
    key.tmpl = static_cast<int32_t>(t);
    key.cls = cls;
    std::array<size_t, 3> idx{};
    while (true) {
      for (size_t a = 0; a < atoms.size(); ++a) key.v[a] = values[a][idx[a]];
      f(key);
      size_t a = 0;
      while (a < atoms.size() && ++idx[a] == counts[a]) idx[a++] = 0;
      if (a == atoms.size()) break;
    }
  }

  void BuildEntries() {
    size_t n_threads = std::min(threads_, std::max<size_t>(1, tracked_.size() / 4096));
    std::vector<std::unordered_map<Key, Histogram, KeyHash>> partial(n_threads);
    auto work = [&](size_t shard) {
      size_t lo = tracked_.size() * shard / n_threads;
      size_t hi = tracked_.size() * (shard + 1) / n_threads;
      auto& local = partial[shard];
      for (size_t i = lo; i < hi; ++i) {
        size_t pos = tracked_[i];
        int32_t truth = work_.truth[pos];
        for (size_t t = 0; t < templates_.size(); ++t) {
          ForEachKey(t, pos, work_.cls[pos], [&](const Key& k) { local[k].Add(truth, 1); });
        }
      }
    };
    RunSharded(n_threads, work);
    for (auto& local : partial) {
      for (auto& [key, hist] : local) {
        auto [it, inserted] = index_.try_emplace(key, static_cast<uint32_t>(entries_.size()));
        if (inserted) {
          entries_.push_back({key, std::move(hist)});
        } else {
          for (auto [l, c] : hist.counts) entries_[it->second].hist.Add(l, c);
        }
      }
      local.clear();
    }
  }

  template <class F>
  static void RunSharded(size_t n, F& work) {
    if (n <= 1) {
      work(0);
      return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n - 1);
    for (size_t s = 1; s < n; ++s) pool.emplace_back(work, s);
    work(0);
    for (auto& th : pool) th.join();
  }

  bool Allowed(int32_t from, int32_t to) const {
    return !config_.sets || allowed_.contains(PairKey(from, to));
  }

  TransformationRule MakeRule(uint32_t entry, int32_t to) const {
    const Key& key = entries_[entry].key;
    const auto& atoms = templates_[static_cast<size_t>(key.tmpl)].atoms;
    TransformationRule rule;
    rule.from_class = vocab_.Str(key.cls);
    rule.to_class = vocab_.Str(to);
    for (size_t a = 0; a < atoms.size(); ++a) rule.atoms.push_back({atoms[a], vocab_.Str(key.v[a])});
    return rule;
  }

  // Keeps `best` the maximum by (score desc, canonical text asc).
  void Offer(Best& best, long long score, uint32_t entry, int32_t to) const {
    if (best.valid && score < best.score) return;
    if (best.valid && score == best.score) {
      if (best.text.empty()) best.text = MakeRule(best.entry, best.to).CanonicalText();
      std::string text = MakeRule(entry, to).CanonicalText();
      if (text >= best.text) return;
      best = {true, score, entry, to, std::move(text)};
      return;
    }
    best = {true, score, entry, to, {}};
  }

  Best FindBest() const {
    size_t n_threads = std::min(threads_, std::max<size_t>(1, entries_.size() / 16384));
    std::vector<Best> partial(n_threads);
    auto scan = [&](size_t shard) {
      size_t lo = entries_.size() * shard / n_threads;
      size_t hi = entries_.size() * (shard + 1) / n_threads;
      Best& best = partial[shard];
      for (size_t e = lo; e < hi; ++e) {
        const Entry& entry = entries_[e];
        const int32_t from = entry.key.cls;
        const long long bad = entry.hist.Get(from);
        for (auto [label, count] : entry.hist.counts) {
          if (label == from || count <= 0) continue;
          long long score = count - bad;
          if (score < config_.threshold) continue;
          if (!Allowed(from, label)) continue;
          Offer(best, score, static_cast<uint32_t>(e), label);
        }
      }
    };
    RunSharded(n_threads, scan);
    Best best;
    for (auto& b : partial) {
      if (b.valid) Offer(best, b.score, b.entry, b.to);
    }
    return best;
  }

  bool KeyMatches(const Key& key, size_t pos) const {
    const auto& atoms = templates_[static_cast<size_t>(key.tmpl)].atoms;
    for (size_t a = 0; a < atoms.size(); ++a) {
      bool ok = false;
      for (int k = atoms[a].lo; k <= atoms[a].hi && !ok; ++k) {
        ok = work_.Value(pos, k, atoms[a].feature) == key.v[a];
      }
      if (!ok) return false;
    }
    return true;
  }

  void Apply(uint32_t entry, int32_t to) {
    const Key key = entries_[entry].key;
    std::vector<size_t> hits;
    for (size_t pos : tracked_) {
      if (work_.cls[pos] == key.cls && KeyMatches(key, pos)) hits.push_back(pos);
    }
    // Context features are static, so only the rewritten positions move
    // between histogram entries.
    for (size_t pos : hits) {
      int32_t truth = work_.truth[pos];
      for (size_t t = 0; t < templates_.size(); ++t) {
        ForEachKey(t, pos, key.cls,
                   [&](const Key& k) { entries_[index_.at(k)].hist.Add(truth, -1); });
        ForEachKey(t, pos, to, [&](const Key& k) {
          auto [it, inserted] = index_.try_emplace(k, static_cast<uint32_t>(entries_.size()));
          if (inserted) entries_.push_back({k, {}});
          entries_[it->second].hist.Add(truth, 1);
        });
      }
      work_.cls[pos] = to;
    }
  }

  const LearnerConfig& config_;
  const std::vector<Template>& templates_;
  size_t threads_ = 1;
  Vocab vocab_;
  Working work_;
  std::vector<size_t> tracked_;
  std::unordered_set<uint64_t> allowed_;
  std::vector<Entry> entries_;
  std::unordered_map<Key, uint32_t, KeyHash> index_;
};

}  // namespace

std::vector<TransformationRule> Learn(const Corpus& corpus, const LearnerConfig& config) {
  ValidateConfig(config);
  Learner learner(corpus, config);
  return learner.Run();
}

}  // namespace tblcheck
