// Copyright 2026 The ICUL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "icul/synthetic.h"

#include <array>
#include <cstdio>
#include <string_view>
#include <unordered_set>

#include "icul/random.h"

namespace icul {
namespace {

constexpr std::array<std::string_view, 40> kPositiveCues = {
    "great",     "wonderful", "delightful", "moving",    "superb",
    "charming",  "brilliant", "fun",        "gripping",  "heartfelt",
    "excellent", "lovely",    "witty",      "stunning",  "engaging",
    "fresh",     "clever",    "joyful",     "touching",  "masterful",
    "vivid",     "warm",      "smart",      "beautiful", "thrilling",
    "memorable", "solid",     "sharp",      "uplifting", "inventive",
    "rich",      "elegant",   "polished",   "radiant",   "tender",
    "bold",      "graceful",  "riveting",   "splendid",  "satisfying"};

constexpr std::array<std::string_view, 40> kNegativeCues = {
    "dull",      "boring",   "tedious",   "awful",     "clumsy",
    "bland",     "messy",    "lifeless",  "tiresome",  "weak",
    "poor",      "flat",     "shallow",   "dreary",    "sloppy",
    "forced",    "stale",    "grating",   "hollow",    "pointless",
    "muddled",   "lazy",     "cheap",     "plodding",  "wooden",
    "annoying",  "bloated",  "confused",  "joyless",   "painful",
    "predictable", "silly",  "thin",      "uneven",    "listless",
    "overlong",  "trite",    "vapid",     "worn",      "tepid"};

constexpr std::array<std::string_view, 60> kFillers = {
    "the",     "film",     "movie",    "story",    "plot",     "cast",
    "director", "scene",   "ending",   "script",   "actors",   "music",
    "camera",  "dialogue", "pacing",   "hero",     "villain",  "sequel",
    "audience", "screen",  "runtime",  "genre",    "drama",    "comedy",
    "chapter", "setting",  "visuals",  "score",    "editing",  "premise",
    "role",    "lead",     "twist",    "moment",   "tone",     "style",
    "feature", "picture",  "studio",   "season",   "episode",  "crew",
    "writer",  "version",  "release",  "trailer",  "opening",  "finale",
    "act",     "cut",      "frame",    "shot",     "theme",    "mood",
    "journey", "world",    "voice",    "heart",    "night",    "city"};

constexpr std::array<std::string_view, 20> kOnsets = {
    "b", "d", "f", "g", "k", "l", "m", "n", "p", "r",
    "s", "t", "v", "z", "br", "dr", "kr", "st", "tr", "zh"};
constexpr std::array<std::string_view, 8> kVowels = {"a", "e", "i", "o",
                                                     "u", "ai", "ou", "ei"};
constexpr std::array<std::string_view, 8> kCodas = {"", "n", "r", "l",
                                                    "x", "s", "th", "m"};

std::string PseudoWord(Rng& rng) {
  std::string word;
  const size_t syllables = 2 + rng.Below(2);
  for (size_t s = 0; s < syllables; ++s) {
    word += kOnsets[rng.Below(kOnsets.size())];
    word += kVowels[rng.Below(kVowels.size())];
  }
  word += kCodas[rng.Below(kCodas.size())];
  return word;
}

}  // namespace

std::vector<LabeledExample> GenerateSyntheticReviews(
    const SyntheticOptions& options) {
  Rng rng(DeriveSeed("synthetic", options.seed));
  std::unordered_set<std::string> used;
  for (auto list : {std::span<const std::string_view>(kPositiveCues),
                    std::span<const std::string_view>(kNegativeCues),
                    std::span<const std::string_view>(kFillers)}) {
    for (std::string_view w : list) used.emplace(w);
  }
  std::vector<LabeledExample> out;
  out.reserve(options.num_examples);
  for (size_t i = 0; i < options.num_examples; ++i) {
    const bool positive = rng.Bernoulli(0.5);
    std::vector<std::string> words;
    const auto& own = positive ? kPositiveCues : kNegativeCues;
    const auto& contrary = positive ? kNegativeCues : kPositiveCues;
    for (size_t c = 0; c < options.cue_words; ++c) {
      words.emplace_back(own[rng.Below(own.size())]);
    }
    for (size_t c = 0; c < options.contrary_cue_words; ++c) {
      words.emplace_back(contrary[rng.Below(contrary.size())]);
    }
    for (size_t c = 0; c < options.filler_words; ++c) {
      words.emplace_back(kFillers[rng.Below(kFillers.size())]);
    }
    for (size_t c = 0; c < options.unique_words; ++c) {
      std::string w;
      do {
        w = PseudoWord(rng);
      } while (!used.insert(w).second);
      words.push_back(std::move(w));
    }
    rng.Shuffle(words);
    std::string text;
    for (const std::string& w : words) {
      if (!text.empty()) text.push_back(' ');
      text += w;
    }
    bool label_positive = positive;
    if (rng.Bernoulli(options.label_noise)) label_positive = !label_positive;
    char id[32];
    std::snprintf(id, sizeof(id), "syn-%05zu", i);
    out.push_back({id, std::move(text),
                   label_positive ? "positive" : "negative"});
  }
  return out;
}

}  // namespace icul
