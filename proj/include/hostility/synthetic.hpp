// Copyright 2026 The Hostility Detection Authors.
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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <cstdio>

#include "hostility/common.hpp"
#include "hostility/labels.hpp"

namespace hostility {

// Keyword-rule synthetic corpus for desk-scale runs.
//
// Every post is 6-14 filler words. About half the posts are hostile; a
// hostile post gets a random non-empty set of dimensions and, for each one,
// that dimension's trigger word inserted at a random position. Non-hostile
// posts contain no trigger word. Labels are therefore a deterministic
// function of the text and the corpus is separable.
struct SyntheticOptions {
  std::size_t size = 500;
  std::uint64_t seed = 7;
  double hostile_rate = 0.5;
};

inline const std::vector<std::string>& synthetic_filler_words() {
  static const std::vector<std::string> words = {
      "आज",    "कल",     "सरकार", "लोग",    "देश",   "शहर",   "खबर",   "बात",
      "समय",   "पानी",   "सड़क",  "स्कूल",  "बाजार", "मौसम",  "खेल",   "फिल्म",
      "गाना",  "किताब",  "घर",    "परिवार", "दोस्त", "काम",   "रात",   "सुबह",
      "नेता",  "चुनाव",  "वोट",   "गांव",   "किसान", "छात्र", "मंदिर", "ट्रेन",
      "बारिश", "त्योहार", "दिल्ली", "मुंबई",  "भारत",  "लोकतंत्र", "विकास", "रोजगार"};
  return words;
}

inline std::string_view synthetic_trigger(Dimension d) {
  switch (d) {
    case Dimension::kFake: return "अफवाह";
    case Dimension::kHate: return "नफरत";
    case Dimension::kOffensive: return "गालीगलौज";
    case Dimension::kDefamation: return "बदनामी";
  }
  return "";
}

inline Corpus synthetic_corpus(const SyntheticOptions& opt = {}) {
  Rng rng(derive_seed(opt.seed, 0x5e7));
  const auto& filler = synthetic_filler_words();
  Corpus corpus;
  corpus.reserve(opt.size);
  for (std::size_t i = 0; i < opt.size; ++i) {
    std::vector<std::string> words;
    const std::size_t n = 6 + rng.below(9);
    for (std::size_t w = 0; w < n; ++w) words.push_back(filler[rng.below(filler.size())]);

    LabelSet labels;
    if (rng.uniform() < opt.hostile_rate) {
      unsigned mask = 0;
      while (mask == 0) mask = static_cast<unsigned>(rng.below(16));
      labels = LabelSet::from_fine(mask & 1, mask & 2, mask & 4, mask & 8);
      for (Dimension d : kDimensions) {
        if (!labels.get(d)) continue;
        const auto pos = rng.below(words.size() + 1);
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos),
                     std::string(synthetic_trigger(d)));
      }
    }
    std::string text;
    for (const auto& w : words) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    char id[32];
    std::snprintf(id, sizeof id, "syn-%05zu", i);
    corpus.push_back({id, std::move(text), labels});
  }
  return corpus;
}

}  // namespace hostility
