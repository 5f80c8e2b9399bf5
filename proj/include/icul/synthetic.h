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

// Review-like synthetic sentiment corpus for desk-scale runs.
//
// Each record mixes a few cue words of its class, a cue word of the other
// class and a few record-unique pseudo-words (names, places). The class is
// easy to learn from the cues, while a model trained for many epochs also
// memorizes the unique words, which is what a membership audit picks up.
// Optional filler words and label noise make the task harder.

#ifndef ICUL_SYNTHETIC_H_
#define ICUL_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "icul/corpus.h"

namespace icul {

struct SyntheticOptions {
  size_t num_examples = 2000;
  size_t cue_words = 2;
  // Cue words taken from the other class's list, mixed into every record.
  size_t contrary_cue_words = 1;
  size_t filler_words = 0;
  size_t unique_words = 3;
  double label_noise = 0.0;
  uint64_t seed = 2024;
};

// Labels "negative" / "positive"; ids "syn-00000" onwards.
std::vector<LabeledExample> GenerateSyntheticReviews(
    const SyntheticOptions& options);

}  // namespace icul

#endif  // ICUL_SYNTHETIC_H_
