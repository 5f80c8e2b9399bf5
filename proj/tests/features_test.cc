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
#include "icul/features.h"

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include "test_util.h"

namespace icul {
namespace {

TEST(TokenizeTest, LowercasesAndSplitsOnAsciiPunctuation) {
  EXPECT_EQ(Tokenize("Good, GOOD film!"),
            (std::vector<std::string>{"good", "good", "film"}));
  EXPECT_EQ(Tokenize("it's x-ray"),
            (std::vector<std::string>{"it", "s", "x", "ray"}));
  EXPECT_TRUE(Tokenize("  ... ").empty());
  // Non-ASCII bytes are kept inside tokens.
  EXPECT_EQ(Tokenize("café noir"),
            (std::vector<std::string>{"café", "noir"}));
}

TEST(FeaturizeTest, CountsTokensPerBucket) {
  const SparseVector x = Featurize("Good good film", 4096);
  EXPECT_EQ(x.Get(TokenBucket("good", 4096)), 2.0);
  EXPECT_EQ(x.Get(TokenBucket("film", 4096)), 1.0);
  EXPECT_EQ(x.entries.size(), 2u);
  EXPECT_DOUBLE_EQ(x.Norm(), std::sqrt(5.0));
}

TEST(FeaturizeTest, EmptyTextIsTheZeroVector) {
  EXPECT_TRUE(Featurize("", 64).empty());
  EXPECT_EQ(Cosine(Featurize("", 64), Featurize("a", 64)), 0.0);
}

TEST(FeaturizeTest, RejectsTinyDimension) {
  EXPECT_ICUL_ERROR(Featurize("a", 1), ErrorCode::kConfiguration);
}

TEST(FeaturizeTest, EntriesAreSortedAndInRange) {
  const SparseVector x =
      Featurize("the quick brown fox jumps over the lazy dog", 16);
  for (size_t i = 0; i < x.entries.size(); ++i) {
    EXPECT_LT(x.entries[i].first, 16u);
    if (i > 0) {
      EXPECT_LT(x.entries[i - 1].first, x.entries[i].first);
    }
  }
}

TEST(CosineTest, SelfAndDisjoint) {
  const SparseVector a = Featurize("alpha beta beta", 4096);
  EXPECT_NEAR(Cosine(a, a), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(Dot(a, a), 5.0);
  const std::vector<double> dense(4096, 0.5);
  EXPECT_DOUBLE_EQ(Dot(dense, a), 1.5);
}

}  // namespace
}  // namespace icul
