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

#ifndef ICUL_TESTS_TEST_UTIL_H_
#define ICUL_TESTS_TEST_UTIL_H_

#include <string>
#include <vector>

#include <gtest/gtest.h>
#include "icul/corpus.h"
#include "icul/status.h"

// Expects `statement` to throw icul::Error with the given code.
#define EXPECT_ICUL_ERROR(statement, error_code)                  \
  do {                                                            \
    try {                                                         \
      statement;                                                  \
      ADD_FAILURE() << "no error thrown, expected " #error_code;  \
    } catch (const ::icul::Error& e) {                            \
      EXPECT_EQ(e.code(), error_code) << e.what();                \
    }                                                             \
  } while (0)

namespace icul::testing {

// "good"/"bad" reviews, separable by a single word.
inline std::vector<LabeledExample> SeparableExamples(size_t n) {
  std::vector<LabeledExample> out;
  for (size_t i = 0; i < n; ++i) {
    const bool good = i % 2 == 0;
    out.push_back({"ex" + std::to_string(i),
                   std::string(good ? "good" : "bad") + " film number w" +
                       std::to_string(i),
                   good ? "positive" : "negative"});
  }
  return out;
}

}  // namespace icul::testing

#endif  // ICUL_TESTS_TEST_UTIL_H_
