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

#ifndef ICUL_FEATURES_H_
#define ICUL_FEATURES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace icul {

// Hashed bag-of-words vector; entries sorted by bucket, no duplicates.
struct SparseVector {
  std::vector<std::pair<uint32_t, double>> entries;

  bool empty() const { return entries.empty(); }
  double Get(uint32_t bucket) const;
  double Norm() const;
  bool operator==(const SparseVector&) const = default;
};

// ASCII-lowercases and splits on whitespace and ASCII punctuation. Bytes
// >= 0x80 stay inside tokens.
std::vector<std::string> Tokenize(std::string_view text);

uint32_t TokenBucket(std::string_view token, size_t feature_dim);

// Token counts per hash bucket. Throws kConfiguration when feature_dim < 2.
SparseVector Featurize(std::string_view text, size_t feature_dim);

double Dot(const SparseVector& a, const SparseVector& b);
double Dot(std::span<const double> dense, const SparseVector& x);

// 0 when either vector is zero.
double Cosine(const SparseVector& a, const SparseVector& b);

}  // namespace icul

#endif  // ICUL_FEATURES_H_
