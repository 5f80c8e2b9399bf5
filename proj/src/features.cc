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

#include <algorithm>
#include <cmath>

#include "icul/random.h"
#include "icul/status.h"

namespace icul {
namespace {

bool IsSeparator(unsigned char c) {
  if (c >= 0x80) return false;
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f' || (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

}  // namespace

double SparseVector::Get(uint32_t bucket) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), bucket,
      [](const std::pair<uint32_t, double>& e, uint32_t b) { return e.first < b; });
  return (it != entries.end() && it->first == bucket) ? it->second : 0.0;
}

double SparseVector::Norm() const {
  double sum = 0.0;
  for (const auto& [bucket, value] : entries) sum += value * value;
  return std::sqrt(sum);
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (IsSeparator(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    current.push_back(static_cast<char>(c));
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

uint32_t TokenBucket(std::string_view token, size_t feature_dim) {
  return static_cast<uint32_t>(Fnv1a64(token) % feature_dim);
}

SparseVector Featurize(std::string_view text, size_t feature_dim) {
  if (feature_dim < 2) {
    throw Error(ErrorCode::kConfiguration, "feature_dim must be >= 2");
  }
  std::vector<uint32_t> buckets;
  for (const std::string& token : Tokenize(text)) {
    buckets.push_back(TokenBucket(token, feature_dim));
  }
  std::sort(buckets.begin(), buckets.end());
  SparseVector out;
  for (uint32_t b : buckets) {
    if (!out.entries.empty() && out.entries.back().first == b) {
      out.entries.back().second += 1.0;
    } else {
      out.entries.emplace_back(b, 1.0);
    }
  }
  return out;
}

double Dot(const SparseVector& a, const SparseVector& b) {
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double Dot(std::span<const double> dense, const SparseVector& x) {
  double sum = 0.0;
  for (const auto& [bucket, value] : x.entries) sum += dense[bucket] * value;
  return sum;
}

double Cosine(const SparseVector& a, const SparseVector& b) {
  const double na = a.Norm();
  const double nb = b.Norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return Dot(a, b) / (na * nb);
}

}  // namespace icul
