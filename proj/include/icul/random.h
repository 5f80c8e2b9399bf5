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

// Portable deterministic randomness.
//
// std::mt19937_64 is specified bit-for-bit by the standard, but the
// std::*_distribution adaptors are not, so all draws used for splits,
// shuffles and label flips go through the helpers below.

#ifndef ICUL_RANDOM_H_
#define ICUL_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace icul {

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view bytes, uint64_t basis = 0xcbf29ce484222325ULL);

// Expands a run seed into an independent sub-seed for `purpose`. Extra
// integers (model index, forget-set index, ...) and an optional string key
// (e.g. an example id) further specialize the stream.
uint64_t DeriveSeed(std::string_view purpose, uint64_t run_seed,
                    std::initializer_list<uint64_t> indices = {},
                    std::string_view key = {});

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  uint64_t Below(uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform();

  // Standard normal via Box-Muller.
  double Normal();

  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    Shuffle(std::span<T>(items));
  }

  // `count` distinct indices from [0, n), in draw order.
  std::vector<size_t> SampleIndices(size_t n, size_t count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace icul

#endif  // ICUL_RANDOM_H_
