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

// Labeled text corpora, deterministic splits, forget sets and the shadow
// model sample-splitting assignment.

#ifndef ICUL_CORPUS_H_
#define ICUL_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace icul {

struct LabeledExample {
  std::string id;
  std::string text;
  // Class label, or the answer string for question answering records.
  std::string label;

  bool operator==(const LabeledExample&) const = default;
};

enum class TaskKind { kClassification, kQuestionAnswering };

std::string_view TaskKindName(TaskKind kind);
TaskKind ParseTaskKind(std::string_view name);

enum class RecordFormat { kJsonl, kCsv };

RecordFormat ParseRecordFormat(std::string_view name);

// An ordered, validated collection of examples. The label set is derived
// from the examples and kept sorted lexicographically.
class Corpus {
 public:
  // Throws kEmptyCorpus, kDuplicateId, kParse (empty text) or kLabel (fewer
  // than two distinct labels).
  static Corpus Create(std::vector<LabeledExample> examples,
                       TaskKind kind = TaskKind::kClassification);

  const std::vector<LabeledExample>& examples() const { return examples_; }
  const std::vector<std::string>& label_set() const { return label_set_; }
  TaskKind task_kind() const { return kind_; }
  size_t size() const { return examples_.size(); }

  // nullptr when absent.
  const LabeledExample* Find(std::string_view id) const;
  // Throws kConfiguration naming the id when absent.
  const LabeledExample& Get(std::string_view id) const;

  std::vector<LabeledExample> Select(std::span<const std::string> ids) const;

 private:
  Corpus() = default;

  std::vector<LabeledExample> examples_;
  std::vector<std::string> label_set_;
  TaskKind kind_ = TaskKind::kClassification;
  std::unordered_map<std::string, size_t> index_;
};

// Records without an `id` get the zero-padded (8 digit) 0-based line index
// of the record. Parse errors name the 1-based physical line.
Corpus LoadRecords(const std::filesystem::path& path, RecordFormat format,
                   TaskKind kind = TaskKind::kClassification);
Corpus ParseJsonlRecords(std::string_view content,
                         TaskKind kind = TaskKind::kClassification);
Corpus ParseCsvRecords(std::string_view content,
                       TaskKind kind = TaskKind::kClassification);

std::string FormatJsonlRecords(std::span<const LabeledExample> examples);
// Header `id,text,label`; fields quoted only when they contain a comma,
// quote, CR or LF (RFC 4180).
std::string FormatCsvRecords(std::span<const LabeledExample> examples);

struct SplitPlan {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  uint64_t seed = 0;

  bool operator==(const SplitPlan&) const = default;
};

// Uniform sampling without replacement; throws kSize when
// n_train + n_test > |corpus|.
SplitPlan MakeSplit(const Corpus& corpus, uint64_t seed, size_t n_train,
                    size_t n_test);

struct ForgetSet {
  std::vector<std::string> ids;

  bool operator==(const ForgetSet&) const = default;
};

// Throws kEmptyForgetSet for j == 0 and kSize for j > |train_ids|.
ForgetSet SelectForgetSet(const SplitPlan& plan, size_t j, uint64_t seed);

// Pairwise disjoint forget sets of the given sizes drawn jointly from the
// train ids.
std::vector<ForgetSet> SelectDisjointForgetSets(const SplitPlan& plan,
                                                std::span<const size_t> sizes,
                                                uint64_t seed);

struct ShadowAssignment {
  size_t k = 0;
  double p = 0.5;
  uint64_t seed = 0;
  std::vector<ForgetSet> forget_sets;
  // subsets[i]: training ids of shadow model i, in train_ids order.
  std::vector<std::vector<std::string>> subsets;
  // in_models[f]: ascending indices of models whose subset holds forget set f.
  std::vector<std::vector<size_t>> in_models;

  bool IsIn(size_t forget_index, size_t model_index) const;
  size_t InCount() const;
};

// Each forget set lands in exactly k*p subsets; every other train id joins
// each subset independently with probability p.
// Throws kConfiguration when k*p is not integral (or p is outside (0, 1)),
// kOverlap when forget sets intersect.
ShadowAssignment ShadowSubsets(const SplitPlan& plan,
                               std::span<const ForgetSet> forget_sets,
                               size_t k, double p, uint64_t seed);

void to_json(nlohmann::json& j, const SplitPlan& plan);
void from_json(const nlohmann::json& j, SplitPlan& plan);
void to_json(nlohmann::json& j, const ForgetSet& forget);
void from_json(const nlohmann::json& j, ForgetSet& forget);
void to_json(nlohmann::json& j, const ShadowAssignment& assignment);
void from_json(const nlohmann::json& j, ShadowAssignment& assignment);
void to_json(nlohmann::json& j, const LabeledExample& example);
void from_json(const nlohmann::json& j, LabeledExample& example);

}  // namespace icul

#endif  // ICUL_CORPUS_H_
