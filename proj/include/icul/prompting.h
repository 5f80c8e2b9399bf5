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

// Prompt rendering and context construction for in-context unlearning.
//
// An unlearning context is two blocks: the forget block holds the points to
// be removed, each paired with a label different from its true one, and the
// correct block holds L training points with their true labels. Rendered:
//
//   <forget 1> <flipped> ... <forget K> <flipped> \n <in 1> <label 1> ...
//
// and the query line follows the last demonstration.

#ifndef ICUL_PROMPTING_H_
#define ICUL_PROMPTING_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icul/corpus.h"
#include "icul/model.h"
#include "json.hpp"

namespace icul {

struct PromptTemplate {
  std::string example_format = "{input} {label}";
  std::string pair_separator = "\n";
  std::string block_separator = "\n";
  std::string query_format = "{input} ";
  // Optional instruction text emitted verbatim before the context.
  std::string prefix;

  // Throws kConfiguration when a slot is missing or repeated, or a
  // separator is empty.
  void Validate() const;
  std::string RenderExample(std::string_view input, std::string_view label) const;
  std::string RenderQuery(std::string_view input) const;

  bool operator==(const PromptTemplate&) const = default;
};

void to_json(nlohmann::json& j, const PromptTemplate& t);
void from_json(const nlohmann::json& j, PromptTemplate& t);

// Throws kSanitization when a text or label contains a separator.
void CheckSanitized(std::string_view text, std::string_view label,
                    const PromptTemplate& tmpl);
void CheckSanitized(std::span<const LabeledExample> examples,
                    const PromptTemplate& tmpl);

enum class ContextMode { kIcul, kIcl, kRandomIcul };

std::string_view ContextModeName(ContextMode mode);

struct ContextSpec {
  ContextMode mode = ContextMode::kIcul;
  size_t num_correct = 0;  // L
  uint64_t seed = 0;
};

struct BuiltContext {
  std::vector<Demonstration> demonstrations;
  // Leading demonstrations that form the forget block.
  size_t forget_count = 0;
  std::string rendered;

  bool operator==(const BuiltContext&) const = default;
};

void to_json(nlohmann::json& j, const BuiltContext& c);
void from_json(const nlohmann::json& j, BuiltContext& c);

struct TaskInfo {
  std::vector<std::string> label_set;
  TaskKind kind = TaskKind::kClassification;
};

// Uniform over label_set minus `label`. Throws kNoAlternative when the set
// has fewer than two labels, kLabel when `label` is not in it.
std::string FlipLabel(std::string_view label,
                      std::span<const std::string> label_set, uint64_t seed);

// Seed of the flip applied to one example; depends only on the run seed and
// the example id, so flips do not depend on deletion order.
uint64_t FlipSeed(uint64_t run_seed, std::string_view example_id);

// Replacement label for an example in a flipped block. For question
// answering the alternatives are the distinct answers present in `pool`.
using LabelFlipper = std::function<std::string(const LabeledExample&)>;

LabelFlipper DefaultFlipper(const TaskInfo& task,
                            std::span<const LabeledExample> pool,
                            uint64_t run_seed);

// Throws kOverlap when pool and forget share an id, kSize when the pool
// cannot supply the requested demonstrations.
BuiltContext BuildContext(const ContextSpec& spec,
                          std::span<const LabeledExample> forget,
                          std::span<const LabeledExample> pool,
                          const TaskInfo& task, const PromptTemplate& tmpl);

// As above with the label flip supplied by the caller.
BuiltContext BuildContext(const ContextSpec& spec,
                          std::span<const LabeledExample> forget,
                          std::span<const LabeledExample> pool,
                          const PromptTemplate& tmpl,
                          const LabelFlipper& flip);

std::string RenderContext(std::span<const Demonstration> demonstrations,
                          size_t forget_count, const PromptTemplate& tmpl);

std::string RenderQueryPrompt(const BuiltContext& context,
                              std::string_view query,
                              const PromptTemplate& tmpl);

// Inverse of RenderContext for inputs free of separators and of the
// template's literal text between {input} and {label}.
std::vector<Demonstration> ParseRenderedContext(std::string_view rendered,
                                                size_t forget_count,
                                                const PromptTemplate& tmpl);

}  // namespace icul

#endif  // ICUL_PROMPTING_H_
