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

#ifndef ICUL_UNLEARN_H_
#define ICUL_UNLEARN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icul/corpus.h"
#include "icul/model.h"
#include "icul/prompting.h"

namespace icul {

enum class UnlearnKind { kIdentity, kIcul, kGradientAscent, kRetrain };

std::string_view UnlearnKindName(UnlearnKind kind);

// A model after an unlearning request. kIdentity wraps the original model
// unchanged (the no-unlearning baseline); kIcul keeps the original model and
// prepends a fixed context to every query; the other kinds own new weights.
class UnlearnedModel {
 public:
  static UnlearnedModel Identity(ModelHandle handle);
  static UnlearnedModel InContext(ModelHandle handle, BuiltContext context,
                                  PromptTemplate tmpl);
  static UnlearnedModel GradientAscent(ToyModel model);
  static UnlearnedModel Retrained(ToyModel model);

  UnlearnKind kind() const { return kind_; }
  const ModelHandle& handle() const { return handle_; }
  // Present for kIcul only.
  const std::optional<BuiltContext>& fixed_context() const { return context_; }

  ClassDistribution Predict(std::string_view query) const;
  // Toy backends only; skips re-tokenizing the query.
  ClassDistribution Predict(const SparseVector& query) const;

 private:
  UnlearnKind kind_ = UnlearnKind::kIdentity;
  ModelHandle handle_;
  std::optional<BuiltContext> context_;
  PromptTemplate template_;
  EncodedContext encoded_;
};

struct IculOptions {
  ContextMode mode = ContextMode::kIcul;
  size_t num_correct = 6;  // L
  // Seed of the context draw (which L pool points, in which order).
  uint64_t context_seed = 0;
  // Seed that label flips derive from, per example id.
  uint64_t flip_seed = 0;
  TaskInfo task;
  PromptTemplate tmpl;
};

// Fixes the unlearning context once; the model itself is untouched.
// `mode` other than kIcul builds the ICL / random-ICUL ablations.
UnlearnedModel IculUnlearn(const ModelHandle& handle,
                           std::span<const LabeledExample> forget,
                           std::span<const LabeledExample> pool,
                           const IculOptions& options);

struct GaOptions {
  double lr = 5e-5;
  size_t epochs = 1;
  // When set, forget points are visited in a permutation drawn from it;
  // otherwise in the given order.
  std::optional<uint64_t> order_seed;
  // Any |weight| above this aborts with kDivergence.
  double divergence_bound = 1e6;
};

// Sequential gradient ascent: every forget point in turn gets `epochs`
// steps of w <- w + lr * grad(loss). Throws kDivergence with the step
// index when weights blow up, kConfiguration for lr < 0.
UnlearnedModel GaUnlearn(const ToyModel& model,
                         std::span<const LabeledExample> forget,
                         const GaOptions& options);

// Trains from scratch on train minus the forget ids, same hyperparameters.
UnlearnedModel RetrainOracle(std::span<const LabeledExample> train,
                             std::span<const std::string> forget_ids,
                             const std::vector<std::string>& label_set,
                             const ToyHyper& hyper);

}  // namespace icul

#endif  // ICUL_UNLEARN_H_
