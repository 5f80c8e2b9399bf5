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

#include "icul/unlearn.h"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include "icul/random.h"
#include "icul/remote.h"
#include "icul/status.h"

namespace icul {

std::string_view UnlearnKindName(UnlearnKind kind) {
  switch (kind) {
    case UnlearnKind::kIdentity:
      return "identity";
    case UnlearnKind::kIcul:
      return "icul";
    case UnlearnKind::kGradientAscent:
      return "ga";
    case UnlearnKind::kRetrain:
      return "retrain";
  }
  return "unknown";
}

UnlearnedModel UnlearnedModel::Identity(ModelHandle handle) {
  UnlearnedModel out;
  out.kind_ = UnlearnKind::kIdentity;
  out.handle_ = std::move(handle);
  return out;
}

UnlearnedModel UnlearnedModel::InContext(ModelHandle handle,
                                         BuiltContext context,
                                         PromptTemplate tmpl) {
  UnlearnedModel out;
  out.kind_ = UnlearnKind::kIcul;
  if (handle.is_toy()) out.encoded_ = handle.toy().Encode(context.demonstrations);
  out.handle_ = std::move(handle);
  out.context_ = std::move(context);
  out.template_ = std::move(tmpl);
  return out;
}

UnlearnedModel UnlearnedModel::GradientAscent(ToyModel model) {
  UnlearnedModel out;
  out.kind_ = UnlearnKind::kGradientAscent;
  out.handle_ = ModelHandle::Toy(std::move(model));
  return out;
}

UnlearnedModel UnlearnedModel::Retrained(ToyModel model) {
  UnlearnedModel out;
  out.kind_ = UnlearnKind::kRetrain;
  out.handle_ = ModelHandle::Toy(std::move(model));
  return out;
}

ClassDistribution UnlearnedModel::Predict(std::string_view query) const {
  if (handle_.is_toy()) return Predict(handle_.toy().Featurize(query));
  if (context_) {
    return handle_.remote().Complete(
        RenderQueryPrompt(*context_, query, template_));
  }
  return handle_.Predict({}, query);
}

ClassDistribution UnlearnedModel::Predict(const SparseVector& query) const {
  return handle_.toy().Predict(encoded_, query);
}

UnlearnedModel IculUnlearn(const ModelHandle& handle,
                           std::span<const LabeledExample> forget,
                           std::span<const LabeledExample> pool,
                           const IculOptions& options) {
  const ContextSpec spec{options.mode, options.num_correct,
                         options.context_seed};
  BuiltContext context =
      BuildContext(spec, forget, pool, options.tmpl,
                   DefaultFlipper(options.task, pool, options.flip_seed));
  return UnlearnedModel::InContext(handle, std::move(context), options.tmpl);
}

UnlearnedModel GaUnlearn(const ToyModel& model,
                         std::span<const LabeledExample> forget,
                         const GaOptions& options) {
  if (!(options.lr >= 0.0) || !std::isfinite(options.lr)) {
    throw Error(ErrorCode::kConfiguration, "GA learning rate must be >= 0");
  }
  std::vector<size_t> order(forget.size());
  std::iota(order.begin(), order.end(), size_t{0});
  if (options.order_seed) {
    Rng rng(DeriveSeed("ga-order", *options.order_seed));
    rng.Shuffle(order);
  }
  ToyModel updated = model;
  const EncodedContext no_context;
  const size_t dim = updated.feature_dim();
  size_t step = 0;
  for (size_t i : order) {
    // The gradient (p - onehot) x is zero outside the features of x, so only
    // those columns move.
    const SparseVector x = updated.Featurize(forget[i].text);
    const size_t target = updated.LabelIndex(forget[i].label);
    for (size_t epoch = 0; epoch < options.epochs; ++epoch, ++step) {
      const std::vector<double> probs =
          Softmax(updated.Scores(no_context, x));
      std::vector<double>& w = updated.mutable_weights();
      for (size_t r = 0; r < probs.size(); ++r) {
        const double coeff = probs[r] - (r == target ? 1.0 : 0.0);
        for (const auto& [feature, value] : x.entries) {
          double& wk = w[r * dim + feature];
          wk += options.lr * (coeff * value);
          if (!std::isfinite(wk) || std::abs(wk) > options.divergence_bound) {
            throw Error(ErrorCode::kDivergence,
                        "gradient ascent diverged at step " +
                            std::to_string(step) + " (forget id '" +
                            forget[i].id + "')");
          }
        }
      }
    }
  }
  return UnlearnedModel::GradientAscent(std::move(updated));
}

UnlearnedModel RetrainOracle(std::span<const LabeledExample> train,
                             std::span<const std::string> forget_ids,
                             const std::vector<std::string>& label_set,
                             const ToyHyper& hyper) {
  std::unordered_set<std::string_view> drop(forget_ids.begin(),
                                            forget_ids.end());
  std::unordered_set<std::string_view> train_ids;
  for (const LabeledExample& ex : train) train_ids.insert(ex.id);
  for (std::string_view id : drop) {
    if (!train_ids.contains(id)) {
      throw Error(ErrorCode::kConfiguration,
                  "forget id '" + std::string(id) + "' is not in the train set");
    }
  }
  std::vector<LabeledExample> retained;
  retained.reserve(train.size());
  for (const LabeledExample& ex : train) {
    if (!drop.contains(ex.id)) retained.push_back(ex);
  }
  return UnlearnedModel::Retrained(TrainToy(retained, label_set, hyper));
}

}  // namespace icul
