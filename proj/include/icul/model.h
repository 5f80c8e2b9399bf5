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

// The black-box model contract: a context of labeled demonstrations plus a
// query goes in, a distribution over the task's labels comes out.
//
// ToyModel is the in-process stand-in for a finetuned language model. Its
// score for label y is
//
//   w_y . x_q + alpha * sum_i max(0, cos(x_q, x_i))^(1/tau) * [y_i == y]
//
// over the context demonstrations (x_i, y_i), followed by a softmax. Only
// the linear term is trained; the context term has no parameters, so the
// same model responds both to gradient updates and to demonstrations.

#ifndef ICUL_MODEL_H_
#define ICUL_MODEL_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icul/corpus.h"
#include "icul/features.h"
#include "json.hpp"

namespace icul {

struct Demonstration {
  std::string text;
  std::string label;

  bool operator==(const Demonstration&) const = default;
};

// Probabilities aligned with `labels` (the corpus label set order).
struct ClassDistribution {
  std::vector<std::string> labels;
  std::vector<double> probs;

  // Throws kLabel for labels outside the set.
  double Prob(std::string_view label) const;
  // Temperature-0 prediction; ties go to the earliest label.
  const std::string& Argmax() const;
};

struct ToyHyper {
  double lr = 0.1;
  size_t epochs = 3;
  uint64_t seed = 0;
  double alpha = 2.0;
  double tau = 0.5;
  size_t feature_dim = 4096;
  size_t batch_size = 1;
};

// Demonstrations featurized once so repeated queries skip tokenization.
struct EncodedContext {
  std::vector<SparseVector> features;
  std::vector<double> norms;
  std::vector<size_t> label_index;
};

class ToyModel {
 public:
  // All-zero weights. Throws kConfiguration for alpha < 0, tau <= 0,
  // feature_dim < 2 or fewer than two labels.
  ToyModel(std::vector<std::string> label_set, size_t feature_dim,
           double alpha, double tau);

  const std::vector<std::string>& label_set() const { return label_set_; }
  size_t num_labels() const { return label_set_.size(); }
  size_t feature_dim() const { return feature_dim_; }
  double alpha() const { return alpha_; }
  double tau() const { return tau_; }

  // Row-major |labels| x feature_dim.
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& mutable_weights() { return weights_; }
  std::span<const double> Row(size_t label) const;

  // Throws kLabel.
  size_t LabelIndex(std::string_view label) const;

  SparseVector Featurize(std::string_view text) const;
  EncodedContext Encode(std::span<const Demonstration> context) const;

  std::vector<double> Scores(const EncodedContext& context,
                             const SparseVector& query) const;
  ClassDistribution Predict(const EncodedContext& context,
                            const SparseVector& query) const;
  ClassDistribution Predict(std::span<const Demonstration> context,
                            std::string_view query) const;

  // Softmax cross-entropy of the context-free prediction.
  double Loss(const LabeledExample& example) const;

  bool AllFinite() const;
  bool operator==(const ToyModel&) const = default;

 private:
  std::vector<std::string> label_set_;
  size_t feature_dim_;
  double alpha_;
  double tau_;
  std::vector<double> weights_;
};

std::vector<double> Softmax(std::span<const double> scores);

// Mini-batch gradient descent on softmax cross-entropy with a per-epoch
// shuffle derived from hyper.seed. Throws kCoverage when a label of
// `label_set` has no example, kLabel for labels outside it.
ToyModel TrainToy(std::span<const LabeledExample> examples,
                  const std::vector<std::string>& label_set,
                  const ToyHyper& hyper);

// (softmax(Wx) - onehot(y)) outer x, row-major like the weights.
std::vector<double> GradLoss(const ToyModel& model,
                             const LabeledExample& example);

void to_json(nlohmann::json& j, const ToyModel& model);
ToyModel ToyModelFromJson(const nlohmann::json& j);

class RemoteModel;

// A model behind the predict contract: the in-process toy model or a remote
// completion endpoint. Copies share the (immutable) backend.
class ModelHandle {
 public:
  static ModelHandle Toy(ToyModel model);
  static ModelHandle Remote(std::shared_ptr<const RemoteModel> remote);

  bool is_toy() const { return toy_ != nullptr; }
  // Throws kCapability for remote handles.
  const ToyModel& toy() const;
  const RemoteModel& remote() const;

  const std::vector<std::string>& label_set() const;
  // Queries are always decoded greedily.
  double query_temperature() const { return 0.0; }

  ClassDistribution Predict(std::span<const Demonstration> context,
                            std::string_view query) const;

 private:
  std::shared_ptr<const ToyModel> toy_;
  std::shared_ptr<const RemoteModel> remote_;
};

}  // namespace icul

#endif  // ICUL_MODEL_H_
