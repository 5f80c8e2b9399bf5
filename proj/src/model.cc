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

#include "icul/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icul/random.h"
#include "icul/remote.h"
#include "icul/status.h"

namespace icul {

double ClassDistribution::Prob(std::string_view label) const {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return probs[i];
  }
  throw Error(ErrorCode::kLabel,
              "label '" + std::string(label) + "' not in distribution");
}

const std::string& ClassDistribution::Argmax() const {
  size_t best = 0;
  for (size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return labels[best];
}

std::vector<double> Softmax(std::span<const double> scores) {
  const double max = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - max);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

ToyModel::ToyModel(std::vector<std::string> label_set, size_t feature_dim,
                   double alpha, double tau)
    : label_set_(std::move(label_set)),
      feature_dim_(feature_dim),
      alpha_(alpha),
      tau_(tau) {
  if (label_set_.size() < 2) {
    throw Error(ErrorCode::kConfiguration, "toy model needs >= 2 labels");
  }
  if (feature_dim_ < 2) {
    throw Error(ErrorCode::kConfiguration, "feature_dim must be >= 2");
  }
  if (!(alpha_ >= 0.0) || !std::isfinite(alpha_)) {
    throw Error(ErrorCode::kConfiguration, "alpha must be finite and >= 0");
  }
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
    throw Error(ErrorCode::kConfiguration, "tau must be finite and > 0");
  }
  weights_.assign(label_set_.size() * feature_dim_, 0.0);
}

std::span<const double> ToyModel::Row(size_t label) const {
  return std::span<const double>(weights_).subspan(label * feature_dim_,
                                                   feature_dim_);
}

size_t ToyModel::LabelIndex(std::string_view label) const {
  for (size_t i = 0; i < label_set_.size(); ++i) {
    if (label_set_[i] == label) return i;
  }
  throw Error(ErrorCode::kLabel,
              "label '" + std::string(label) + "' not in model label set");
}

SparseVector ToyModel::Featurize(std::string_view text) const {
  return icul::Featurize(text, feature_dim_);
}

EncodedContext ToyModel::Encode(std::span<const Demonstration> context) const {
  EncodedContext out;
  for (const Demonstration& demo : context) {
    out.label_index.push_back(LabelIndex(demo.label));
    out.features.push_back(Featurize(demo.text));
    out.norms.push_back(out.features.back().Norm());
  }
  return out;
}

std::vector<double> ToyModel::Scores(const EncodedContext& context,
                                     const SparseVector& query) const {
  std::vector<double> scores(label_set_.size());
  for (size_t c = 0; c < scores.size(); ++c) scores[c] = Dot(Row(c), query);
  if (alpha_ == 0.0 || context.features.empty()) return scores;
  const double query_norm = query.Norm();
  if (query_norm == 0.0) return scores;
  const double exponent = 1.0 / tau_;
  for (size_t i = 0; i < context.features.size(); ++i) {
    if (context.norms[i] == 0.0) continue;
    double sim = Dot(query, context.features[i]) / (query_norm * context.norms[i]);
    sim = std::clamp(sim, 0.0, 1.0);
    scores[context.label_index[i]] += alpha_ * std::pow(sim, exponent);
  }
  return scores;
}

ClassDistribution ToyModel::Predict(const EncodedContext& context,
                                    const SparseVector& query) const {
  return ClassDistribution{label_set_, Softmax(Scores(context, query))};
}

ClassDistribution ToyModel::Predict(std::span<const Demonstration> context,
                                    std::string_view query) const {
  return Predict(Encode(context), Featurize(query));
}

double ToyModel::Loss(const LabeledExample& example) const {
  const size_t y = LabelIndex(example.label);
  const std::vector<double> scores = Scores({}, Featurize(example.text));
  const double max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - max);
  return -(scores[y] - max - std::log(sum));
}

bool ToyModel::AllFinite() const {
  return std::all_of(weights_.begin(), weights_.end(),
                     [](double w) { return std::isfinite(w); });
}

ToyModel TrainToy(std::span<const LabeledExample> examples,
                  const std::vector<std::string>& label_set,
                  const ToyHyper& hyper) {
  ToyModel model(label_set, hyper.feature_dim, hyper.alpha, hyper.tau);
  std::vector<size_t> counts(label_set.size(), 0);
  std::vector<SparseVector> features;
  std::vector<size_t> targets;
  features.reserve(examples.size());
  for (const LabeledExample& ex : examples) {
    targets.push_back(model.LabelIndex(ex.label));
    ++counts[targets.back()];
    features.push_back(model.Featurize(ex.text));
  }
  for (size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::kCoverage,
                  "label '" + label_set[c] + "' has no training examples");
    }
  }
  if (hyper.batch_size == 0) {
    throw Error(ErrorCode::kConfiguration, "batch_size must be >= 1");
  }

  const size_t num_labels = label_set.size();
  const size_t dim = hyper.feature_dim;
  std::vector<double>& w = model.mutable_weights();
  std::vector<size_t> order(examples.size());
  std::vector<std::vector<double>> residuals;
  for (size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(DeriveSeed("train-epoch", hyper.seed, {epoch}));
    rng.Shuffle(order);
    for (size_t start = 0; start < order.size(); start += hyper.batch_size) {
      const size_t end = std::min(order.size(), start + hyper.batch_size);
      // Residuals are taken at the pre-batch weights, then applied together.
      residuals.clear();
      for (size_t b = start; b < end; ++b) {
        const size_t i = order[b];
        std::vector<double> p = model.Predict(EncodedContext{}, features[i]).probs;
        p[targets[i]] -= 1.0;
        residuals.push_back(std::move(p));
      }
      const double step = hyper.lr / static_cast<double>(end - start);
      for (size_t b = start; b < end; ++b) {
        const SparseVector& x = features[order[b]];
        const std::vector<double>& r = residuals[b - start];
        for (size_t c = 0; c < num_labels; ++c) {
          for (const auto& [bucket, value] : x.entries) {
            w[c * dim + bucket] -= step * r[c] * value;
          }
        }
      }
    }
  }
  return model;
}

std::vector<double> GradLoss(const ToyModel& model,
                             const LabeledExample& example) {
  const size_t y = model.LabelIndex(example.label);
  const SparseVector x = model.Featurize(example.text);
  std::vector<double> p = model.Predict(EncodedContext{}, x).probs;
  p[y] -= 1.0;
  std::vector<double> grad(model.weights().size(), 0.0);
  for (size_t c = 0; c < p.size(); ++c) {
    for (const auto& [bucket, value] : x.entries) {
      grad[c * model.feature_dim() + bucket] = p[c] * value;
    }
  }
  return grad;
}

void to_json(nlohmann::json& j, const ToyModel& model) {
  j = nlohmann::json{{"feature_dim", model.feature_dim()},
                     {"alpha", model.alpha()},
                     {"tau", model.tau()},
                     {"label_set", model.label_set()},
                     {"weights", model.weights()}};
}

ToyModel ToyModelFromJson(const nlohmann::json& j) {
  try {
    ToyModel model(j.at("label_set").get<std::vector<std::string>>(),
                   j.at("feature_dim").get<size_t>(),
                   j.at("alpha").get<double>(), j.at("tau").get<double>());
    std::vector<double> weights = j.at("weights").get<std::vector<double>>();
    if (weights.size() != model.weights().size()) {
      throw Error(ErrorCode::kIntegrity, "toy model weight count mismatch");
    }
    model.mutable_weights() = std::move(weights);
    if (!model.AllFinite()) {
      throw Error(ErrorCode::kIntegrity, "toy model has non-finite weights");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIntegrity,
                std::string("malformed toy model document: ") + e.what());
  }
}

ModelHandle ModelHandle::Toy(ToyModel model) {
  ModelHandle handle;
  handle.toy_ = std::make_shared<const ToyModel>(std::move(model));
  return handle;
}

ModelHandle ModelHandle::Remote(std::shared_ptr<const RemoteModel> remote) {
  ModelHandle handle;
  handle.remote_ = std::move(remote);
  return handle;
}

const ToyModel& ModelHandle::toy() const {
  if (!toy_) {
    throw Error(ErrorCode::kCapability,
                "operation needs model parameters; remote backend is black-box");
  }
  return *toy_;
}

const RemoteModel& ModelHandle::remote() const {
  if (!remote_) {
    throw Error(ErrorCode::kCapability, "handle is not a remote backend");
  }
  return *remote_;
}

const std::vector<std::string>& ModelHandle::label_set() const {
  return toy_ ? toy_->label_set() : remote_->label_set();
}

ClassDistribution ModelHandle::Predict(std::span<const Demonstration> context,
                                       std::string_view query) const {
  if (toy_) return toy_->Predict(context, query);
  return remote_->Predict(context, query);
}

}  // namespace icul
