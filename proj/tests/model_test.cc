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
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include "icul/random.h"
#include "test_util.h"

namespace icul {
namespace {

const std::vector<std::string> kLabels = {"negative", "positive"};

ToyModel RandomModel(uint64_t seed, size_t dim, double alpha = 1.0) {
  ToyModel model({"a", "b", "c"}, dim, alpha, 0.5);
  Rng rng(seed);
  for (double& w : model.mutable_weights()) w = rng.Normal();
  return model;
}

double Accuracy(const ToyModel& model, const std::vector<LabeledExample>& ex) {
  size_t correct = 0;
  for (const LabeledExample& e : ex) {
    correct += model.Predict({}, e.text).Argmax() == e.label;
  }
  return static_cast<double>(correct) / ex.size();
}

TEST(SoftmaxTest, NormalizedAndShiftInvariant) {
  const std::vector<double> p = Softmax(std::vector<double>{1.0, 2.0, 3.0});
  EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-15);
  const std::vector<double> q =
      Softmax(std::vector<double>{1001.0, 1002.0, 1003.0});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
}

TEST(ToyModelTest, RejectsBadHyperparameters) {
  EXPECT_ICUL_ERROR(ToyModel(kLabels, 16, -1.0, 0.5),
                    ErrorCode::kConfiguration);
  EXPECT_ICUL_ERROR(ToyModel(kLabels, 16, 1.0, 0.0),
                    ErrorCode::kConfiguration);
  EXPECT_ICUL_ERROR(ToyModel({"only"}, 16, 1.0, 0.5),
                    ErrorCode::kConfiguration);
}

TEST(ToyModelTest, ZeroEpochsGivesUniformPredictions) {
  ToyHyper hyper;
  hyper.epochs = 0;
  const auto examples = testing::SeparableExamples(20);
  const ToyModel model = TrainToy(examples, kLabels, hyper);
  const ClassDistribution d = model.Predict({}, "good film");
  EXPECT_DOUBLE_EQ(d.Prob("positive"), 0.5);
  EXPECT_EQ(d.Argmax(), "negative");  // ties go to the first label
}

TEST(ToyModelTest, LearnsSeparableData) {
  ToyHyper hyper;
  hyper.epochs = 10;
  const auto examples = testing::SeparableExamples(40);
  const ToyModel model = TrainToy(examples, kLabels, hyper);
  EXPECT_EQ(Accuracy(model, examples), 1.0);
}

TEST(ToyModelTest, TrainingIsDeterministic) {
  ToyHyper hyper;
  hyper.seed = 11;
  hyper.batch_size = 4;
  const auto examples = testing::SeparableExamples(30);
  EXPECT_EQ(TrainToy(examples, kLabels, hyper),
            TrainToy(examples, kLabels, hyper));
}

TEST(ToyModelTest, TrainingErrors) {
  auto examples = testing::SeparableExamples(4);
  for (auto& e : examples) e.label = "positive";
  EXPECT_ICUL_ERROR(TrainToy(examples, kLabels, ToyHyper{}),
                    ErrorCode::kCoverage);
  examples[0].label = "neutral";
  EXPECT_ICUL_ERROR(TrainToy(examples, kLabels, ToyHyper{}),
                    ErrorCode::kLabel);
}

// Central differences against the analytic gradient, on random weights
// and random examples.
TEST(GradLossTest, MatchesFiniteDifferences) {
  const std::vector<std::string> words = {"red", "green", "blue", "cyan",
                                          "pink", "gray", "teal"};
  const std::vector<std::string> labels = {"a", "b", "c"};
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    ToyModel model = RandomModel(trial, 32);
    std::string text;
    for (size_t i = 0, n = 1 + rng.Below(6); i < n; ++i) {
      text += words[rng.Below(words.size())] + " ";
    }
    const LabeledExample ex{"x", text, labels[rng.Below(3)]};
    const std::vector<double> grad = GradLoss(model, ex);
    double diff2 = 0.0;
    double norm2 = 0.0;
    const double h = 1e-5;
    for (size_t i = 0; i < grad.size(); ++i) {
      const double w = model.weights()[i];
      model.mutable_weights()[i] = w + h;
      const double up = model.Loss(ex);
      model.mutable_weights()[i] = w - h;
      const double down = model.Loss(ex);
      model.mutable_weights()[i] = w;
      const double fd = (up - down) / (2 * h);
      diff2 += (fd - grad[i]) * (fd - grad[i]);
      norm2 += grad[i] * grad[i];
    }
    ASSERT_GT(norm2, 0.0);
    EXPECT_LT(std::sqrt(diff2 / norm2), 1e-5) << "trial " << trial;
  }
}

TEST(ContextTest, ZeroAlphaIgnoresTheContext) {
  const ToyModel model = RandomModel(1, 64, 0.0);
  const std::vector<Demonstration> context = {{"red green", "a"},
                                              {"red blue", "c"}};
  const ClassDistribution with = model.Predict(context, "red green");
  const ClassDistribution without = model.Predict({}, "red green");
  EXPECT_EQ(with.probs, without.probs);
}

TEST(ContextTest, QueryInContextDominatesForLargeAlpha) {
  const ToyModel model = RandomModel(2, 64, 50.0);
  for (const std::string label : {"a", "b", "c"}) {
    const std::vector<Demonstration> context = {{"red green", label},
                                                {"pink teal", "a"}};
    EXPECT_EQ(model.Predict(context, "red green").Argmax(), label);
  }
}

TEST(ContextTest, ContextTermMatchesFormula) {
  ToyModel model({"a", "b"}, 4096, 1.5, 0.5);
  const std::vector<Demonstration> context = {{"red green", "b"}};
  const SparseVector q = model.Featurize("red blue");
  const double cos = Cosine(q, model.Featurize("red green"));
  const std::vector<double> scores = model.Scores(model.Encode(context), q);
  EXPECT_DOUBLE_EQ(scores[0], 0.0);
  EXPECT_NEAR(scores[1], 1.5 * std::pow(cos, 2.0), 1e-12);
}

TEST(ClassDistributionTest, UnknownLabel) {
  const ToyModel model = RandomModel(4, 16);
  EXPECT_ICUL_ERROR(model.Predict({}, "red").Prob("z"), ErrorCode::kLabel);
}

TEST(ToyModelJsonTest, RoundTripAndCorruption) {
  const ToyModel model = RandomModel(5, 16);
  nlohmann::json doc = model;
  EXPECT_EQ(ToyModelFromJson(doc), model);
  doc["weights"].erase(0);
  EXPECT_ICUL_ERROR(ToyModelFromJson(doc), ErrorCode::kIntegrity);
  EXPECT_ICUL_ERROR(ToyModelFromJson(nlohmann::json::object()),
                    ErrorCode::kIntegrity);
}

TEST(ModelHandleTest, ToyHandleDelegates) {
  const ToyModel model = RandomModel(6, 16);
  const ModelHandle handle = ModelHandle::Toy(model);
  EXPECT_TRUE(handle.is_toy());
  EXPECT_EQ(handle.query_temperature(), 0.0);
  EXPECT_EQ(handle.Predict({}, "red").probs, model.Predict({}, "red").probs);
}

}  // namespace
}  // namespace icul
