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
#include "icul/audit.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <vector>

#include <gtest/gtest.h>
#include "icul/random.h"
#include "test_util.h"

namespace icul {
namespace {

ClassDistribution Binary(double p_positive) {
  return {{"negative", "positive"}, {1.0 - p_positive, p_positive}};
}

TEST(ConfidenceTest, KnownValues) {
  EXPECT_NEAR(Confidence(Binary(0.9), "positive"), 2.19722, 1e-5);
  EXPECT_DOUBLE_EQ(Confidence(Binary(0.5), "positive"), 0.0);
  EXPECT_NEAR(Confidence(Binary(1.0), "positive"), 27.631, 1e-3);
  EXPECT_NEAR(Confidence(Binary(1.0), "negative"), -27.631, 1e-3);
  EXPECT_ICUL_ERROR(Confidence(Binary(0.5), "neutral"), ErrorCode::kLabel);
}

TEST(ConfidenceTest, MulticlassUsesTheComplement) {
  const ClassDistribution d{{"a", "b", "c"}, {0.5, 0.3, 0.2}};
  EXPECT_DOUBLE_EQ(Confidence(d, "a"), 0.0);
  EXPECT_NEAR(Confidence(d, "c"), std::log(0.2 / 0.8), 1e-12);
}

TEST(FitGaussianTest, SampleStatistics) {
  const std::vector<double> two = {0.0, 2.0};
  const GaussianFit fit = FitGaussian(two);
  EXPECT_DOUBLE_EQ(fit.mean, 1.0);
  EXPECT_NEAR(fit.std, 1.41421, 1e-5);
  const std::vector<double> flat = {1.0, 1.0, 1.0, 1.0};
  EXPECT_EQ(FitGaussian(flat).std, kDefaultStdFloor);
  EXPECT_EQ(FitGaussian(flat, 0.5).std, 0.5);
  const std::vector<double> one = {1.0};
  EXPECT_ICUL_ERROR(FitGaussian(one), ErrorCode::kSampleSize);
}

TEST(FitGaussianTest, RecoversKnownNormal) {
  Rng rng(12);
  std::vector<double> xs(100000);
  for (double& x : xs) x = 3.0 + 2.0 * rng.Normal();
  const GaussianFit fit = FitGaussian(xs);
  EXPECT_NEAR(fit.mean, 3.0, 0.02);
  EXPECT_NEAR(fit.std, 2.0, 0.02);
}

TEST(GaussianFitTest, LogPdf) {
  const GaussianFit standard{0.0, 1.0};
  EXPECT_NEAR(standard.LogPdf(0.0), -0.5 * std::log(2 * M_PI), 1e-12);
  EXPECT_NEAR(GaussianFit({1.0, 2.0}).LogPdf(3.0),
              -0.5 - std::log(2.0) - 0.5 * std::log(2 * M_PI), 1e-12);
}

TEST(LiraForgetTest, WorkedExample) {
  const std::vector<double> s = {1.0};
  const std::vector<GaussianFit> in = {{1.0, 1.0}};
  const std::vector<GaussianFit> out = {{3.0, 1.0}};
  const LiraScore score = LiraForget(s, in, out);
  EXPECT_NEAR(score.log_lr, 2.0, 1e-12);
  ASSERT_EQ(score.per_point.size(), 1u);
}

// Properties on random fits: swapping IN and OUT negates the score, equal
// fits give zero, and the total is the sum of the per-point terms.
TEST(LiraForgetTest, AlgebraicProperties) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng.Below(6);
    std::vector<double> s(n);
    std::vector<GaussianFit> in(n), out(n);
    for (size_t j = 0; j < n; ++j) {
      s[j] = 4 * rng.Normal();
      in[j] = {rng.Normal(), 0.1 + rng.Uniform()};
      out[j] = {rng.Normal(), 0.1 + rng.Uniform()};
    }
    const LiraScore forward = LiraForget(s, in, out);
    EXPECT_NEAR(LiraForget(s, out, in).log_lr, -forward.log_lr, 1e-9);
    EXPECT_EQ(LiraForget(s, in, in).log_lr, 0.0);
    double sum = 0.0;
    for (double v : forward.per_point) sum += v;
    EXPECT_NEAR(sum, forward.log_lr, 1e-9);
  }
}

TEST(LiraForgetTest, MisalignedInputs) {
  const std::vector<double> s = {1.0, 2.0};
  const std::vector<GaussianFit> one = {{0.0, 1.0}};
  EXPECT_ICUL_ERROR(LiraForget(s, one, one), ErrorCode::kAlignment);
}

std::vector<bool> HalfIn(size_t k) {
  std::vector<bool> is_in(k);
  for (size_t m = 0; m < k; ++m) is_in[m] = m % 2 == 0;
  return is_in;
}

TEST(SelectFitMembersTest, ModesAndGroupSizes) {
  const std::vector<bool> is_in = HalfIn(10);
  for (size_t m = 0; m < 10; ++m) {
    const FitMembers balanced =
        SelectFitMembers(is_in, m, FitMode::kBalancedLeaveOneOut);
    EXPECT_EQ(balanced.in_models.size(), 4u);
    EXPECT_EQ(balanced.out_models.size(), 4u);
    const FitMembers loo = SelectFitMembers(is_in, m, FitMode::kLeaveOneOut);
    EXPECT_EQ(loo.in_models.size() + loo.out_models.size(), 9u);
    for (const FitMembers& f : {balanced, loo}) {
      EXPECT_EQ(std::count(f.in_models.begin(), f.in_models.end(), m), 0);
      EXPECT_EQ(std::count(f.out_models.begin(), f.out_models.end(), m), 0);
      for (size_t i : f.in_models) EXPECT_TRUE(is_in[i]);
      for (size_t o : f.out_models) EXPECT_FALSE(is_in[o]);
    }
    const FitMembers pooled = SelectFitMembers(is_in, m, FitMode::kPooled);
    EXPECT_EQ(pooled.in_models.size(), 5u);
    EXPECT_EQ(pooled.out_models.size(), 5u);
  }
  EXPECT_ICUL_ERROR(
      SelectFitMembers(HalfIn(4), 0, FitMode::kBalancedLeaveOneOut),
      ErrorCode::kSampleSize);
}

TEST(FitModeTest, NamesRoundTrip) {
  for (FitMode mode : {FitMode::kBalancedLeaveOneOut, FitMode::kLeaveOneOut,
                       FitMode::kPooled}) {
    EXPECT_EQ(ParseFitMode(FitModeName(mode)), mode);
  }
  EXPECT_ICUL_ERROR(ParseFitMode("median"), ErrorCode::kConfiguration);
}

TEST(ScoreForgetSetTest, SeparatedGroupsGetOppositeSigns) {
  ScoreTable table;
  table.point_ids = {"a", "b"};
  table.is_in = HalfIn(10);
  Rng rng(2);
  for (size_t m = 0; m < 10; ++m) {
    const double centre = table.is_in[m] ? 5.0 : -5.0;
    table.scores.push_back({centre + rng.Normal(), centre + rng.Normal()});
  }
  const std::vector<AuditRecord> records =
      ScoreForgetSet(table, FitMode::kBalancedLeaveOneOut);
  ASSERT_EQ(records.size(), 10u);
  for (size_t m = 0; m < 10; ++m) {
    EXPECT_EQ(records[m].model_index, m);
    EXPECT_EQ(records[m].label, table.is_in[m] ? Hypothesis::kUnlearned
                                               : Hypothesis::kRetrained);
    EXPECT_EQ(records[m].score.log_lr > 0, table.is_in[m]);
  }
}

class SmallEnsembleTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto examples = testing::SeparableExamples(80);
    corpus_ = std::make_unique<Corpus>(Corpus::Create(examples));
    const SplitPlan plan = MakeSplit(*corpus_, 1, 70, 10);
    const std::vector<size_t> sizes = {1, 2, 2, 3};
    auto sets = SelectDisjointForgetSets(plan, sizes, 1);
    ToyHyper hyper;
    hyper.epochs = 3;
    ensemble_ = TrainShadowEnsemble(
        *corpus_, ShadowSubsets(plan, sets, 10, 0.5, 1), hyper, 1);
    setup_.corpus = corpus_.get();
    setup_.ensemble = &ensemble_;
    setup_.threads = 1;
  }

  std::unique_ptr<Corpus> corpus_;
  ShadowEnsemble ensemble_;
  AuditSetup setup_;
};

TEST_F(SmallEnsembleTest, FourSetsGiveFortyRecords) {
  const std::vector<size_t> indices = {0, 1, 2, 3};
  MethodSpec icul;
  icul.kind = MethodKind::kIcul;
  icul.num_correct = 2;
  const AuditResult result = RunAudit(setup_, indices, icul);
  EXPECT_EQ(result.tables.size(), 4u);
  ASSERT_EQ(result.records.size(), 40u);
  size_t unlearned = 0;
  for (const AuditRecord& r : result.records) {
    unlearned += r.label == Hypothesis::kUnlearned;
    EXPECT_EQ(r.label == Hypothesis::kUnlearned,
              ensemble_.assignment.IsIn(r.forget_index, r.model_index));
  }
  EXPECT_EQ(unlearned, 20u);
}

TEST_F(SmallEnsembleTest, ApplyMethodOnlyTouchesInModels) {
  MethodSpec ga;
  ga.kind = MethodKind::kGradientAscent;
  ga.lr = 1e-2;
  for (size_t m = 0; m < 10; ++m) {
    const UnlearnedModel u = ApplyMethod(setup_, 0, m, ga);
    if (ensemble_.assignment.IsIn(0, m)) {
      EXPECT_EQ(u.kind(), UnlearnKind::kGradientAscent);
    } else {
      EXPECT_EQ(u.kind(), UnlearnKind::kIdentity);
      EXPECT_EQ(u.handle().toy(), ensemble_.models[m].toy());
    }
  }
}

TEST_F(SmallEnsembleTest, CollectScoresIsDeterministicAcrossThreads) {
  MethodSpec icul;
  icul.kind = MethodKind::kIcul;
  icul.num_correct = 2;
  const ScoreTable one = CollectScores(setup_, 2, icul);
  setup_.threads = 3;
  size_t calls = 0;
  std::mutex mu;
  setup_.on_model = [&](size_t, size_t, const UnlearnedModel&) {
    std::lock_guard<std::mutex> lock(mu);
    ++calls;
  };
  const ScoreTable three = CollectScores(setup_, 2, icul);
  EXPECT_EQ(one.scores, three.scores);
  EXPECT_EQ(one.point_ids.size(), 2u);
  EXPECT_EQ(calls, 10u);
}

TEST(MethodSpecTest, NamesAndParameters) {
  MethodSpec m;
  EXPECT_EQ(m.Name(), "baseline");
  EXPECT_FALSE(m.NeedsParameters());
  m.kind = MethodKind::kRandomIcul;
  EXPECT_EQ(m.Name(), "random_icul(6)");
  EXPECT_EQ(m.Parameter(), "6");
  m.kind = MethodKind::kGradientAscent;
  EXPECT_EQ(m.Name(), "ga(5e-05)");
  EXPECT_TRUE(m.NeedsParameters());
  m.kind = MethodKind::kRetrain;
  EXPECT_EQ(m.Name(), "retrain");
  EXPECT_EQ(MethodKindName(MethodKind::kIcl), "icl");
}

}  // namespace
}  // namespace icul
