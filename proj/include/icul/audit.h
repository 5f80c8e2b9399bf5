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

// Likelihood-ratio audit of unlearning.
//
// For a forget set S_f, shadow models trained with S_f are run through the
// unlearning method and scored on S_f (samples of the "unlearned" law, H1);
// shadow models trained without S_f are scored directly (the "retrained"
// law, H0). Per forget point, a Gaussian is fitted to each group's logit
// confidences and a model under test is scored by
//
//   log Lambda = sum_j [ log N(s_j; in_j) - log N(s_j; out_j) ].

#ifndef ICUL_AUDIT_H_
#define ICUL_AUDIT_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icul/corpus.h"
#include "icul/model.h"
#include "icul/prompting.h"
#include "icul/unlearn.h"

namespace icul {

inline constexpr double kDefaultProbClamp = 1e-12;
inline constexpr double kDefaultStdFloor = 1e-6;

// log p - log(1 - p) of the true label, p clamped to [clamp, 1 - clamp].
// Throws kLabel for labels outside the distribution.
double Confidence(const ClassDistribution& dist, std::string_view true_label,
                  double clamp = kDefaultProbClamp);

struct GaussianFit {
  double mean = 0.0;
  double std = 1.0;

  double LogPdf(double x) const;
  bool operator==(const GaussianFit&) const = default;
};

// Sample mean and (n-1) standard deviation floored at `std_floor`.
// Throws kSampleSize for fewer than two scores.
GaussianFit FitGaussian(std::span<const double> scores,
                        double std_floor = kDefaultStdFloor);

struct LiraScore {
  double log_lr = 0.0;
  std::vector<double> per_point;
};

// Throws kAlignment when the three inputs differ in length.
LiraScore LiraForget(std::span<const double> target_scores,
                     std::span<const GaussianFit> in_fits,
                     std::span<const GaussianFit> out_fits);

// Ground truth of an audited model: H1 when it was trained on the forget
// set and then unlearned, H0 when it never saw the forget set.
enum class Hypothesis { kRetrained, kUnlearned };

std::string_view HypothesisName(Hypothesis h);

enum class MethodKind { kBaseline, kIcul, kIcl, kRandomIcul, kGradientAscent,
                        kRetrain };

// "baseline", "retrain", "icul", "icl", "random_icul", "ga".
std::string_view MethodKindName(MethodKind kind);

struct MethodSpec {
  MethodKind kind = MethodKind::kBaseline;
  size_t num_correct = 6;     // L, in-context methods
  double lr = 5e-5;           // nominal GA rate
  double lr_multiplier = 1.0; // GA runs at lr * lr_multiplier
  size_t epochs = 1;          // GA epochs per point

  // "baseline", "retrain", "icul(6)", "icl(6)", "random_icul(6)", "ga(5e-05)".
  std::string Name() const;
  // "6" for context methods, "5e-05" for GA, "" otherwise.
  std::string Parameter() const;
  bool NeedsParameters() const;
};

struct ShadowEnsemble {
  ShadowAssignment assignment;
  std::vector<ModelHandle> models;
  // Training hyperparameters of each model (seed included); reused by the
  // retraining oracle.
  std::vector<ToyHyper> hypers;
};

// Trains model i on subset i with seed DeriveSeed("shadow-train", run_seed, i).
ShadowEnsemble TrainShadowEnsemble(const Corpus& corpus,
                                   ShadowAssignment assignment,
                                   const ToyHyper& hyper, uint64_t run_seed);

enum class FitMode {
  // Scored model left out of its own group and one partner model left out
  // of the other, so both fits use equally many samples.
  kBalancedLeaveOneOut,
  // Scored model left out of its own group only.
  kLeaveOneOut,
  // Every model in both fits.
  kPooled,
};

std::string_view FitModeName(FitMode mode);
FitMode ParseFitMode(std::string_view name);

// Everything score collection needs besides the method.
struct AuditSetup {
  const Corpus* corpus = nullptr;
  const ShadowEnsemble* ensemble = nullptr;
  PromptTemplate tmpl;
  uint64_t run_seed = 0;
  double prob_clamp = kDefaultProbClamp;
  double std_floor = kDefaultStdFloor;
  FitMode fit_mode = FitMode::kBalancedLeaveOneOut;
  // Worker threads for per-model work; 0 picks the hardware concurrency.
  size_t threads = 0;
  // Called once per (forget set, model) with the model that was scored,
  // possibly from several threads at once.
  std::function<void(size_t forget_index, size_t model_index,
                     const UnlearnedModel& model)>
      on_model;
};

// The model the method yields for (forget set f, shadow model m). IN models
// are unlearned; OUT models (and the baseline) are returned unchanged.
// Throws kCapability for weight-based methods on remote backends.
UnlearnedModel ApplyMethod(const AuditSetup& setup, size_t forget_index,
                           size_t model_index, const MethodSpec& method);

// Confidences of every shadow model on one forget set.
struct ScoreTable {
  size_t forget_index = 0;
  std::vector<std::string> point_ids;
  // scores[m][j]: model m on forget point j.
  std::vector<std::vector<double>> scores;
  std::vector<bool> is_in;
};

ScoreTable CollectScores(const AuditSetup& setup, size_t forget_index,
                         const MethodSpec& method);

struct FitMembers {
  std::vector<size_t> in_models;
  std::vector<size_t> out_models;
};

// Which models feed the IN and OUT fits used to score `model_index`.
// Throws kSampleSize when a group would have fewer than two members.
FitMembers SelectFitMembers(const std::vector<bool>& is_in, size_t model_index,
                            FitMode mode);

struct AuditRecord {
  size_t forget_index = 0;
  size_t model_index = 0;
  Hypothesis label = Hypothesis::kRetrained;
  LiraScore score;
};

// One scored, ground-truth-labelled record per model, in model order.
std::vector<AuditRecord> ScoreForgetSet(const ScoreTable& table, FitMode mode,
                                        double std_floor = kDefaultStdFloor);

struct AuditResult {
  std::vector<ScoreTable> tables;
  std::vector<AuditRecord> records;
};

// Audits the given forget sets (all registered in the ensemble).
AuditResult RunAudit(const AuditSetup& setup,
                     std::span<const size_t> forget_indices,
                     const MethodSpec& method);

}  // namespace icul

#endif  // ICUL_AUDIT_H_
