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
#include <cstdio>
#include <numbers>
#include <unordered_set>

#include "icul/random.h"
#include "icul/status.h"
#include "parallel.h"

namespace icul {
namespace {

std::string FormatRate(double lr) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", lr);
  return buffer;
}

}  // namespace

double Confidence(const ClassDistribution& dist, std::string_view true_label,
                  double clamp) {
  const double p = std::clamp(dist.Prob(true_label), clamp, 1.0 - clamp);
  return std::log(p) - std::log1p(-p);
}

double GaussianFit::LogPdf(double x) const {
  const double z = (x - mean) / std;
  return -0.5 * z * z - std::log(std) - 0.5 * std::log(2.0 * std::numbers::pi);
}

GaussianFit FitGaussian(std::span<const double> scores, double std_floor) {
  if (scores.size() < 2) {
    throw Error(ErrorCode::kSampleSize,
                "a Gaussian fit needs >= 2 scores, got " +
                    std::to_string(scores.size()));
  }
  const double n = static_cast<double>(scores.size());
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= n;
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  return GaussianFit{mean, std::max(std::sqrt(ss / (n - 1.0)), std_floor)};
}

LiraScore LiraForget(std::span<const double> target_scores,
                     std::span<const GaussianFit> in_fits,
                     std::span<const GaussianFit> out_fits) {
  if (target_scores.size() != in_fits.size() ||
      target_scores.size() != out_fits.size()) {
    throw Error(ErrorCode::kAlignment,
                "lira-forget inputs differ in length: " +
                    std::to_string(target_scores.size()) + " scores, " +
                    std::to_string(in_fits.size()) + " in fits, " +
                    std::to_string(out_fits.size()) + " out fits");
  }
  LiraScore out;
  for (size_t j = 0; j < target_scores.size(); ++j) {
    const double s = target_scores[j];
    out.per_point.push_back(in_fits[j].LogPdf(s) - out_fits[j].LogPdf(s));
    out.log_lr += out.per_point.back();
  }
  return out;
}

std::string_view HypothesisName(Hypothesis h) {
  return h == Hypothesis::kUnlearned ? "in" : "out";
}

std::string_view MethodKindName(MethodKind kind) {
  switch (kind) {
    case MethodKind::kBaseline:
      return "baseline";
    case MethodKind::kRetrain:
      return "retrain";
    case MethodKind::kIcul:
      return "icul";
    case MethodKind::kIcl:
      return "icl";
    case MethodKind::kRandomIcul:
      return "random_icul";
    case MethodKind::kGradientAscent:
      return "ga";
  }
  return "unknown";
}

std::string MethodSpec::Name() const {
  switch (kind) {
    case MethodKind::kBaseline:
      return "baseline";
    case MethodKind::kRetrain:
      return "retrain";
    case MethodKind::kIcul:
      return "icul(" + Parameter() + ")";
    case MethodKind::kIcl:
      return "icl(" + Parameter() + ")";
    case MethodKind::kRandomIcul:
      return "random_icul(" + Parameter() + ")";
    case MethodKind::kGradientAscent:
      return "ga(" + Parameter() + ")";
  }
  return "unknown";
}

std::string MethodSpec::Parameter() const {
  switch (kind) {
    case MethodKind::kIcul:
    case MethodKind::kIcl:
    case MethodKind::kRandomIcul:
      return std::to_string(num_correct);
    case MethodKind::kGradientAscent:
      return FormatRate(lr);
    default:
      return "";
  }
}

bool MethodSpec::NeedsParameters() const {
  return kind == MethodKind::kGradientAscent || kind == MethodKind::kRetrain;
}

ShadowEnsemble TrainShadowEnsemble(const Corpus& corpus,
                                   ShadowAssignment assignment,
                                   const ToyHyper& hyper, uint64_t run_seed) {
  ShadowEnsemble ensemble;
  const size_t k = assignment.subsets.size();
  ensemble.hypers.assign(k, hyper);
  std::vector<std::optional<ToyModel>> trained(k);
  for (size_t m = 0; m < k; ++m) {
    ensemble.hypers[m].seed = DeriveSeed("shadow-train", run_seed, {m});
  }
  internal::ParallelFor(k, 0, [&](size_t m) {
    trained[m] = TrainToy(corpus.Select(assignment.subsets[m]),
                          corpus.label_set(), ensemble.hypers[m]);
  });
  for (auto& model : trained) {
    ensemble.models.push_back(ModelHandle::Toy(std::move(*model)));
  }
  ensemble.assignment = std::move(assignment);
  return ensemble;
}

std::string_view FitModeName(FitMode mode) {
  switch (mode) {
    case FitMode::kBalancedLeaveOneOut:
      return "balanced_leave_one_out";
    case FitMode::kLeaveOneOut:
      return "leave_one_out";
    case FitMode::kPooled:
      return "pooled";
  }
  return "unknown";
}

FitMode ParseFitMode(std::string_view name) {
  for (FitMode mode : {FitMode::kBalancedLeaveOneOut, FitMode::kLeaveOneOut,
                       FitMode::kPooled}) {
    if (FitModeName(mode) == name) return mode;
  }
  throw Error(ErrorCode::kConfiguration,
              "unknown fit mode '" + std::string(name) + "'");
}

UnlearnedModel ApplyMethod(const AuditSetup& setup, size_t forget_index,
                           size_t model_index, const MethodSpec& method) {
  const ShadowEnsemble& ensemble = *setup.ensemble;
  const ShadowAssignment& assignment = ensemble.assignment;
  const ModelHandle& handle = ensemble.models.at(model_index);
  const bool is_in = assignment.IsIn(forget_index, model_index);
  if (!handle.is_toy() && method.NeedsParameters()) {
    throw Error(ErrorCode::kCapability,
                method.Name() + " needs model parameters; backend is remote");
  }
  if (!is_in || method.kind == MethodKind::kBaseline) {
    return UnlearnedModel::Identity(handle);
  }

  const Corpus& corpus = *setup.corpus;
  const ForgetSet& forget_set = assignment.forget_sets.at(forget_index);
  const std::vector<LabeledExample> forget = corpus.Select(forget_set.ids);
  switch (method.kind) {
    case MethodKind::kIcul:
    case MethodKind::kIcl:
    case MethodKind::kRandomIcul: {
      // Pool: the points this model was trained on, minus the forget set.
      std::unordered_set<std::string_view> drop(forget_set.ids.begin(),
                                                forget_set.ids.end());
      std::vector<LabeledExample> pool;
      for (const std::string& id : assignment.subsets[model_index]) {
        if (!drop.contains(id)) pool.push_back(corpus.Get(id));
      }
      IculOptions options;
      options.mode = method.kind == MethodKind::kIcul  ? ContextMode::kIcul
                     : method.kind == MethodKind::kIcl ? ContextMode::kIcl
                                                       : ContextMode::kRandomIcul;
      options.num_correct = method.num_correct;
      options.context_seed =
          DeriveSeed("icul-context", setup.run_seed, {forget_index, model_index});
      options.flip_seed = setup.run_seed;
      options.task = TaskInfo{corpus.label_set(), corpus.task_kind()};
      options.tmpl = setup.tmpl;
      return IculUnlearn(handle, forget, pool, options);
    }
    case MethodKind::kGradientAscent: {
      GaOptions options;
      options.lr = method.lr * method.lr_multiplier;
      options.epochs = method.epochs;
      options.order_seed = DeriveSeed("ga-order", setup.run_seed, {forget_index});
      return GaUnlearn(handle.toy(), forget, options);
    }
    case MethodKind::kRetrain:
      return RetrainOracle(corpus.Select(assignment.subsets[model_index]),
                           forget_set.ids, corpus.label_set(),
                           ensemble.hypers.at(model_index));
    case MethodKind::kBaseline:
      break;
  }
  return UnlearnedModel::Identity(handle);
}

ScoreTable CollectScores(const AuditSetup& setup, size_t forget_index,
                         const MethodSpec& method) {
  const ShadowEnsemble& ensemble = *setup.ensemble;
  const ShadowAssignment& assignment = ensemble.assignment;
  if (forget_index >= assignment.forget_sets.size()) {
    throw Error(ErrorCode::kConfiguration,
                "forget set " + std::to_string(forget_index) +
                    " is not registered in the shadow assignment");
  }
  const size_t k = ensemble.models.size();
  ScoreTable table;
  table.forget_index = forget_index;
  table.point_ids = assignment.forget_sets[forget_index].ids;
  table.scores.resize(k);
  table.is_in.resize(k);
  const std::vector<LabeledExample> forget =
      setup.corpus->Select(table.point_ids);
  for (size_t m = 0; m < k; ++m) table.is_in[m] = assignment.IsIn(forget_index, m);

  internal::ParallelFor(k, setup.threads, [&](size_t m) {
    const UnlearnedModel model = ApplyMethod(setup, forget_index, m, method);
    std::vector<double> row;
    for (const LabeledExample& ex : forget) {
      row.push_back(Confidence(model.Predict(ex.text), ex.label,
                               setup.prob_clamp));
    }
    table.scores[m] = std::move(row);
    if (setup.on_model) setup.on_model(forget_index, m, model);
  });
  return table;
}

FitMembers SelectFitMembers(const std::vector<bool>& is_in, size_t model_index,
                            FitMode mode) {
  std::vector<size_t> in_group;
  std::vector<size_t> out_group;
  for (size_t m = 0; m < is_in.size(); ++m) {
    (is_in[m] ? in_group : out_group).push_back(m);
  }
  FitMembers members{in_group, out_group};
  if (mode != FitMode::kPooled) {
    std::vector<size_t>& own = is_in[model_index] ? members.in_models
                                                  : members.out_models;
    std::vector<size_t>& other = is_in[model_index] ? members.out_models
                                                    : members.in_models;
    const std::vector<size_t>& own_group = is_in[model_index] ? in_group
                                                              : out_group;
    const size_t rank = static_cast<size_t>(
        std::find(own_group.begin(), own_group.end(), model_index) -
        own_group.begin());
    own.erase(std::find(own.begin(), own.end(), model_index));
    if (mode == FitMode::kBalancedLeaveOneOut && !other.empty()) {
      // Partner chosen by position only, never by score.
      other.erase(other.begin() + static_cast<ptrdiff_t>(rank % other.size()));
    }
  }
  if (members.in_models.size() < 2 || members.out_models.size() < 2) {
    throw Error(ErrorCode::kSampleSize,
                "fit mode " + std::string(FitModeName(mode)) +
                    " leaves fewer than two models in a group");
  }
  return members;
}

std::vector<AuditRecord> ScoreForgetSet(const ScoreTable& table, FitMode mode,
                                        double std_floor) {
  const size_t k = table.scores.size();
  const size_t j = table.point_ids.size();
  std::vector<AuditRecord> records;
  std::vector<double> column;
  for (size_t m = 0; m < k; ++m) {
    const FitMembers members = SelectFitMembers(table.is_in, m, mode);
    std::vector<GaussianFit> in_fits;
    std::vector<GaussianFit> out_fits;
    for (size_t p = 0; p < j; ++p) {
      column.clear();
      for (size_t i : members.in_models) column.push_back(table.scores[i][p]);
      in_fits.push_back(FitGaussian(column, std_floor));
      column.clear();
      for (size_t i : members.out_models) column.push_back(table.scores[i][p]);
      out_fits.push_back(FitGaussian(column, std_floor));
    }
    AuditRecord record;
    record.forget_index = table.forget_index;
    record.model_index = m;
    record.label = table.is_in[m] ? Hypothesis::kUnlearned : Hypothesis::kRetrained;
    record.score = LiraForget(table.scores[m], in_fits, out_fits);
    records.push_back(std::move(record));
  }
  return records;
}

AuditResult RunAudit(const AuditSetup& setup,
                     std::span<const size_t> forget_indices,
                     const MethodSpec& method) {
  AuditResult result;
  result.tables.resize(forget_indices.size());
  // Parallel across forget sets; each table is filled serially.
  AuditSetup serial = setup;
  serial.threads = 1;
  internal::ParallelFor(forget_indices.size(), setup.threads, [&](size_t i) {
    result.tables[i] = CollectScores(serial, forget_indices[i], method);
  });
  for (const ScoreTable& table : result.tables) {
    std::vector<AuditRecord> records =
        ScoreForgetSet(table, setup.fit_mode, setup.std_floor);
    for (AuditRecord& r : records) result.records.push_back(std::move(r));
  }
  return result;
}

}  // namespace icul
