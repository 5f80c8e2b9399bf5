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

#ifndef ICUL_METRICS_H_
#define ICUL_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icul/audit.h"
#include "icul/corpus.h"
#include "icul/unlearn.h"

namespace icul {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  bool operator==(const RocPoint&) const = default;
};

// From (0,0) to (1,1), both coordinates non-decreasing.
struct RocCurve {
  std::vector<RocPoint> points;
};

// Empirical ROC with H1 (unlearned) as the positive class: one point per
// distinct score, swept from high to low, ties grouped. Throws kClass unless
// both classes are present, kAlignment on length mismatch.
RocCurve Roc(std::span<const double> scores,
             std::span<const Hypothesis> labels);

// Random guessing: the diagonal.
RocCurve BenchmarkCurve();

// Trapezoidal area.
double Auc(const RocCurve& curve);

// Linear interpolation between the curve points bracketing `fpr`; at an
// exact vertex the highest TPR reached at that FPR.
double TprAtFpr(const RocCurve& curve, double fpr);

struct AccuracyReport {
  std::optional<double> train_acc;
  std::optional<double> forget_acc;
  double test_acc = 0.0;
};

// Fraction of examples whose argmax label is correct; nullopt when empty.
std::optional<double> Accuracy(const UnlearnedModel& model,
                               std::span<const LabeledExample> examples);

// Throws kSize for an empty test list.
AccuracyReport Accuracies(const UnlearnedModel& model,
                          std::span<const LabeledExample> train,
                          std::span<const LabeledExample> forget,
                          std::span<const LabeledExample> test);

// Shortest decimal text that parses back to the same double.
std::string FormatNumber(double x);

// "fpr,tpr" header then one row per curve point.
std::string FormatRocCsv(const RocCurve& curve);

struct SummaryRow {
  std::string method;     // MethodKindName
  size_t j = 0;
  std::string parameter;  // L or the nominal GA rate; empty otherwise
  double auc = 0.0;
  std::vector<double> tpr;  // aligned with the FPR grid
  std::optional<double> train_acc;
  std::optional<double> forget_acc;
  std::optional<double> test_acc;
};

// "tpr_at_1e-2" for 0.01; decimal text for FPRs off the powers of ten.
std::string TprColumnName(double fpr);

// Columns: method, J, L_or_lr, auc, one tpr_at_<fpr> per grid entry,
// train_acc, forget_acc, test_acc. Absent values are empty cells.
std::string FormatSummaryCsv(std::span<const double> fpr_grid,
                             std::span<const SummaryRow> rows);

struct PlotSeries {
  std::string name;
  RocCurve curve;
};

// Log-log ROC plot, both axes clipped to [1e-3, 1], with the diagonal
// Benchmark drawn dashed.
std::string RenderRocSvg(std::span<const PlotSeries> series,
                         std::string_view title);

}  // namespace icul

#endif  // ICUL_METRICS_H_
