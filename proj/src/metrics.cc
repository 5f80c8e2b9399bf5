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

#include "icul/metrics.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "icul/status.h"

namespace icul {

RocCurve Roc(std::span<const double> scores,
             std::span<const Hypothesis> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kAlignment, "scores and labels differ in length");
  }
  const size_t positives = static_cast<size_t>(
      std::count(labels.begin(), labels.end(), Hypothesis::kUnlearned));
  const size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kClass, "ROC needs both H0 and H1 samples");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  size_t tp = 0;
  size_t fp = 0;
  for (size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      (labels[order[i]] == Hypothesis::kUnlearned ? tp : fp) += 1;
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / negatives,
                            static_cast<double>(tp) / positives});
  }
  // Exact endpoint regardless of rounding in the divisions above.
  curve.points.back() = {1.0, 1.0};
  return curve;
}

RocCurve BenchmarkCurve() { return RocCurve{{{0.0, 0.0}, {1.0, 1.0}}}; }

double Auc(const RocCurve& curve) {
  double area = 0.0;
  for (size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return std::clamp(area, 0.0, 1.0);
}

double TprAtFpr(const RocCurve& curve, double fpr) {
  const std::vector<RocPoint>& pts = curve.points;
  double best_at_vertex = -1.0;
  for (const RocPoint& p : pts) {
    if (p.fpr == fpr) best_at_vertex = std::max(best_at_vertex, p.tpr);
  }
  if (best_at_vertex >= 0.0) return best_at_vertex;
  for (size_t i = 1; i < pts.size(); ++i) {
    const RocPoint& a = pts[i - 1];
    const RocPoint& b = pts[i];
    if (a.fpr < fpr && fpr < b.fpr) {
      return a.tpr + (b.tpr - a.tpr) * (fpr - a.fpr) / (b.fpr - a.fpr);
    }
  }
  return fpr <= 0.0 ? pts.front().tpr : pts.back().tpr;
}

std::optional<double> Accuracy(const UnlearnedModel& model,
                               std::span<const LabeledExample> examples) {
  if (examples.empty()) return std::nullopt;
  size_t correct = 0;
  for (const LabeledExample& ex : examples) {
    if (model.Predict(ex.text).Argmax() == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

AccuracyReport Accuracies(const UnlearnedModel& model,
                          std::span<const LabeledExample> train,
                          std::span<const LabeledExample> forget,
                          std::span<const LabeledExample> test) {
  if (test.empty()) {
    throw Error(ErrorCode::kSize, "accuracy needs a non-empty test list");
  }
  AccuracyReport report;
  report.train_acc = Accuracy(model, train);
  report.forget_acc = Accuracy(model, forget);
  report.test_acc = *Accuracy(model, test);
  return report;
}

std::string FormatNumber(double x) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), result.ptr);
}

std::string FormatRocCsv(const RocCurve& curve) {
  std::string out = "fpr,tpr\n";
  for (const RocPoint& p : curve.points) {
    out += FormatNumber(p.fpr) + "," + FormatNumber(p.tpr) + "\n";
  }
  return out;
}

std::string TprColumnName(double fpr) {
  const double exponent = std::log10(fpr);
  const double rounded = std::round(exponent);
  if (std::abs(exponent - rounded) < 1e-12) {
    return "tpr_at_1e" + std::to_string(static_cast<int>(rounded));
  }
  return "tpr_at_" + FormatNumber(fpr);
}

namespace {

std::string Cell(const std::optional<double>& x) {
  return x ? FormatNumber(*x) : std::string();
}

}  // namespace

std::string FormatSummaryCsv(std::span<const double> fpr_grid,
                             std::span<const SummaryRow> rows) {
  std::string out = "method,J,L_or_lr,auc";
  for (double f : fpr_grid) out += "," + TprColumnName(f);
  out += ",train_acc,forget_acc,test_acc\n";
  for (const SummaryRow& row : rows) {
    out += row.method + "," + std::to_string(row.j) + "," + row.parameter +
           "," + FormatNumber(row.auc);
    for (double t : row.tpr) out += "," + FormatNumber(t);
    out += "," + Cell(row.train_acc) + "," + Cell(row.forget_acc) + "," +
           Cell(row.test_acc) + "\n";
  }
  return out;
}

namespace {

constexpr double kPlotMin = 1e-3;
constexpr double kSize = 360.0;
constexpr double kLeft = 60.0;
constexpr double kTop = 40.0;

constexpr std::array<const char*, 8> kColors = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

// Position along a log axis spanning [1e-3, 1], in [0, 1].
double LogFraction(double v) {
  const double clipped = std::clamp(v, kPlotMin, 1.0);
  return (std::log10(clipped) - std::log10(kPlotMin)) / -std::log10(kPlotMin);
}

std::string Coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string XmlEscape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string Polyline(const RocCurve& curve, const std::string& style) {
  std::string points;
  for (const RocPoint& p : curve.points) {
    const double x = kLeft + LogFraction(p.fpr) * kSize;
    const double y = kTop + (1.0 - LogFraction(p.tpr)) * kSize;
    if (!points.empty()) points.push_back(' ');
    points += Coord(x) + "," + Coord(y);
  }
  return "<polyline fill=\"none\" " + style + " points=\"" + points +
         "\"/>\n";
}

}  // namespace

std::string RenderRocSvg(std::span<const PlotSeries> series,
                         std::string_view title) {
  const double width = kLeft + kSize + 200.0;
  const double height = kTop + kSize + 50.0;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    Coord(width) + "\" height=\"" + Coord(height) +
                    "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + Coord(kLeft) + "\" y=\"20\" font-size=\"13\">" +
         XmlEscape(title) + "</text>\n";
  // Decade grid and tick labels.
  for (int e = -3; e <= 0; ++e) {
    const double f = LogFraction(std::pow(10.0, e));
    const double x = kLeft + f * kSize;
    const double y = kTop + (1.0 - f) * kSize;
    const std::string label = e == 0 ? "1" : "1e" + std::to_string(e);
    svg += "<line x1=\"" + Coord(x) + "\" y1=\"" + Coord(kTop) + "\" x2=\"" +
           Coord(x) + "\" y2=\"" + Coord(kTop + kSize) +
           "\" stroke=\"#ddd\"/>\n";
    svg += "<line x1=\"" + Coord(kLeft) + "\" y1=\"" + Coord(y) + "\" x2=\"" +
           Coord(kLeft + kSize) + "\" y2=\"" + Coord(y) +
           "\" stroke=\"#ddd\"/>\n";
    svg += "<text x=\"" + Coord(x) + "\" y=\"" + Coord(kTop + kSize + 15) +
           "\" text-anchor=\"middle\">" + label + "</text>\n";
    svg += "<text x=\"" + Coord(kLeft - 5) + "\" y=\"" + Coord(y + 4) +
           "\" text-anchor=\"end\">" + label + "</text>\n";
  }
  svg += "<rect x=\"" + Coord(kLeft) + "\" y=\"" + Coord(kTop) +
         "\" width=\"" + Coord(kSize) + "\" height=\"" + Coord(kSize) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + Coord(kLeft + kSize / 2) + "\" y=\"" +
         Coord(kTop + kSize + 35) +
         "\" text-anchor=\"middle\">false positive rate</text>\n";
  svg += "<text transform=\"translate(15," + Coord(kTop + kSize / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">true positive rate</text>\n";

  // The diagonal is a straight line on log-log axes too.
  svg += Polyline(BenchmarkCurve(),
                  "stroke=\"#888\" stroke-dasharray=\"4 3\"");
  double legend_y = kTop + 10;
  auto legend = [&](const std::string& name, const std::string& style) {
    const double x = kLeft + kSize + 15;
    svg += "<line x1=\"" + Coord(x) + "\" y1=\"" + Coord(legend_y) +
           "\" x2=\"" + Coord(x + 20) + "\" y2=\"" + Coord(legend_y) + "\" " +
           style + "/>\n";
    svg += "<text x=\"" + Coord(x + 25) + "\" y=\"" + Coord(legend_y + 4) +
           "\">" + XmlEscape(name) + "</text>\n";
    legend_y += 16;
  };
  legend("benchmark", "stroke=\"#888\" stroke-dasharray=\"4 3\"");
  for (size_t i = 0; i < series.size(); ++i) {
    const std::string style = "stroke=\"" +
                              std::string(kColors[i % kColors.size()]) +
                              "\" stroke-width=\"1.5\"";
    svg += Polyline(series[i].curve, style);
    legend(series[i].name, style);
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace icul
