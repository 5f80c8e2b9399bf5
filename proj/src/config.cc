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

#include "icul/config.h"

#include <cmath>
#include <set>
#include <sstream>

#include "icul/status.h"
#include "icul/storage.h"
#include "toml.hpp"

namespace icul {
namespace {

std::string Where(const toml::node& node) {
  const toml::source_position pos = node.source().begin;
  return "line " + std::to_string(pos.line) + ":" +
         std::to_string(pos.column);
}

// Reads typed keys out of one table and rejects keys nobody asked for.
class TableReader {
 public:
  TableReader(const toml::table* table, std::string name)
      : table_(table), name_(std::move(name)) {}

  void Read(std::string_view key, std::string& out) {
    if (const toml::node* node = Take(key)) {
      const auto* s = node->as_string();
      if (!s) Fail(*node, key, "a string");
      out = s->get();
    }
  }

  void Read(std::string_view key, bool& out) {
    if (const toml::node* node = Take(key)) {
      const auto* b = node->as_boolean();
      if (!b) Fail(*node, key, "a boolean");
      out = b->get();
    }
  }

  void Read(std::string_view key, double& out) {
    if (const toml::node* node = Take(key)) out = AsDouble(*node, key);
  }

  void Read(std::string_view key, size_t& out) {
    if (const toml::node* node = Take(key)) out = AsCount(*node, key);
  }

  void Read(std::string_view key, int& out) {
    if (const toml::node* node = Take(key)) {
      const int64_t v = AsInteger(*node, key);
      if (v < 0 || v > 1'000'000'000) Fail(*node, key, "a small integer");
      out = static_cast<int>(v);
    }
  }

  void Read(std::string_view key, std::vector<size_t>& out) {
    if (const toml::node* node = Take(key)) {
      out.clear();
      if (node->is_integer()) {
        out.push_back(AsCount(*node, key));
        return;
      }
      const auto* arr = node->as_array();
      if (!arr) Fail(*node, key, "an integer array");
      for (const toml::node& item : *arr) out.push_back(AsCount(item, key));
    }
  }

  void Read(std::string_view key, std::vector<double>& out) {
    if (const toml::node* node = Take(key)) {
      const auto* arr = node->as_array();
      if (!arr) Fail(*node, key, "a number array");
      out.clear();
      for (const toml::node& item : *arr) out.push_back(AsDouble(item, key));
    }
  }

  void Finish() const {
    if (!table_) return;
    for (const auto& [key, node] : *table_) {
      if (!seen_.contains(std::string(key.str()))) {
        throw Error(ErrorCode::kConfiguration,
                    Where(node) + ": unknown key '" + std::string(key.str()) +
                        "' in [" + name_ + "]");
      }
    }
  }

 private:
  const toml::node* Take(std::string_view key) {
    seen_.emplace(key);
    return table_ ? table_->get(key) : nullptr;
  }

  [[noreturn]] void Fail(const toml::node& node, std::string_view key,
                         std::string_view expected) const {
    throw Error(ErrorCode::kConfiguration,
                Where(node) + ": [" + name_ + "] " + std::string(key) +
                    " must be " + std::string(expected));
  }

  int64_t AsInteger(const toml::node& node, std::string_view key) const {
    const auto* i = node.as_integer();
    if (!i) Fail(node, key, "an integer");
    return i->get();
  }

  size_t AsCount(const toml::node& node, std::string_view key) const {
    const int64_t v = AsInteger(node, key);
    if (v < 0) Fail(node, key, "non-negative");
    return static_cast<size_t>(v);
  }

  double AsDouble(const toml::node& node, std::string_view key) const {
    if (const auto* f = node.as_floating_point()) return f->get();
    if (const auto* i = node.as_integer()) return static_cast<double>(i->get());
    Fail(node, key, "a number");
  }

  const toml::table* table_;
  std::string name_;
  std::set<std::string, std::less<>> seen_;
};

const toml::table* Section(const toml::table& root, std::string_view name) {
  const toml::node* node = root.get(name);
  if (!node) return nullptr;
  const toml::table* table = node->as_table();
  if (!table) {
    throw Error(ErrorCode::kConfiguration,
                Where(*node) + ": '" + std::string(name) + "' must be a table");
  }
  return table;
}

bool IsIntegral(double x) { return std::abs(x - std::round(x)) < 1e-9; }

}  // namespace

std::string_view BackendKindName(BackendKind kind) {
  return kind == BackendKind::kToy ? "toy" : "remote";
}

BackendKind ParseBackendKind(std::string_view name) {
  if (name == "toy") return BackendKind::kToy;
  if (name == "remote") return BackendKind::kRemote;
  throw Error(ErrorCode::kConfiguration,
              "unknown backend '" + std::string(name) + "'");
}

std::filesystem::path RunConfig::ResolvedDataPath() const {
  const std::filesystem::path path(data_path);
  return path.is_absolute() ? path : data_base_dir / path;
}

std::vector<MethodSpec> RunConfig::Methods() const {
  std::vector<MethodSpec> methods;
  if (baseline) methods.push_back({MethodKind::kBaseline});
  if (retrain) methods.push_back({MethodKind::kRetrain});
  for (auto [kind, grid] : {std::pair{MethodKind::kIcul, &icul},
                            std::pair{MethodKind::kIcl, &icl},
                            std::pair{MethodKind::kRandomIcul, &random_icul}}) {
    for (size_t l : *grid) {
      MethodSpec m{kind};
      m.num_correct = l;
      methods.push_back(m);
    }
  }
  for (double lr : ga_lr) {
    MethodSpec m{MethodKind::kGradientAscent};
    m.lr = lr;
    m.lr_multiplier = ga_lr_multiplier;
    m.epochs = ga_epochs;
    methods.push_back(m);
  }
  return methods;
}

void RunConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kConfiguration, msg);
  };
  if (data_path.empty()) fail("[data] path is required");
  if (n_train == 0 || n_test == 0) fail("n_train and n_test must be positive");
  if (k < 2) fail("[shadows] k must be at least 2");
  if (!(p > 0.0 && p < 1.0)) fail("[shadows] p must lie in (0, 1)");
  if (!IsIntegral(static_cast<double>(k) * p)) {
    fail("[shadows] k * p must be an integer");
  }
  if (forget_sizes.empty()) fail("[forget] sizes must be non-empty");
  for (size_t j : forget_sizes) {
    if (j < 1) fail("[forget] sizes must be >= 1");
  }
  if (forget_sets.size() != forget_sizes.size()) {
    fail("[forget] sets needs one count per size");
  }
  for (size_t n : forget_sets) {
    if (n < 1) fail("[forget] sets must be >= 1");
  }
  std::set<size_t> distinct(forget_sizes.begin(), forget_sizes.end());
  if (distinct.size() != forget_sizes.size()) fail("[forget] sizes repeat");
  if (Methods().empty()) fail("[methods] selects no method");
  for (double lr : ga_lr) {
    if (!(lr >= 0.0) || !std::isfinite(lr)) fail("ga_lr must be >= 0");
  }
  if (!(ga_lr_multiplier > 0.0)) fail("ga_lr_multiplier must be positive");
  if (fpr_grid.empty()) fail("[audit] fpr_grid must be non-empty");
  for (double f : fpr_grid) {
    if (!(f > 0.0 && f < 1.0)) fail("[audit] fpr_grid values lie in (0, 1)");
  }
  if (!(prob_clamp > 0.0 && prob_clamp < 0.5)) {
    fail("[audit] prob_clamp must lie in (0, 0.5)");
  }
  if (!(std_floor > 0.0)) fail("[audit] std_floor must be positive");
  if (model.epochs == 0 || model.batch_size == 0 || !(model.lr > 0.0)) {
    fail("[model] lr, epochs and batch_size must be positive");
  }
  if (remote.top_k < 1 || remote.max_in_flight < 1) {
    fail("[backend] top_k and max_in_flight must be positive");
  }
  prompt.Validate();
}

RunConfig ParseRunConfig(std::string_view text,
                         const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config line " << e.source().begin.line << ":"
        << e.source().begin.column << ": " << e.description();
    throw Error(ErrorCode::kParse, msg.str());
  }
  static const std::set<std::string, std::less<>> kTables = {
      "data",   "run",     "model", "shadows", "forget",
      "prompt", "methods", "audit", "backend"};
  for (const auto& [key, node] : root) {
    if (!kTables.contains(key.str())) {
      throw Error(ErrorCode::kConfiguration,
                  Where(node) + ": unknown table '" + std::string(key.str()) +
                      "'");
    }
  }

  RunConfig c;
  c.data_base_dir = base_dir;
  std::string text_value;

  TableReader data(Section(root, "data"), "data");
  data.Read("path", c.data_path);
  text_value = "jsonl";
  data.Read("format", text_value);
  c.data_format = ParseRecordFormat(text_value);
  text_value = std::string(TaskKindName(c.task));
  data.Read("task", text_value);
  c.task = ParseTaskKind(text_value);
  data.Read("n_train", c.n_train);
  data.Read("n_test", c.n_test);
  data.Finish();

  TableReader run(Section(root, "run"), "run");
  size_t seed = 0;
  run.Read("seed", seed);
  c.seed = seed;
  run.Read("threads", c.threads);
  run.Finish();

  TableReader model(Section(root, "model"), "model");
  model.Read("lr", c.model.lr);
  model.Read("epochs", c.model.epochs);
  model.Read("batch_size", c.model.batch_size);
  model.Read("alpha", c.model.alpha);
  model.Read("tau", c.model.tau);
  model.Read("feature_dim", c.model.feature_dim);
  model.Finish();

  TableReader shadows(Section(root, "shadows"), "shadows");
  shadows.Read("k", c.k);
  shadows.Read("p", c.p);
  shadows.Finish();

  TableReader forget(Section(root, "forget"), "forget");
  forget.Read("sizes", c.forget_sizes);
  forget.Read("sets", c.forget_sets);
  forget.Finish();
  // One count applies to every size.
  if (c.forget_sets.size() == 1 && c.forget_sizes.size() > 1) {
    c.forget_sets.assign(c.forget_sizes.size(), c.forget_sets.front());
  }

  TableReader prompt(Section(root, "prompt"), "prompt");
  prompt.Read("prefix", c.prompt.prefix);
  prompt.Read("example_format", c.prompt.example_format);
  prompt.Read("pair_separator", c.prompt.pair_separator);
  prompt.Read("block_separator", c.prompt.block_separator);
  prompt.Read("query_format", c.prompt.query_format);
  prompt.Finish();

  TableReader methods(Section(root, "methods"), "methods");
  methods.Read("baseline", c.baseline);
  methods.Read("retrain", c.retrain);
  methods.Read("icul", c.icul);
  methods.Read("icl", c.icl);
  methods.Read("random_icul", c.random_icul);
  methods.Read("ga_lr", c.ga_lr);
  methods.Read("ga_epochs", c.ga_epochs);
  methods.Read("ga_lr_multiplier", c.ga_lr_multiplier);
  methods.Finish();

  TableReader audit(Section(root, "audit"), "audit");
  audit.Read("prob_clamp", c.prob_clamp);
  audit.Read("std_floor", c.std_floor);
  text_value = std::string(FitModeName(c.fit_mode));
  audit.Read("fit_mode", text_value);
  c.fit_mode = ParseFitMode(text_value);
  audit.Read("fpr_grid", c.fpr_grid);
  audit.Read("accuracies", c.accuracies);
  audit.Finish();

  TableReader backend(Section(root, "backend"), "backend");
  text_value = "toy";
  backend.Read("kind", text_value);
  c.backend = ParseBackendKind(text_value);
  backend.Read("url", c.remote.url);
  backend.Read("path", c.remote.path);
  backend.Read("model", c.remote.model);
  backend.Read("token_env", c.remote.token_env);
  backend.Read("top_k", c.remote.top_k);
  backend.Read("max_in_flight", c.remote.max_in_flight);
  backend.Read("timeout_seconds", c.remote.timeout_seconds);
  backend.Finish();

  c.Validate();
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  const std::filesystem::path base = path.has_parent_path()
                                         ? path.parent_path()
                                         : std::filesystem::path(".");
  return ParseRunConfig(text, base);
}

nlohmann::json ConfigSnapshot(const RunConfig& c) {
  return nlohmann::json{
      {"data",
       {{"path", c.data_path},
        {"format", c.data_format == RecordFormat::kJsonl ? "jsonl" : "csv"},
        {"task", TaskKindName(c.task)},
        {"n_train", c.n_train},
        {"n_test", c.n_test}}},
      // Thread count is left out: it never changes results.
      {"run", {{"seed", c.seed}}},
      {"model",
       {{"lr", c.model.lr},
        {"epochs", c.model.epochs},
        {"batch_size", c.model.batch_size},
        {"alpha", c.model.alpha},
        {"tau", c.model.tau},
        {"feature_dim", c.model.feature_dim}}},
      {"shadows", {{"k", c.k}, {"p", c.p}}},
      {"forget", {{"sizes", c.forget_sizes}, {"sets", c.forget_sets}}},
      {"prompt", c.prompt},
      {"methods",
       {{"baseline", c.baseline},
        {"retrain", c.retrain},
        {"icul", c.icul},
        {"icl", c.icl},
        {"random_icul", c.random_icul},
        {"ga_lr", c.ga_lr},
        {"ga_epochs", c.ga_epochs},
        {"ga_lr_multiplier", c.ga_lr_multiplier}}},
      {"audit",
       {{"prob_clamp", c.prob_clamp},
        {"std_floor", c.std_floor},
        {"fit_mode", FitModeName(c.fit_mode)},
        {"fpr_grid", c.fpr_grid},
        {"accuracies", c.accuracies}}},
      {"backend",
       {{"kind", BackendKindName(c.backend)}, {"remote", c.remote}}}};
}

}  // namespace icul
