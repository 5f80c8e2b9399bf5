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

// Experiment configuration, read from a TOML document with one table per
// stage:
//
//   [data]     path, format, task, n_train, n_test
//   [run]      seed, threads
//   [model]    lr, epochs, batch_size, alpha, tau, feature_dim
//   [shadows]  k, p
//   [forget]   sizes (the J grid), sets (per size, or one count for all)
//   [prompt]   prefix, example_format, pair_separator, block_separator,
//              query_format
//   [methods]  baseline, retrain, icul, icl, random_icul (L grids), ga_lr,
//              ga_epochs, ga_lr_multiplier
//   [audit]    prob_clamp, std_floor, fit_mode, fpr_grid, accuracies
//   [backend]  kind (toy | remote), url, path, model, token_env, top_k,
//              max_in_flight, timeout_seconds
//
// Every key is optional except [data].path; unknown keys are rejected.

#ifndef ICUL_CONFIG_H_
#define ICUL_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "icul/audit.h"
#include "icul/corpus.h"
#include "icul/model.h"
#include "icul/prompting.h"
#include "icul/remote.h"
#include "json.hpp"

namespace icul {

inline constexpr std::string_view kVersion = "0.1.0";

enum class BackendKind { kToy, kRemote };

std::string_view BackendKindName(BackendKind kind);
BackendKind ParseBackendKind(std::string_view name);

struct RunConfig {
  // As written in the file; relative paths resolve against data_base_dir.
  std::string data_path;
  std::filesystem::path data_base_dir;
  RecordFormat data_format = RecordFormat::kJsonl;
  TaskKind task = TaskKind::kClassification;
  size_t n_train = 1800;
  size_t n_test = 200;

  uint64_t seed = 0;
  size_t threads = 0;

  // The seed field is unused; shadow models derive their own.
  ToyHyper model;

  size_t k = 10;
  double p = 0.5;

  std::vector<size_t> forget_sizes = {1, 5, 10, 20};
  // Number of disjoint forget sets per entry of forget_sizes.
  std::vector<size_t> forget_sets = {10, 10, 10, 10};

  PromptTemplate prompt;

  bool baseline = true;
  bool retrain = true;
  std::vector<size_t> icul = {6};
  std::vector<size_t> icl;
  std::vector<size_t> random_icul;
  std::vector<double> ga_lr = {5e-5, 3e-5, 1e-5, 5e-6};
  size_t ga_epochs = 1;
  double ga_lr_multiplier = 1000.0;

  double prob_clamp = kDefaultProbClamp;
  double std_floor = kDefaultStdFloor;
  FitMode fit_mode = FitMode::kBalancedLeaveOneOut;
  std::vector<double> fpr_grid = {1e-3, 1e-2, 1e-1};
  bool accuracies = true;

  BackendKind backend = BackendKind::kToy;
  RemoteConfig remote;

  std::filesystem::path ResolvedDataPath() const;

  // Every configured method, in report order: baseline, retrain, icul, icl,
  // random_icul, ga.
  std::vector<MethodSpec> Methods() const;

  // Throws kConfiguration: K*p not integral, empty grids, J < 1, no
  // methods, FPRs outside (0, 1), malformed template.
  void Validate() const;
};

// Throws kParse for malformed TOML (with line and column), kConfiguration
// for unknown keys, wrong types or invalid values.
RunConfig ParseRunConfig(std::string_view text,
                         const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Canonical JSON of every field; the basis of the run identity.
nlohmann::json ConfigSnapshot(const RunConfig& config);

}  // namespace icul

#endif  // ICUL_CONFIG_H_
