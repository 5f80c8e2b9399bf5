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

// End-to-end experiment stages over a run directory.
//
// A run lives in <root>/<id>, where <id> is a digest of the configuration
// snapshot and of the dataset bytes, so every distinct experiment gets its
// own directory. Layout:
//
//   manifest.json                 config, sub-seeds, knobs; written once
//   data/corpus.jsonl, data/split.json
//   shadows/assignment.json, shadows/model-NN.json
//   unlearn/<method>.json         unlearned-model descriptors
//   audit/<method>/scores.csv     per-point confidences
//   audit/<method>/records.json   labelled LiRA scores and accuracies
//   report/summary.csv, report/roc/*.csv, report/roc-J<j>.svg
//   stages/<stage>.json           input and output digests, timestamps
//
// A stage whose record matches its current inputs and whose outputs still
// verify is skipped. Missing prerequisites raise kDependency; prerequisite
// files that no longer match their recorded digest raise kIntegrity.

#ifndef ICUL_PIPELINE_H_
#define ICUL_PIPELINE_H_

#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "icul/audit.h"
#include "icul/config.h"
#include "json.hpp"

namespace icul {

// "icul(6)" -> "icul-6", "ga(5e-05)" -> "ga-5e-05".
std::string MethodSlug(const MethodSpec& method);

class Pipeline {
 public:
  // Hashes the dataset to find the run directory; throws kIo when it is
  // unreadable. Progress and notices go to `log`.
  Pipeline(RunConfig config, std::filesystem::path run_root,
           std::ostream& log);

  const RunConfig& config() const { return config_; }
  const std::filesystem::path& run_dir() const { return run_dir_; }

  void Ingest();
  void TrainShadows();
  // Empty `methods` means every configured method.
  void Unlearn(std::vector<MethodSpec> methods = {});
  void Audit(std::vector<MethodSpec> methods = {});
  void Report();
  void RunAll();

  // Configured methods whose name is in `names`; kConfiguration for names
  // that match nothing.
  std::vector<MethodSpec> SelectMethods(
      std::span<const std::string> names) const;

 private:
  using Digests = std::map<std::string, std::string>;

  std::filesystem::path Path(const std::string& relative) const;
  std::string WriteArtifact(const std::string& relative,
                            std::string_view bytes, Digests& outputs);
  // Digests of a finished stage's outputs after checking them on disk.
  Digests RequireStage(const std::string& stage) const;
  bool UpToDate(const std::string& stage, const Digests& inputs) const;
  void RecordStage(const std::string& stage, const Digests& inputs,
                   const Digests& outputs, const std::string& started,
                   bool skipped = false);
  bool Skipped(const MethodSpec& method) const;

  RunConfig config_;
  std::filesystem::path run_dir_;
  std::string data_digest_;
  std::ostream& log_;
};

}  // namespace icul

#endif  // ICUL_PIPELINE_H_
