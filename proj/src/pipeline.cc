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

#include "icul/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "icul/metrics.h"
#include "icul/random.h"
#include "icul/remote.h"
#include "icul/status.h"
#include "icul/storage.h"
#include "icul/unlearn.h"
#include "parallel.h"

namespace icul {
namespace {

using json = nlohmann::json;

std::string Now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string ForgetSetId(size_t f) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fs-%04zu", f);
  return buf;
}

std::string ModelFile(size_t m) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "shadows/model-%02zu.json", m);
  return buf;
}

json HyperJson(const ToyHyper& h) {
  return json{{"lr", h.lr},       {"epochs", h.epochs},
              {"seed", h.seed},   {"alpha", h.alpha},
              {"tau", h.tau},     {"feature_dim", h.feature_dim},
              {"batch_size", h.batch_size}};
}

ToyHyper HyperFromJson(const json& j) {
  ToyHyper h;
  j.at("lr").get_to(h.lr);
  j.at("epochs").get_to(h.epochs);
  j.at("seed").get_to(h.seed);
  j.at("alpha").get_to(h.alpha);
  j.at("tau").get_to(h.tau);
  j.at("feature_dim").get_to(h.feature_dim);
  j.at("batch_size").get_to(h.batch_size);
  return h;
}

std::string WeightsDigest(const ToyModel& model) {
  const std::vector<double>& w = model.weights();
  return Sha256Hex(std::string_view(reinterpret_cast<const char*>(w.data()),
                                    w.size() * sizeof(double)));
}

json ParseArtifact(const std::filesystem::path& path) {
  try {
    return json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIntegrity,
                "artifact " + path.string() + " is not valid JSON: " + e.what());
  }
}

// Everything later stages need, loaded back from the run directory.
struct Loaded {
  std::optional<Corpus> corpus;
  SplitPlan split;
  ShadowEnsemble ensemble;
};

}  // namespace

std::string MethodSlug(const MethodSpec& method) {
  std::string slug(MethodKindName(method.kind));
  const std::string param = method.Parameter();
  if (!param.empty()) slug += "-" + param;
  return slug;
}

Pipeline::Pipeline(RunConfig config, std::filesystem::path run_root,
                   std::ostream& log)
    : config_(std::move(config)), log_(log) {
  config_.Validate();
  data_digest_ = Sha256File(config_.ResolvedDataPath());
  const std::string identity =
      Sha256Hex(ConfigSnapshot(config_).dump() + "\n" + data_digest_);
  run_dir_ = std::move(run_root) / identity.substr(0, 16);
}

std::filesystem::path Pipeline::Path(const std::string& relative) const {
  return run_dir_ / relative;
}

std::string Pipeline::WriteArtifact(const std::string& relative,
                                    std::string_view bytes, Digests& outputs) {
  AtomicWrite(Path(relative), bytes);
  std::string digest = Sha256Hex(bytes);
  outputs[relative] = digest;
  return digest;
}

Pipeline::Digests Pipeline::RequireStage(const std::string& stage) const {
  const std::filesystem::path record_path = Path("stages/" + stage + ".json");
  if (!std::filesystem::exists(record_path)) {
    throw Error(ErrorCode::kDependency,
                "stage '" + stage + "' has not run in " + run_dir_.string());
  }
  const json record = ParseArtifact(record_path);
  Digests outputs;
  try {
    outputs = record.at("outputs").get<Digests>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kIntegrity,
                "stage record " + record_path.string() + " is malformed");
  }
  for (const auto& [relative, digest] : outputs) {
    const std::filesystem::path file = Path(relative);
    if (!std::filesystem::exists(file)) {
      throw Error(ErrorCode::kIntegrity,
                  "artifact " + file.string() + " is missing");
    }
    if (Sha256File(file) != digest) {
      throw Error(ErrorCode::kIntegrity,
                  "artifact " + file.string() +
                      " does not match its recorded digest");
    }
  }
  return outputs;
}

bool Pipeline::UpToDate(const std::string& stage, const Digests& inputs) const {
  const std::filesystem::path record_path = Path("stages/" + stage + ".json");
  if (!std::filesystem::exists(record_path)) return false;
  try {
    const json record = json::parse(ReadFile(record_path));
    if (record.at("inputs").get<Digests>() != inputs) return false;
    for (const auto& [relative, digest] :
         record.at("outputs").get<Digests>()) {
      const std::filesystem::path file = Path(relative);
      if (!std::filesystem::exists(file) || Sha256File(file) != digest) {
        return false;
      }
    }
  } catch (const std::exception&) {
    return false;
  }
  log_ << stage << ": up to date\n";
  return true;
}

void Pipeline::RecordStage(const std::string& stage, const Digests& inputs,
                           const Digests& outputs, const std::string& started,
                           bool skipped) {
  json record{{"stage", stage},       {"inputs", inputs},
              {"outputs", outputs},   {"started", started},
              {"finished", Now()},    {"skipped", skipped}};
  AtomicWrite(Path("stages/" + stage + ".json"), record.dump(2) + "\n");
}

bool Pipeline::Skipped(const MethodSpec& method) const {
  return config_.backend == BackendKind::kRemote && method.NeedsParameters();
}

std::vector<MethodSpec> Pipeline::SelectMethods(
    std::span<const std::string> names) const {
  const std::vector<MethodSpec> all = config_.Methods();
  std::vector<MethodSpec> chosen;
  for (const std::string& name : names) {
    auto it = std::find_if(all.begin(), all.end(), [&](const MethodSpec& m) {
      return m.Name() == name || MethodSlug(m) == name;
    });
    if (it == all.end()) {
      throw Error(ErrorCode::kConfiguration,
                  "method '" + name + "' is not in the configuration");
    }
    chosen.push_back(*it);
  }
  return chosen;
}

namespace {

Loaded LoadData(const std::filesystem::path& dir, TaskKind task) {
  Loaded loaded;
  loaded.corpus = ParseJsonlRecords(ReadFile(dir / "data/corpus.jsonl"), task);
  try {
    loaded.split = ParseArtifact(dir / "data/split.json").get<SplitPlan>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIntegrity, std::string("split plan: ") + e.what());
  }
  return loaded;
}

void LoadShadows(const std::filesystem::path& dir, const RunConfig& config,
                 Loaded& loaded) {
  ShadowEnsemble& ensemble = loaded.ensemble;
  try {
    ensemble.assignment =
        ParseArtifact(dir / "shadows/assignment.json").get<ShadowAssignment>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIntegrity,
                std::string("shadow assignment: ") + e.what());
  }
  const size_t k = ensemble.assignment.k;
  if (config.backend == BackendKind::kRemote) {
    auto remote = std::make_shared<const RemoteModel>(
        config.remote, loaded.corpus->label_set(), config.prompt);
    for (size_t m = 0; m < k; ++m) {
      ensemble.models.push_back(ModelHandle::Remote(remote));
      ensemble.hypers.push_back(config.model);
    }
    return;
  }
  for (size_t m = 0; m < k; ++m) {
    const std::string name = ModelFile(m);
    const json doc = ParseArtifact(dir / name);
    try {
      ensemble.hypers.push_back(HyperFromJson(doc.at("hyper")));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kIntegrity,
                  name + ": " + e.what());
    }
    ensemble.models.push_back(ModelHandle::Toy(ToyModelFromJson(doc.at("model"))));
  }
}

AuditSetup MakeSetup(const RunConfig& config, const Loaded& loaded) {
  AuditSetup setup;
  setup.corpus = &*loaded.corpus;
  setup.ensemble = &loaded.ensemble;
  setup.tmpl = config.prompt;
  setup.run_seed = config.seed;
  setup.prob_clamp = config.prob_clamp;
  setup.std_floor = config.std_floor;
  setup.fit_mode = config.fit_mode;
  setup.threads = config.threads;
  return setup;
}

using DigestMap = std::map<std::string, std::string>;

DigestMap Merge(std::initializer_list<const DigestMap*> parts) {
  DigestMap merged;
  for (const auto* part : parts) merged.insert(part->begin(), part->end());
  return merged;
}

}  // namespace

void Pipeline::Ingest() {
  const std::string started = Now();
  const Digests inputs = {{"source-data", data_digest_}};
  if (UpToDate("ingest", inputs)) return;

  const Corpus corpus = LoadRecords(config_.ResolvedDataPath(),
                                    config_.data_format, config_.task);
  CheckSanitized(corpus.examples(), config_.prompt);
  const SplitPlan split =
      MakeSplit(corpus, config_.seed, config_.n_train, config_.n_test);

  Digests outputs;
  const std::filesystem::path manifest_path = Path("manifest.json");
  if (std::filesystem::exists(manifest_path)) {
    // Written once; later ingests only check that it still verifies.
    outputs["manifest.json"] = Sha256File(manifest_path);
  } else {
    const uint64_t seed = config_.seed;
    json sub_seeds = json::object();
    for (const char* purpose :
         {"split", "forget", "shadow-in", "shadow-member"}) {
      sub_seeds[purpose] = DeriveSeed(purpose, seed);
    }
    sub_seeds["per_index"] = {
        {"shadow-train", "DeriveSeed(\"shadow-train\", seed, {model})"},
        {"train-epoch", "DeriveSeed(\"train-epoch\", model seed, {epoch})"},
        {"icul-context",
         "DeriveSeed(\"icul-context\", seed, {forget_set, model})"},
        {"ga-order", "DeriveSeed(\"ga-order\", seed, {forget_set})"},
        {"flip", "DeriveSeed(\"flip\", seed, {}, example_id)"}};
    const json manifest{
        {"version", kVersion},
        {"run_id", run_dir_.filename().string()},
        {"created", started},
        {"config", ConfigSnapshot(config_)},
        {"data",
         {{"path", config_.ResolvedDataPath().string()},
          {"sha256", data_digest_},
          {"records", corpus.size()},
          {"labels", corpus.label_set()}}},
        {"sub_seeds", sub_seeds},
        {"knobs",
         {{"prob_clamp", config_.prob_clamp},
          {"std_floor", config_.std_floor},
          {"fit_mode", FitModeName(config_.fit_mode)},
          {"prompt", config_.prompt},
          {"remote_top_k", config_.remote.top_k},
          {"query_temperature", 0.0},
          {"ga_lr_multiplier", config_.ga_lr_multiplier},
          {"ga_divergence_bound", GaOptions{}.divergence_bound},
          {"toy_alpha", config_.model.alpha},
          {"toy_tau", config_.model.tau},
          {"feature_dim", config_.model.feature_dim}}}};
    WriteArtifact("manifest.json", manifest.dump(2) + "\n", outputs);
  }
  WriteArtifact("data/corpus.jsonl", FormatJsonlRecords(corpus.examples()),
                outputs);
  WriteArtifact("data/split.json", json(split).dump(2) + "\n", outputs);
  RecordStage("ingest", inputs, outputs, started);
  log_ << "ingest: " << corpus.size() << " records, "
       << split.train_ids.size() << " train / " << split.test_ids.size()
       << " test\n";
}

void Pipeline::TrainShadows() {
  const std::string started = Now();
  const Digests inputs = RequireStage("ingest");
  if (UpToDate("train-shadows", inputs)) return;

  Loaded loaded = LoadData(run_dir_, config_.task);
  std::vector<size_t> sizes;
  for (size_t i = 0; i < config_.forget_sizes.size(); ++i) {
    sizes.insert(sizes.end(), config_.forget_sets[i], config_.forget_sizes[i]);
  }
  const std::vector<ForgetSet> forget_sets =
      SelectDisjointForgetSets(loaded.split, sizes, config_.seed);
  ShadowAssignment assignment = ShadowSubsets(
      loaded.split, forget_sets, config_.k, config_.p, config_.seed);

  Digests outputs;
  WriteArtifact("shadows/assignment.json", json(assignment).dump() + "\n",
                outputs);
  if (config_.backend == BackendKind::kRemote) {
    log_ << "notice: capability: remote backend; all " << config_.k
         << " shadow slots query the configured endpoint\n";
  } else {
    const ShadowEnsemble ensemble = TrainShadowEnsemble(
        *loaded.corpus, std::move(assignment), config_.model, config_.seed);
    for (size_t m = 0; m < ensemble.models.size(); ++m) {
      const json doc{{"hyper", HyperJson(ensemble.hypers[m])},
                     {"model", ensemble.models[m].toy()}};
      WriteArtifact(ModelFile(m), doc.dump() + "\n", outputs);
    }
  }
  RecordStage("train-shadows", inputs, outputs, started);
  log_ << "train-shadows: " << config_.k << " models, " << forget_sets.size()
       << " forget sets\n";
}

void Pipeline::Unlearn(std::vector<MethodSpec> methods) {
  if (methods.empty()) methods = config_.Methods();
  const Digests ingest = RequireStage("ingest");
  const Digests shadows = RequireStage("train-shadows");
  const Digests inputs = Merge({&ingest, &shadows});
  std::optional<Loaded> loaded;

  for (const MethodSpec& method : methods) {
    const std::string started = Now();
    const std::string stage = "unlearn-" + MethodSlug(method);
    if (Skipped(method)) {
      log_ << "notice: capability: " << method.Name()
           << " needs model parameters; skipped on the remote backend\n";
      RecordStage(stage, inputs, {}, started, /*skipped=*/true);
      continue;
    }
    if (UpToDate(stage, inputs)) continue;
    if (!loaded) {
      loaded = LoadData(run_dir_, config_.task);
      LoadShadows(run_dir_, config_, *loaded);
    }
    const AuditSetup setup = MakeSetup(config_, *loaded);
    const ShadowAssignment& assignment = loaded->ensemble.assignment;
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t f = 0; f < assignment.forget_sets.size(); ++f) {
      for (size_t m : assignment.in_models[f]) pairs.emplace_back(f, m);
    }
    std::vector<json> descriptors(pairs.size());
    internal::ParallelFor(pairs.size(), config_.threads, [&](size_t i) {
      const auto [f, m] = pairs[i];
      const UnlearnedModel model = ApplyMethod(setup, f, m, method);
      json d{{"forget_set", ForgetSetId(f)},
             {"model", m},
             {"kind", UnlearnKindName(model.kind())}};
      switch (model.kind()) {
        case UnlearnKind::kIcul:
          d["context"] = *model.fixed_context();
          break;
        case UnlearnKind::kGradientAscent:
          d["lr"] = method.lr * method.lr_multiplier;
          d["epochs"] = method.epochs;
          d["weights_sha256"] = WeightsDigest(model.handle().toy());
          break;
        case UnlearnKind::kRetrain:
          d["seed"] = loaded->ensemble.hypers[m].seed;
          d["weights_sha256"] = WeightsDigest(model.handle().toy());
          break;
        case UnlearnKind::kIdentity:
          break;
      }
      descriptors[i] = std::move(d);
    });
    Digests outputs;
    const json doc{{"method", method.Name()}, {"descriptors", descriptors}};
    WriteArtifact("unlearn/" + MethodSlug(method) + ".json",
                  doc.dump() + "\n", outputs);
    RecordStage(stage, inputs, outputs, started);
    log_ << stage << ": " << descriptors.size() << " unlearned models\n";
  }
}

void Pipeline::Audit(std::vector<MethodSpec> methods) {
  if (methods.empty()) methods = config_.Methods();
  const Digests ingest = RequireStage("ingest");
  const Digests shadows = RequireStage("train-shadows");
  std::optional<Loaded> loaded;

  for (const MethodSpec& method : methods) {
    const std::string started = Now();
    const std::string slug = MethodSlug(method);
    const std::string stage = "audit-" + slug;
    const Digests unlearned = RequireStage("unlearn-" + slug);
    const Digests inputs = Merge({&ingest, &shadows, &unlearned});
    if (Skipped(method)) {
      log_ << "notice: capability: " << method.Name()
           << " needs model parameters; skipped on the remote backend\n";
      RecordStage(stage, inputs, {}, started, /*skipped=*/true);
      continue;
    }
    if (UpToDate(stage, inputs)) continue;
    if (!loaded) {
      loaded = LoadData(run_dir_, config_.task);
      LoadShadows(run_dir_, config_, *loaded);
    }
    const Corpus& corpus = *loaded->corpus;
    const ShadowAssignment& assignment = loaded->ensemble.assignment;
    const size_t k = assignment.k;
    const size_t num_sets = assignment.forget_sets.size();
    const bool toy = config_.backend == BackendKind::kToy;

    // Toy queries are featurized once and shared by every model.
    std::unordered_map<std::string_view, SparseVector> features;
    if (toy && config_.accuracies) {
      const ToyModel& any = loaded->ensemble.models.front().toy();
      for (const LabeledExample& ex : corpus.examples()) {
        features.emplace(ex.id, any.Featurize(ex.text));
      }
    }
    auto accuracy = [&](const UnlearnedModel& model,
                        const std::vector<const LabeledExample*>& examples)
        -> std::optional<double> {
      if (examples.empty()) return std::nullopt;
      size_t correct = 0;
      for (const LabeledExample* ex : examples) {
        const ClassDistribution dist = toy ? model.Predict(features.at(ex->id))
                                           : model.Predict(ex->text);
        if (dist.Argmax() == ex->label) ++correct;
      }
      return static_cast<double>(correct) /
             static_cast<double>(examples.size());
    };
    std::vector<const LabeledExample*> test;
    for (const std::string& id : loaded->split.test_ids) {
      test.push_back(&corpus.Get(id));
    }

    std::vector<std::optional<AccuracyReport>> reports(num_sets * k);
    AuditSetup setup = MakeSetup(config_, *loaded);
    if (config_.accuracies) {
      setup.on_model = [&](size_t f, size_t m, const UnlearnedModel& model) {
        if (!assignment.IsIn(f, m)) return;
        const std::vector<std::string>& forget_ids =
            assignment.forget_sets[f].ids;
        const std::unordered_set<std::string_view> drop(forget_ids.begin(),
                                                        forget_ids.end());
        std::vector<const LabeledExample*> train;
        std::vector<const LabeledExample*> forget;
        for (const std::string& id : assignment.subsets[m]) {
          if (!drop.contains(id)) train.push_back(&corpus.Get(id));
        }
        for (const std::string& id : forget_ids) {
          forget.push_back(&corpus.Get(id));
        }
        AccuracyReport report;
        report.train_acc = accuracy(model, train);
        report.forget_acc = accuracy(model, forget);
        report.test_acc = *accuracy(model, test);
        reports[f * k + m] = report;
      };
    }
    std::vector<size_t> indices(num_sets);
    for (size_t f = 0; f < num_sets; ++f) indices[f] = f;
    const AuditResult result = RunAudit(setup, indices, method);

    std::string scores = "forget_set_id,point_id,model_index,in_or_out,method,score\n";
    const std::string name = method.Name();
    for (const ScoreTable& table : result.tables) {
      const std::string fs = ForgetSetId(table.forget_index);
      for (size_t m = 0; m < table.scores.size(); ++m) {
        const char* side = table.is_in[m] ? "in" : "out";
        for (size_t j = 0; j < table.point_ids.size(); ++j) {
          scores += fs + "," + table.point_ids[j] + "," + std::to_string(m) +
                    "," + side + "," + name + "," +
                    FormatNumber(table.scores[m][j]) + "\n";
        }
      }
    }
    json records = json::array();
    for (const AuditRecord& r : result.records) {
      records.push_back(
          {{"forget_set", ForgetSetId(r.forget_index)},
           {"j", assignment.forget_sets[r.forget_index].ids.size()},
           {"model", r.model_index},
           {"hypothesis", HypothesisName(r.label)},
           {"log_lr", r.score.log_lr},
           {"per_point", r.score.per_point}});
    }
    json accuracies = json::array();
    for (size_t f = 0; f < num_sets; ++f) {
      for (size_t m = 0; m < k; ++m) {
        const std::optional<AccuracyReport>& rep = reports[f * k + m];
        if (!rep) continue;
        json entry{{"forget_set", ForgetSetId(f)},
                   {"j", assignment.forget_sets[f].ids.size()},
                   {"model", m},
                   {"test_acc", rep->test_acc}};
        entry["train_acc"] = rep->train_acc ? json(*rep->train_acc) : json();
        entry["forget_acc"] = rep->forget_acc ? json(*rep->forget_acc) : json();
        accuracies.push_back(std::move(entry));
      }
    }
    Digests outputs;
    WriteArtifact("audit/" + slug + "/scores.csv", scores, outputs);
    const json doc{{"method", name},
                   {"fit_mode", FitModeName(config_.fit_mode)},
                   {"records", records},
                   {"accuracy", accuracies}};
    WriteArtifact("audit/" + slug + "/records.json", doc.dump() + "\n",
                  outputs);
    RecordStage(stage, inputs, outputs, started);
    log_ << stage << ": " << result.records.size() << " scored models\n";
  }
}

void Pipeline::Report() {
  const std::string started = Now();
  const std::vector<MethodSpec> methods = config_.Methods();
  Digests inputs;
  std::vector<MethodSpec> reported;
  for (const MethodSpec& method : methods) {
    const Digests audit = RequireStage("audit-" + MethodSlug(method));
    inputs.insert(audit.begin(), audit.end());
    if (!Skipped(method)) reported.push_back(method);
  }
  if (UpToDate("report", inputs)) return;

  std::vector<size_t> sizes = config_.forget_sizes;
  std::sort(sizes.begin(), sizes.end());
  std::vector<SummaryRow> rows;
  std::map<size_t, std::vector<PlotSeries>> plots;
  Digests outputs;
  for (const MethodSpec& method : reported) {
    const std::string slug = MethodSlug(method);
    const json doc = ParseArtifact(Path("audit/" + slug + "/records.json"));
    for (size_t j : sizes) {
      std::vector<double> scores;
      std::vector<Hypothesis> labels;
      for (const json& r : doc.at("records")) {
        if (r.at("j").get<size_t>() != j) continue;
        scores.push_back(r.at("log_lr").get<double>());
        labels.push_back(r.at("hypothesis") == "in" ? Hypothesis::kUnlearned
                                                    : Hypothesis::kRetrained);
      }
      const RocCurve curve = Roc(scores, labels);
      SummaryRow row;
      row.method = std::string(MethodKindName(method.kind));
      row.j = j;
      row.parameter = method.Parameter();
      row.auc = Auc(curve);
      for (double f : config_.fpr_grid) row.tpr.push_back(TprAtFpr(curve, f));

      // Means over every (forget set, IN model) pair of this size.
      double sums[3] = {0, 0, 0};
      size_t counts[3] = {0, 0, 0};
      for (const json& a : doc.at("accuracy")) {
        if (a.at("j").get<size_t>() != j) continue;
        const char* keys[3] = {"train_acc", "forget_acc", "test_acc"};
        for (int c = 0; c < 3; ++c) {
          if (!a.at(keys[c]).is_null()) {
            sums[c] += a.at(keys[c]).get<double>();
            ++counts[c];
          }
        }
      }
      auto mean = [&](int c) -> std::optional<double> {
        if (counts[c] == 0) return std::nullopt;
        return sums[c] / static_cast<double>(counts[c]);
      };
      row.train_acc = mean(0);
      row.forget_acc = mean(1);
      row.test_acc = mean(2);
      rows.push_back(std::move(row));

      WriteArtifact("report/roc/" + slug + "-J" + std::to_string(j) + ".csv",
                    FormatRocCsv(curve), outputs);
      plots[j].push_back({method.Name(), curve});
    }
  }
  WriteArtifact("report/summary.csv",
                FormatSummaryCsv(config_.fpr_grid, rows), outputs);
  for (const auto& [j, series] : plots) {
    WriteArtifact("report/roc-J" + std::to_string(j) + ".svg",
                  RenderRocSvg(series, "LiRA-Forget ROC, J = " +
                                           std::to_string(j)),
                  outputs);
  }
  std::string notes =
      "TPR at a target FPR is interpolated linearly between the two empirical "
      "ROC points that bracket it.\n"
      "Positive class: models trained on the forget set and then unlearned.\n"
      "Gaussian fits: " +
      std::string(FitModeName(config_.fit_mode)) +
      ". Accuracies are means over (forget set, IN model) pairs.\n";
  for (const MethodSpec& method : methods) {
    if (Skipped(method)) {
      notes += method.Name() +
               " was skipped: the remote backend exposes no weights.\n";
    }
  }
  WriteArtifact("report/notes.txt", notes, outputs);
  RecordStage("report", inputs, outputs, started);
  log_ << "report: " << rows.size() << " summary rows in "
       << Path("report/summary.csv").string() << "\n";
}

void Pipeline::RunAll() {
  Ingest();
  TrainShadows();
  Unlearn();
  Audit();
  Report();
}

}  // namespace icul
