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

#include "icul/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "icul/random.h"
#include "icul/status.h"

namespace icul {
namespace {

std::string SynthesizedId(size_t line_index) {
  std::string digits = std::to_string(line_index);
  if (digits.size() < 8) digits.insert(0, 8 - digits.size(), '0');
  return digits;
}

std::string LinePrefix(size_t line_number) {
  return "line " + std::to_string(line_number) + ": ";
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r';
  });
}

// One parsed CSV record plus the physical line it started on.
struct CsvRecord {
  std::vector<std::string> fields;
  size_t line = 0;
};

std::vector<CsvRecord> SplitCsv(std::string_view content) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  size_t line = 1;
  current.line = line;
  bool in_quotes = false;
  bool field_started = false;
  bool any = false;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(current));
    current = CsvRecord{};
    current.line = line;
    any = false;
  };

  for (size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty()) {
          throw Error(ErrorCode::kParse,
                      LinePrefix(line) + "stray quote inside unquoted field");
        }
        in_quotes = true;
        field_started = true;
        any = true;
        break;
      case ',':
        end_field();
        any = true;
        break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        ++line;
        if (any || !current.fields.empty() || !field.empty()) {
          end_record();
        } else {
          current.line = line;
        }
        break;
      default:
        field.push_back(c);
        field_started = true;
        any = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParse,
                LinePrefix(current.line) + "unterminated quoted field");
  }
  if (any || !current.fields.empty() || !field.empty()) end_record();
  return records;
}

std::string CsvField(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string_view TaskKindName(TaskKind kind) {
  return kind == TaskKind::kClassification ? "classification"
                                           : "question_answering";
}

TaskKind ParseTaskKind(std::string_view name) {
  if (name == "classification") return TaskKind::kClassification;
  if (name == "question_answering") return TaskKind::kQuestionAnswering;
  throw Error(ErrorCode::kConfiguration,
              "unknown task kind '" + std::string(name) + "'");
}

RecordFormat ParseRecordFormat(std::string_view name) {
  if (name == "jsonl") return RecordFormat::kJsonl;
  if (name == "csv") return RecordFormat::kCsv;
  throw Error(ErrorCode::kConfiguration,
              "unknown record format '" + std::string(name) + "'");
}

Corpus Corpus::Create(std::vector<LabeledExample> examples, TaskKind kind) {
  if (examples.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "corpus has no records");
  }
  Corpus corpus;
  corpus.kind_ = kind;
  std::set<std::string> labels;
  for (size_t i = 0; i < examples.size(); ++i) {
    const LabeledExample& ex = examples[i];
    if (ex.text.empty()) {
      throw Error(ErrorCode::kParse, "record '" + ex.id + "' has empty text");
    }
    if (!corpus.index_.emplace(ex.id, i).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + ex.id + "'");
    }
    labels.insert(ex.label);
  }
  if (labels.size() < 2) {
    throw Error(ErrorCode::kLabel, "corpus needs at least two distinct labels");
  }
  corpus.label_set_.assign(labels.begin(), labels.end());
  corpus.examples_ = std::move(examples);
  return corpus;
}

const LabeledExample* Corpus::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &examples_[it->second];
}

const LabeledExample& Corpus::Get(std::string_view id) const {
  const LabeledExample* ex = Find(id);
  if (ex == nullptr) {
    throw Error(ErrorCode::kConfiguration,
                "id '" + std::string(id) + "' not in corpus");
  }
  return *ex;
}

std::vector<LabeledExample> Corpus::Select(
    std::span<const std::string> ids) const {
  std::vector<LabeledExample> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) out.push_back(Get(id));
  return out;
}

Corpus ParseJsonlRecords(std::string_view content, TaskKind kind) {
  std::vector<LabeledExample> examples;
  std::unordered_set<std::string> seen;
  size_t line_number = 0;
  size_t record_index = 0;
  size_t start = 0;
  while (start <= content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    ++line_number;
    start = end + 1;
    if (IsBlank(line)) {
      if (end == content.size()) break;
      continue;
    }
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParse,
                  LinePrefix(line_number) + "invalid JSON: " + e.what());
    }
    if (!record.is_object()) {
      throw Error(ErrorCode::kParse,
                  LinePrefix(line_number) + "record is not a JSON object");
    }
    LabeledExample ex;
    for (const char* field : {"text", "label"}) {
      auto it = record.find(field);
      if (it == record.end()) {
        throw Error(ErrorCode::kParse, LinePrefix(line_number) +
                                           "missing field '" + field + "'");
      }
      if (!it->is_string()) {
        throw Error(ErrorCode::kParse, LinePrefix(line_number) + "field '" +
                                           field + "' is not a string");
      }
    }
    ex.text = record["text"].get<std::string>();
    ex.label = record["label"].get<std::string>();
    if (auto it = record.find("id"); it != record.end()) {
      if (it->is_string()) {
        ex.id = it->get<std::string>();
      } else if (it->is_number_integer()) {
        ex.id = std::to_string(it->get<int64_t>());
      } else {
        throw Error(ErrorCode::kParse,
                    LinePrefix(line_number) + "field 'id' is not a string");
      }
    } else {
      ex.id = SynthesizedId(record_index);
    }
    if (ex.text.empty()) {
      throw Error(ErrorCode::kParse, LinePrefix(line_number) + "empty text");
    }
    if (!seen.insert(ex.id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  LinePrefix(line_number) + "duplicate id '" + ex.id + "'");
    }
    examples.push_back(std::move(ex));
    ++record_index;
    if (end == content.size()) break;
  }
  return Corpus::Create(std::move(examples), kind);
}

Corpus ParseCsvRecords(std::string_view content, TaskKind kind) {
  std::vector<CsvRecord> records = SplitCsv(content);
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "CSV file is empty");
  }
  const std::vector<std::string> expected = {"id", "text", "label"};
  if (records.front().fields != expected) {
    throw Error(ErrorCode::kParse,
                LinePrefix(records.front().line) +
                    "header must be exactly 'id,text,label'");
  }
  std::vector<LabeledExample> examples;
  std::unordered_set<std::string> seen;
  for (size_t r = 1; r < records.size(); ++r) {
    CsvRecord& rec = records[r];
    if (rec.fields.size() != 3) {
      throw Error(ErrorCode::kParse,
                  LinePrefix(rec.line) + "expected 3 fields, got " +
                      std::to_string(rec.fields.size()));
    }
    LabeledExample ex{std::move(rec.fields[0]), std::move(rec.fields[1]),
                      std::move(rec.fields[2])};
    if (ex.id.empty()) ex.id = SynthesizedId(r - 1);
    if (ex.text.empty()) {
      throw Error(ErrorCode::kParse, LinePrefix(rec.line) + "empty text");
    }
    if (ex.label.empty()) {
      throw Error(ErrorCode::kParse,
                  LinePrefix(rec.line) + "missing field 'label'");
    }
    if (!seen.insert(ex.id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  LinePrefix(rec.line) + "duplicate id '" + ex.id + "'");
    }
    examples.push_back(std::move(ex));
  }
  return Corpus::Create(std::move(examples), kind);
}

Corpus LoadRecords(const std::filesystem::path& path, RecordFormat format,
                   TaskKind kind) {
  const std::string content = ReadFile(path);
  return format == RecordFormat::kJsonl ? ParseJsonlRecords(content, kind)
                                        : ParseCsvRecords(content, kind);
}

std::string FormatJsonlRecords(std::span<const LabeledExample> examples) {
  std::string out;
  for (const LabeledExample& ex : examples) {
    nlohmann::ordered_json record;
    record["id"] = ex.id;
    record["text"] = ex.text;
    record["label"] = ex.label;
    out += record.dump();
    out.push_back('\n');
  }
  return out;
}

std::string FormatCsvRecords(std::span<const LabeledExample> examples) {
  std::string out = "id,text,label\r\n";
  for (const LabeledExample& ex : examples) {
    out += CsvField(ex.id);
    out.push_back(',');
    out += CsvField(ex.text);
    out.push_back(',');
    out += CsvField(ex.label);
    out += "\r\n";
  }
  return out;
}

SplitPlan MakeSplit(const Corpus& corpus, uint64_t seed, size_t n_train,
                    size_t n_test) {
  if (n_train + n_test > corpus.size()) {
    throw Error(ErrorCode::kSize,
                "n_train + n_test = " + std::to_string(n_train + n_test) +
                    " exceeds corpus size " + std::to_string(corpus.size()));
  }
  Rng rng(DeriveSeed("split", seed));
  std::vector<size_t> picks = rng.SampleIndices(corpus.size(), n_train + n_test);
  SplitPlan plan;
  plan.seed = seed;
  for (size_t i = 0; i < picks.size(); ++i) {
    const std::string& id = corpus.examples()[picks[i]].id;
    (i < n_train ? plan.train_ids : plan.test_ids).push_back(id);
  }
  return plan;
}

ForgetSet SelectForgetSet(const SplitPlan& plan, size_t j, uint64_t seed) {
  const size_t sizes[] = {j};
  return SelectDisjointForgetSets(plan, sizes, seed).front();
}

std::vector<ForgetSet> SelectDisjointForgetSets(const SplitPlan& plan,
                                                std::span<const size_t> sizes,
                                                uint64_t seed) {
  size_t total = 0;
  for (size_t j : sizes) {
    if (j == 0) {
      throw Error(ErrorCode::kEmptyForgetSet, "forget set size must be >= 1");
    }
    total += j;
  }
  if (total > plan.train_ids.size()) {
    throw Error(ErrorCode::kSize,
                "forget sets need " + std::to_string(total) +
                    " ids but the train split has " +
                    std::to_string(plan.train_ids.size()));
  }
  Rng rng(DeriveSeed("forget", seed));
  std::vector<size_t> picks = rng.SampleIndices(plan.train_ids.size(), total);
  std::vector<ForgetSet> out;
  size_t pos = 0;
  for (size_t j : sizes) {
    ForgetSet fs;
    for (size_t i = 0; i < j; ++i) {
      fs.ids.push_back(plan.train_ids[picks[pos++]]);
    }
    out.push_back(std::move(fs));
  }
  return out;
}

bool ShadowAssignment::IsIn(size_t forget_index, size_t model_index) const {
  const std::vector<size_t>& models = in_models.at(forget_index);
  return std::binary_search(models.begin(), models.end(), model_index);
}

size_t ShadowAssignment::InCount() const {
  return static_cast<size_t>(std::llround(static_cast<double>(k) * p));
}

ShadowAssignment ShadowSubsets(const SplitPlan& plan,
                               std::span<const ForgetSet> forget_sets,
                               size_t k, double p, uint64_t seed) {
  if (k == 0 || !(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kConfiguration, "need k >= 1 and 0 < p < 1");
  }
  const double in_count = static_cast<double>(k) * p;
  if (std::abs(in_count - std::round(in_count)) > 1e-9) {
    throw Error(ErrorCode::kConfiguration,
                "k*p = " + std::to_string(in_count) + " is not an integer");
  }
  std::unordered_set<std::string> train(plan.train_ids.begin(),
                                        plan.train_ids.end());
  std::unordered_map<std::string, size_t> owner;
  for (size_t f = 0; f < forget_sets.size(); ++f) {
    if (forget_sets[f].ids.empty()) {
      throw Error(ErrorCode::kEmptyForgetSet,
                  "forget set " + std::to_string(f) + " is empty");
    }
    for (const std::string& id : forget_sets[f].ids) {
      if (!train.contains(id)) {
        throw Error(ErrorCode::kConfiguration,
                    "forget id '" + id + "' is not a train id");
      }
      auto [it, inserted] = owner.emplace(id, f);
      if (!inserted) {
        throw Error(ErrorCode::kOverlap,
                    "id '" + id + "' appears in forget sets " +
                        std::to_string(it->second) + " and " +
                        std::to_string(f));
      }
    }
  }

  ShadowAssignment out;
  out.k = k;
  out.p = p;
  out.seed = seed;
  out.forget_sets.assign(forget_sets.begin(), forget_sets.end());
  out.subsets.resize(k);
  const size_t n_in = out.InCount();
  for (size_t f = 0; f < forget_sets.size(); ++f) {
    Rng rng(DeriveSeed("shadow-in", seed, {f}));
    std::vector<size_t> models = rng.SampleIndices(k, n_in);
    std::sort(models.begin(), models.end());
    out.in_models.push_back(std::move(models));
  }

  Rng member_rng(DeriveSeed("shadow-member", seed));
  for (const std::string& id : plan.train_ids) {
    if (auto it = owner.find(id); it != owner.end()) {
      for (size_t m : out.in_models[it->second]) out.subsets[m].push_back(id);
      continue;
    }
    for (size_t m = 0; m < k; ++m) {
      if (member_rng.Bernoulli(p)) out.subsets[m].push_back(id);
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const SplitPlan& plan) {
  j = nlohmann::json{{"seed", plan.seed},
                     {"train_ids", plan.train_ids},
                     {"test_ids", plan.test_ids}};
}

void from_json(const nlohmann::json& j, SplitPlan& plan) {
  j.at("seed").get_to(plan.seed);
  j.at("train_ids").get_to(plan.train_ids);
  j.at("test_ids").get_to(plan.test_ids);
}

void to_json(nlohmann::json& j, const ForgetSet& forget) {
  j = nlohmann::json{{"ids", forget.ids}};
}

void from_json(const nlohmann::json& j, ForgetSet& forget) {
  j.at("ids").get_to(forget.ids);
}

void to_json(nlohmann::json& j, const ShadowAssignment& a) {
  j = nlohmann::json{{"k", a.k},
                     {"p", a.p},
                     {"seed", a.seed},
                     {"forget_sets", a.forget_sets},
                     {"in_models", a.in_models},
                     {"subsets", a.subsets}};
}

void from_json(const nlohmann::json& j, ShadowAssignment& a) {
  j.at("k").get_to(a.k);
  j.at("p").get_to(a.p);
  j.at("seed").get_to(a.seed);
  j.at("forget_sets").get_to(a.forget_sets);
  j.at("in_models").get_to(a.in_models);
  j.at("subsets").get_to(a.subsets);
}

void to_json(nlohmann::json& j, const LabeledExample& ex) {
  j = nlohmann::json{{"id", ex.id}, {"text", ex.text}, {"label", ex.label}};
}

void from_json(const nlohmann::json& j, LabeledExample& ex) {
  j.at("id").get_to(ex.id);
  j.at("text").get_to(ex.text);
  j.at("label").get_to(ex.label);
}

}  // namespace icul
