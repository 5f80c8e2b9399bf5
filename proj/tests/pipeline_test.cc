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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include "icul/config.h"
#include "icul/storage.h"
#include "icul/stub_server.h"
#include "test_util.h"

namespace icul {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

const fs::path kTestDir = ICUL_TEST_DATA_DIR;

constexpr char kSmall[] = R"(
[data]
path = "../data/synthetic.jsonl"
n_train = 200
n_test = 50

[run]
seed = 5
threads = 1

[model]
epochs = 5

[forget]
sizes = [1, 3]
sets = [4, 2]

[methods]
icul = [2]
ga_lr = [5e-5]
ga_epochs = 2
)";

RunConfig Small() { return ParseRunConfig(kSmall, kTestDir); }

class TempRoot : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("icul-" + std::string(::testing::UnitTest::GetInstance()
                                       ->current_test_info()
                                       ->name()));
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path root_;
};

TEST(ConfigTest, DefaultsAndOverrides) {
  const RunConfig c = Small();
  EXPECT_EQ(c.n_train, 200u);
  EXPECT_EQ(c.k, 10u);
  EXPECT_EQ(c.model.epochs, 5u);
  EXPECT_EQ(c.model.alpha, ToyHyper{}.alpha);
  EXPECT_EQ(c.forget_sets, (std::vector<size_t>{4, 2}));
  EXPECT_EQ(c.ResolvedDataPath(), kTestDir / "../data/synthetic.jsonl");
  std::vector<std::string> names;
  for (const MethodSpec& m : c.Methods()) names.push_back(m.Name());
  EXPECT_EQ(names, (std::vector<std::string>{"baseline", "retrain", "icul(2)",
                                             "ga(5e-05)"}));
}

TEST(ConfigTest, ScalarSetCountAppliesToEverySize) {
  const RunConfig c = ParseRunConfig(
      "[data]\npath = \"x\"\n[forget]\nsizes = [1, 5]\nsets = 3\n", ".");
  EXPECT_EQ(c.forget_sets, (std::vector<size_t>{3, 3}));
}

TEST(ConfigTest, UnknownKeysAndSyntaxErrors) {
  try {
    ParseRunConfig("[data]\npath = \"x\"\nbogus = 1\n", ".");
    FAIL() << "expected a configuration error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
    EXPECT_THAT(e.what(), HasSubstr("bogus"));
    EXPECT_THAT(e.what(), HasSubstr("line 3"));
  }
  EXPECT_ICUL_ERROR(ParseRunConfig("[data]\npath = \"x\"\n[extra]\n", "."),
                    ErrorCode::kConfiguration);
  EXPECT_ICUL_ERROR(ParseRunConfig("[data\npath = 1\n", "."),
                    ErrorCode::kParse);
  EXPECT_ICUL_ERROR(ParseRunConfig("[data]\npath = 3\n", "."),
                    ErrorCode::kConfiguration);
}

TEST(ConfigTest, ValidationRejectsBadValues) {
  RunConfig c = Small();
  EXPECT_NO_THROW(c.Validate());
  c.k = 3;
  EXPECT_ICUL_ERROR(c.Validate(), ErrorCode::kConfiguration);
  c = Small();
  c.fpr_grid = {1.5};
  EXPECT_ICUL_ERROR(c.Validate(), ErrorCode::kConfiguration);
  c = Small();
  c.forget_sizes = {0};
  c.forget_sets = {1};
  EXPECT_ICUL_ERROR(c.Validate(), ErrorCode::kConfiguration);
  c = Small();
  c.baseline = c.retrain = false;
  c.icul.clear();
  c.ga_lr.clear();
  EXPECT_ICUL_ERROR(c.Validate(), ErrorCode::kConfiguration);
  c = Small();
  c.prompt.example_format = "{input}";
  EXPECT_ICUL_ERROR(c.Validate(), ErrorCode::kConfiguration);
}

TEST(ConfigTest, SnapshotIgnoresThreadCount) {
  RunConfig a = Small();
  RunConfig b = Small();
  b.threads = 8;
  EXPECT_EQ(ConfigSnapshot(a), ConfigSnapshot(b));
  b.seed = 6;
  EXPECT_NE(ConfigSnapshot(a), ConfigSnapshot(b));
}

TEST(MethodSlugTest, FileSafeNames) {
  MethodSpec m;
  m.kind = MethodKind::kIcul;
  EXPECT_EQ(MethodSlug(m), "icul-6");
  m.kind = MethodKind::kGradientAscent;
  EXPECT_EQ(MethodSlug(m), "ga-5e-05");
  m.kind = MethodKind::kBaseline;
  EXPECT_EQ(MethodSlug(m), "baseline");
}

TEST_F(TempRoot, EndToEndRunWritesTheLayout) {
  std::ostringstream log;
  Pipeline pipeline(Small(), root_, log);
  pipeline.RunAll();
  const fs::path dir = pipeline.run_dir();
  EXPECT_EQ(dir.parent_path(), root_);
  EXPECT_EQ(dir.filename().string().size(), 16u);
  for (const char* file :
       {"manifest.json", "data/corpus.jsonl", "data/split.json",
        "shadows/assignment.json", "shadows/model-00.json",
        "shadows/model-09.json", "unlearn/icul-2.json", "unlearn/ga-5e-05.json",
        "audit/icul-2/scores.csv", "audit/icul-2/records.json",
        "report/summary.csv", "report/roc-J1.svg", "report/roc-J3.svg",
        "report/roc/icul-2-J1.csv", "stages/report.json"}) {
    EXPECT_TRUE(fs::exists(dir / file)) << file;
  }
  const std::string summary = ReadFile(dir / "report/summary.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "method,J,L_or_lr,auc,tpr_at_1e-3,tpr_at_1e-2,tpr_at_1e-1,"
            "train_acc,forget_acc,test_acc");
  // Four methods at two forget-set sizes.
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 9);

  const std::string scores = ReadFile(dir / "audit/icul-2/scores.csv");
  EXPECT_EQ(scores.substr(0, scores.find('\n')),
            "forget_set_id,point_id,model_index,in_or_out,method,score");

  const nlohmann::json manifest =
      nlohmann::json::parse(ReadFile(dir / "manifest.json"));
  EXPECT_EQ(manifest["version"], kVersion);
  EXPECT_EQ(manifest["data"]["sha256"],
            Sha256File(Small().ResolvedDataPath()));
}

TEST_F(TempRoot, RerunIsUpToDateAndByteIdentical) {
  std::ostringstream first_log;
  Pipeline first(Small(), root_ / "a", first_log);
  first.RunAll();
  const std::string summary = ReadFile(first.run_dir() / "report/summary.csv");
  const std::string manifest = ReadFile(first.run_dir() / "manifest.json");

  std::ostringstream again_log;
  Pipeline again(Small(), root_ / "a", again_log);
  again.RunAll();
  EXPECT_THAT(again_log.str(), HasSubstr("ingest: up to date"));
  EXPECT_THAT(again_log.str(), HasSubstr("report: up to date"));
  EXPECT_EQ(ReadFile(again.run_dir() / "manifest.json"), manifest);

  std::ostringstream fresh_log;
  RunConfig threaded = Small();
  threaded.threads = 3;
  Pipeline fresh(threaded, root_ / "b", fresh_log);
  fresh.RunAll();
  EXPECT_EQ(fresh.run_dir().filename(), first.run_dir().filename());
  EXPECT_EQ(ReadFile(fresh.run_dir() / "report/summary.csv"), summary);
}

TEST_F(TempRoot, StagesNeedTheirPrerequisites) {
  std::ostringstream log;
  Pipeline pipeline(Small(), root_, log);
  EXPECT_ICUL_ERROR(pipeline.TrainShadows(), ErrorCode::kDependency);
  EXPECT_ICUL_ERROR(pipeline.Audit(), ErrorCode::kDependency);
  pipeline.Ingest();
  pipeline.TrainShadows();
  EXPECT_ICUL_ERROR(pipeline.Report(), ErrorCode::kDependency);
}

TEST_F(TempRoot, TamperedArtifactIsAnIntegrityError) {
  std::ostringstream log;
  Pipeline pipeline(Small(), root_, log);
  pipeline.Ingest();
  std::ofstream(pipeline.run_dir() / "data/split.json", std::ios::app) << " ";
  try {
    pipeline.TrainShadows();
    FAIL() << "expected an integrity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIntegrity);
    EXPECT_THAT(e.what(), HasSubstr("split.json"));
  }
}

TEST_F(TempRoot, SelectMethodsByName) {
  std::ostringstream log;
  Pipeline pipeline(Small(), root_, log);
  const std::vector<std::string> names = {"icul(2)", "ga-5e-05"};
  const auto picked = pipeline.SelectMethods(names);
  ASSERT_EQ(picked.size(), 2u);
  EXPECT_EQ(picked[0].kind, MethodKind::kIcul);
  EXPECT_EQ(picked[1].kind, MethodKind::kGradientAscent);
  const std::vector<std::string> bad = {"icul(9)"};
  EXPECT_ICUL_ERROR(pipeline.SelectMethods(bad), ErrorCode::kConfiguration);
}

TEST_F(TempRoot, RemoteBackendSkipsWeightMethods) {
  StubServer server([](const std::string&) {
    return StubReply{200, R"({"choices":[{"logprobs":{"top_logprobs":[)"
                          R"({" positive":-0.4," negative":-1.2}]}}]})"};
  });
  server.Start();
  RunConfig config = Small();
  config.forget_sizes = {1};
  config.forget_sets = {4};
  config.backend = BackendKind::kRemote;
  config.remote.url = server.url();
  std::ostringstream log;
  Pipeline pipeline(config, root_, log);
  pipeline.RunAll();
  server.Stop();
  EXPECT_THAT(log.str(), HasSubstr("notice: capability: ga(5e-05)"));
  EXPECT_THAT(log.str(), HasSubstr("notice: capability: retrain"));
  const nlohmann::json record = nlohmann::json::parse(
      ReadFile(pipeline.run_dir() / "stages/unlearn-ga-5e-05.json"));
  EXPECT_TRUE(record["skipped"].get<bool>());
  const std::string summary =
      ReadFile(pipeline.run_dir() / "report/summary.csv");
  EXPECT_THAT(summary, HasSubstr("\nicul,1,2,"));
  EXPECT_THAT(summary, ::testing::Not(HasSubstr("\nga,")));
  // Every audited query went over the wire: baseline and ICUL, 10 models,
  // 4 one-point forget sets.
  EXPECT_GE(server.requests().size(), 80u);
}

}  // namespace
}  // namespace icul
