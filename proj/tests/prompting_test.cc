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
#include "icul/prompting.h"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include "icul/random.h"
#include "icul/storage.h"
#include "icul/unlearn.h"
#include "test_util.h"

namespace icul {
namespace {

const std::vector<std::string> kBinary = {"negative", "positive"};

std::vector<LabeledExample> Pool(size_t n) {
  std::vector<LabeledExample> pool;
  for (size_t i = 0; i < n; ++i) {
    pool.push_back({"p" + std::to_string(i), "pool text " + std::to_string(i),
                    kBinary[i % 2]});
  }
  return pool;
}

const std::vector<LabeledExample> kForget = {
    {"f0", "forget me", "positive"},
    {"f1", "forget me too", "negative"},
};

std::string Golden(const std::string& name) {
  return ReadFile(std::filesystem::path(ICUL_TEST_DATA_DIR) / "golden" / name);
}

TEST(FlipLabelTest, NeverReturnsTheTrueLabel) {
  const std::vector<std::string> labels = {"a", "b", "c", "d"};
  for (uint64_t seed = 0; seed < 200; ++seed) {
    for (const std::string& label : labels) {
      EXPECT_NE(FlipLabel(label, labels, seed), label);
    }
  }
}

TEST(FlipLabelTest, UniformOverAlternatives) {
  const std::vector<std::string> labels = {"a", "b", "c", "d"};
  std::map<std::string, int> counts;
  const int n = 10000;
  for (int seed = 0; seed < n; ++seed) ++counts[FlipLabel("a", labels, seed)];
  ASSERT_EQ(counts.size(), 3u);
  for (const auto& [label, count] : counts) {
    EXPECT_NEAR(static_cast<double>(count) / n, 1.0 / 3.0, 0.02) << label;
  }
}

TEST(FlipLabelTest, Errors) {
  const std::vector<std::string> one = {"only"};
  EXPECT_ICUL_ERROR(FlipLabel("only", one, 1), ErrorCode::kNoAlternative);
  EXPECT_ICUL_ERROR(FlipLabel("z", kBinary, 1), ErrorCode::kLabel);
}

TEST(FlipLabelTest, QuestionAnsweringDrawsFromPoolAnswers) {
  const std::vector<LabeledExample> pool = {{"p0", "capital of france", "paris"},
                                            {"p1", "capital of peru", "lima"}};
  const LabelFlipper flip =
      DefaultFlipper({{}, TaskKind::kQuestionAnswering}, pool, 4);
  const std::string flipped = flip({"q", "capital of chile", "santiago"});
  EXPECT_TRUE(flipped == "paris" || flipped == "lima") << flipped;

  const std::vector<LabeledExample> single = {{"p0", "x", "paris"}};
  const LabelFlipper stuck =
      DefaultFlipper({{}, TaskKind::kQuestionAnswering}, single, 4);
  EXPECT_ICUL_ERROR(stuck({"q", "y", "paris"}), ErrorCode::kNoAlternative);
}

TEST(FlipSeedTest, DependsOnIdNotOrder) {
  EXPECT_EQ(FlipSeed(3, "x"), FlipSeed(3, "x"));
  EXPECT_NE(FlipSeed(3, "x"), FlipSeed(3, "y"));
  EXPECT_NE(FlipSeed(3, "x"), FlipSeed(4, "x"));
}

TEST(PromptTemplateTest, Validation) {
  PromptTemplate t;
  EXPECT_NO_THROW(t.Validate());
  t.example_format = "{input}";
  EXPECT_ICUL_ERROR(t.Validate(), ErrorCode::kConfiguration);
  t = PromptTemplate{};
  t.example_format = "{input} {label} {label}";
  EXPECT_ICUL_ERROR(t.Validate(), ErrorCode::kConfiguration);
  t = PromptTemplate{};
  t.query_format = "{input} {label}";
  EXPECT_ICUL_ERROR(t.Validate(), ErrorCode::kConfiguration);
  t = PromptTemplate{};
  t.block_separator = "";
  EXPECT_ICUL_ERROR(t.Validate(), ErrorCode::kConfiguration);
}

TEST(PromptTemplateTest, SlotTextIsNotRescanned) {
  PromptTemplate t;
  t.example_format = "{label}: {input}";
  EXPECT_EQ(t.RenderExample("{label}", "pos"), "pos: {label}");
  EXPECT_EQ(t.RenderQuery("{input}"), "{input} ");
}

TEST(SanitizationTest, SeparatorInsideTextIsRejected) {
  const PromptTemplate t;
  EXPECT_ICUL_ERROR(CheckSanitized("two\nlines", "positive", t),
                    ErrorCode::kSanitization);
  EXPECT_ICUL_ERROR(CheckSanitized("fine", "pos\nitive", t),
                    ErrorCode::kSanitization);
  EXPECT_NO_THROW(CheckSanitized("fine", "positive", t));
  const std::vector<LabeledExample> forget = {{"f", "a\nb", "positive"}};
  EXPECT_ICUL_ERROR(BuildContext({ContextMode::kIcul, 2, 1}, forget, Pool(4),
                                 {kBinary}, t),
                    ErrorCode::kSanitization);
}

TEST(BuildContextTest, IculLayout) {
  const auto pool = Pool(20);
  const BuiltContext c = BuildContext({ContextMode::kIcul, 6, 9}, kForget,
                                      pool, {kBinary}, PromptTemplate{});
  ASSERT_EQ(c.demonstrations.size(), 8u);
  EXPECT_EQ(c.forget_count, 2u);
  for (size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(c.demonstrations[i].text, kForget[i].text);
    EXPECT_NE(c.demonstrations[i].label, kForget[i].label);
  }
  std::set<std::string> texts;
  for (size_t i = 2; i < 8; ++i) {
    const Demonstration& d = c.demonstrations[i];
    bool found = false;
    for (const LabeledExample& ex : pool) {
      if (ex.text == d.text) {
        EXPECT_EQ(ex.label, d.label);
        found = true;
      }
    }
    EXPECT_TRUE(found) << d.text;
    texts.insert(d.text);
  }
  EXPECT_EQ(texts.size(), 6u);
  EXPECT_EQ(c, BuildContext({ContextMode::kIcul, 6, 9}, kForget, pool,
                            {kBinary}, PromptTemplate{}));
}

TEST(BuildContextTest, IclKeepsTrueLabels) {
  const BuiltContext c = BuildContext({ContextMode::kIcl, 3, 9}, kForget,
                                      Pool(10), {kBinary}, PromptTemplate{});
  EXPECT_EQ(c.demonstrations[0].label, "positive");
  EXPECT_EQ(c.demonstrations[1].label, "negative");
}

TEST(BuildContextTest, RandomIculUsesDistinctPoolStandIns) {
  const auto pool = Pool(10);
  const BuiltContext c = BuildContext({ContextMode::kRandomIcul, 4, 2},
                                      kForget, pool, {kBinary},
                                      PromptTemplate{});
  ASSERT_EQ(c.demonstrations.size(), 6u);
  std::set<std::string> texts;
  for (const Demonstration& d : c.demonstrations) {
    EXPECT_NE(d.text.find("pool text"), std::string::npos);
    texts.insert(d.text);
  }
  EXPECT_EQ(texts.size(), 6u);
}

TEST(BuildContextTest, EmptyForgetSetMakesIclAndIculEqual) {
  const auto pool = Pool(10);
  EXPECT_EQ(BuildContext({ContextMode::kIcl, 5, 3}, {}, pool, {kBinary},
                         PromptTemplate{}),
            BuildContext({ContextMode::kIcul, 5, 3}, {}, pool, {kBinary},
                         PromptTemplate{}));
}

TEST(BuildContextTest, Errors) {
  auto pool = Pool(4);
  EXPECT_ICUL_ERROR(BuildContext({ContextMode::kIcul, 5, 1}, kForget, pool,
                                 {kBinary}, PromptTemplate{}),
                    ErrorCode::kSize);
  EXPECT_ICUL_ERROR(BuildContext({ContextMode::kRandomIcul, 3, 1}, kForget,
                                 pool, {kBinary}, PromptTemplate{}),
                    ErrorCode::kSize);
  pool.push_back(kForget[0]);
  EXPECT_ICUL_ERROR(BuildContext({ContextMode::kIcul, 2, 1}, kForget, pool,
                                 {kBinary}, PromptTemplate{}),
                    ErrorCode::kOverlap);
}

TEST(RenderTest, BlockSeparatorSitsBetweenTheBlocks) {
  PromptTemplate t;
  t.block_separator = " || ";
  t.pair_separator = " | ";
  const std::vector<Demonstration> demos = {
      {"x1", "a"}, {"x2", "b"}, {"y1", "c"}};
  EXPECT_EQ(RenderContext(demos, 2, t), "x1 a | x2 b || y1 c");
  EXPECT_EQ(RenderContext(demos, 0, t), "x1 a | x2 b | y1 c");
  EXPECT_EQ(RenderContext(demos, 3, t), "x1 a | x2 b | y1 c");
}

// Property: parsing a rendered context recovers the demonstrations for
// random block sizes and both equal and distinct separators.
TEST(RenderTest, ParseInvertsRender) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    PromptTemplate t;
    if (trial % 2) {
      t.block_separator = "\n\n";
      t.example_format = "Input: {input} Label: {label}";
    }
    std::vector<Demonstration> demos;
    const size_t n = rng.Below(8);
    for (size_t i = 0; i < n; ++i) {
      demos.push_back({"text " + std::to_string(rng.Below(1000)),
                       kBinary[rng.Below(2)]});
    }
    const size_t forget = n == 0 ? 0 : rng.Below(n + 1);
    EXPECT_EQ(ParseRenderedContext(RenderContext(demos, forget, t), forget, t),
              demos)
        << "trial " << trial;
  }
}

TEST(BuiltContextJsonTest, RoundTrip) {
  const BuiltContext c = BuildContext({ContextMode::kIcul, 3, 9}, kForget,
                                      Pool(10), {kBinary}, PromptTemplate{});
  EXPECT_EQ(nlohmann::json(c).get<BuiltContext>(), c);
  PromptTemplate t;
  t.prefix = "Classify.";
  EXPECT_EQ(nlohmann::json(t).get<PromptTemplate>(), t);
}

TEST(GoldenPromptTest, ExplicitContextWithCustomTemplate) {
  PromptTemplate t;
  t.prefix = "Classify each review.\n\n";
  t.example_format = "Review: {input}\nSentiment: {label}";
  t.pair_separator = "\n\n";
  t.block_separator = "\n\n---\n\n";
  t.query_format = "Review: {input}\nSentiment:";
  BuiltContext c;
  c.demonstrations = {{"a slow, joyless film", "positive"},
                      {"sharp and funny", "positive"},
                      {"I left early", "negative"}};
  c.forget_count = 1;
  c.rendered = RenderContext(c.demonstrations, c.forget_count, t);
  EXPECT_EQ(RenderQueryPrompt(c, "a warm surprise", t),
            Golden("custom_template.txt"));
}

TEST(GoldenPromptTest, IculContextFromFixedSeeds) {
  const auto train = testing::SeparableExamples(12);
  const std::vector<LabeledExample> forget(train.begin(), train.begin() + 2);
  const std::vector<LabeledExample> pool(train.begin() + 2, train.end());
  IculOptions options;
  options.num_correct = 4;
  options.context_seed = 17;
  options.flip_seed = 17;
  options.task.label_set = kBinary;
  const ToyModel model(kBinary, 64, 1.0, 0.5);
  const UnlearnedModel unlearned =
      IculUnlearn(ModelHandle::Toy(model), forget, pool, options);
  ASSERT_TRUE(unlearned.fixed_context().has_value());
  EXPECT_EQ(RenderQueryPrompt(*unlearned.fixed_context(), "good film tonight",
                              options.tmpl),
            Golden("icul_default_template.txt"));
}

}  // namespace
}  // namespace icul
