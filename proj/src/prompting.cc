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

#include <algorithm>
#include <set>
#include <unordered_set>

#include "icul/random.h"
#include "icul/status.h"

namespace icul {
namespace {

constexpr std::string_view kInputSlot = "{input}";
constexpr std::string_view kLabelSlot = "{label}";

size_t CountOccurrences(std::string_view haystack, std::string_view needle) {
  size_t count = 0;
  for (size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

std::string ReplaceOnce(std::string_view pattern, std::string_view slot,
                        std::string_view value) {
  const size_t pos = pattern.find(slot);
  std::string out(pattern.substr(0, pos));
  out += value;
  out += pattern.substr(pos + slot.size());
  return out;
}

std::vector<std::string_view> SplitAll(std::string_view text,
                                       std::string_view sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + sep.size();
  }
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

Demonstration ParseExample(std::string_view piece, const PromptTemplate& tmpl) {
  const std::string_view fmt = tmpl.example_format;
  const size_t input_pos = fmt.find(kInputSlot);
  const size_t label_pos = fmt.find(kLabelSlot);
  const bool input_first = input_pos < label_pos;
  const size_t first = std::min(input_pos, label_pos);
  const size_t second = std::max(input_pos, label_pos);
  const std::string_view lead = fmt.substr(0, first);
  const std::string_view middle =
      fmt.substr(first + kInputSlot.size(), second - first - kInputSlot.size());
  const std::string_view tail = fmt.substr(second + kLabelSlot.size());
  if (!StartsWith(piece, lead) || !EndsWith(piece, tail)) {
    throw Error(ErrorCode::kParse, "demonstration does not match template");
  }
  std::string_view body =
      piece.substr(lead.size(), piece.size() - lead.size() - tail.size());
  const size_t cut = input_first ? body.rfind(middle) : body.find(middle);
  if (cut == std::string_view::npos) {
    throw Error(ErrorCode::kParse, "demonstration does not match template");
  }
  std::string a(body.substr(0, cut));
  std::string b(body.substr(cut + middle.size()));
  return input_first ? Demonstration{std::move(a), std::move(b)}
                     : Demonstration{std::move(b), std::move(a)};
}

}  // namespace

void PromptTemplate::Validate() const {
  if (CountOccurrences(example_format, kInputSlot) != 1 ||
      CountOccurrences(example_format, kLabelSlot) != 1) {
    throw Error(ErrorCode::kConfiguration,
                "example_format needs {input} and {label} exactly once");
  }
  if (CountOccurrences(query_format, kInputSlot) != 1 ||
      CountOccurrences(query_format, kLabelSlot) != 0) {
    throw Error(ErrorCode::kConfiguration,
                "query_format needs {input} exactly once and no {label}");
  }
  if (pair_separator.empty() || block_separator.empty()) {
    throw Error(ErrorCode::kConfiguration, "separators must be non-empty");
  }
}

std::string PromptTemplate::RenderExample(std::string_view input,
                                          std::string_view label) const {
  // Substitute the later slot first so inserted text is never rescanned.
  const size_t input_pos = example_format.find(kInputSlot);
  const size_t label_pos = example_format.find(kLabelSlot);
  if (input_pos < label_pos) {
    std::string partial = ReplaceOnce(example_format, kLabelSlot, label);
    return ReplaceOnce(partial, kInputSlot, input);
  }
  std::string partial = ReplaceOnce(example_format, kInputSlot, input);
  return ReplaceOnce(partial, kLabelSlot, label);
}

std::string PromptTemplate::RenderQuery(std::string_view input) const {
  return ReplaceOnce(query_format, kInputSlot, input);
}

void to_json(nlohmann::json& j, const PromptTemplate& t) {
  j = nlohmann::json{{"example_format", t.example_format},
                     {"pair_separator", t.pair_separator},
                     {"block_separator", t.block_separator},
                     {"query_format", t.query_format},
                     {"prefix", t.prefix}};
}

void from_json(const nlohmann::json& j, PromptTemplate& t) {
  j.at("example_format").get_to(t.example_format);
  j.at("pair_separator").get_to(t.pair_separator);
  j.at("block_separator").get_to(t.block_separator);
  j.at("query_format").get_to(t.query_format);
  j.at("prefix").get_to(t.prefix);
}

void CheckSanitized(std::string_view text, std::string_view label,
                    const PromptTemplate& tmpl) {
  for (std::string_view field : {text, label}) {
    for (std::string_view sep : {std::string_view(tmpl.pair_separator),
                                 std::string_view(tmpl.block_separator)}) {
      if (field.find(sep) != std::string_view::npos) {
        throw Error(ErrorCode::kSanitization,
                    "input contains a prompt separator: '" +
                        std::string(field.substr(0, 40)) + "'");
      }
    }
  }
}

void CheckSanitized(std::span<const LabeledExample> examples,
                    const PromptTemplate& tmpl) {
  for (const LabeledExample& ex : examples) {
    try {
      CheckSanitized(ex.text, ex.label, tmpl);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSanitization,
                  "record '" + ex.id + "': " + e.what());
    }
  }
}

std::string_view ContextModeName(ContextMode mode) {
  switch (mode) {
    case ContextMode::kIcul:
      return "icul";
    case ContextMode::kIcl:
      return "icl";
    case ContextMode::kRandomIcul:
      return "random_icul";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const BuiltContext& c) {
  nlohmann::json demos = nlohmann::json::array();
  for (const Demonstration& d : c.demonstrations) {
    demos.push_back({{"text", d.text}, {"label", d.label}});
  }
  j = nlohmann::json{{"demonstrations", demos},
                     {"forget_count", c.forget_count},
                     {"rendered", c.rendered}};
}

void from_json(const nlohmann::json& j, BuiltContext& c) {
  c.demonstrations.clear();
  for (const nlohmann::json& d : j.at("demonstrations")) {
    c.demonstrations.push_back(
        {d.at("text").get<std::string>(), d.at("label").get<std::string>()});
  }
  j.at("forget_count").get_to(c.forget_count);
  j.at("rendered").get_to(c.rendered);
}

std::string FlipLabel(std::string_view label,
                      std::span<const std::string> label_set, uint64_t seed) {
  if (label_set.size() < 2) {
    throw Error(ErrorCode::kNoAlternative,
                "cannot flip '" + std::string(label) +
                    "': label set has no alternative");
  }
  std::vector<std::string_view> alternatives;
  bool found = false;
  for (const std::string& candidate : label_set) {
    if (candidate == label) {
      found = true;
    } else {
      alternatives.push_back(candidate);
    }
  }
  if (!found) {
    throw Error(ErrorCode::kLabel,
                "label '" + std::string(label) + "' not in label set");
  }
  Rng rng(seed);
  return std::string(alternatives[rng.Below(alternatives.size())]);
}

uint64_t FlipSeed(uint64_t run_seed, std::string_view example_id) {
  return DeriveSeed("flip", run_seed, {}, example_id);
}

LabelFlipper DefaultFlipper(const TaskInfo& task,
                            std::span<const LabeledExample> pool,
                            uint64_t run_seed) {
  if (task.kind == TaskKind::kClassification) {
    return [labels = task.label_set, run_seed](const LabeledExample& ex) {
      return FlipLabel(ex.label, labels, FlipSeed(run_seed, ex.id));
    };
  }
  std::set<std::string> answers;
  for (const LabeledExample& ex : pool) answers.insert(ex.label);
  return [answers = std::vector<std::string>(answers.begin(), answers.end()),
          run_seed](const LabeledExample& ex) {
    std::vector<std::string> candidates = answers;
    if (std::find(candidates.begin(), candidates.end(), ex.label) ==
        candidates.end()) {
      candidates.push_back(ex.label);
    }
    std::sort(candidates.begin(), candidates.end());
    return FlipLabel(ex.label, candidates, FlipSeed(run_seed, ex.id));
  };
}

BuiltContext BuildContext(const ContextSpec& spec,
                          std::span<const LabeledExample> forget,
                          std::span<const LabeledExample> pool,
                          const TaskInfo& task, const PromptTemplate& tmpl) {
  return BuildContext(spec, forget, pool, tmpl,
                      DefaultFlipper(task, pool, spec.seed));
}

BuiltContext BuildContext(const ContextSpec& spec,
                          std::span<const LabeledExample> forget,
                          std::span<const LabeledExample> pool,
                          const PromptTemplate& tmpl,
                          const LabelFlipper& flip) {
  tmpl.Validate();
  std::unordered_set<std::string_view> forget_ids;
  for (const LabeledExample& ex : forget) forget_ids.insert(ex.id);
  for (const LabeledExample& ex : pool) {
    if (forget_ids.contains(ex.id)) {
      throw Error(ErrorCode::kOverlap,
                  "pool and forget set share id '" + ex.id + "'");
    }
  }
  const size_t needed = spec.num_correct +
                        (spec.mode == ContextMode::kRandomIcul ? forget.size() : 0);
  if (needed > pool.size()) {
    throw Error(ErrorCode::kSize, "pool has " + std::to_string(pool.size()) +
                                      " examples, context needs " +
                                      std::to_string(needed));
  }
  CheckSanitized(forget, tmpl);

  Rng rng(DeriveSeed("context", spec.seed));
  // One draw covers the L correct examples and, for random ICUL, the
  // stand-ins, keeping the two groups distinct.
  std::vector<size_t> picks = rng.SampleIndices(pool.size(), needed);

  BuiltContext out;
  switch (spec.mode) {
    case ContextMode::kIcul:
      for (const LabeledExample& ex : forget) {
        out.demonstrations.push_back({ex.text, flip(ex)});
      }
      break;
    case ContextMode::kIcl:
      for (const LabeledExample& ex : forget) {
        out.demonstrations.push_back({ex.text, ex.label});
      }
      break;
    case ContextMode::kRandomIcul:
      for (size_t i = 0; i < forget.size(); ++i) {
        const LabeledExample& ex = pool[picks[spec.num_correct + i]];
        out.demonstrations.push_back({ex.text, flip(ex)});
      }
      break;
  }
  out.forget_count = out.demonstrations.size();
  for (size_t i = 0; i < spec.num_correct; ++i) {
    const LabeledExample& ex = pool[picks[i]];
    CheckSanitized(ex.text, ex.label, tmpl);
    out.demonstrations.push_back({ex.text, ex.label});
  }
  out.rendered = RenderContext(out.demonstrations, out.forget_count, tmpl);
  return out;
}

std::string RenderContext(std::span<const Demonstration> demonstrations,
                          size_t forget_count, const PromptTemplate& tmpl) {
  std::string out;
  for (size_t i = 0; i < demonstrations.size(); ++i) {
    if (i > 0) {
      out += (i == forget_count) ? tmpl.block_separator : tmpl.pair_separator;
    }
    out += tmpl.RenderExample(demonstrations[i].text, demonstrations[i].label);
  }
  return out;
}

std::string RenderQueryPrompt(const BuiltContext& context,
                              std::string_view query,
                              const PromptTemplate& tmpl) {
  std::string out = tmpl.prefix;
  if (!context.rendered.empty()) {
    out += context.rendered;
    out += tmpl.pair_separator;
  }
  out += tmpl.RenderQuery(query);
  return out;
}

std::vector<Demonstration> ParseRenderedContext(std::string_view rendered,
                                                size_t forget_count,
                                                const PromptTemplate& tmpl) {
  std::vector<Demonstration> out;
  if (rendered.empty()) return out;
  std::vector<std::string_view> pieces;
  if (tmpl.block_separator == tmpl.pair_separator || forget_count == 0) {
    pieces = SplitAll(rendered, tmpl.pair_separator);
  } else {
    const size_t cut = rendered.find(tmpl.block_separator);
    std::string_view forget_block = rendered.substr(0, cut);
    pieces = SplitAll(forget_block, tmpl.pair_separator);
    if (cut != std::string_view::npos) {
      for (std::string_view piece :
           SplitAll(rendered.substr(cut + tmpl.block_separator.size()),
                    tmpl.pair_separator)) {
        pieces.push_back(piece);
      }
    }
  }
  for (std::string_view piece : pieces) out.push_back(ParseExample(piece, tmpl));
  return out;
}

}  // namespace icul
