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

// Client for a text-completion HTTP endpoint exposing next-token
// log-probabilities.
//
// Request (POST <url><path>, JSON):
//   {"model": ..., "prompt": ..., "max_tokens": 1, "temperature": 0,
//    "logprobs": <top_k>}
// Response: {"choices": [{"logprobs": {"top_logprobs": [{token: lp, ...}]}}]}
// (an array of {"token", "logprob"} objects is accepted in place of the map).
//
// Only the top-k tokens are visible, so the label distribution is the
// softmax over matched label tokens rather than over the full vocabulary.

#ifndef ICUL_REMOTE_H_
#define ICUL_REMOTE_H_

#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icul/model.h"
#include "icul/prompting.h"
#include "json.hpp"

namespace icul {

struct RemoteConfig {
  // scheme://host[:port]
  std::string url = "http://127.0.0.1:8080";
  std::string path = "/v1/completions";
  std::string model;
  // Name of the environment variable holding the bearer token; empty for
  // unauthenticated endpoints.
  std::string token_env;
  int top_k = 20;
  int max_in_flight = 4;
  double timeout_seconds = 30.0;
};

void to_json(nlohmann::json& j, const RemoteConfig& c);
void from_json(const nlohmann::json& j, RemoteConfig& c);

// First whitespace-delimited word of a label; what a label's first rendered
// token is matched against.
std::string LabelToken(std::string_view label);

class RemoteModel {
 public:
  // Throws kConfiguration when two labels share a first token.
  RemoteModel(RemoteConfig config, std::vector<std::string> label_set,
              PromptTemplate tmpl);

  const std::vector<std::string>& label_set() const { return label_set_; }
  const RemoteConfig& config() const { return config_; }
  const PromptTemplate& prompt_template() const { return template_; }

  nlohmann::json BuildRequest(std::string_view prompt) const;
  // Throws kIncompleteLogprobs when a label token is absent from the
  // returned top-k, kBackend for malformed bodies.
  ClassDistribution ParseResponse(std::string_view body) const;

  // Renders the prompt, posts it and parses the reply. Blocks while
  // max_in_flight requests are outstanding. Throws BackendError carrying
  // the HTTP status on transport failure.
  ClassDistribution Predict(std::span<const Demonstration> context,
                            std::string_view query) const;
  ClassDistribution Complete(std::string_view prompt) const;

 private:
  RemoteConfig config_;
  std::vector<std::string> label_set_;
  std::vector<std::string> label_tokens_;
  PromptTemplate template_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

}  // namespace icul

#endif  // ICUL_REMOTE_H_
