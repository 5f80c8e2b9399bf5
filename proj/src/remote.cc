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

#include "icul/remote.h"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "httplib.h"
#include "icul/status.h"

namespace icul {
namespace {

std::string_view TrimLeft(std::string_view s) {
  size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' ||
                          s[i] == '\r')) {
    ++i;
  }
  return s.substr(i);
}

std::string_view TrimRight(std::string_view s) {
  size_t n = s.size();
  while (n > 0 && (s[n - 1] == ' ' || s[n - 1] == '\t' || s[n - 1] == '\n' ||
                   s[n - 1] == '\r')) {
    --n;
  }
  return s.substr(0, n);
}

// Releases a semaphore slot on scope exit.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

}  // namespace

void to_json(nlohmann::json& j, const RemoteConfig& c) {
  j = nlohmann::json{{"url", c.url},
                     {"path", c.path},
                     {"model", c.model},
                     {"token_env", c.token_env},
                     {"top_k", c.top_k},
                     {"max_in_flight", c.max_in_flight},
                     {"timeout_seconds", c.timeout_seconds}};
}

void from_json(const nlohmann::json& j, RemoteConfig& c) {
  j.at("url").get_to(c.url);
  j.at("path").get_to(c.path);
  j.at("model").get_to(c.model);
  j.at("token_env").get_to(c.token_env);
  j.at("top_k").get_to(c.top_k);
  j.at("max_in_flight").get_to(c.max_in_flight);
  j.at("timeout_seconds").get_to(c.timeout_seconds);
}

std::string LabelToken(std::string_view label) {
  std::string_view trimmed = TrimLeft(label);
  size_t end = 0;
  while (end < trimmed.size() && trimmed[end] != ' ' && trimmed[end] != '\t' &&
         trimmed[end] != '\n' && trimmed[end] != '\r') {
    ++end;
  }
  return std::string(trimmed.substr(0, end));
}

RemoteModel::RemoteModel(RemoteConfig config, std::vector<std::string> label_set,
                         PromptTemplate tmpl)
    : config_(std::move(config)),
      label_set_(std::move(label_set)),
      template_(std::move(tmpl)) {
  template_.Validate();
  if (config_.top_k < 1 || config_.max_in_flight < 1) {
    throw Error(ErrorCode::kConfiguration,
                "remote top_k and max_in_flight must be >= 1");
  }
  for (const std::string& label : label_set_) {
    std::string token = LabelToken(label);
    if (token.empty()) {
      throw Error(ErrorCode::kConfiguration, "label '" + label + "' is blank");
    }
    for (const std::string& other : label_tokens_) {
      if (other == token) {
        throw Error(ErrorCode::kConfiguration,
                    "labels share first token '" + token + "'");
      }
    }
    label_tokens_.push_back(std::move(token));
  }
  in_flight_ = std::make_unique<std::counting_semaphore<>>(config_.max_in_flight);
}

nlohmann::json RemoteModel::BuildRequest(std::string_view prompt) const {
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  body["prompt"] = std::string(prompt);
  body["max_tokens"] = 1;
  body["temperature"] = 0;
  body["logprobs"] = config_.top_k;
  return nlohmann::json(body);
}

ClassDistribution RemoteModel::ParseResponse(std::string_view body) const {
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw BackendError(200, std::string("unparseable response: ") + e.what());
  }
  std::vector<std::pair<std::string, double>> entries;
  try {
    const nlohmann::json& top =
        reply.at("choices").at(0).at("logprobs").at("top_logprobs").at(0);
    if (top.is_object()) {
      for (const auto& [token, lp] : top.items()) {
        entries.emplace_back(token, lp.get<double>());
      }
    } else {
      for (const nlohmann::json& item : top) {
        entries.emplace_back(item.at("token").get<std::string>(),
                             item.at("logprob").get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(200, std::string("response lacks top_logprobs: ") +
                                e.what());
  }

  // Several surface forms (" positive", "positive") may match one label;
  // their probabilities add.
  const double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_mass(label_set_.size(), kNegInf);
  for (const auto& [token, lp] : entries) {
    const std::string_view core = TrimRight(TrimLeft(token));
    for (size_t c = 0; c < label_tokens_.size(); ++c) {
      if (core != label_tokens_[c]) continue;
      const double hi = std::max(log_mass[c], lp);
      log_mass[c] = (hi == kNegInf)
                        ? kNegInf
                        : hi + std::log(std::exp(log_mass[c] - hi) +
                                        std::exp(lp - hi));
    }
  }
  for (size_t c = 0; c < log_mass.size(); ++c) {
    if (log_mass[c] == kNegInf) {
      throw Error(ErrorCode::kIncompleteLogprobs,
                  "label '" + label_set_[c] + "' (token '" + label_tokens_[c] +
                      "') missing from returned top-" +
                      std::to_string(config_.top_k) + " log-probabilities");
    }
  }
  return ClassDistribution{label_set_, Softmax(log_mass)};
}

ClassDistribution RemoteModel::Predict(std::span<const Demonstration> context,
                                       std::string_view query) const {
  BuiltContext built;
  built.demonstrations.assign(context.begin(), context.end());
  built.forget_count = 0;
  built.rendered = RenderContext(built.demonstrations, 0, template_);
  return Complete(RenderQueryPrompt(built, query, template_));
}

ClassDistribution RemoteModel::Complete(std::string_view prompt) const {
  SlotGuard slot(*in_flight_);
  httplib::Client client(config_.url);
  const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
  client.set_connection_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  httplib::Headers headers;
  if (!config_.token_env.empty()) {
    const char* token = std::getenv(config_.token_env.c_str());
    if (token == nullptr) {
      throw Error(ErrorCode::kConfiguration,
                  "environment variable " + config_.token_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  auto result = client.Post(config_.path, headers, BuildRequest(prompt).dump(),
                            "application/json");
  if (!result) {
    throw BackendError(0, "request to " + config_.url + config_.path +
                              " failed: " + httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw BackendError(result->status,
                       "endpoint returned HTTP " +
                           std::to_string(result->status) + ": " +
                           result->body.substr(0, 200));
  }
  return ParseResponse(result->body);
}

}  // namespace icul
