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

#ifndef ICUL_STATUS_H_
#define ICUL_STATUS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace icul {

// Machine-readable failure categories. The CLI prints Category() on stderr.
enum class ErrorCode {
  kParse,
  kEmptyCorpus,
  kDuplicateId,
  kSize,
  kEmptyForgetSet,
  kConfiguration,
  kOverlap,
  kCoverage,
  kLabel,
  kNoAlternative,
  kSanitization,
  kDivergence,
  kBackend,
  kIncompleteLogprobs,
  kCapability,
  kSampleSize,
  kAlignment,
  kClass,
  kIntegrity,
  kDependency,
  kIo,
};

std::string_view ErrorCategory(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }
  std::string_view Category() const { return ErrorCategory(code_); }

 private:
  ErrorCode code_;
};

// Backend failures carry the transport status (0 when no response arrived).
class BackendError : public Error {
 public:
  BackendError(int http_status, const std::string& message)
      : Error(ErrorCode::kBackend, message), http_status_(http_status) {}

  int http_status() const { return http_status_; }

 private:
  int http_status_;
};

}  // namespace icul

#endif  // ICUL_STATUS_H_
