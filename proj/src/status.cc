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

#include "icul/status.h"

namespace icul {

std::string_view ErrorCategory(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kEmptyCorpus:
      return "empty-corpus";
    case ErrorCode::kDuplicateId:
      return "duplicate-id";
    case ErrorCode::kSize:
      return "size";
    case ErrorCode::kEmptyForgetSet:
      return "empty-forget-set";
    case ErrorCode::kConfiguration:
      return "configuration";
    case ErrorCode::kOverlap:
      return "overlap";
    case ErrorCode::kCoverage:
      return "coverage";
    case ErrorCode::kLabel:
      return "label";
    case ErrorCode::kNoAlternative:
      return "no-alternative";
    case ErrorCode::kSanitization:
      return "sanitization";
    case ErrorCode::kDivergence:
      return "divergence";
    case ErrorCode::kBackend:
      return "backend";
    case ErrorCode::kIncompleteLogprobs:
      return "incomplete-logprobs";
    case ErrorCode::kCapability:
      return "capability";
    case ErrorCode::kSampleSize:
      return "sample-size";
    case ErrorCode::kAlignment:
      return "alignment";
    case ErrorCode::kClass:
      return "class";
    case ErrorCode::kIntegrity:
      return "integrity";
    case ErrorCode::kDependency:
      return "dependency";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace icul
