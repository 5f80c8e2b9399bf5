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

// File helpers for run artifacts: digests and crash-safe writes.

#ifndef ICUL_STORAGE_H_
#define ICUL_STORAGE_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace icul {

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view bytes);

// Throws kIo when the file cannot be read.
std::string ReadFile(const std::filesystem::path& path);
std::string Sha256File(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file. Creates parent directories. Throws kIo.
void AtomicWrite(const std::filesystem::path& path, std::string_view bytes);

}  // namespace icul

#endif  // ICUL_STORAGE_H_
