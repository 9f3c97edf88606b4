// Copyright 2026 The Patternmine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PATTERNMINE_FILE_IO_H_
#define PATTERNMINE_FILE_IO_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace patternmine {

/// Throws Error(kIoError) when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

/// Called between the steps of an atomic write; tests use it to crash a
/// writer halfway. Stages: "temp-open", "temp-partial", "temp-synced",
/// "renamed".
using WriteFaultHook = std::function<void(std::string_view stage)>;

/// Writes to a sibling temp file, fsyncs it, then renames over `path` and
/// fsyncs the directory, so readers see either the old or the new content.
/// Throws Error(kIoError).
void write_file_atomic(const std::filesystem::path& path, std::string_view content,
                       const WriteFaultHook& hook = nullptr);

}  // namespace patternmine

#endif  // PATTERNMINE_FILE_IO_H_
