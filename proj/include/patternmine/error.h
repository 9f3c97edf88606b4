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

#ifndef PATTERNMINE_ERROR_H_
#define PATTERNMINE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace patternmine {

enum class ErrorCode {
  // pattern model / curation
  kUnknownPattern,
  kDuplicateName,
  kUnknownField,
  kInvariantViolation,
  // prompts
  kMissingInput,
  // gateway
  kProviderError,
  kReplayMiss,
  kEmptyPrompt,
  kIoError,
  // parser
  kNoSolutionsFound,
  kNoProblemsFound,
  kNoPatternsFound,
  kNoAffordancesFound,
  kEmptyMatrix,
  kNoStoryEntries,
  // pipeline
  kOutOfOrder,
  kNotAwaitingReview,
  kNeverRun,
  kEmptyExampleSet,
  kUnknownKnownUse,
  kEmptyTranscript,
  kStepFailed,
  // renderer
  kIncompletePattern,
  kNoConsolidatedPatterns,
  // workbench
  kSchemaMismatch,
  kUnknownSession,
  kConfigError,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every module. `what()` reads "<Code>: <detail>",
/// so the code name is always greppable in CLI output and HTTP bodies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail, bool transient = false);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  // Only meaningful for kProviderError: network hiccups, 429 and 5xx.
  bool transient() const noexcept { return transient_; }

 private:
  ErrorCode code_;
  std::string detail_;
  bool transient_;
};

}  // namespace patternmine

#endif  // PATTERNMINE_ERROR_H_
