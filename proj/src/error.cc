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

#include "patternmine/error.h"

namespace patternmine {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownPattern: return "UnknownPattern";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kUnknownField: return "UnknownField";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kMissingInput: return "MissingInput";
    case ErrorCode::kProviderError: return "ProviderError";
    case ErrorCode::kReplayMiss: return "ReplayMiss";
    case ErrorCode::kEmptyPrompt: return "EmptyPrompt";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kNoSolutionsFound: return "NoSolutionsFound";
    case ErrorCode::kNoProblemsFound: return "NoProblemsFound";
    case ErrorCode::kNoPatternsFound: return "NoPatternsFound";
    case ErrorCode::kNoAffordancesFound: return "NoAffordancesFound";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kNoStoryEntries: return "NoStoryEntries";
    case ErrorCode::kOutOfOrder: return "OutOfOrder";
    case ErrorCode::kNotAwaitingReview: return "NotAwaitingReview";
    case ErrorCode::kNeverRun: return "NeverRun";
    case ErrorCode::kEmptyExampleSet: return "EmptyExampleSet";
    case ErrorCode::kUnknownKnownUse: return "UnknownKnownUse";
    case ErrorCode::kEmptyTranscript: return "EmptyTranscript";
    case ErrorCode::kStepFailed: return "StepFailed";
    case ErrorCode::kIncompletePattern: return "IncompletePattern";
    case ErrorCode::kNoConsolidatedPatterns: return "NoConsolidatedPatterns";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kUnknownSession: return "UnknownSession";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail, bool transient)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail),
      transient_(transient) {}

}  // namespace patternmine
