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

#ifndef PATTERNMINE_TRANSCRIPT_H_
#define PATTERNMINE_TRANSCRIPT_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace patternmine {

/// The eight mining steps, in process order. Comparison follows that order.
enum class StepId {
  kIdentifyExamples,
  kExtractSolutions,
  kDefineProblems,
  kDistillPatterns,
  kIdentifyAffordances,
  kRelateAffordances,
  kRefine,
  kConsolidate,
};

inline constexpr std::size_t kStepCount = 8;

inline constexpr std::array<StepId, kStepCount> kAllSteps = {
    StepId::kIdentifyExamples,    StepId::kExtractSolutions,
    StepId::kDefineProblems,      StepId::kDistillPatterns,
    StepId::kIdentifyAffordances, StepId::kRelateAffordances,
    StepId::kRefine,              StepId::kConsolidate,
};

inline constexpr std::size_t index_of(StepId step) {
  return static_cast<std::size_t>(step);
}

/// snake_case wire name, e.g. "extract_solutions".
std::string_view to_string(StepId step);
/// Accepts snake_case or kebab-case. Throws Error(kInvalidArgument).
StepId parse_step_id(std::string_view text);

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;
  std::optional<StepId> step_tag;
  // Sub-prompt name for steps that send several prompts ("missing_patterns").
  std::string part;
  std::string timestamp;

  bool operator==(const ChatMessage&) const = default;
};

struct SamplingParams {
  double temperature = 0.0;
  int max_output_tokens = 2048;

  bool operator==(const SamplingParams&) const = default;
};

/// Append-only conversation log shared by every step of a session.
struct Transcript {
  std::vector<ChatMessage> messages;
  std::string model_id;
  SamplingParams params;

  bool empty() const { return messages.empty(); }
  bool operator==(const Transcript&) const = default;
};

}  // namespace patternmine

#endif  // PATTERNMINE_TRANSCRIPT_H_
