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

// The eight-step mining state machine. Each operation takes a session by
// value and returns the next state; when an operation throws, the caller's
// session is unchanged.
//
// Step status moves pending -> awaiting_review -> approved. Running or
// rerunning step k turns every later step that has run before into stale.
// The cursor always sits on the first step that is not approved.

#ifndef PATTERNMINE_PIPELINE_H_
#define PATTERNMINE_PIPELINE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patternmine/gateway.h"
#include "patternmine/model.h"
#include "patternmine/prompts.h"

namespace patternmine {

struct EngineContext {
  Gateway* gateway = nullptr;
  const PromptKit* prompts = nullptr;
  Clock clock = utc_now;
};

/// Replaces the session's examples. Empty ids are derived from the name and
/// duplicates get a numeric suffix. A single example is accepted with a
/// warning. Later steps that have run become stale.
/// Throws kEmptyExampleSet, kInvalidArgument (empty narrative).
Session ingest_examples(Session session, std::vector<KnownUse> uses, const Clock& clock);

/// Renders, completes, parses and merges one step. A response that cannot
/// be parsed is recorded in StepRecord::failure and leaves the status as it
/// was. Throws kOutOfOrder, kInvalidArgument (identify_examples),
/// kMissingInput, kReplayMiss, kProviderError.
Session run_step(Session session, StepId step, EngineContext& ctx);

/// Throws kNotAwaitingReview.
Session approve_step(Session session, StepId step, const Clock& clock);

/// Like run_step for a step that ran before; identify_examples re-ingests
/// the current examples. Throws kNeverRun.
Session rerun_step(Session session, StepId step, EngineContext& ctx);

/// Asks the missing-pattern question on its own and stores the suggestions
/// for human triage. Nothing is added to the patterns.
/// Throws kOutOfOrder unless distill_patterns is approved.
Session run_missing_pattern_check(Session session, EngineContext& ctx,
                                  std::vector<Diagnostic>* diagnostics = nullptr);

/// Generates (or regenerates) the story for one example.
/// Throws kUnknownKnownUse, kOutOfOrder before consolidate has run,
/// kNoStoryEntries.
Session generate_story(Session session, std::string_view known_use_id, EngineContext& ctx,
                       std::vector<Diagnostic>* diagnostics = nullptr);

/// Sends the reflection prompt and stores the answer as process_summary.
/// Throws kEmptyTranscript.
Session summarize_process(Session session, EngineContext& ctx);

/// Optional expansion of one pattern's short form, stored in expansions.
/// Throws kUnknownPattern, kOutOfOrder before consolidate has run.
Session expand_pattern(Session session, std::string_view pattern, EngineContext& ctx);

/// First step that is not approved, or nullopt when all are.
std::optional<StepId> first_unapproved(const Session& session);

}  // namespace patternmine

#endif  // PATTERNMINE_PIPELINE_H_
