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

// Shared by the unit tests, the property suites and the acceptance binary.

#ifndef PATTERNMINE_TESTS_SUPPORT_H_
#define PATTERNMINE_TESTS_SUPPORT_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "worked_flow.h"
#include "patternmine/gateway.h"
#include "patternmine/model.h"
#include "patternmine/pipeline.h"
#include "patternmine/prompts.h"

namespace patternmine::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag = "pm");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Answers every prompt from the worked-example responses, by step and part,
/// regardless of how often it is asked. Steps listed in `garbage` get a reply
/// that no parser accepts.
class WorkedProvider : public Provider {
 public:
  explicit WorkedProvider(const worked::WorkedFixture& fx);
  CompletionResult complete(const CompletionRequest& request) override;

  std::set<std::string> garbage;
  std::size_t calls = 0;

 private:
  std::map<std::string, std::string> by_key_;
};

/// Engine wired to a WorkedProvider with a fixed clock.
struct WorkedEngine {
  WorkedEngine();
  worked::WorkedFixture fixture;
  std::shared_ptr<WorkedProvider> provider;
  Gateway gateway;
  PromptKit prompts;
  EngineContext ctx;
};

/// In-memory worked session with every step up to `last` run and approved
/// (consolidate is left awaiting review when `approve_last` is false).
Session worked_session(WorkedEngine& engine, StepId last, bool approve_last = true);

/// Worked session through refine with the curation script applied.
Session curated_worked_session(WorkedEngine& engine);

// ---- generators -----------------------------------------------------------

std::string random_sentence(std::mt19937& rng, bool unicode = true);
std::string random_name(std::mt19937& rng);
/// Examples whose names never collide with generated prose.
std::vector<KnownUse> random_known_uses(std::mt19937& rng, std::size_t count);
/// A well-formed short-form draft: title-case name, one-line fields, and
/// known-use notes that each mention exactly one of `uses`.
PatternDraft random_draft(std::mt19937& rng, const std::vector<KnownUse>& uses);
/// Arbitrary text for free-form fields: quotes, backslashes, newlines, tabs,
/// control characters and multi-byte UTF-8.
std::string random_free_text(std::mt19937& rng);

/// A session reached by a random walk of pipeline and curation operations,
/// sprinkled with arbitrary text. Always satisfies check_invariants().
Session random_session(std::mt19937& rng, WorkedEngine& engine);

// ---- property checks ------------------------------------------------------

struct CheckResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failures
  std::string coverage;               // what the cases exercised
  bool ok() const { return cases > 0 && failures == 0; }
};

/// parse_pattern_shortforms(render_shortform(d)) == {d} for `count` drafts.
CheckResult check_shortform_round_trip(std::uint32_t seed, std::size_t count);

/// Random step operations against the order-safety and staleness invariants.
CheckResult check_state_machine(std::uint32_t seed, std::size_t sequences,
                                std::size_t max_ops = 40);

/// save -> load equality for `count` random sessions.
CheckResult check_persistence(std::uint32_t seed, std::size_t count,
                              const std::filesystem::path& dir);

/// Forks a writer and kills it at every stage of an atomic save; the file on
/// disk must always load as either the old or the new session.
CheckResult check_kill_during_save(const std::filesystem::path& dir);

}  // namespace patternmine::testing

#endif  // PATTERNMINE_TESTS_SUPPORT_H_
