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

// Drives the worked example in fixtures/worked: three known uses mined into a
// six-pattern language. Shared by the fixture builder, tests and acceptance.

#ifndef PATTERNMINE_TOOLS_WORKED_FLOW_H_
#define PATTERNMINE_TOOLS_WORKED_FLOW_H_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "patternmine/gateway.h"
#include "patternmine/workbench.h"

namespace patternmine::worked {

inline constexpr std::string_view kTitle = "Patterns for Integrating LLMs with Data Sources and Tools";

/// Constant timestamps keep recorded sessions byte-stable.
Clock fixed_clock();

class WorkedFixture {
 public:
  /// Defaults to the checked-in fixtures/worked directory.
  explicit WorkedFixture(std::filesystem::path root = default_root());

  static std::filesystem::path default_root();

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path replay_path() const { return root_ / "replay.fixture"; }
  std::filesystem::path examples_dir() const { return root_ / "examples"; }

  /// Example files in file-name order.
  std::vector<std::filesystem::path> example_files() const;
  std::vector<KnownUse> examples() const;
  Json curation() const;
  std::string golden_summary() const;
  /// responses/<name>.md
  std::string response(std::string_view name) const;

  /// Answers for curated_flow() followed by extras(), queued in call order.
  std::shared_ptr<ScriptedProvider> scripted_provider() const;

 private:
  std::filesystem::path root_;
};

/// Creates the session, ingests the examples and approves the first step.
Session ingest(Workbench& wb, std::string_view id, const WorkedFixture& fx);

/// Runs and approves every step after the last approved one, up to `last`.
Session run_through(Workbench& wb, std::string_view id, StepId last);

/// All eight steps, no curation.
Session plain_flow(Workbench& wb, std::string_view id, const WorkedFixture& fx);

/// Steps up to refine, then the curation script, then consolidate.
Session curated_flow(Workbench& wb, std::string_view id, const WorkedFixture& fx,
                     std::vector<std::string>* curation_log = nullptr);

/// Story regeneration, missing-pattern check, one expansion and the process
/// summary, on a session that went through curated_flow().
Session extras(Workbench& wb, std::string_view id);

/// Replays the fixture through `flow` style runs and returns the recording.
ReplayFixture build_replay_fixture(const WorkedFixture& fx, const std::filesystem::path& scratch);

}  // namespace patternmine::worked

#endif  // PATTERNMINE_TOOLS_WORKED_FLOW_H_
