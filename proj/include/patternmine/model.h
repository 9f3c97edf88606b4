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

// Value types for every mining artifact. Everything here is a plain
// aggregate with defaulted equality; the operations that keep them consistent
// live in curation.h and pipeline.h.

#ifndef PATTERNMINE_MODEL_H_
#define PATTERNMINE_MODEL_H_

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patternmine/transcript.h"

namespace patternmine {

/// Returns an ISO-8601 UTC timestamp. Injected so tests stay deterministic.
using Clock = std::function<std::string()>;
std::string utc_now();

struct KnownUse {
  std::string id;
  std::string name;
  std::string narrative;
  // Extra phrases that identify this example in prose ("startup failure").
  std::vector<std::string> aliases;

  bool operator==(const KnownUse&) const = default;
};

enum class Component { kLlm, kDatabase, kExternalTool, kOther };

std::string_view to_string(Component c);
/// Display label used in rendered tables ("LLM", "Database", "External tool").
std::string_view display_name(Component c);
Component parse_component(std::string_view text);

struct Affordance {
  std::string id;
  Component component = Component::kOther;
  std::string name;
  std::string description;

  bool operator==(const Affordance&) const = default;
};

std::string affordance_id(Component component, std::string_view name);

enum class Origin { kAi, kHuman, kMixed };

std::string_view to_string(Origin o);
Origin parse_origin(std::string_view text);

struct Provenance {
  Origin origin = Origin::kAi;
  std::optional<std::string> model_id;
  std::string edited_at;

  bool operator==(const Provenance&) const = default;
};

/// ai->mixed and human->mixed only; mixed is absorbing.
Origin merge_origin(Origin current, Origin actor);

struct CandidateSolution {
  std::string name;
  std::string description;
  Provenance provenance;

  bool operator==(const CandidateSolution&) const = default;
};

struct ProblemStatement {
  // Resolved solution name; empty when the response named an unknown solution.
  std::string solution_name;
  // Name exactly as it appeared in the response.
  std::string raw_name;
  std::string text;

  bool operator==(const ProblemStatement&) const = default;
};

struct KnownUseRef {
  std::string known_use_id;
  std::string note;

  bool operator==(const KnownUseRef&) const = default;
};

struct ContextEdge {
  std::string target_pattern_name;
  std::string rationale;

  bool operator==(const ContextEdge&) const = default;
};

enum class PatternStatus { kDraft, kRefined, kConsolidated, kDropped };

std::string_view to_string(PatternStatus s);
PatternStatus parse_pattern_status(std::string_view text);

/// Field ids accepted by edit_field and used as provenance keys.
inline constexpr std::array<std::string_view, 8> kPatternFields = {
    "name",           "context",  "problem",
    "forces",         "solution_statement",
    "solution_detail", "known_uses", "resulting_context",
};

struct PatternDraft {
  std::string name;
  std::string context;
  std::string problem;
  std::string forces;
  std::string solution_statement;
  // Affordance citations are stored as [[affordance name]].
  std::string solution_detail;
  std::vector<KnownUseRef> known_uses;
  std::vector<ContextEdge> resulting_context;
  // Explicit "no successor" marker set by the refine step.
  bool no_successor = false;
  std::vector<std::string> affordance_refs;
  PatternStatus status = PatternStatus::kDraft;
  std::map<std::string, Provenance> provenance;

  bool live() const { return status != PatternStatus::kDropped; }
  bool operator==(const PatternDraft&) const = default;
};

/// Affordance x pattern grid. Rows are affordance ids in registry order,
/// columns are live pattern names in session order.
struct CrossReferenceMatrix {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  std::vector<std::vector<bool>> cells;
  std::vector<std::vector<std::string>> notes;

  std::size_t true_count() const;
  std::optional<std::size_t> row_of(std::string_view affordance_id) const;
  std::optional<std::size_t> col_of(std::string_view pattern_name) const;
  bool marked(std::string_view affordance_id,
              std::string_view pattern_name) const;
  bool operator==(const CrossReferenceMatrix&) const = default;
};

struct StoryEntry {
  std::string pattern_name;
  std::string narrative;

  bool operator==(const StoryEntry&) const = default;
};

struct PatternStory {
  std::string known_use_id;
  std::vector<StoryEntry> entries;

  bool operator==(const PatternStory&) const = default;
};

struct RenameEntry {
  std::string old_name;
  std::string new_name;
  std::string reason;

  bool operator==(const RenameEntry&) const = default;
};

struct RenameMap {
  std::vector<RenameEntry> entries;

  /// Follows old->new links until a name with no outgoing entry.
  std::string resolve(std::string_view name) const;
  bool operator==(const RenameMap&) const = default;
};

enum class Severity { kError, kWarning };

std::string_view to_string(Severity s);

struct Diagnostic {
  Severity severity = Severity::kWarning;
  int line_begin = 0;  // 1-based, 0 when not tied to input text
  int line_end = 0;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

enum class StepStatus { kPending, kAwaitingReview, kApproved, kStale };

std::string_view to_string(StepStatus s);
StepStatus parse_step_status(std::string_view text);

struct StepRecord {
  StepStatus status = StepStatus::kPending;
  int runs = 0;
  std::string raw_response;
  std::vector<Diagnostic> diagnostics;
  // Non-empty when the last run could not be parsed into artifacts.
  std::string failure;

  bool operator==(const StepRecord&) const = default;
};

struct AuditEvent {
  std::string action;
  std::string subject;
  std::string detail;
  std::string at;

  bool operator==(const AuditEvent&) const = default;
};

struct Session {
  std::string id;
  std::string title = "Pattern Language";
  std::vector<KnownUse> known_uses;
  std::vector<CandidateSolution> solutions;
  std::vector<ProblemStatement> problems;
  std::vector<PatternDraft> patterns;
  std::vector<Affordance> registry;
  CrossReferenceMatrix matrix;
  std::vector<PatternStory> stories;
  RenameMap rename_map;
  Transcript transcript;
  StepId cursor = StepId::kIdentifyExamples;
  std::array<StepRecord, kStepCount> steps{};
  bool complete = false;
  std::vector<std::string> missing_suggestions;
  std::string process_summary;
  std::map<std::string, std::string> expansions;
  std::vector<AuditEvent> audit;

  StepRecord& step(StepId s) { return steps[index_of(s)]; }
  const StepRecord& step(StepId s) const { return steps[index_of(s)]; }

  std::vector<std::string> live_pattern_names() const;
  PatternDraft* find_live(std::string_view name);
  const PatternDraft* find_live(std::string_view name) const;
  const KnownUse* find_known_use(std::string_view id) const;
  const Affordance* find_affordance(std::string_view id) const;

  bool operator==(const Session&) const = default;
};

}  // namespace patternmine

#endif  // PATTERNMINE_MODEL_H_
