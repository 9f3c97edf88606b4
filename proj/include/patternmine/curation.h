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

// Human curation of a mined pattern language. Every operation takes the
// session by value and returns the transformed copy; the input is never
// touched, so callers can keep the previous state for undo or comparison.

#ifndef PATTERNMINE_CURATION_H_
#define PATTERNMINE_CURATION_H_

#include <string>
#include <string_view>
#include <vector>

#include "patternmine/model.h"

namespace patternmine {

/// Affordance names cited as [[name]] in a solution detail, in text order.
std::vector<std::string> cited_affordances(std::string_view solution_detail);

/// Renames a live pattern and rewrites every reference to it: matrix column,
/// resulting-context targets (and exact mentions in their rationale), story
/// entries, expansions. Renaming to the identical name is a no-op.
/// Throws kUnknownPattern, kDuplicateName, kInvalidArgument (empty name).
Session rename_pattern(Session session, std::string_view old_name,
                       std::string_view new_name, const Clock& clock,
                       std::string_view reason = {});

/// Marks a pattern dropped and removes its matrix column, edges pointing at
/// it and story entries naming it. Each removal is described in `removed`.
Session drop_pattern(Session session, std::string_view name,
                     std::string_view reason, const Clock& clock,
                     std::vector<std::string>* removed = nullptr);

/// Replaces one field of a live pattern. `field` is one of kPatternFields or
/// "solution"; "name" routes through rename_pattern. known_uses text is split
/// into sentences and matched against the session's examples, and
/// resulting_context text is resolved into edges ("None" = no successor).
/// Throws kUnknownPattern, kUnknownField, kInvalidArgument.
Session edit_field(Session session, std::string_view pattern,
                   std::string_view field, std::string_view text, Origin actor,
                   const Clock& clock);

/// Moves a pattern so it sits directly before `before` (or last when
/// `before` is empty). Column order follows.
Session move_pattern(Session session, std::string_view name,
                     std::string_view before, const Clock& clock);

/// Brings derived structure back in line with the session: matrix rows and
/// columns follow the registry and live patterns, renamed references are
/// re-pointed and dangling ones dropped. Returns one warning per change.
std::vector<Diagnostic> reconcile(Session& session);

/// Throws kInvariantViolation naming the first broken reference.
void check_invariants(const Session& session);

struct ValidationIssue {
  std::string kind;     // "unresolved_reference", "missing_known_uses", ...
  std::string subject;  // pattern name, affordance id or story id
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool empty() const { return issues.empty(); }
};

ValidationReport validate_language(const Session& session);

}  // namespace patternmine

#endif  // PATTERNMINE_CURATION_H_
