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

// Turns free-text model responses into pattern-model values.
//
// The grammar is deliberately forgiving: a block starts at a plain, bold,
// heading or list-item name line; section labels match case-insensitively
// with an optional trailing colon; list items may use "-", "*", "+" or "N.".
// Names are resolved with resolve_name() (normalized equality, then a 20%
// edit-distance or abbreviation match); ambiguous hits stay unresolved and
// produce a warning.
//
// Every function throws Error with the matching "nothing found" code when
// the response yields no usable artifact at all. Everything softer is
// reported through diagnostics.

#ifndef PATTERNMINE_PARSER_H_
#define PATTERNMINE_PARSER_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patternmine/model.h"

namespace patternmine::parser {

template <typename T>
struct ParseResult {
  T value{};
  std::vector<Diagnostic> diagnostics;

  bool has_errors() const {
    for (const auto& d : diagnostics) {
      if (d.severity == Severity::kError) return true;
    }
    return false;
  }
};

enum class SectionLabel {
  kContext,
  kProblem,
  kForces,
  kSolution,
  kKnownUses,
  kResultingContext,
};

std::string_view to_string(SectionLabel label);

struct SectionBlock {
  SectionLabel label = SectionLabel::kContext;
  std::string label_text;  // label as written, e.g. "Known Uses"
  std::string body;
  int line = 0;

  bool operator==(const SectionBlock&) const = default;
};

/// Splits one pattern block into its labeled sections, in input order.
std::vector<SectionBlock> split_sections(std::string_view block);

/// Attaches each sentence of a known-uses paragraph to the examples it
/// mentions (by name, name without "scenario"/"example", alias or id).
/// "each example" / "all examples" attach to every known use. Sentences that
/// mention nothing are dropped with a warning.
std::vector<KnownUseRef> match_known_uses(std::string_view text,
                                          std::span<const KnownUse> known_uses,
                                          std::vector<Diagnostic>& diagnostics,
                                          int line = 0);

ParseResult<std::vector<CandidateSolution>> parse_solutions(
    std::string_view text);

ParseResult<std::vector<ProblemStatement>> parse_problems(
    std::string_view text, std::span<const CandidateSolution> solutions);

/// With an empty `known_uses` span the Known Uses sentences are kept as
/// notes with empty ids; the pipeline always passes the session's examples.
ParseResult<std::vector<PatternDraft>> parse_pattern_shortforms(
    std::string_view text, std::span<const KnownUse> known_uses = {});

ParseResult<std::vector<Affordance>> parse_affordances(std::string_view text);

/// Rows follow `registry`, columns follow the live patterns in `patterns`.
ParseResult<CrossReferenceMatrix> parse_cross_references(
    std::string_view text, std::span<const Affordance> registry,
    std::span<const PatternDraft> patterns);

struct ResultingContextEdge {
  std::string source;
  std::string target;  // empty: the block explicitly names no successor
  std::string rationale;

  bool operator==(const ResultingContextEdge&) const = default;
};

ParseResult<std::vector<ResultingContextEdge>> parse_resulting_contexts(
    std::string_view text, std::span<const PatternDraft> patterns,
    const RenameMap& renames = {});

ParseResult<PatternStory> parse_pattern_story(
    std::string_view text, const KnownUse& known_use,
    std::span<const PatternDraft> patterns, const RenameMap& renames = {});

/// Names listed in a "list the patterns" answer, with warnings for names that
/// do not resolve and live patterns that were left out.
ParseResult<std::vector<std::string>> parse_pattern_list(
    std::string_view text, std::span<const PatternDraft> patterns);

/// Suggested new pattern names; names already in the language (live, dropped
/// or renamed away) are filtered out with a warning.
ParseResult<std::vector<std::string>> parse_missing_patterns(
    std::string_view text, std::span<const PatternDraft> patterns,
    const RenameMap& renames = {});

}  // namespace patternmine::parser

#endif  // PATTERNMINE_PARSER_H_
