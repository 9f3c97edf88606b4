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

// Markdown rendering of patterns, the language document, the affordance
// matrix, stories and the conversation log, plus a linter for the
// Alexandrian layout. All output uses "\n" line endings and ends with a
// single newline.

#ifndef PATTERNMINE_RENDER_H_
#define PATTERNMINE_RENDER_H_

#include <string>
#include <string_view>
#include <vector>

#include "patternmine/model.h"

namespace patternmine {

enum class DocumentKind { kPattern, kLanguage, kMatrix, kStory, kLog, kShortform };

std::string_view to_string(DocumentKind kind);
DocumentKind parse_document_kind(std::string_view text);

struct RenderedDocument {
  DocumentKind kind = DocumentKind::kPattern;
  std::string body;

  bool operator==(const RenderedDocument&) const = default;
};

/// The centered star line between context and problem, and between
/// solution and resulting context.
inline constexpr std::string_view kStarSeparator =
    "<p align=\"center\">✳ ✳ ✳</p>";

/// Throws kIncompletePattern when problem or solution statement is empty.
/// `heading_level` is the number of '#' before the name.
RenderedDocument render_pattern_alexandrian(const PatternDraft& pattern,
                                            int heading_level = 2);

/// Title, intro, summary table of live patterns, then every live pattern.
/// Throws kNoConsolidatedPatterns when no pattern is consolidated.
RenderedDocument render_language(const Session& session);

/// Just the "| Pattern | Description |" table of render_language.
std::string render_summary_table(const Session& session);

RenderedDocument render_matrix(const CrossReferenceMatrix& matrix,
                               const std::vector<Affordance>& registry);

/// Throws kUnknownKnownUse when the story's example is not in the session.
RenderedDocument render_story(const PatternStory& story, const Session& session);

/// Name line followed by the five labeled lines of the short-form template.
RenderedDocument render_shortform(const PatternDraft& pattern);

/// Throws kEmptyTranscript.
RenderedDocument export_log(const Transcript& transcript);

/// What the linter checks citations against. Empty fields skip that check.
struct LintContext {
  std::vector<Affordance> registry;
  const CrossReferenceMatrix* matrix = nullptr;
  std::vector<std::string> pattern_names;
};

LintContext lint_context(const Session& session);

/// Errors: star separator count other than two, missing "Therefore,",
/// unbolded problem or solution statement, an italic citation in the
/// solution that is not a registry affordance (or, given a matrix, is not
/// marked for that pattern). Italic text in the resulting context that is
/// not a known pattern name is only a warning.
std::vector<Diagnostic> lint_alexandrian(const RenderedDocument& document,
                                         const LintContext& context = {});

/// Renders a document of the given kind from the session. kPattern and
/// kShortform need `subject` (a pattern name), kStory a known-use id.
RenderedDocument render_document(const Session& session, DocumentKind kind,
                                 std::string_view subject = {});

}  // namespace patternmine

#endif  // PATTERNMINE_RENDER_H_
