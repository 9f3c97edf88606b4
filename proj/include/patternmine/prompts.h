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

// Prompt templates live in editable text files, one per step:
//
//   ---
//   step: refine
//   title: Refine iteratively
//   placeholders: patterns, affordances
//   requires: patterns
//   ---
//   === list_patterns ===
//   List the patterns identified so far.
//   === missing_patterns ===
//   ...
//
// `placeholders` must list exactly the {name} slots used in the body.
// `requires` names session inputs that must be non-empty before the step
// can be rendered (known_uses, solutions, problems, patterns, affordances).
// A body without "=== part ===" lines is a single unnamed part.

#ifndef PATTERNMINE_PROMPTS_H_
#define PATTERNMINE_PROMPTS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patternmine/model.h"

namespace patternmine {

using Bindings = std::map<std::string, std::string>;

struct PromptPart {
  std::string name;  // empty for single-part templates
  std::string body;

  bool operator==(const PromptPart&) const = default;
};

struct PromptTemplate {
  std::optional<StepId> step;  // nullopt for the reflection template
  std::string title;
  std::vector<std::string> placeholders;
  std::vector<std::string> requires_inputs;
  std::vector<PromptPart> parts;

  /// Throws kInvalidArgument for an unknown part name.
  const PromptPart& part(std::string_view name = {}) const;
  bool operator==(const PromptTemplate&) const = default;
};

/// Parses one template file. Throws kConfigError on malformed front-matter
/// or a placeholder list that does not match the body.
PromptTemplate parse_prompt_template(std::string_view text,
                                     std::string_view source = "<memory>");

/// Directory the build was configured with; override with PATTERNMINE_PROMPTS.
std::filesystem::path default_prompt_dir();

class PromptKit {
 public:
  /// Loads every *.prompt file in `dir`: exactly one per step plus one
  /// reflection template. Throws kConfigError otherwise.
  static PromptKit load(const std::filesystem::path& dir);

  /// The eight step templates in process order.
  const std::vector<PromptTemplate>& list_templates() const { return steps_; }
  const PromptTemplate& get(StepId step) const;

  /// Renders one part of a step. `part` may be empty for single-part steps
  /// and defaults to the first part otherwise. `extra` supplies the
  /// per-call slots (example_name, example_recap, pattern_name,
  /// pattern_shortform). Throws kMissingInput naming the step and the
  /// missing input or placeholder.
  std::string render_prompt(StepId step, const Session& session,
                            std::string_view part = {},
                            const Bindings& extra = {}) const;

  std::string render_reflection_prompt() const;

 private:
  std::vector<PromptTemplate> steps_;
  PromptTemplate reflection_;
};

/// Slots derived from the session: examples, solutions, patterns,
/// affordances. Artifacts of stale steps are left out.
Bindings session_bindings(const Session& session);

/// example_name and example_recap for the story prompt.
Bindings story_bindings(const KnownUse& known_use);

/// pattern_name and pattern_shortform for the expansion prompt.
Bindings expansion_bindings(const PatternDraft& pattern);

}  // namespace patternmine

#endif  // PATTERNMINE_PROMPTS_H_
