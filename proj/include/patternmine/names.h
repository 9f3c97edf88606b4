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

#ifndef PATTERNMINE_NAMES_H_
#define PATTERNMINE_NAMES_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace patternmine {

/// Canonical matching key for pattern, solution and affordance names:
/// ASCII case-fold, "&" read as "and", whitespace collapsed and trimmed,
/// trailing punctuation stripped.
std::string normalize_name(std::string_view name);

/// Lower-case, hyphen-separated token suitable for ids ("llm.content-generation").
std::string slugify(std::string_view name);

/// Plain Levenshtein distance over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// True when both normalized names have the same number of words and every
/// word pair is equal or one is an abbreviation (prefix of >= 3 chars) of the
/// other: "custom app logic" ~ "custom application logic".
bool abbreviation_match(std::string_view a, std::string_view b);

/// Fuzzy threshold: distance <= 20% of the longer normalized name.
bool within_fuzzy_threshold(std::string_view normalized_a,
                            std::string_view normalized_b);

enum class MatchKind { kExact, kFuzzy, kAmbiguous, kNone };

struct NameMatch {
  MatchKind kind = MatchKind::kNone;
  std::size_t index = 0;                // valid for kExact / kFuzzy
  std::vector<std::size_t> candidates;  // all hits for kAmbiguous

  bool resolved() const {
    return kind == MatchKind::kExact || kind == MatchKind::kFuzzy;
  }
};

/// Resolves `query` against `names`: normalized equality first, then
/// abbreviation or edit-distance matches. Two or more fuzzy hits are reported
/// as ambiguous and never guessed.
NameMatch resolve_name(std::string_view query,
                       std::span<const std::string> names);

}  // namespace patternmine

#endif  // PATTERNMINE_NAMES_H_
