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

// Small string helpers shared by the parser, renderer and prompt kit.

#ifndef PATTERNMINE_TEXT_H_
#define PATTERNMINE_TEXT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace patternmine::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);

/// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string> split_lines(std::string_view s);

/// Collapses every whitespace run to one space and trims.
std::string collapse_ws(std::string_view s);

/// Removes markdown emphasis markers (*, **, __, `) around and inside a label.
std::string strip_emphasis(std::string_view s);

std::size_t word_count(std::string_view s);

/// Sentence split on [.!?] followed by whitespace and an upper-case letter,
/// digit or quote. Each returned sentence is trimmed.
std::vector<std::string> split_sentences(std::string_view s);

/// One physical line of an LLM response after markup classification.
struct Line {
  int number = 0;             // 1-based
  std::string raw;
  std::string text;           // list marker / heading hashes removed, trimmed
  bool list_item = false;
  bool heading = false;       // "#..." or a line that is entirely bold
  bool blank = false;
};

std::vector<Line> classify_lines(std::string_view s);

/// "Label: rest" split at the first colon when the label part is short
/// (<= max_words words, no sentence punctuation). Emphasis is stripped from
/// the label and from the start of the rest.
struct Labeled {
  std::string label;
  std::string rest;
};
std::optional<Labeled> split_label(std::string_view line,
                                   std::size_t max_words = 8);

/// A short title-cased phrase with no terminal period, e.g. a pattern name.
bool looks_like_name(std::string_view s);

/// Normalizes line endings and strips trailing whitespace on every line and
/// trailing blank lines.
std::string normalize_block(std::string_view s);

/// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string s, std::string_view from,
                        std::string_view to);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace patternmine::text

#endif  // PATTERNMINE_TEXT_H_
