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

#include "patternmine/text.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace patternmine::text {
namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_upper(char c) {
  return std::isupper(static_cast<unsigned char>(c)) != 0;
}

bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

constexpr std::array<std::string_view, 17> kSmallWords = {
    "a",  "an", "the", "and", "or", "of",   "with", "for",  "to",
    "in", "on", "by",  "at",  "from", "into", "via", "vs",
};

bool is_small_word(std::string_view w) {
  std::string lw = to_lower(w);
  return std::find(kSmallWords.begin(), kSmallWords.end(), lw) !=
         kSmallWords.end();
}

// Strips "- ", "* ", "+ ", "12. " or "12) " from the front of `t`.
bool strip_list_marker(std::string& t) {
  if (t.size() >= 2 && (t[0] == '-' || t[0] == '+' || t[0] == '*') &&
      t[1] == ' ') {
    t = std::string(trim(std::string_view(t).substr(2)));
    return true;
  }
  std::size_t i = 0;
  while (i < t.size() && is_digit(t[i])) ++i;
  if (i > 0 && i + 1 < t.size() && (t[i] == '.' || t[i] == ')') &&
      t[i + 1] == ' ') {
    t = std::string(trim(std::string_view(t).substr(i + 2)));
    return true;
  }
  if (i > 0 && i + 1 == t.size() && (t[i] == '.' || t[i] == ')')) {
    t.clear();
    return true;
  }
  return false;
}

}  // namespace

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size() && is_space(s[b])) ++b;
  std::size_t e = s.size();
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  return to_lower(s.substr(0, prefix.size())) == to_lower(prefix);
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t nl = s.find('\n', start);
    std::string_view line = nl == std::string_view::npos
                                ? s.substr(start)
                                : s.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.emplace_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

std::string strip_emphasis(std::string_view s) {
  std::string out = replace_all(std::string(s), "**", "");
  out = replace_all(std::move(out), "__", "");
  out = replace_all(std::move(out), "`", "");
  std::string_view v = trim(out);
  while (!v.empty() && (v.front() == '*' || v.front() == '_')) {
    v.remove_prefix(1);
  }
  while (!v.empty() && (v.back() == '*' || v.back() == '_')) {
    v.remove_suffix(1);
  }
  return std::string(trim(v));
}

std::size_t word_count(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::string w;
  std::size_t n = 0;
  while (in >> w) ++n;
  return n;
}

std::vector<std::string> split_sentences(std::string_view s) {
  std::vector<std::string> out;
  std::string flat = collapse_ws(s);
  std::size_t start = 0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    char c = flat[i];
    if (c != '.' && c != '!' && c != '?') continue;
    // allow a closing quote or paren right after the terminator
    std::size_t j = i + 1;
    while (j < flat.size() && (flat[j] == '"' || flat[j] == ')' ||
                               flat[j] == '\'')) {
      ++j;
    }
    if (j >= flat.size()) break;
    if (flat[j] != ' ') continue;
    std::size_t k = j + 1;
    if (k < flat.size() &&
        (is_upper(flat[k]) || is_digit(flat[k]) || flat[k] == '"' ||
         flat[k] == '*')) {
      std::string sentence(trim(std::string_view(flat).substr(start, j - start)));
      if (!sentence.empty()) out.push_back(std::move(sentence));
      start = k;
    }
  }
  std::string tail(trim(std::string_view(flat).substr(std::min(start, flat.size()))));
  if (!tail.empty()) out.push_back(std::move(tail));
  return out;
}

std::vector<Line> classify_lines(std::string_view s) {
  std::vector<Line> out;
  int number = 0;
  for (auto& raw : split_lines(s)) {
    Line line;
    line.number = ++number;
    line.raw = raw;
    std::string t(trim(raw));
    if (t.empty()) {
      line.blank = true;
      out.push_back(std::move(line));
      continue;
    }
    if (t.front() == '#') {
      std::size_t i = 0;
      while (i < t.size() && t[i] == '#') ++i;
      t = std::string(trim(std::string_view(t).substr(i)));
      line.heading = true;
    }
    line.list_item = strip_list_marker(t);
    // A line that is bold from end to end reads as a heading.
    if (t.size() > 4 && t.rfind("**", 0) == 0) {
      std::string_view inner(t);
      inner.remove_prefix(2);
      bool trailing_colon = false;
      if (inner.size() >= 3 && inner.substr(inner.size() - 3) == "**:") {
        inner.remove_suffix(3);
        trailing_colon = true;
      } else if (inner.size() >= 2 && inner.substr(inner.size() - 2) == "**") {
        inner.remove_suffix(2);
      } else {
        inner = {};
      }
      if (!inner.empty() && inner.find("**") == std::string_view::npos) {
        t = std::string(trim(inner)) + (trailing_colon ? ":" : "");
        line.heading = true;
      }
    }
    line.text = std::move(t);
    line.blank = line.text.empty();
    out.push_back(std::move(line));
  }
  return out;
}

std::optional<Labeled> split_label(std::string_view line,
                                   std::size_t max_words) {
  std::size_t colon = line.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  std::string label = strip_emphasis(line.substr(0, colon));
  if (label.empty() || word_count(label) > max_words) return std::nullopt;
  if (label.find_first_of(".!?") != std::string::npos) return std::nullopt;
  std::string_view rest = line.substr(colon + 1);
  if (rest.rfind("//", 0) == 0) return std::nullopt;  // URL scheme
  rest = trim(rest);
  while (!rest.empty() && (rest.front() == '*' || rest.front() == '_')) {
    rest.remove_prefix(1);
  }
  return Labeled{label, std::string(trim(rest))};
}

bool looks_like_name(std::string_view s) {
  std::string t = strip_emphasis(s);
  while (!t.empty() && t.back() == ':') t.pop_back();
  t = std::string(trim(t));
  if (t.empty() || word_count(t) > 8) return false;
  char last = t.back();
  if (last == '.' || last == '!' || last == '?' || last == ',' ||
      last == ';') {
    return false;
  }
  if (!is_upper(t.front())) return false;
  std::istringstream in(t);
  std::string w;
  while (in >> w) {
    if (is_small_word(w)) continue;
    char c = w.front();
    if (std::isalpha(static_cast<unsigned char>(c)) && !is_upper(c)) {
      return false;
    }
  }
  return true;
}

std::string normalize_block(std::string_view s) {
  auto lines = split_lines(s);
  for (auto& l : lines) {
    while (!l.empty() && is_space(l.back())) l.pop_back();
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return join(lines, "\n");
}

std::string replace_all(std::string s, std::string_view from,
                        std::string_view to) {
  if (from.empty()) return s;
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::string join(const std::vector<std::string>& parts,
                 std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace patternmine::text
