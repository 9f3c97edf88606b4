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

#include "patternmine/names.h"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace patternmine {
namespace {

bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == ':' || c == ';' || c == '!' ||
         c == '?';
}

std::vector<std::string> words_of(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

std::string normalize_name(std::string_view name) {
  std::string spaced;
  spaced.reserve(name.size() + 8);
  for (char c : name) {
    if (c == '&') {
      spaced += " and ";
    } else {
      spaced += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  std::string out;
  for (const auto& w : words_of(spaced)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  while (!out.empty() && (is_trailing_punct(out.back()) || out.back() == ' ')) {
    out.pop_back();
  }
  return out;
}

std::string slugify(std::string_view name) {
  std::string norm = normalize_name(name);
  std::string out;
  bool dash = false;
  for (char c : norm) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (dash && !out.empty()) out += '-';
      out += c;
      dash = false;
    } else {
      dash = true;
    }
  }
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool abbreviation_match(std::string_view a, std::string_view b) {
  auto wa = words_of(normalize_name(a));
  auto wb = words_of(normalize_name(b));
  if (wa.empty() || wa.size() != wb.size()) return false;
  // "App." abbreviates like "App".
  for (auto* ws : {&wa, &wb}) {
    for (auto& w : *ws) {
      while (w.size() > 1 && w.back() == '.') w.pop_back();
    }
  }
  bool any_abbrev = false;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    if (wa[i] == wb[i]) continue;
    const auto& shorter = wa[i].size() < wb[i].size() ? wa[i] : wb[i];
    const auto& longer = wa[i].size() < wb[i].size() ? wb[i] : wa[i];
    if (shorter.size() < 3 || longer.compare(0, shorter.size(), shorter) != 0) {
      return false;
    }
    any_abbrev = true;
  }
  return any_abbrev;
}

bool within_fuzzy_threshold(std::string_view normalized_a,
                            std::string_view normalized_b) {
  std::size_t longer = std::max(normalized_a.size(), normalized_b.size());
  if (longer == 0) return false;
  // d <= 0.2 * longer, kept in integers
  return edit_distance(normalized_a, normalized_b) * 5 <= longer;
}

NameMatch resolve_name(std::string_view query,
                       std::span<const std::string> names) {
  NameMatch match;
  std::string q = normalize_name(query);
  if (q.empty()) return match;

  std::vector<std::size_t> exact;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (normalize_name(names[i]) == q) exact.push_back(i);
  }
  if (exact.size() == 1) {
    match.kind = MatchKind::kExact;
    match.index = exact.front();
    return match;
  }
  if (exact.size() > 1) {
    match.kind = MatchKind::kAmbiguous;
    match.candidates = std::move(exact);
    return match;
  }

  std::vector<std::size_t> fuzzy;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string n = normalize_name(names[i]);
    if (within_fuzzy_threshold(q, n) || abbreviation_match(q, n)) {
      fuzzy.push_back(i);
    }
  }
  if (fuzzy.size() == 1) {
    match.kind = MatchKind::kFuzzy;
    match.index = fuzzy.front();
  } else if (fuzzy.size() > 1) {
    match.kind = MatchKind::kAmbiguous;
    match.candidates = std::move(fuzzy);
  }
  return match;
}

}  // namespace patternmine
