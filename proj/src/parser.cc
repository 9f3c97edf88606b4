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

#include "patternmine/parser.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "patternmine/error.h"
#include "patternmine/names.h"
#include "patternmine/text.h"

namespace patternmine::parser {
namespace {

constexpr std::size_t kNpos = std::numeric_limits<std::size_t>::max();

Diagnostic warn(int line, std::string message) {
  return Diagnostic{Severity::kWarning, line, line, std::move(message)};
}

Diagnostic error_at(int line, std::string message) {
  return Diagnostic{Severity::kError, line, line, std::move(message)};
}

void append_text(std::string& body, std::string_view more) {
  std::string_view t = text::trim(more);
  if (t.empty()) return;
  if (!body.empty()) body += ' ';
  body += t;
}

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

std::string clean_name(std::string_view s) {
  std::string t = text::strip_emphasis(s);
  while (!t.empty() && (t.back() == ':' || t.back() == '.')) t.pop_back();
  return std::string(text::trim(t));
}

std::optional<SectionLabel> section_label_of(std::string_view label) {
  std::string key = normalize_name(text::strip_emphasis(label));
  if (key == "context") return SectionLabel::kContext;
  if (key == "problem" || key == "problem statement") {
    return SectionLabel::kProblem;
  }
  if (key == "forces" || key == "force") return SectionLabel::kForces;
  if (key == "solution" || key == "solution statement") {
    return SectionLabel::kSolution;
  }
  if (key == "known uses" || key == "known use" || key == "known-uses") {
    return SectionLabel::kKnownUses;
  }
  if (key == "resulting context") return SectionLabel::kResultingContext;
  return std::nullopt;
}

// Patterns visible to a parse, plus names that were renamed away.
class PatternScope {
 public:
  PatternScope(std::span<const PatternDraft> patterns, const RenameMap& renames,
               bool live_only)
      : renames_(renames) {
    for (const auto& p : patterns) {
      if (live_only && !p.live()) continue;
      names_.push_back(p.name);
      live_.push_back(p.live());
    }
    for (const auto& e : renames.entries) {
      std::string target = renames.resolve(e.old_name);
      std::size_t idx = index_of_exact(target);
      if (idx == kNpos) continue;
      lookup_.push_back(e.old_name);
      lookup_target_.push_back(idx);
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
      lookup_.push_back(names_[i]);
      lookup_target_.push_back(i);
    }
  }

  struct Hit {
    MatchKind kind = MatchKind::kNone;
    std::size_t index = kNpos;
  };

  Hit resolve(std::string_view query) const {
    NameMatch m = resolve_name(query, lookup_);
    if (m.resolved()) return {m.kind, lookup_target_[m.index]};
    if (m.kind == MatchKind::kAmbiguous) {
      std::set<std::size_t> targets;
      for (auto c : m.candidates) targets.insert(lookup_target_[c]);
      if (targets.size() == 1) return {MatchKind::kFuzzy, *targets.begin()};
      return {MatchKind::kAmbiguous, kNpos};
    }
    return {};
  }

  const std::string& name(std::size_t i) const { return names_[i]; }
  bool live(std::size_t i) const { return live_[i]; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& lookup_names() const { return lookup_; }
  std::size_t lookup_target(std::size_t i) const { return lookup_target_[i]; }

 private:
  std::size_t index_of_exact(std::string_view name) const {
    std::string key = normalize_name(name);
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (normalize_name(names_[i]) == key) return i;
    }
    return kNpos;
  }

  const RenameMap& renames_;
  std::vector<std::string> names_;
  std::vector<bool> live_;
  std::vector<std::string> lookup_;
  std::vector<std::size_t> lookup_target_;
};

// "Name: body" items shared by the solution and problem parsers.
struct NamedItem {
  std::string name;
  std::string body;
  int line_begin = 0;
  int line_end = 0;
};

std::vector<NamedItem> extract_named_items(std::string_view input) {
  std::vector<NamedItem> items;
  bool blank_since_item = false;
  for (const auto& line : text::classify_lines(input)) {
    if (line.blank) {
      blank_since_item = true;
      continue;
    }
    auto lab = text::split_label(line.text);
    bool indented = !line.raw.empty() &&
                    (line.raw.front() == ' ' || line.raw.front() == '\t');
    if (line.list_item || line.heading) {
      if (indented && line.list_item && !items.empty() && !lab) {
        append_text(items.back().body, line.text);
        items.back().line_end = line.number;
        continue;
      }
      if (lab && (!lab->rest.empty() || text::looks_like_name(lab->label) ||
                  line.list_item)) {
        if (lab->rest.empty() && !line.list_item &&
            !text::looks_like_name(lab->label)) {
          continue;
        }
        items.push_back({clean_name(lab->label), lab->rest, line.number,
                         line.number});
        blank_since_item = false;
        continue;
      }
      if (!lab && text::looks_like_name(line.text)) {
        items.push_back({clean_name(line.text), "", line.number, line.number});
        blank_since_item = false;
        continue;
      }
      // "Name - description" with a hyphen, en dash or em dash.
      if (!lab) {
        bool split = false;
        for (std::string_view sep : {" - ", " \u2013 ", " \u2014 "}) {
          auto at = line.text.find(sep);
          if (at == std::string::npos) continue;
          std::string name = line.text.substr(0, at);
          if (!text::looks_like_name(name)) continue;
          items.push_back({clean_name(name), std::string(text::trim(line.text.substr(at + sep.size()))),
                           line.number, line.number});
          blank_since_item = false;
          split = true;
          break;
        }
        if (split) continue;
      }
      if (line.list_item && !items.empty() && !blank_since_item) {
        append_text(items.back().body, line.text);
        items.back().line_end = line.number;
      }
      continue;
    }
    if (lab && !lab->rest.empty() && text::word_count(lab->label) <= 6 &&
        std::isupper(static_cast<unsigned char>(lab->label.front()))) {
      items.push_back({clean_name(lab->label), lab->rest, line.number,
                       line.number});
      blank_since_item = false;
      continue;
    }
    if (!items.empty() &&
        (!blank_since_item || indented || items.back().body.empty())) {
      append_text(items.back().body, line.text);
      items.back().line_end = line.number;
      blank_since_item = false;
    }
  }
  return items;
}

bool contains_phrase(std::string_view haystack, std::string_view needle,
                     std::size_t* pos_out) {
  if (needle.empty()) return false;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
    bool left_ok = pos == 0 ||
                   !std::isalnum(static_cast<unsigned char>(haystack[pos - 1]));
    std::size_t end = pos + needle.size();
    bool right_ok =
        end >= haystack.size() ||
        !std::isalnum(static_cast<unsigned char>(haystack[end]));
    if (left_ok && right_ok) {
      if (pos_out) *pos_out = pos;
      return true;
    }
    ++pos;
  }
  return false;
}

std::vector<std::string> known_use_keys(const KnownUse& ku) {
  std::vector<std::string> keys;
  auto add = [&](std::string_view k) {
    std::string n = normalize_name(k);
    if (!n.empty() &&
        std::find(keys.begin(), keys.end(), n) == keys.end()) {
      keys.push_back(std::move(n));
    }
  };
  add(ku.name);
  std::string base = normalize_name(ku.name);
  for (std::string_view suffix :
       {" scenario", " example", " application", " use case", " system"}) {
    if (base.size() > suffix.size() &&
        base.compare(base.size() - suffix.size(), suffix.size(), suffix) ==
            0) {
      add(base.substr(0, base.size() - suffix.size()));
    }
  }
  for (const auto& a : ku.aliases) add(a);
  add(ku.id);
  std::string spaced_id = ku.id;
  std::replace(spaced_id.begin(), spaced_id.end(), '-', ' ');
  add(spaced_id);
  return keys;
}

bool mentions_every_example(std::string_view normalized_sentence) {
  for (std::string_view phrase :
       {"each example", "every example", "all examples", "all the examples",
        "all three examples", "each of the examples", "all of the examples",
        "each scenario", "every scenario", "all scenarios",
        "each application", "all applications"}) {
    if (contains_phrase(normalized_sentence, phrase, nullptr)) return true;
  }
  return false;
}

std::optional<Component> component_from_heading(std::string_view heading,
                                                bool* unknown_affordance_heading) {
  std::string norm = normalize_name(text::strip_emphasis(heading));
  if (unknown_affordance_heading) {
    *unknown_affordance_heading =
        norm.find("affordance") != std::string::npos;
  }
  std::istringstream in(norm);
  std::string w, rest;
  while (in >> w) {
    std::string t;
    for (char c : w) {
      if (std::isalnum(static_cast<unsigned char>(c))) t += c;
    }
    if (t.empty() || t == "affordances" || t == "affordance" || t == "of" ||
        t == "for" || t == "the" || t == "key" || t == "component" ||
        t == "components") {
      continue;
    }
    if (!rest.empty()) rest += ' ';
    rest += t;
  }
  if (rest == "llm" || rest == "llms" || rest == "large language models" ||
      rest == "large language model" || rest == "language models" ||
      rest == "language model" || rest == "large language models llms") {
    return Component::kLlm;
  }
  if (rest == "database" || rest == "databases" || rest == "db" ||
      rest == "data sources" || rest == "data source") {
    return Component::kDatabase;
  }
  if (rest == "external tool" || rest == "external tools" ||
      rest == "tools" || rest == "tool") {
    return Component::kExternalTool;
  }
  // A qualified heading ("Vector Database Affordances") goes by its last
  // word, but only when it says "affordance" so pattern names never match.
  if (norm.find("affordance") != std::string::npos) {
    std::string last = rest.substr(rest.find_last_of(' ') == std::string::npos
                                       ? 0
                                       : rest.find_last_of(' ') + 1);
    if (last == "llm" || last == "llms" || last == "model" || last == "models") {
      return Component::kLlm;
    }
    if (last == "database" || last == "databases" || last == "db" || last == "store") {
      return Component::kDatabase;
    }
    if (last == "tool" || last == "tools") return Component::kExternalTool;
  }
  return std::nullopt;
}

// Position-ordered pattern mentions inside prose, used for resulting-context
// targets. Italic/bold spans and capitalized runs are resolved fuzzily;
// plain lowercase mentions must match a name exactly after normalization.
struct Mention {
  std::size_t pos;
  std::size_t index;
  std::string surface;
};

std::vector<Mention> find_pattern_mentions(std::string_view prose,
                                           const PatternScope& scope) {
  std::vector<Mention> out;
  std::string flat = text::collapse_ws(prose);

  // emphasis spans
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (flat[i] != '*' && flat[i] != '_') continue;
    char mark = flat[i];
    std::size_t open = i;
    while (i < flat.size() && flat[i] == mark) ++i;
    std::size_t close = flat.find(mark, i);
    if (close == std::string::npos) break;
    std::string inner = flat.substr(i, close - i);
    auto hit = scope.resolve(inner);
    if (hit.index != kNpos) out.push_back({open, hit.index, inner});
    i = close;
    while (i + 1 < flat.size() && flat[i + 1] == mark) ++i;
  }

  // capitalized runs, tried longest sub-span first
  struct Token {
    std::string word;
    std::size_t pos;
    bool capital;
    bool small;
    bool breaks_after;
  };
  std::vector<Token> tokens;
  {
    std::size_t i = 0;
    while (i < flat.size()) {
      while (i < flat.size() && flat[i] == ' ') ++i;
      std::size_t start = i;
      while (i < flat.size() && flat[i] != ' ') ++i;
      if (start == i) break;
      std::string raw = flat.substr(start, i - start);
      std::size_t lead = 0;
      while (lead < raw.size() &&
             !std::isalnum(static_cast<unsigned char>(raw[lead]))) {
        ++lead;
      }
      std::string word = raw.substr(lead);
      bool breaks = false;
      while (!word.empty() &&
             !std::isalnum(static_cast<unsigned char>(word.back()))) {
        breaks = true;
        word.pop_back();
      }
      if (lead > 0 && !tokens.empty()) tokens.back().breaks_after = true;
      if (word.empty()) {
        if (!tokens.empty()) tokens.back().breaks_after = true;
        continue;
      }
      std::string lw = text::to_lower(word);
      bool small = lw == "and" || lw == "with" || lw == "of" || lw == "&" ||
                   lw == "for" || lw == "the";
      tokens.push_back({word, start + lead,
                        std::isupper(static_cast<unsigned char>(word[0])) != 0,
                        small, breaks});
    }
  }
  std::size_t t = 0;
  while (t < tokens.size()) {
    if (!tokens[t].capital) {
      ++t;
      continue;
    }
    std::size_t end = t;  // inclusive
    while (!tokens[end].breaks_after && end + 1 < tokens.size() &&
           (tokens[end + 1].capital ||
            (tokens[end + 1].small && end + 2 < tokens.size() &&
             tokens[end + 2].capital && !tokens[end + 1].breaks_after))) {
      ++end;
    }
    bool found = false;
    for (std::size_t b = t; b <= end && !found; ++b) {
      if (!tokens[b].capital) continue;
      for (std::size_t e = end + 1; e > b && !found; --e) {
        if (e - b < 2 && !tokens[b].capital) continue;
        std::string span;
        for (std::size_t k = b; k < e; ++k) {
          if (!span.empty()) span += ' ';
          span += tokens[k].word;
        }
        if (text::word_count(span) < 2) continue;
        auto hit = scope.resolve(span);
        if (hit.index != kNpos) {
          out.push_back({tokens[b].pos, hit.index, span});
          found = true;
        }
      }
    }
    t = end + 1;
  }

  // exact lowercase mentions
  std::string lower = normalize_name(flat);
  const auto& lookup = scope.lookup_names();
  for (std::size_t i = 0; i < lookup.size(); ++i) {
    std::size_t pos = 0;
    if (contains_phrase(lower, normalize_name(lookup[i]), &pos)) {
      out.push_back({pos, scope.lookup_target(i), lookup[i]});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Mention& a, const Mention& b) {
                     return a.pos < b.pos;
                   });
  return out;
}

bool states_no_successor(std::string_view rationale) {
  std::string n = normalize_name(rationale);
  for (std::string_view p :
       {"none", "no resulting context", "n/a", "no further", "there are no",
        "no related", "no other pattern", "no subsequent", "not applicable"}) {
    if (n.rfind(p, 0) == 0) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(SectionLabel label) {
  switch (label) {
    case SectionLabel::kContext: return "context";
    case SectionLabel::kProblem: return "problem";
    case SectionLabel::kForces: return "forces";
    case SectionLabel::kSolution: return "solution";
    case SectionLabel::kKnownUses: return "known_uses";
    case SectionLabel::kResultingContext: return "resulting_context";
  }
  return "?";
}

std::vector<SectionBlock> split_sections(std::string_view block) {
  std::vector<SectionBlock> out;
  for (const auto& line : text::classify_lines(block)) {
    if (line.blank) continue;
    auto lab = text::split_label(line.text);
    if (lab) {
      if (auto label = section_label_of(lab->label)) {
        out.push_back({*label, lab->label, lab->rest, line.number});
        continue;
      }
    }
    if (!out.empty()) append_text(out.back().body, line.text);
  }
  return out;
}

std::vector<KnownUseRef> match_known_uses(std::string_view input,
                                          std::span<const KnownUse> known_uses,
                                          std::vector<Diagnostic>& diagnostics,
                                          int line) {
  std::vector<KnownUseRef> refs;
  std::vector<std::vector<std::string>> keys;
  for (const auto& ku : known_uses) keys.push_back(known_use_keys(ku));

  for (const auto& sentence : text::split_sentences(input)) {
    if (known_uses.empty()) {
      refs.push_back({"", sentence});
      continue;
    }
    std::string norm = normalize_name(sentence);
    if (mentions_every_example(norm)) {
      for (const auto& ku : known_uses) refs.push_back({ku.id, sentence});
      continue;
    }
    std::vector<std::pair<std::size_t, std::size_t>> hits;  // (pos, ku index)
    for (std::size_t k = 0; k < known_uses.size(); ++k) {
      std::size_t best = kNpos;
      for (const auto& key : keys[k]) {
        std::size_t pos = 0;
        if (contains_phrase(norm, key, &pos)) best = std::min(best, pos);
      }
      if (best != kNpos) hits.emplace_back(best, k);
    }
    if (hits.empty()) {
      diagnostics.push_back(
          warn(line, "known-use note mentions no example: " + quoted(sentence)));
      continue;
    }
    std::stable_sort(hits.begin(), hits.end());
    for (const auto& [pos, k] : hits) {
      refs.push_back({known_uses[k].id, sentence});
    }
  }
  return refs;
}

ParseResult<std::vector<CandidateSolution>> parse_solutions(
    std::string_view input) {
  ParseResult<std::vector<CandidateSolution>> result;
  for (auto& item : extract_named_items(input)) {
    if (item.name.empty()) continue;
    std::string key = normalize_name(item.name);
    auto dup = std::find_if(result.value.begin(), result.value.end(),
                            [&](const CandidateSolution& s) {
                              return normalize_name(s.name) == key;
                            });
    if (dup != result.value.end()) {
      result.diagnostics.push_back(warn(
          item.line_begin, "duplicate solution " + quoted(item.name) + " merged"));
      if (!item.body.empty() && dup->description != item.body) {
        append_text(dup->description, item.body);
      }
      continue;
    }
    CandidateSolution s;
    s.name = item.name;
    s.description = item.body;
    result.value.push_back(std::move(s));
  }
  if (result.value.empty()) {
    throw Error(ErrorCode::kNoSolutionsFound,
                "response contains no list items or 'Name: description' lines");
  }
  return result;
}

ParseResult<std::vector<ProblemStatement>> parse_problems(
    std::string_view input, std::span<const CandidateSolution> solutions) {
  ParseResult<std::vector<ProblemStatement>> result;
  std::vector<std::string> names;
  for (const auto& s : solutions) names.push_back(s.name);

  for (auto& item : extract_named_items(input)) {
    if (item.body.empty()) continue;
    ProblemStatement p;
    p.raw_name = item.name;
    p.text = item.body;
    NameMatch m = resolve_name(item.name, names);
    if (m.kind == MatchKind::kExact) {
      p.solution_name = names[m.index];
    } else if (m.kind == MatchKind::kFuzzy) {
      p.solution_name = names[m.index];
      result.diagnostics.push_back(
          warn(item.line_begin, "solution name " + quoted(item.name) +
                                    " fuzzy-matched to " + quoted(names[m.index])));
    } else if (m.kind == MatchKind::kAmbiguous) {
      result.diagnostics.push_back(warn(
          item.line_begin,
          "solution name " + quoted(item.name) + " is ambiguous; left unattached"));
    } else {
      result.diagnostics.push_back(
          warn(item.line_begin, "problem names unknown solution " +
                                    quoted(item.name) + "; left unattached"));
    }
    result.value.push_back(std::move(p));
  }
  if (result.value.empty()) {
    throw Error(ErrorCode::kNoProblemsFound,
                "response contains no 'Solution: problem' statements");
  }
  return result;
}

ParseResult<std::vector<PatternDraft>> parse_pattern_shortforms(
    std::string_view input, std::span<const KnownUse> known_uses) {
  ParseResult<std::vector<PatternDraft>> result;

  struct Block {
    std::string name;
    int line = 0;
    std::vector<SectionBlock> sections;
  };
  std::optional<Block> current;
  std::optional<std::pair<std::string, int>> pending_name;

  auto finish = [&]() {
    if (!current) return;
    Block b = std::move(*current);
    current.reset();
    if (b.name.empty()) {
      result.diagnostics.push_back(
          error_at(b.line, "pattern sections without a name line; skipped"));
      return;
    }
    PatternDraft d;
    d.name = b.name;
    std::set<SectionLabel> seen;
    std::string known_uses_text;
    int known_uses_line = b.line;
    for (const auto& s : b.sections) {
      if (!seen.insert(s.label).second) {
        result.diagnostics.push_back(warn(
            s.line, "duplicate " + s.label_text + " section in " + quoted(b.name)));
      }
      switch (s.label) {
        case SectionLabel::kContext: append_text(d.context, s.body); break;
        case SectionLabel::kProblem: append_text(d.problem, s.body); break;
        case SectionLabel::kForces: append_text(d.forces, s.body); break;
        case SectionLabel::kSolution:
          append_text(d.solution_statement, s.body);
          break;
        case SectionLabel::kKnownUses:
          append_text(known_uses_text, s.body);
          known_uses_line = s.line;
          break;
        case SectionLabel::kResultingContext:
          result.diagnostics.push_back(warn(
              s.line, "resulting context in a short form is ignored for " +
                          quoted(b.name)));
          break;
      }
    }
    for (auto [label, title] :
         {std::pair{SectionLabel::kContext, "Context"},
          std::pair{SectionLabel::kProblem, "Problem"},
          std::pair{SectionLabel::kForces, "Forces"},
          std::pair{SectionLabel::kSolution, "Solution"},
          std::pair{SectionLabel::kKnownUses, "Known Uses"}}) {
      if (!seen.count(label)) {
        result.diagnostics.push_back(warn(
            b.line, std::string("missing ") + title + " section in " + quoted(b.name)));
      }
    }
    d.known_uses = match_known_uses(known_uses_text, known_uses,
                                    result.diagnostics, known_uses_line);
    result.value.push_back(std::move(d));
  };

  for (const auto& line : text::classify_lines(input)) {
    if (line.blank) continue;
    auto lab = text::split_label(line.text);
    if (lab) {
      if (auto label = section_label_of(lab->label)) {
        if (!current) {
          if (pending_name) {
            current = Block{pending_name->first, pending_name->second, {}};
            pending_name.reset();
          } else {
            current = Block{"", line.number, {}};
          }
        }
        current->sections.push_back(
            {*label, lab->label, lab->rest, line.number});
        continue;
      }
    }
    std::string candidate =
        lab && lab->rest.empty() ? lab->label : clean_name(line.text);
    bool name_line = (!lab || lab->rest.empty()) &&
                     (text::looks_like_name(candidate) ||
                      (line.heading && text::word_count(candidate) <= 8));
    if (name_line) {
      finish();
      pending_name = std::pair{clean_name(candidate), line.number};
      continue;
    }
    if (current && !current->sections.empty()) {
      append_text(current->sections.back().body, line.text);
    }
  }
  finish();

  if (result.value.empty()) {
    throw Error(ErrorCode::kNoPatternsFound,
                "response contains no name-headed pattern blocks");
  }
  return result;
}

ParseResult<std::vector<Affordance>> parse_affordances(std::string_view input) {
  ParseResult<std::vector<Affordance>> result;
  std::optional<Component> component;
  bool warned_headless = false;

  auto add = [&](std::string name, std::string description, int line) {
    name = clean_name(name);
    if (name.empty()) return;
    Component c = component.value_or(Component::kOther);
    if (!component && !warned_headless) {
      result.diagnostics.push_back(
          warn(line, "affordance listed before any component heading; "
                     "filed under Other"));
      warned_headless = true;
    }
    std::string key = normalize_name(name);
    for (auto& a : result.value) {
      if (a.component == c && normalize_name(a.name) == key) {
        result.diagnostics.push_back(
            warn(line, "duplicate affordance " + quoted(name) + " merged"));
        if (a.description.empty()) a.description = std::move(description);
        return;
      }
    }
    Affordance a;
    a.component = c;
    a.name = std::move(name);
    a.description = std::move(description);
    a.id = affordance_id(c, a.name);
    result.value.push_back(std::move(a));
  };

  for (const auto& line : text::classify_lines(input)) {
    if (line.blank) continue;
    auto lab = text::split_label(line.text);
    bool header_shape = (lab && lab->rest.empty()) || (!lab && line.heading);
    if (header_shape) {
      std::string heading = lab ? lab->label : line.text;
      bool says_affordance = false;
      auto c = component_from_heading(heading, &says_affordance);
      if (c) {
        component = c;
        continue;
      }
      if (says_affordance || (line.heading && !line.list_item)) {
        component = Component::kOther;
        result.diagnostics.push_back(warn(
            line.number, "unknown component heading " + quoted(clean_name(heading)) +
                             "; affordances filed under Other"));
        continue;
      }
      if (line.list_item) add(heading, "", line.number);
      continue;
    }
    if (lab && !lab->rest.empty()) {
      add(lab->label, lab->rest, line.number);
      continue;
    }
    if (line.list_item && text::word_count(line.text) <= 6) {
      add(line.text, "", line.number);
      continue;
    }
    if (!result.value.empty()) append_text(result.value.back().description, line.text);
  }
  if (result.value.empty()) {
    throw Error(ErrorCode::kNoAffordancesFound,
                "response contains no 'Affordance: description' items");
  }
  return result;
}

ParseResult<CrossReferenceMatrix> parse_cross_references(
    std::string_view input, std::span<const Affordance> registry,
    std::span<const PatternDraft> patterns) {
  ParseResult<CrossReferenceMatrix> result;
  CrossReferenceMatrix& m = result.value;
  for (const auto& a : registry) m.rows.push_back(a.id);
  for (const auto& p : patterns) {
    if (p.live()) m.cols.push_back(p.name);
  }
  m.cells.assign(m.rows.size(), std::vector<bool>(m.cols.size(), false));
  m.notes.assign(m.rows.size(), std::vector<std::string>(m.cols.size()));

  RenameMap no_renames;
  PatternScope scope(patterns, no_renames, /*live_only=*/true);
  std::vector<std::string> affordance_names;
  for (const auto& a : registry) affordance_names.push_back(a.name);

  std::optional<std::size_t> col;
  std::optional<Component> hint;
  std::optional<std::pair<std::size_t, std::size_t>> last_cell;

  auto resolve_affordance = [&](std::string_view name) -> NameMatch {
    if (hint) {
      std::vector<std::string> subset;
      std::vector<std::size_t> back;
      for (std::size_t i = 0; i < registry.size(); ++i) {
        if (registry[i].component == *hint) {
          subset.push_back(registry[i].name);
          back.push_back(i);
        }
      }
      NameMatch m2 = resolve_name(name, subset);
      if (m2.resolved()) {
        m2.index = back[m2.index];
        return m2;
      }
    }
    return resolve_name(name, affordance_names);
  };

  auto mark = [&](std::string_view name, std::string note, int line) -> bool {
    NameMatch am = resolve_affordance(name);
    if (!am.resolved()) return false;
    if (!col) {
      result.diagnostics.push_back(warn(
          line, "affordance " + quoted(name) + " listed before any pattern"));
      return true;
    }
    if (am.kind == MatchKind::kFuzzy) {
      result.diagnostics.push_back(
          warn(line, "affordance " + quoted(name) + " fuzzy-matched to " +
                         quoted(registry[am.index].name)));
    }
    m.cells[am.index][*col] = true;
    if (!note.empty()) m.notes[am.index][*col] = std::move(note);
    last_cell = std::pair{am.index, *col};
    return true;
  };

  for (const auto& line : text::classify_lines(input)) {
    if (line.blank) continue;
    auto lab = text::split_label(line.text);
    bool header_shape = (lab && lab->rest.empty()) ||
                        (!lab && (line.heading || line.list_item ||
                                  text::looks_like_name(line.text)));
    if (header_shape) {
      std::string heading = clean_name(lab ? lab->label : line.text);
      bool says_affordance = false;
      if (auto c = component_from_heading(heading, &says_affordance)) {
        hint = c;
        last_cell.reset();
        continue;
      }
      auto hit = scope.resolve(heading);
      if (hit.index != kNpos) {
        col = hit.index;
        hint.reset();
        last_cell.reset();
        if (hit.kind == MatchKind::kFuzzy) {
          result.diagnostics.push_back(
              warn(line.number, "pattern " + quoted(heading) +
                                    " fuzzy-matched to " + quoted(scope.name(*col))));
        }
        continue;
      }
      if (says_affordance) {
        hint.reset();
        result.diagnostics.push_back(warn(
            line.number, "unknown component heading " + quoted(heading)));
        continue;
      }
      if (mark(heading, "", line.number)) continue;
      result.diagnostics.push_back(
          warn(line.number, "unrecognized heading " + quoted(heading)));
      continue;
    }
    if (lab && !lab->rest.empty()) {
      if (mark(lab->label, lab->rest, line.number)) continue;
      auto hit = scope.resolve(lab->label);
      if (hit.index != kNpos) {
        col = hit.index;
        hint.reset();
        last_cell.reset();
        continue;
      }
      if (col) {
        result.diagnostics.push_back(warn(
            line.number, "unknown affordance " + quoted(clean_name(lab->label)) +
                             " under " + quoted(scope.name(*col))));
      }
      continue;
    }
    if (last_cell) {
      append_text(m.notes[last_cell->first][last_cell->second], line.text);
    }
  }
  if (m.true_count() == 0) {
    throw Error(ErrorCode::kEmptyMatrix,
                "no affordance/pattern pair could be resolved");
  }
  return result;
}

ParseResult<std::vector<ResultingContextEdge>> parse_resulting_contexts(
    std::string_view input, std::span<const PatternDraft> patterns,
    const RenameMap& renames) {
  ParseResult<std::vector<ResultingContextEdge>> result;
  PatternScope scope(patterns, renames, /*live_only=*/false);

  std::optional<std::size_t> source;
  struct Open {
    std::optional<std::size_t> source;
    std::string rationale;
    int line = 0;
  };
  std::optional<Open> open;

  auto finish = [&]() {
    if (!open) return;
    Open b = std::move(*open);
    open.reset();
    if (!b.source) {
      result.diagnostics.push_back(
          warn(b.line, "resulting context without a pattern name; discarded"));
      return;
    }
    const std::string& src = scope.name(*b.source);
    if (states_no_successor(b.rationale)) {
      result.value.push_back({src, "", b.rationale});
      return;
    }
    for (const auto& mention : find_pattern_mentions(b.rationale, scope)) {
      if (mention.index == *b.source) continue;
      if (!scope.live(mention.index)) {
        result.diagnostics.push_back(
            warn(b.line, "resulting context of " + quoted(src) +
                             " names dropped pattern " +
                             quoted(scope.name(mention.index)) + "; edge discarded"));
        return;
      }
      result.value.push_back({src, scope.name(mention.index), b.rationale});
      return;
    }
    result.diagnostics.push_back(
        warn(b.line, "resulting context of " + quoted(src) +
                         " names no known pattern; edge discarded"));
  };

  auto source_from = [&](std::string_view s) -> std::optional<std::size_t> {
    auto hit = scope.resolve(clean_name(s));
    if (hit.index == kNpos) return std::nullopt;
    return hit.index;
  };

  for (const auto& line : text::classify_lines(input)) {
    if (line.blank) continue;
    auto lab = text::split_label(line.text, 12);
    if (lab) {
      std::string norm = normalize_name(lab->label);
      std::size_t at = norm.find("resulting context");
      if (at != std::string::npos) {
        finish();
        open = Open{source, lab->rest, line.number};
        // "Resulting Context for X", "X - Resulting Context", "(X)"
        std::string label = text::strip_emphasis(lab->label);
        std::string lower = text::to_lower(label);
        std::size_t rc = lower.find("resulting context");
        std::string before(text::trim(label.substr(0, rc)));
        std::string after(text::trim(label.substr(rc + 17)));
        for (std::string* part : {&before, &after}) {
          std::string t = *part;
          for (std::string_view junk : {"(", ")", "-", "\xE2\x80\x94", "for ", "of "}) {
            t = text::replace_all(t, junk, " ");
          }
          t = std::string(text::trim(t));
          if (t.empty()) continue;
          if (auto s = source_from(t)) {
            open->source = s;
            source = s;
          }
        }
        continue;
      }
    }
    bool header_shape = (lab && lab->rest.empty()) ||
                        (!lab && (line.heading || line.list_item ||
                                  text::looks_like_name(line.text)));
    if (header_shape) {
      std::string heading = lab ? lab->label : line.text;
      if (auto s = source_from(heading)) {
        finish();
        source = s;
        continue;
      }
    }
    if (open) append_text(open->rationale, line.text);
  }
  finish();
  return result;
}

ParseResult<PatternStory> parse_pattern_story(
    std::string_view input, const KnownUse& known_use,
    std::span<const PatternDraft> patterns, const RenameMap& renames) {
  ParseResult<PatternStory> result;
  result.value.known_use_id = known_use.id;
  PatternScope scope(patterns, renames, /*live_only=*/false);

  bool collecting = false;
  for (const auto& line : text::classify_lines(input)) {
    if (line.blank) continue;
    if (line.list_item || line.heading) {
      auto lab = text::split_label(line.text);
      std::string name = lab ? lab->label : clean_name(line.text);
      std::string narrative = lab ? lab->rest : "";
      if (lab || text::looks_like_name(name)) {
        collecting = false;
        auto hit = scope.resolve(name);
        if (hit.index == kNpos) {
          result.diagnostics.push_back(
              warn(line.number, "story entry " + quoted(clean_name(name)) +
                                    (hit.kind == MatchKind::kAmbiguous
                                         ? " is ambiguous; skipped"
                                         : " names no known pattern; skipped")));
          continue;
        }
        if (!scope.live(hit.index)) {
          result.diagnostics.push_back(
              warn(line.number, "story entry names dropped pattern " +
                                    quoted(scope.name(hit.index)) + "; skipped"));
          continue;
        }
        if (hit.kind == MatchKind::kFuzzy) {
          result.diagnostics.push_back(
              warn(line.number, "story entry " + quoted(clean_name(name)) +
                                    " resolved to " + quoted(scope.name(hit.index))));
        }
        result.value.entries.push_back({scope.name(hit.index), narrative});
        collecting = true;
        continue;
      }
    }
    if (collecting) append_text(result.value.entries.back().narrative, line.text);
  }
  if (result.value.entries.empty()) {
    throw Error(ErrorCode::kNoStoryEntries,
                "story for " + quoted(known_use.id) + " lists no known pattern");
  }
  return result;
}

ParseResult<std::vector<std::string>> parse_pattern_list(
    std::string_view input, std::span<const PatternDraft> patterns) {
  ParseResult<std::vector<std::string>> result;
  RenameMap no_renames;
  PatternScope scope(patterns, no_renames, /*live_only=*/true);
  std::set<std::size_t> listed;
  for (const auto& line : text::classify_lines(input)) {
    if (line.blank || !(line.list_item || line.heading)) continue;
    auto lab = text::split_label(line.text);
    std::string name = clean_name(lab ? lab->label : line.text);
    if (name.empty()) continue;
    result.value.push_back(name);
    auto hit = scope.resolve(name);
    if (hit.index == kNpos) {
      result.diagnostics.push_back(
          warn(line.number, "listed pattern " + quoted(name) + " is not in the session"));
    } else {
      listed.insert(hit.index);
    }
  }
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (!listed.count(i)) {
      result.diagnostics.push_back(
          warn(0, "pattern " + quoted(scope.name(i)) + " missing from the list"));
    }
  }
  return result;
}

ParseResult<std::vector<std::string>> parse_missing_patterns(
    std::string_view input, std::span<const PatternDraft> patterns,
    const RenameMap& renames) {
  ParseResult<std::vector<std::string>> result;
  std::vector<std::string> known;
  for (const auto& p : patterns) known.push_back(normalize_name(p.name));
  for (const auto& e : renames.entries) known.push_back(normalize_name(e.old_name));

  for (const auto& line : text::classify_lines(input)) {
    if (line.blank || !(line.list_item || line.heading)) continue;
    auto lab = text::split_label(line.text);
    std::string name = clean_name(lab ? lab->label : line.text);
    if (name.empty() || text::word_count(name) > 8) continue;
    if (!lab && !text::looks_like_name(name)) continue;
    std::string key = normalize_name(name);
    if (std::find(known.begin(), known.end(), key) != known.end()) {
      result.diagnostics.push_back(
          warn(line.number, "suggestion " + quoted(name) + " is already in the language"));
      continue;
    }
    if (std::find_if(result.value.begin(), result.value.end(),
                     [&](const std::string& s) {
                       return normalize_name(s) == key;
                     }) != result.value.end()) {
      continue;
    }
    result.value.push_back(name);
  }
  return result;
}

}  // namespace patternmine::parser
