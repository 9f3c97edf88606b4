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

#include "patternmine/prompts.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "patternmine/error.h"
#include "patternmine/render.h"
#include "patternmine/text.h"

#ifndef PATTERNMINE_PROMPT_DIR
#define PATTERNMINE_PROMPT_DIR "prompts"
#endif

namespace patternmine {
namespace {

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::string v(value);
  std::erase(v, '[');
  std::erase(v, ']');
  std::stringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::string t(text::trim(item));
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

std::set<std::string> placeholders_in(std::string_view body) {
  std::set<std::string> out;
  std::size_t pos = 0;
  while ((pos = body.find('{', pos)) != std::string_view::npos) {
    std::size_t end = pos + 1;
    while (end < body.size() &&
           (std::islower(static_cast<unsigned char>(body[end])) || body[end] == '_')) {
      ++end;
    }
    if (end < body.size() && body[end] == '}' && end > pos + 1) {
      out.insert(std::string(body.substr(pos + 1, end - pos - 1)));
      pos = end + 1;
    } else {
      ++pos;
    }
  }
  return out;
}

std::optional<std::string> part_header(std::string_view line) {
  std::string_view t = text::trim(line);
  if (t.size() < 8 || t.substr(0, 3) != "===" || t.substr(t.size() - 3) != "===") {
    return std::nullopt;
  }
  std::string name(text::trim(t.substr(3, t.size() - 6)));
  if (name.empty()) return std::nullopt;
  return name;
}

std::string strip_blank_edges(const std::vector<std::string>& lines) {
  std::size_t b = 0;
  while (b < lines.size() && text::trim(lines[b]).empty()) ++b;
  std::vector<std::string> kept(lines.begin() + static_cast<long>(b), lines.end());
  return text::normalize_block(text::join(kept, "\n"));
}

std::string title_case(std::string_view s) {
  static const std::set<std::string> kSmall = {"a", "an", "the", "and", "or", "of",
                                               "for", "with", "to", "in", "on"};
  std::istringstream in{std::string(s)};
  std::string w, out;
  bool first = true;
  while (in >> w) {
    if (first || !kSmall.count(text::to_lower(w))) {
      w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    }
    if (!out.empty()) out += ' ';
    out += w;
    first = false;
  }
  return out;
}

bool stale(const Session& s, StepId step) {
  return s.step(step).status == StepStatus::kStale;
}

}  // namespace

const PromptPart& PromptTemplate::part(std::string_view name) const {
  if (name.empty()) return parts.front();
  for (const auto& p : parts) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "template '" + title + "' has no part '" + std::string(name) + "'");
}

PromptTemplate parse_prompt_template(std::string_view input, std::string_view source) {
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::kConfigError, std::string(source) + ": " + msg);
  };
  auto lines = text::split_lines(input);
  if (lines.empty() || text::trim(lines[0]) != "---") fail("missing front-matter");
  std::size_t i = 1;
  PromptTemplate t;
  bool have_step = false;
  for (; i < lines.size() && text::trim(lines[i]) != "---"; ++i) {
    std::string_view line = lines[i];
    if (text::trim(line).empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) fail("front-matter line without a colon");
    std::string key(text::trim(line.substr(0, colon)));
    std::string value(text::trim(line.substr(colon + 1)));
    if (key == "step") {
      have_step = true;
      if (value != "reflection") {
        try {
          t.step = parse_step_id(value);
        } catch (const Error&) {
          fail("unknown step '" + value + "'");
        }
      }
    } else if (key == "title") {
      t.title = value;
    } else if (key == "placeholders") {
      t.placeholders = split_list(value);
    } else if (key == "requires") {
      t.requires_inputs = split_list(value);
    } else {
      fail("unknown front-matter key '" + key + "'");
    }
  }
  if (i >= lines.size()) fail("unterminated front-matter");
  if (!have_step) fail("front-matter names no step");

  std::vector<std::string> current;
  std::optional<std::string> current_name;
  auto flush = [&]() {
    std::string body = strip_blank_edges(current);
    if (current_name || !body.empty()) {
      t.parts.push_back({current_name.value_or(""), body});
    }
    current.clear();
  };
  for (++i; i < lines.size(); ++i) {
    if (auto name = part_header(lines[i])) {
      flush();
      current_name = *name;
      continue;
    }
    current.push_back(lines[i]);
  }
  flush();
  if (t.parts.empty()) fail("template body is empty");

  std::set<std::string> used;
  for (const auto& p : t.parts) {
    if (p.body.empty()) fail("part '" + p.name + "' is empty");
    auto found = placeholders_in(p.body);
    used.insert(found.begin(), found.end());
  }
  std::set<std::string> declared(t.placeholders.begin(), t.placeholders.end());
  if (used != declared) {
    fail("declared placeholders do not match the {slots} used in the body");
  }
  return t;
}

std::filesystem::path default_prompt_dir() {
  if (const char* env = std::getenv("PATTERNMINE_PROMPTS"); env && *env) return env;
  return PATTERNMINE_PROMPT_DIR;
}

PromptKit PromptKit::load(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kConfigError, "prompt directory " + dir.string() + " not found");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".prompt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  PromptKit kit;
  std::vector<std::optional<PromptTemplate>> by_step(kStepCount);
  bool have_reflection = false;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    PromptTemplate t = parse_prompt_template(buf.str(), f.string());
    if (!t.step) {
      if (have_reflection) throw Error(ErrorCode::kConfigError, "two reflection templates");
      kit.reflection_ = std::move(t);
      have_reflection = true;
      continue;
    }
    auto& slot = by_step[index_of(*t.step)];
    if (slot) {
      throw Error(ErrorCode::kConfigError,
                  "two templates for step " + std::string(to_string(*t.step)));
    }
    slot = std::move(t);
  }
  for (StepId s : kAllSteps) {
    if (!by_step[index_of(s)]) {
      throw Error(ErrorCode::kConfigError,
                  "no template for step " + std::string(to_string(s)) + " in " + dir.string());
    }
    kit.steps_.push_back(std::move(*by_step[index_of(s)]));
  }
  if (!have_reflection) {
    throw Error(ErrorCode::kConfigError, "no reflection template in " + dir.string());
  }
  return kit;
}

const PromptTemplate& PromptKit::get(StepId step) const { return steps_[index_of(step)]; }

Bindings session_bindings(const Session& s) {
  Bindings b;
  if (!s.known_uses.empty()) {
    std::vector<std::string> blocks;
    for (std::size_t i = 0; i < s.known_uses.size(); ++i) {
      const auto& k = s.known_uses[i];
      blocks.push_back("Example " + std::to_string(i + 1) + ": " + k.name + "\n" +
                       text::normalize_block(k.narrative));
    }
    b["examples"] = text::join(blocks, "\n\n");
  }
  if (!s.solutions.empty() && !stale(s, StepId::kExtractSolutions)) {
    std::vector<std::string> items;
    for (const auto& sol : s.solutions) {
      items.push_back("- " + sol.name + ": " + text::collapse_ws(sol.description));
    }
    b["solutions"] = text::join(items, "\n");
  }
  if (!stale(s, StepId::kDistillPatterns)) {
    std::vector<std::string> forms;
    for (const auto& p : s.patterns) {
      if (!p.live()) continue;
      std::string body = render_shortform(p).body;
      body.pop_back();
      forms.push_back(std::move(body));
    }
    if (!forms.empty()) b["patterns"] = text::join(forms, "\n\n");
  }
  if (!s.registry.empty() && !stale(s, StepId::kIdentifyAffordances)) {
    std::vector<std::string> groups;
    for (Component c : {Component::kLlm, Component::kDatabase, Component::kExternalTool,
                        Component::kOther}) {
      std::string group;
      for (const auto& a : s.registry) {
        if (a.component != c) continue;
        group += "\n- " + a.name;
        if (!a.description.empty()) group += ": " + text::collapse_ws(a.description);
      }
      if (!group.empty()) groups.push_back(std::string(display_name(c)) + " affordances:" + group);
    }
    b["affordances"] = text::join(groups, "\n\n");
  }
  return b;
}

Bindings story_bindings(const KnownUse& k) {
  std::string name(text::trim(k.name));
  std::string lower = text::to_lower(name);
  for (std::string_view suffix : {" scenario", " example", " use case"}) {
    if (lower.size() > suffix.size() &&
        lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0) {
      name.resize(name.size() - suffix.size());
      break;
    }
  }
  // A recap speaks of "this example" rather than its position in the list.
  std::string recap = text::collapse_ws(k.narrative);
  for (std::string_view ord : {"first", "second", "third", "fourth", "fifth", "sixth",
                               "seventh", "eighth", "ninth", "tenth"}) {
    std::string lead = "The " + std::string(ord) + " example";
    if (recap.rfind(lead, 0) == 0) {
      recap = "This example" + recap.substr(lead.size());
      break;
    }
  }
  return {{"example_name", title_case(name)}, {"example_recap", recap}};
}

Bindings expansion_bindings(const PatternDraft& p) {
  std::string form = render_shortform(p).body;
  form.pop_back();
  return {{"pattern_name", p.name}, {"pattern_shortform", form}};
}

std::string PromptKit::render_prompt(StepId step, const Session& s, std::string_view part,
                                     const Bindings& extra) const {
  const PromptTemplate& t = get(step);
  auto missing = [&](const std::string& what) {
    throw Error(ErrorCode::kMissingInput,
                std::string(to_string(step)) + " needs " + what);
  };
  Bindings b = session_bindings(s);
  for (const auto& input : t.requires_inputs) {
    bool ok = true;
    if (input == "known_uses") ok = b.count("examples") > 0;
    else if (input == "solutions") ok = b.count("solutions") > 0;
    else if (input == "problems") ok = !s.problems.empty() && !stale(s, StepId::kDefineProblems);
    else if (input == "patterns") ok = b.count("patterns") > 0;
    else if (input == "affordances") ok = b.count("affordances") > 0;
    else throw Error(ErrorCode::kConfigError, "template requires unknown input '" + input + "'");
    if (!ok) missing(input);
  }
  for (const auto& [k, v] : extra) b[k] = v;

  const PromptPart& p = t.part(part);
  std::string out;
  std::string_view body = p.body;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t open = body.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(body.substr(pos));
      break;
    }
    std::size_t close = body.find('}', open);
    std::string key = close == std::string_view::npos
                          ? std::string()
                          : std::string(body.substr(open + 1, close - open - 1));
    bool slot = !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
      return std::islower(static_cast<unsigned char>(c)) || c == '_';
    });
    if (!slot) {
      out.append(body.substr(pos, open - pos + 1));
      pos = open + 1;
      continue;
    }
    out.append(body.substr(pos, open - pos));
    auto it = b.find(key);
    if (it == b.end() || it->second.empty()) missing("{" + key + "}");
    out += it->second;
    pos = close + 1;
  }
  return text::normalize_block(out);
}

std::string PromptKit::render_reflection_prompt() const {
  return text::normalize_block(reflection_.part().body);
}

}  // namespace patternmine
