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

#include "patternmine/model.h"

#include <chrono>
#include <ctime>
#include <set>

#include "patternmine/error.h"
#include "patternmine/names.h"

namespace patternmine {

std::string utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view to_string(StepId step) {
  switch (step) {
    case StepId::kIdentifyExamples: return "identify_examples";
    case StepId::kExtractSolutions: return "extract_solutions";
    case StepId::kDefineProblems: return "define_problems";
    case StepId::kDistillPatterns: return "distill_patterns";
    case StepId::kIdentifyAffordances: return "identify_affordances";
    case StepId::kRelateAffordances: return "relate_affordances";
    case StepId::kRefine: return "refine";
    case StepId::kConsolidate: return "consolidate";
  }
  return "?";
}

StepId parse_step_id(std::string_view text) {
  std::string key(text);
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  for (StepId s : kAllSteps) {
    if (to_string(s) == key) return s;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown step '" + std::string(text) + "'");
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "?";
}

Role parse_role(std::string_view text) {
  if (text == "system") return Role::kSystem;
  if (text == "user") return Role::kUser;
  if (text == "assistant") return Role::kAssistant;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown role '" + std::string(text) + "'");
}

std::string_view to_string(Component c) {
  switch (c) {
    case Component::kLlm: return "llm";
    case Component::kDatabase: return "database";
    case Component::kExternalTool: return "external_tool";
    case Component::kOther: return "other";
  }
  return "?";
}

std::string_view display_name(Component c) {
  switch (c) {
    case Component::kLlm: return "LLM";
    case Component::kDatabase: return "Database";
    case Component::kExternalTool: return "External tool";
    case Component::kOther: return "Other";
  }
  return "?";
}

Component parse_component(std::string_view text) {
  for (Component c : {Component::kLlm, Component::kDatabase,
                      Component::kExternalTool, Component::kOther}) {
    if (to_string(c) == text) return c;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown component '" + std::string(text) + "'");
}

std::string affordance_id(Component component, std::string_view name) {
  std::string prefix(to_string(component));
  for (char& c : prefix) {
    if (c == '_') c = '-';
  }
  return prefix + "." + slugify(name);
}

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::kAi: return "ai";
    case Origin::kHuman: return "human";
    case Origin::kMixed: return "mixed";
  }
  return "?";
}

Origin parse_origin(std::string_view text) {
  if (text == "ai") return Origin::kAi;
  if (text == "human") return Origin::kHuman;
  if (text == "mixed") return Origin::kMixed;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown origin '" + std::string(text) + "'");
}

Origin merge_origin(Origin current, Origin actor) {
  if (current == Origin::kMixed || actor == Origin::kMixed) {
    return Origin::kMixed;
  }
  return current == actor ? current : Origin::kMixed;
}

std::string_view to_string(PatternStatus s) {
  switch (s) {
    case PatternStatus::kDraft: return "draft";
    case PatternStatus::kRefined: return "refined";
    case PatternStatus::kConsolidated: return "consolidated";
    case PatternStatus::kDropped: return "dropped";
  }
  return "?";
}

PatternStatus parse_pattern_status(std::string_view text) {
  for (PatternStatus s : {PatternStatus::kDraft, PatternStatus::kRefined,
                          PatternStatus::kConsolidated,
                          PatternStatus::kDropped}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown pattern status '" + std::string(text) + "'");
}

std::string_view to_string(Severity s) {
  return s == Severity::kError ? "error" : "warning";
}

std::string_view to_string(StepStatus s) {
  switch (s) {
    case StepStatus::kPending: return "pending";
    case StepStatus::kAwaitingReview: return "awaiting_review";
    case StepStatus::kApproved: return "approved";
    case StepStatus::kStale: return "stale";
  }
  return "?";
}

StepStatus parse_step_status(std::string_view text) {
  for (StepStatus s : {StepStatus::kPending, StepStatus::kAwaitingReview,
                       StepStatus::kApproved, StepStatus::kStale}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown step status '" + std::string(text) + "'");
}

std::size_t CrossReferenceMatrix::true_count() const {
  std::size_t n = 0;
  for (const auto& row : cells) {
    for (bool b : row) n += b ? 1 : 0;
  }
  return n;
}

std::optional<std::size_t> CrossReferenceMatrix::row_of(
    std::string_view affordance_id) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] == affordance_id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> CrossReferenceMatrix::col_of(
    std::string_view pattern_name) const {
  std::string key = normalize_name(pattern_name);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (normalize_name(cols[i]) == key) return i;
  }
  return std::nullopt;
}

bool CrossReferenceMatrix::marked(std::string_view affordance_id,
                                  std::string_view pattern_name) const {
  auto r = row_of(affordance_id);
  auto c = col_of(pattern_name);
  return r && c && cells[*r][*c];
}

std::string RenameMap::resolve(std::string_view name) const {
  std::string current(name);
  std::set<std::string> seen;
  for (;;) {
    std::string key = normalize_name(current);
    if (!seen.insert(key).second) return current;
    const RenameEntry* next = nullptr;
    // Latest entry wins when a name was renamed more than once.
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
      if (normalize_name(it->old_name) == key) {
        next = &*it;
        break;
      }
    }
    if (next == nullptr) return current;
    current = next->new_name;
  }
}

std::vector<std::string> Session::live_pattern_names() const {
  std::vector<std::string> out;
  for (const auto& p : patterns) {
    if (p.live()) out.push_back(p.name);
  }
  return out;
}

PatternDraft* Session::find_live(std::string_view name) {
  std::string key = normalize_name(name);
  for (auto& p : patterns) {
    if (p.live() && normalize_name(p.name) == key) return &p;
  }
  return nullptr;
}

const PatternDraft* Session::find_live(std::string_view name) const {
  return const_cast<Session*>(this)->find_live(name);
}

const KnownUse* Session::find_known_use(std::string_view id) const {
  for (const auto& k : known_uses) {
    if (k.id == id) return &k;
  }
  return nullptr;
}

const Affordance* Session::find_affordance(std::string_view id) const {
  for (const auto& a : registry) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

}  // namespace patternmine
