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

#include "patternmine/curation.h"

#include <algorithm>
#include <map>
#include <set>

#include "patternmine/error.h"
#include "patternmine/names.h"
#include "patternmine/parser.h"
#include "patternmine/text.h"

namespace patternmine {
namespace {

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

bool same_name(std::string_view a, std::string_view b) {
  return normalize_name(a) == normalize_name(b);
}

// Live pattern by normalized name, falling back to the rename map so an old
// name still finds its pattern.
PatternDraft& require_live(Session& s, std::string_view name) {
  if (PatternDraft* p = s.find_live(name)) return *p;
  if (PatternDraft* p = s.find_live(s.rename_map.resolve(name))) return *p;
  throw Error(ErrorCode::kUnknownPattern,
              "no live pattern named " + quoted(name));
}

void audit(Session& s, std::string action, std::string subject,
           std::string detail, const Clock& clock) {
  s.audit.push_back(
      {std::move(action), std::move(subject), std::move(detail), clock()});
}

void touch_provenance(PatternDraft& p, std::string_view field, Origin actor,
                      const Clock& clock) {
  auto it = p.provenance.find(std::string(field));
  if (it == p.provenance.end()) {
    p.provenance[std::string(field)] = Provenance{actor, std::nullopt, clock()};
    return;
  }
  it->second.origin = merge_origin(it->second.origin, actor);
  it->second.edited_at = clock();
}

std::string canonical_field(std::string_view field) {
  std::string f = text::to_lower(text::trim(field));
  std::replace(f.begin(), f.end(), '-', '_');
  std::replace(f.begin(), f.end(), ' ', '_');
  if (f == "solution") return "solution_statement";
  if (f == "known_use") return "known_uses";
  if (f == "detail") return "solution_detail";
  return f;
}

bool is_pattern_field(std::string_view f) {
  return std::find(kPatternFields.begin(), kPatternFields.end(), f) !=
         kPatternFields.end();
}

}  // namespace

std::vector<std::string> cited_affordances(std::string_view detail) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = detail.find("[[", pos)) != std::string_view::npos) {
    std::size_t end = detail.find("]]", pos + 2);
    if (end == std::string_view::npos) break;
    std::string name(text::trim(detail.substr(pos + 2, end - pos - 2)));
    if (!name.empty()) out.push_back(std::move(name));
    pos = end + 2;
  }
  return out;
}

Session rename_pattern(Session s, std::string_view old_name,
                       std::string_view new_name_in, const Clock& clock,
                       std::string_view reason) {
  std::string new_name(text::trim(new_name_in));
  if (new_name.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "new pattern name is empty");
  }
  PatternDraft& target = require_live(s, old_name);
  const std::string old = target.name;
  if (old == new_name) return s;
  for (const auto& p : s.patterns) {
    if (&p != &target && p.live() && same_name(p.name, new_name)) {
      throw Error(ErrorCode::kDuplicateName,
                  "a live pattern is already named " + quoted(p.name));
    }
  }

  target.name = new_name;
  target.provenance["name"] = Provenance{Origin::kHuman, std::nullopt, clock()};

  if (auto col = s.matrix.col_of(old)) s.matrix.cols[*col] = new_name;
  for (auto& p : s.patterns) {
    for (auto& e : p.resulting_context) {
      if (same_name(e.target_pattern_name, old)) e.target_pattern_name = new_name;
      e.rationale = text::replace_all(std::move(e.rationale), old, new_name);
    }
  }
  for (auto& story : s.stories) {
    for (auto& entry : story.entries) {
      if (same_name(entry.pattern_name, old)) entry.pattern_name = new_name;
    }
  }
  if (auto it = s.expansions.find(old); it != s.expansions.end()) {
    std::string body = std::move(it->second);
    s.expansions.erase(it);
    s.expansions[new_name] = std::move(body);
  }

  // Renaming back to an earlier name would close a loop; forget the entry
  // that led away from it instead.
  auto& entries = s.rename_map.entries;
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [&](const RenameEntry& e) {
                                 return same_name(e.old_name, new_name);
                               }),
                entries.end());
  entries.push_back({old, new_name, std::string(reason)});
  audit(s, "rename", new_name, old + " -> " + new_name, clock);
  return s;
}

Session drop_pattern(Session s, std::string_view name, std::string_view reason,
                     const Clock& clock, std::vector<std::string>* removed) {
  PatternDraft& target = require_live(s, name);
  const std::string dropped = target.name;
  target.status = PatternStatus::kDropped;
  std::vector<std::string> report;

  if (auto col = s.matrix.col_of(dropped)) {
    std::size_t marks = 0;
    for (std::size_t r = 0; r < s.matrix.cells.size(); ++r) {
      if (s.matrix.cells[r][*col]) ++marks;
      s.matrix.cells[r].erase(s.matrix.cells[r].begin() + *col);
      s.matrix.notes[r].erase(s.matrix.notes[r].begin() + *col);
    }
    s.matrix.cols.erase(s.matrix.cols.begin() + *col);
    report.push_back("matrix column " + quoted(dropped) + " removed (" +
                     std::to_string(marks) + " marks)");
  }
  for (auto& p : s.patterns) {
    if (!p.live()) continue;
    auto& edges = p.resulting_context;
    for (auto it = edges.begin(); it != edges.end();) {
      if (same_name(it->target_pattern_name, dropped)) {
        report.push_back("edge " + quoted(p.name) + " -> " + quoted(dropped) +
                         " removed");
        it = edges.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto& story : s.stories) {
    auto& entries = story.entries;
    for (auto it = entries.begin(); it != entries.end();) {
      if (same_name(it->pattern_name, dropped)) {
        report.push_back("story entry " + quoted(dropped) + " removed from " +
                         quoted(story.known_use_id));
        it = entries.erase(it);
      } else {
        ++it;
      }
    }
  }
  std::erase_if(s.stories, [&](const PatternStory& st) {
    if (!st.entries.empty()) return false;
    report.push_back("story " + quoted(st.known_use_id) + " removed (empty)");
    return true;
  });

  audit(s, "drop", dropped, std::string(reason), clock);
  if (removed) *removed = std::move(report);
  return s;
}

Session edit_field(Session s, std::string_view pattern, std::string_view field,
                   std::string_view value, Origin actor, const Clock& clock) {
  std::string f = canonical_field(field);
  if (!is_pattern_field(f)) {
    throw Error(ErrorCode::kUnknownField,
                quoted(field) + " is not a pattern field");
  }
  if (f == "name") {
    std::string old = require_live(s, pattern).name;
    s = rename_pattern(std::move(s), old, value, clock, "edited");
    PatternDraft& p = require_live(s, value);
    p.provenance["name"] = Provenance{actor, std::nullopt, clock()};
    return s;
  }

  PatternDraft& p = require_live(s, pattern);
  std::string body(text::trim(value));
  if (f == "context") {
    p.context = body;
  } else if (f == "problem" || f == "solution_statement") {
    if (body.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  f + " of " + quoted(p.name) + " cannot be empty");
    }
    (f == "problem" ? p.problem : p.solution_statement) = body;
  } else if (f == "forces") {
    p.forces = body;
  } else if (f == "solution_detail") {
    p.solution_detail = body;
  } else if (f == "known_uses") {
    std::vector<Diagnostic> diags;
    auto refs = parser::match_known_uses(body, s.known_uses, diags);
    if (!diags.empty() || (s.known_uses.empty() && !body.empty())) {
      throw Error(ErrorCode::kInvalidArgument,
                  diags.empty() ? "session has no examples to cite"
                                : diags.front().message);
    }
    p.known_uses = std::move(refs);
  } else if (f == "resulting_context") {
    if (body.empty()) {
      p.resulting_context.clear();
      p.no_successor = false;
    } else {
      std::string block =
          "Resulting Context for " + p.name + ": " + body;
      auto parsed =
          parser::parse_resulting_contexts(block, s.patterns, s.rename_map);
      if (parsed.value.empty()) {
        throw Error(ErrorCode::kInvalidArgument,
                    parsed.diagnostics.empty()
                        ? "resulting context names no known pattern"
                        : parsed.diagnostics.front().message);
      }
      const auto& edge = parsed.value.front();
      if (edge.target.empty()) {
        p.resulting_context.clear();
        p.no_successor = true;
      } else {
        p.resulting_context = {{edge.target, edge.rationale}};
        p.no_successor = false;
      }
    }
  }
  touch_provenance(p, f, actor, clock);
  audit(s, "edit", p.name, f + " by " + std::string(to_string(actor)), clock);
  return s;
}

Session move_pattern(Session s, std::string_view name, std::string_view before,
                     const Clock& clock) {
  PatternDraft& moving = require_live(s, name);
  std::string moved_name = moving.name;
  auto from = std::find_if(s.patterns.begin(), s.patterns.end(),
                           [&](const PatternDraft& p) { return &p == &moving; });
  PatternDraft item = std::move(*from);
  s.patterns.erase(from);
  if (before.empty()) {
    s.patterns.push_back(std::move(item));
  } else {
    PatternDraft* anchor = s.find_live(before);
    if (anchor == nullptr) anchor = s.find_live(s.rename_map.resolve(before));
    if (anchor == nullptr) {
      throw Error(ErrorCode::kUnknownPattern,
                  "no live pattern named " + quoted(before));
    }
    auto at = s.patterns.begin() + (anchor - s.patterns.data());
    s.patterns.insert(at, std::move(item));
  }
  reconcile(s);
  audit(s, "move", moved_name,
        before.empty() ? std::string("to end") : "before " + std::string(before),
        clock);
  return s;
}

std::vector<Diagnostic> reconcile(Session& s) {
  std::vector<Diagnostic> out;
  auto note = [&](std::string msg) {
    out.push_back({Severity::kWarning, 0, 0, std::move(msg)});
  };

  // Matrix follows registry order and live-pattern order.
  {
    CrossReferenceMatrix next;
    for (const auto& a : s.registry) next.rows.push_back(a.id);
    next.cols = s.live_pattern_names();
    next.cells.assign(next.rows.size(),
                      std::vector<bool>(next.cols.size(), false));
    next.notes.assign(next.rows.size(),
                      std::vector<std::string>(next.cols.size()));
    const auto& m = s.matrix;
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
      auto nr = next.row_of(m.rows[r]);
      for (std::size_t c = 0; c < m.cols.size(); ++c) {
        bool mark = r < m.cells.size() && c < m.cells[r].size() && m.cells[r][c];
        if (!mark) continue;
        auto nc = next.col_of(m.cols[c]);
        if (!nc) nc = next.col_of(s.rename_map.resolve(m.cols[c]));
        if (!nr || !nc) {
          note("matrix mark " + quoted(m.rows[r]) + " x " + quoted(m.cols[c]) +
               " no longer resolves; removed");
          continue;
        }
        next.cells[*nr][*nc] = true;
        if (r < m.notes.size() && c < m.notes[r].size()) {
          next.notes[*nr][*nc] = m.notes[r][c];
        }
      }
    }
    s.matrix = std::move(next);
  }

  std::set<std::string> ku_ids;
  for (const auto& k : s.known_uses) ku_ids.insert(k.id);

  for (auto& p : s.patterns) {
    if (!p.live()) continue;
    std::erase_if(p.affordance_refs, [&](const std::string& id) {
      if (s.find_affordance(id)) return false;
      note("affordance ref " + quoted(id) + " of " + quoted(p.name) +
           " not in registry; removed");
      return true;
    });
    std::erase_if(p.known_uses, [&](const KnownUseRef& r) {
      if (ku_ids.count(r.known_use_id)) return false;
      note("known use " + quoted(r.known_use_id) + " of " + quoted(p.name) +
           " not in session; removed");
      return true;
    });
    std::erase_if(p.resulting_context, [&](ContextEdge& e) {
      if (const PatternDraft* t = s.find_live(e.target_pattern_name)) {
        e.target_pattern_name = t->name;
        return false;
      }
      if (const PatternDraft* t = s.find_live(s.rename_map.resolve(e.target_pattern_name))) {
        e.target_pattern_name = t->name;
        return false;
      }
      note("edge " + quoted(p.name) + " -> " + quoted(e.target_pattern_name) +
           " dangles; removed");
      return true;
    });
  }

  for (auto& story : s.stories) {
    std::erase_if(story.entries, [&](StoryEntry& e) {
      const PatternDraft* t = s.find_live(e.pattern_name);
      if (!t) t = s.find_live(s.rename_map.resolve(e.pattern_name));
      if (t) {
        e.pattern_name = t->name;
        return false;
      }
      note("story entry " + quoted(e.pattern_name) + " in " +
           quoted(story.known_use_id) + " dangles; removed");
      return true;
    });
  }
  std::erase_if(s.stories, [&](const PatternStory& st) {
    if (ku_ids.count(st.known_use_id) && !st.entries.empty()) return false;
    note("story " + quoted(st.known_use_id) + " removed");
    return true;
  });
  return out;
}

void check_invariants(const Session& s) {
  auto fail = [](std::string msg) {
    throw Error(ErrorCode::kInvariantViolation, std::move(msg));
  };

  std::set<std::string> ku_ids;
  for (const auto& k : s.known_uses) {
    if (k.id.empty()) fail("known use with empty id");
    if (!ku_ids.insert(k.id).second) fail("duplicate known use id " + quoted(k.id));
    if (text::trim(k.narrative).empty()) {
      fail("known use " + quoted(k.id) + " has an empty narrative");
    }
  }

  std::set<std::string> aff_ids;
  std::set<std::pair<Component, std::string>> aff_names;
  for (const auto& a : s.registry) {
    if (!aff_ids.insert(a.id).second) fail("duplicate affordance id " + quoted(a.id));
    if (!aff_names.insert({a.component, normalize_name(a.name)}).second) {
      fail("duplicate affordance name " + quoted(a.name));
    }
  }

  std::set<std::string> solution_names;
  for (const auto& sol : s.solutions) {
    if (!solution_names.insert(normalize_name(sol.name)).second) {
      fail("duplicate solution name " + quoted(sol.name));
    }
  }
  for (const auto& pr : s.problems) {
    if (!pr.solution_name.empty() &&
        !solution_names.count(normalize_name(pr.solution_name))) {
      fail("problem names unknown solution " + quoted(pr.solution_name));
    }
  }

  std::set<std::string> live;
  for (const auto& p : s.patterns) {
    if (text::trim(p.name).empty()) fail("pattern with empty name");
    if (!p.live()) continue;
    if (!live.insert(normalize_name(p.name)).second) {
      fail("duplicate live pattern name " + quoted(p.name));
    }
    if (p.status != PatternStatus::kDraft &&
        (p.problem.empty() || p.solution_statement.empty())) {
      fail("pattern " + quoted(p.name) + " lacks a problem or solution statement");
    }
  }
  for (const auto& p : s.patterns) {
    if (!p.live()) continue;
    for (const auto& id : p.affordance_refs) {
      if (!aff_ids.count(id)) {
        fail("pattern " + quoted(p.name) + " cites unknown affordance " + quoted(id));
      }
    }
    for (const auto& r : p.known_uses) {
      if (!ku_ids.count(r.known_use_id)) {
        fail("pattern " + quoted(p.name) + " cites unknown known use " +
             quoted(r.known_use_id));
      }
    }
    for (const auto& e : p.resulting_context) {
      if (!live.count(normalize_name(e.target_pattern_name))) {
        fail("pattern " + quoted(p.name) + " has an edge to " +
             quoted(e.target_pattern_name) + " which is not a live pattern");
      }
    }
  }

  const auto& m = s.matrix;
  std::vector<std::string> want_rows;
  for (const auto& a : s.registry) want_rows.push_back(a.id);
  if (m.rows != want_rows) fail("matrix rows do not follow the registry");
  if (m.cols != s.live_pattern_names()) {
    fail("matrix columns do not follow the live patterns");
  }
  if (m.cells.size() != m.rows.size() || m.notes.size() != m.rows.size()) {
    fail("matrix grid has the wrong number of rows");
  }
  for (std::size_t r = 0; r < m.cells.size(); ++r) {
    if (m.cells[r].size() != m.cols.size() || m.notes[r].size() != m.cols.size()) {
      fail("matrix row " + quoted(m.rows[r]) + " has the wrong width");
    }
  }

  std::set<std::string> story_ids;
  for (const auto& st : s.stories) {
    if (!ku_ids.count(st.known_use_id)) {
      fail("story for unknown known use " + quoted(st.known_use_id));
    }
    if (!story_ids.insert(st.known_use_id).second) {
      fail("two stories for " + quoted(st.known_use_id));
    }
    if (st.entries.empty()) fail("story " + quoted(st.known_use_id) + " is empty");
    for (const auto& e : st.entries) {
      if (!live.count(normalize_name(e.pattern_name))) {
        fail("story " + quoted(st.known_use_id) + " names " +
             quoted(e.pattern_name) + " which is not a live pattern");
      }
    }
  }

  for (const auto& e : s.rename_map.entries) {
    std::set<std::string> seen{normalize_name(e.old_name)};
    std::string cur = e.new_name;
    for (;;) {
      if (!seen.insert(normalize_name(cur)).second) {
        fail("rename map has a cycle through " + quoted(e.old_name));
      }
      const RenameEntry* next = nullptr;
      for (auto it = s.rename_map.entries.rbegin();
           it != s.rename_map.entries.rend(); ++it) {
        if (same_name(it->old_name, cur)) {
          next = &*it;
          break;
        }
      }
      if (!next) break;
      cur = next->new_name;
    }
  }

  bool gap = false;
  for (StepId step : kAllSteps) {
    bool approved = s.step(step).status == StepStatus::kApproved;
    if (approved && gap) {
      fail("step " + std::string(to_string(step)) +
           " is approved after an unapproved step");
    }
    if (!approved) {
      if (!gap && s.cursor != step) fail("cursor is not at the first unapproved step");
      gap = true;
    }
  }
  if (!gap && s.cursor != StepId::kConsolidate) fail("cursor out of range");

  for (const auto& msg : s.transcript.messages) {
    if (msg.content.empty()) fail("transcript holds an empty message");
  }
}

ValidationReport validate_language(const Session& s) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string subject, std::string message) {
    report.issues.push_back(
        {std::move(kind), std::move(subject), std::move(message)});
  };

  std::vector<std::string> affordance_names;
  for (const auto& a : s.registry) affordance_names.push_back(a.name);

  for (const auto& p : s.patterns) {
    if (!p.live()) continue;
    if (p.problem.empty()) add("empty_field", p.name, "problem statement is empty");
    if (p.solution_statement.empty()) {
      add("empty_field", p.name, "solution statement is empty");
    }
    if (p.known_uses.empty()) {
      add("missing_known_uses", p.name, "pattern cites no known use");
    }
    for (const auto& r : p.known_uses) {
      if (!s.find_known_use(r.known_use_id)) {
        add("unresolved_reference", p.name,
            "known use " + quoted(r.known_use_id) + " does not exist");
      }
    }
    for (const auto& id : p.affordance_refs) {
      if (!s.find_affordance(id)) {
        add("unresolved_reference", p.name,
            "affordance " + quoted(id) + " is not in the registry");
      }
    }
    for (const auto& e : p.resulting_context) {
      if (!s.find_live(e.target_pattern_name)) {
        add("unresolved_reference", p.name,
            "resulting context names " + quoted(e.target_pattern_name) +
                " which is not a live pattern");
      }
    }
    for (const auto& cited : cited_affordances(p.solution_detail)) {
      NameMatch m = resolve_name(cited, affordance_names);
      if (m.kind != MatchKind::kExact) {
        add("uncited_affordance", p.name,
            "solution detail cites " + quoted(cited) +
                " which is not in the registry");
        continue;
      }
      const Affordance& a = s.registry[m.index];
      if (std::find(p.affordance_refs.begin(), p.affordance_refs.end(), a.id) ==
          p.affordance_refs.end()) {
        add("uncited_affordance", p.name,
            "solution detail cites " + quoted(cited) +
                " but the pattern does not reference it");
      } else if (!s.matrix.marked(a.id, p.name)) {
        add("uncited_affordance", p.name,
            "solution detail cites " + quoted(cited) +
                " but the matrix does not mark it");
      }
    }
  }

  const auto& m = s.matrix;
  std::vector<std::string> live = s.live_pattern_names();
  if (m.rows.size() != s.registry.size() || m.cells.size() != m.rows.size()) {
    add("matrix_dimension", "matrix",
        std::to_string(m.rows.size()) + " rows for " +
            std::to_string(s.registry.size()) + " affordances");
  }
  if (m.cols.size() != live.size()) {
    add("matrix_dimension", "matrix",
        std::to_string(m.cols.size()) + " columns for " +
            std::to_string(live.size()) + " live patterns");
  }
  for (const auto& row : m.cells) {
    if (row.size() != m.cols.size()) {
      add("matrix_dimension", "matrix", "ragged matrix row");
      break;
    }
  }
  for (const auto& id : m.rows) {
    if (!s.find_affordance(id)) {
      add("unresolved_reference", id, "matrix row is not in the registry");
    }
  }
  for (const auto& c : m.cols) {
    if (!s.find_live(c)) {
      add("unresolved_reference", c, "matrix column is not a live pattern");
    }
  }

  for (const auto& st : s.stories) {
    if (!s.find_known_use(st.known_use_id)) {
      add("unresolved_reference", st.known_use_id, "story for unknown example");
    }
    for (const auto& e : st.entries) {
      const PatternDraft* p = s.find_live(e.pattern_name);
      if (!p) {
        add("unresolved_reference", st.known_use_id,
            "story names " + quoted(e.pattern_name) + " which is not a live pattern");
      } else if (p->status != PatternStatus::kConsolidated) {
        add("unconsolidated_story_entry", st.known_use_id,
            "story names " + quoted(e.pattern_name) + " which is not consolidated");
      }
    }
  }
  return report;
}

}  // namespace patternmine
