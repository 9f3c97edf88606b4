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

#include "patternmine/render.h"

#include <algorithm>
#include <sstream>

#include "patternmine/curation.h"
#include "patternmine/error.h"
#include "patternmine/names.h"
#include "patternmine/text.h"

namespace patternmine {
namespace {

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

std::string citations_to_italics(std::string_view detail) {
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t open = detail.find("[[", pos);
    std::size_t close =
        open == std::string_view::npos ? open : detail.find("]]", open + 2);
    if (close == std::string_view::npos) {
      out.append(detail.substr(pos));
      return out;
    }
    out.append(detail.substr(pos, open - pos));
    out += '*';
    out.append(text::trim(detail.substr(open + 2, close - open - 2)));
    out += '*';
    pos = close + 2;
  }
}

std::string bold(std::string_view s) {
  return "**" + text::replace_all(std::string(text::trim(s)), "**", "") + "**";
}

// Italicizes the first plain mention of `target` in `rationale`, or appends
// a pointer when the rationale never names it.
std::string link_target(std::string_view rationale, std::string_view target) {
  std::string r(text::trim(rationale));
  std::string lower = text::to_lower(r);
  std::string needle = text::to_lower(target);
  std::size_t pos = 0;
  while ((pos = lower.find(needle, pos)) != std::string::npos) {
    bool emphasized = pos > 0 && r[pos - 1] == '*';
    if (!emphasized) {
      return r.substr(0, pos) + "*" + r.substr(pos, needle.size()) + "*" +
             r.substr(pos + needle.size());
    }
    pos += needle.size();
  }
  if (r.find("*" + std::string(target) + "*") != std::string::npos) return r;
  if (r.empty()) return "See *" + std::string(target) + "*.";
  std::string pointer = " (see *" + std::string(target) + "*)";
  if (r.back() == '.' || r.back() == '!' || r.back() == '?') {
    return r.substr(0, r.size() - 1) + pointer + r.back();
  }
  return r + pointer;
}

std::string known_use_paragraph(const PatternDraft& p) {
  std::vector<std::string> notes;
  for (const auto& ref : p.known_uses) {
    std::string n(text::trim(ref.note));
    if (n.empty()) continue;
    if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);
  }
  return text::join(notes, " ");
}

std::string escape_cell(std::string_view s) {
  return text::replace_all(text::collapse_ws(s), "|", "\\|");
}

std::string finish(std::vector<std::string> paragraphs) {
  std::erase_if(paragraphs, [](const std::string& p) { return text::trim(p).empty(); });
  return text::join(paragraphs, "\n\n") + "\n";
}

// Spans delimited by single '*' (bold "**" is skipped).
std::vector<std::string> italic_spans(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line.compare(i, 2, "**") == 0) {
      i += 2;
      continue;
    }
    if (line[i] != '*') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < line.size()) {
      if (line[j] == '*' && line.compare(j, 2, "**") != 0) break;
      if (line.compare(j, 2, "**") == 0) {
        j += 2;
        continue;
      }
      ++j;
    }
    if (j >= line.size()) break;
    out.emplace_back(line.substr(i + 1, j - i - 1));
    i = j + 1;
  }
  return out;
}

bool is_bold_paragraph(std::string_view p) {
  std::string_view t = text::trim(p);
  return t.size() > 4 && t.substr(0, 2) == "**" && t.substr(t.size() - 2) == "**";
}

struct Block {
  std::string name;
  int first_line = 0;
  std::vector<std::pair<int, std::string>> lines;
};

void lint_block(const Block& b, const LintContext& ctx, std::vector<Diagnostic>& out) {
  auto err = [&](int line, std::string msg) {
    out.push_back({Severity::kError, line, line, quoted(b.name) + ": " + std::move(msg)});
  };
  auto warn = [&](int line, std::string msg) {
    out.push_back({Severity::kWarning, line, line, quoted(b.name) + ": " + std::move(msg)});
  };

  std::vector<std::size_t> seps;
  for (std::size_t i = 0; i < b.lines.size(); ++i) {
    if (text::trim(b.lines[i].second) == kStarSeparator) seps.push_back(i);
  }
  if (seps.size() != 2) {
    err(b.first_line, "separator count is " + std::to_string(seps.size()) + ", expected 2");
  }
  std::size_t sol_begin = seps.empty() ? 0 : seps[0] + 1;
  std::size_t sol_end = seps.size() >= 2 ? seps[1] : b.lines.size();

  // paragraphs of the problem/solution region
  std::vector<std::pair<int, std::string>> paras;
  for (std::size_t i = sol_begin; i < sol_end; ++i) {
    const auto& [num, line] = b.lines[i];
    if (text::trim(line).empty()) continue;
    if (i > sol_begin && !text::trim(b.lines[i - 1].second).empty() && !paras.empty()) {
      paras.back().second += " " + std::string(text::trim(line));
    } else {
      paras.push_back({num, std::string(text::trim(line))});
    }
  }
  auto therefore = std::find_if(paras.begin(), paras.end(), [](const auto& p) {
    return p.second == "Therefore,";
  });
  if (paras.empty() || !is_bold_paragraph(paras.front().second)) {
    err(paras.empty() ? b.first_line : paras.front().first,
        "problem statement is not bold");
  }
  if (therefore == paras.end()) {
    err(b.first_line, "missing \"Therefore,\"");
  } else if (therefore + 1 == paras.end() || !is_bold_paragraph((therefore + 1)->second)) {
    err(therefore->first, "solution statement is not bold");
  }

  if (therefore != paras.end()) {
    for (auto it = therefore + 1; it != paras.end(); ++it) {
      for (const auto& span : italic_spans(it->second)) {
        std::string key = normalize_name(span);
        auto a = std::find_if(ctx.registry.begin(), ctx.registry.end(),
                              [&](const Affordance& x) { return normalize_name(x.name) == key; });
        if (a == ctx.registry.end()) {
          err(it->first, "affordance citation " + quoted(span) + " is not housed in the registry");
        } else if (ctx.matrix != nullptr && !ctx.matrix->marked(a->id, b.name)) {
          err(it->first, "affordance citation " + quoted(span) +
                             " is not marked for this pattern in the matrix");
        }
      }
    }
  }

  if (seps.size() >= 2 && !ctx.pattern_names.empty()) {
    for (std::size_t i = seps[1] + 1; i < b.lines.size(); ++i) {
      for (const auto& span : italic_spans(b.lines[i].second)) {
        NameMatch m = resolve_name(span, ctx.pattern_names);
        if (!m.resolved()) {
          warn(b.lines[i].first, "italic " + quoted(span) + " is not a known pattern name");
        }
      }
    }
  }
}

}  // namespace

std::string_view to_string(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::kPattern: return "pattern";
    case DocumentKind::kLanguage: return "language";
    case DocumentKind::kMatrix: return "matrix";
    case DocumentKind::kStory: return "story";
    case DocumentKind::kLog: return "log";
    case DocumentKind::kShortform: return "shortform";
  }
  return "?";
}

DocumentKind parse_document_kind(std::string_view text) {
  for (DocumentKind k : {DocumentKind::kPattern, DocumentKind::kLanguage,
                         DocumentKind::kMatrix, DocumentKind::kStory,
                         DocumentKind::kLog, DocumentKind::kShortform}) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown document kind '" + std::string(text) + "'");
}

RenderedDocument render_pattern_alexandrian(const PatternDraft& p, int heading_level) {
  if (text::trim(p.problem).empty() || text::trim(p.solution_statement).empty()) {
    throw Error(ErrorCode::kIncompletePattern,
                quoted(p.name) + " needs both a problem and a solution statement");
  }
  std::vector<std::string> paras;
  paras.push_back(std::string(std::max(1, heading_level), '#') + " " + p.name);
  paras.push_back(std::string(text::trim(p.context)));
  paras.push_back(std::string(kStarSeparator));
  paras.push_back(bold(p.problem));
  paras.push_back(std::string(text::trim(p.forces)));
  paras.push_back("Therefore,");
  paras.push_back(bold(p.solution_statement));
  paras.push_back(citations_to_italics(text::trim(p.solution_detail)));
  paras.push_back(std::string(kStarSeparator));
  paras.push_back(known_use_paragraph(p));
  for (const auto& e : p.resulting_context) {
    paras.push_back(link_target(e.rationale, e.target_pattern_name));
  }
  return {DocumentKind::kPattern, finish(std::move(paras))};
}

std::string render_summary_table(const Session& s) {
  std::string out = "| Pattern | Description |\n| --- | --- |\n";
  for (const auto& p : s.patterns) {
    if (!p.live()) continue;
    out += "| " + escape_cell(p.name) + " | " + escape_cell(p.solution_statement) + " |\n";
  }
  return out;
}

RenderedDocument render_language(const Session& s) {
  bool any = std::any_of(s.patterns.begin(), s.patterns.end(), [](const PatternDraft& p) {
    return p.status == PatternStatus::kConsolidated;
  });
  if (!any) {
    throw Error(ErrorCode::kNoConsolidatedPatterns,
                "the language needs at least one consolidated pattern");
  }
  std::vector<std::string> live = s.live_pattern_names();
  std::vector<std::string> examples;
  for (const auto& k : s.known_uses) examples.push_back(k.name);

  std::ostringstream intro;
  intro << "This pattern language contains " << live.size()
        << (live.size() == 1 ? " pattern" : " patterns") << " mined from "
        << s.known_uses.size() << (s.known_uses.size() == 1 ? " example" : " examples");
  if (!examples.empty()) intro << ": " << text::join(examples, "; ");
  intro << ".";

  std::vector<std::string> paras;
  paras.push_back("# " + s.title);
  paras.push_back(intro.str());
  paras.push_back("## Summary");
  std::string table = render_summary_table(s);
  table.pop_back();
  paras.push_back(table);
  paras.push_back("## Patterns");
  for (const auto& p : s.patterns) {
    if (!p.live()) continue;
    std::string body = render_pattern_alexandrian(p, 3).body;
    body.pop_back();
    paras.push_back(body);
  }
  return {DocumentKind::kLanguage, finish(std::move(paras))};
}

RenderedDocument render_matrix(const CrossReferenceMatrix& m,
                               const std::vector<Affordance>& registry) {
  std::string out = "# Affordances by pattern\n\n| Component | Affordance |";
  for (const auto& c : m.cols) out += " " + escape_cell(c) + " |";
  out += "\n| --- | --- |";
  for (std::size_t i = 0; i < m.cols.size(); ++i) out += " :-: |";
  out += "\n";

  std::vector<std::string> notes;
  for (Component comp : {Component::kLlm, Component::kDatabase,
                         Component::kExternalTool, Component::kOther}) {
    bool first = true;
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
      const Affordance* a = nullptr;
      for (const auto& x : registry) {
        if (x.id == m.rows[r]) a = &x;
      }
      Component row_comp = a ? a->component : Component::kOther;
      if (row_comp != comp) continue;
      std::string name = a ? a->name : m.rows[r];
      out += "| " + std::string(first ? display_name(comp) : "") + " | " + escape_cell(name) + " |";
      first = false;
      for (std::size_t c = 0; c < m.cols.size(); ++c) {
        bool mark = r < m.cells.size() && c < m.cells[r].size() && m.cells[r][c];
        out += mark ? " X |" : "  |";
        if (mark && r < m.notes.size() && c < m.notes[r].size() &&
            !text::trim(m.notes[r][c]).empty()) {
          notes.push_back("- *" + name + "* in " + m.cols[c] + ": " +
                          text::collapse_ws(m.notes[r][c]));
        }
      }
      out += "\n";
    }
  }
  if (!notes.empty()) out += "\n## Notes\n\n" + text::join(notes, "\n") + "\n";
  return {DocumentKind::kMatrix, out};
}

RenderedDocument render_story(const PatternStory& story, const Session& s) {
  const KnownUse* ku = s.find_known_use(story.known_use_id);
  if (ku == nullptr) {
    throw Error(ErrorCode::kUnknownKnownUse, "no example with id " + quoted(story.known_use_id));
  }
  std::vector<std::string> paras;
  paras.push_back("# Pattern story: " + ku->name);
  paras.push_back(text::collapse_ws(ku->narrative));
  std::string list;
  int n = 0;
  for (const auto& e : story.entries) {
    list += std::to_string(++n) + ". **" + e.pattern_name + "**: " +
            text::collapse_ws(e.narrative) + "\n";
  }
  if (!list.empty()) list.pop_back();
  paras.push_back(list);
  return {DocumentKind::kStory, finish(std::move(paras))};
}

RenderedDocument render_shortform(const PatternDraft& p) {
  std::vector<std::string> notes;
  for (const auto& ref : p.known_uses) {
    if (notes.empty() || notes.back() != ref.note) notes.push_back(ref.note);
  }
  std::string out = p.name + "\n";
  auto line = [&](std::string_view label, std::string_view body) {
    out += std::string(label) + ":";
    if (!body.empty()) out += " " + std::string(body);
    out += "\n";
  };
  line("Context", p.context);
  line("Problem", p.problem);
  line("Forces", p.forces);
  line("Solution", p.solution_statement);
  line("Known Uses", text::join(notes, " "));
  return {DocumentKind::kShortform, out};
}

RenderedDocument export_log(const Transcript& t) {
  if (t.empty()) throw Error(ErrorCode::kEmptyTranscript, "the transcript has no messages");
  std::ostringstream out;
  out << "# Conversation log\n\n";
  out << "Model: " << (t.model_id.empty() ? "unknown" : t.model_id)
      << ", temperature " << t.params.temperature << ", max output tokens "
      << t.params.max_output_tokens << "\n";
  int n = 0;
  for (const auto& m : t.messages) {
    std::string role(to_string(m.role));
    role[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(role[0])));
    out << "\n## " << ++n << ". " << role;
    if (m.step_tag) {
      out << " (" << to_string(*m.step_tag);
      if (!m.part.empty()) out << "/" << m.part;
      out << ")";
    } else if (!m.part.empty()) {
      out << " (" << m.part << ")";
    }
    out << "\n\n~~~~text\n" << text::normalize_block(m.content) << "\n~~~~\n";
  }
  return {DocumentKind::kLog, out.str()};
}

LintContext lint_context(const Session& s) {
  LintContext ctx;
  ctx.registry = s.registry;
  ctx.matrix = &s.matrix;
  for (const auto& p : s.patterns) ctx.pattern_names.push_back(p.name);
  for (const auto& e : s.rename_map.entries) ctx.pattern_names.push_back(e.old_name);
  return ctx;
}

std::vector<Diagnostic> lint_alexandrian(const RenderedDocument& doc, const LintContext& ctx) {
  std::vector<Diagnostic> out;
  if (doc.kind != DocumentKind::kPattern && doc.kind != DocumentKind::kLanguage) {
    out.push_back({Severity::kError, 0, 0,
                   "lint applies to pattern and language documents, not " +
                       std::string(to_string(doc.kind))});
    return out;
  }
  auto lines = text::split_lines(doc.body);
  std::size_t start = 0;
  if (doc.kind == DocumentKind::kLanguage) {
    auto it = std::find(lines.begin(), lines.end(), "## Patterns");
    if (it == lines.end()) {
      out.push_back({Severity::kError, 0, 0, "language document has no \"## Patterns\" section"});
      return out;
    }
    start = static_cast<std::size_t>(it - lines.begin()) + 1;
  }
  std::vector<Block> blocks;
  for (std::size_t i = start; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    bool heading = l.rfind("#", 0) == 0;
    if (heading) {
      std::size_t hashes = l.find_first_not_of('#');
      bool is_pattern_heading = hashes != std::string::npos &&
                                (doc.kind == DocumentKind::kLanguage ? hashes == 3 : true) &&
                                l.size() > hashes && l[hashes] == ' ';
      if (is_pattern_heading && (doc.kind == DocumentKind::kLanguage || blocks.empty())) {
        blocks.push_back({std::string(text::trim(l.substr(hashes))), static_cast<int>(i + 1), {}});
        continue;
      }
    }
    if (!blocks.empty()) blocks.back().lines.push_back({static_cast<int>(i + 1), l});
  }
  if (blocks.empty()) {
    out.push_back({Severity::kError, 0, 0, "document contains no pattern"});
    return out;
  }
  for (const auto& b : blocks) lint_block(b, ctx, out);
  return out;
}

RenderedDocument render_document(const Session& s, DocumentKind kind, std::string_view subject) {
  auto need_pattern = [&]() -> const PatternDraft& {
    const PatternDraft* p = s.find_live(subject);
    if (!p) p = s.find_live(s.rename_map.resolve(subject));
    if (!p) throw Error(ErrorCode::kUnknownPattern, "no live pattern named " + quoted(subject));
    return *p;
  };
  switch (kind) {
    case DocumentKind::kPattern: return render_pattern_alexandrian(need_pattern());
    case DocumentKind::kShortform: return render_shortform(need_pattern());
    case DocumentKind::kLanguage: return render_language(s);
    case DocumentKind::kMatrix: return render_matrix(s.matrix, s.registry);
    case DocumentKind::kLog: return export_log(s.transcript);
    case DocumentKind::kStory: {
      for (const auto& st : s.stories) {
        if (st.known_use_id == subject) return render_story(st, s);
      }
      if (!s.find_known_use(subject)) {
        throw Error(ErrorCode::kUnknownKnownUse, "no example with id " + quoted(subject));
      }
      throw Error(ErrorCode::kInvalidArgument, "no story generated for " + quoted(subject));
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown document kind");
}

}  // namespace patternmine
