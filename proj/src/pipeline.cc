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

#include "patternmine/pipeline.h"

#include <set>
#include <utility>

#include "patternmine/curation.h"
#include "patternmine/error.h"
#include "patternmine/names.h"
#include "patternmine/parser.h"
#include "patternmine/text.h"

namespace patternmine {
namespace {

std::string step_name(StepId step) { return std::string(to_string(step)); }

void audit(Session& s, std::string action, std::string subject, std::string detail,
           const Clock& clock) {
  s.audit.push_back({std::move(action), std::move(subject), std::move(detail), clock()});
}

void warn(std::vector<Diagnostic>& out, std::string msg) {
  out.push_back({Severity::kWarning, 0, 0, std::move(msg)});
}

bool is_parse_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoSolutionsFound:
    case ErrorCode::kNoProblemsFound:
    case ErrorCode::kNoPatternsFound:
    case ErrorCode::kNoAffordancesFound:
    case ErrorCode::kEmptyMatrix:
    case ErrorCode::kNoStoryEntries:
      return true;
    default:
      return false;
  }
}

void sync_cursor(Session& s) {
  auto next = first_unapproved(s);
  s.cursor = next.value_or(StepId::kConsolidate);
  s.complete = !next.has_value();
}

// Every later step that produced something before is now out of date.
void invalidate_after(Session& s, StepId step) {
  for (StepId later : kAllSteps) {
    if (later <= step) continue;
    StepRecord& r = s.step(later);
    if (r.status != StepStatus::kPending || r.runs > 0) r.status = StepStatus::kStale;
  }
}

void require_prior_approved(const Session& s, StepId step) {
  for (StepId earlier : kAllSteps) {
    if (earlier >= step) break;
    if (s.step(earlier).status != StepStatus::kApproved) {
      throw Error(ErrorCode::kOutOfOrder, step_name(step) + " needs " + step_name(earlier) +
                                              " approved first");
    }
  }
}

void require_consolidate_active(const Session& s, std::string_view what) {
  StepStatus st = s.step(StepId::kConsolidate).status;
  if (st != StepStatus::kAwaitingReview && st != StepStatus::kApproved) {
    throw Error(ErrorCode::kOutOfOrder,
                std::string(what) + " needs the consolidate step to have run");
  }
}

void require_engine(const EngineContext& ctx) {
  if (!ctx.gateway || !ctx.prompts) {
    throw Error(ErrorCode::kConfigError, "engine has no gateway or prompt kit");
  }
}

Provenance ai_provenance(const Session& s, const Clock& clock) {
  Provenance p;
  p.origin = Origin::kAi;
  if (!s.transcript.model_id.empty()) p.model_id = s.transcript.model_id;
  p.edited_at = clock();
  return p;
}

template <typename T>
void append(std::vector<T>& to, const std::vector<T>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

// What one step produced before it is folded into the session.
struct StepOutput {
  std::string raw;
  std::vector<Diagnostic> diagnostics;
};

StepOutput do_extract_solutions(Session& s, EngineContext& ctx) {
  StepId step = StepId::kExtractSolutions;
  auto msg = ctx.gateway->complete(s.transcript, ctx.prompts->render_prompt(step, s), step);
  auto parsed = parser::parse_solutions(msg.content);
  StepOutput out{msg.content, parsed.diagnostics};
  std::set<std::string> seen;
  s.solutions.clear();
  for (auto& sol : parsed.value) {
    if (!seen.insert(normalize_name(sol.name)).second) {
      warn(out.diagnostics, "duplicate solution '" + sol.name + "' ignored");
      continue;
    }
    sol.provenance = ai_provenance(s, ctx.clock);
    s.solutions.push_back(std::move(sol));
  }
  return out;
}

StepOutput do_define_problems(Session& s, EngineContext& ctx) {
  StepId step = StepId::kDefineProblems;
  auto msg = ctx.gateway->complete(s.transcript, ctx.prompts->render_prompt(step, s), step);
  auto parsed = parser::parse_problems(msg.content, s.solutions);
  s.problems = std::move(parsed.value);
  return {msg.content, parsed.diagnostics};
}

StepOutput do_distill_patterns(Session& s, EngineContext& ctx) {
  StepId step = StepId::kDistillPatterns;
  auto msg = ctx.gateway->complete(s.transcript, ctx.prompts->render_prompt(step, s), step);
  auto parsed = parser::parse_pattern_shortforms(msg.content, s.known_uses);
  StepOutput out{msg.content, parsed.diagnostics};
  Provenance prov = ai_provenance(s, ctx.clock);
  std::set<std::string> seen;
  s.patterns.clear();
  for (auto& p : parsed.value) {
    if (!seen.insert(normalize_name(p.name)).second) {
      warn(out.diagnostics, "duplicate pattern '" + p.name + "' ignored");
      continue;
    }
    p.status = PatternStatus::kDraft;
    for (std::string_view field : {"name", "context", "problem", "forces",
                                   "solution_statement", "known_uses"}) {
      p.provenance[std::string(field)] = prov;
    }
    if (p.known_uses.empty()) {
      warn(out.diagnostics, "pattern '" + p.name + "' cites no known example");
    }
    s.patterns.push_back(std::move(p));
  }
  return out;
}

StepOutput do_identify_affordances(Session& s, EngineContext& ctx) {
  StepId step = StepId::kIdentifyAffordances;
  auto msg = ctx.gateway->complete(s.transcript, ctx.prompts->render_prompt(step, s), step);
  auto parsed = parser::parse_affordances(msg.content);
  StepOutput out{msg.content, parsed.diagnostics};
  std::set<std::string> seen;
  s.registry.clear();
  for (auto& a : parsed.value) {
    if (!seen.insert(a.id).second) {
      warn(out.diagnostics, "duplicate affordance '" + a.name + "' ignored");
      continue;
    }
    s.registry.push_back(std::move(a));
  }
  return out;
}

// "LLMs can summarize." + "Content generation" -> "LLMs can summarize
// ([[Content generation]])."
std::string cite(std::string_view note, std::string_view affordance) {
  std::string n(text::trim(note));
  std::string tag = "[[" + std::string(affordance) + "]]";
  if (n.empty()) return "Uses " + tag + ".";
  char last = n.back();
  if (last == '.' || last == '!' || last == '?') n.pop_back();
  return n + " (" + tag + ").";
}

StepOutput do_relate_affordances(Session& s, EngineContext& ctx) {
  StepId step = StepId::kRelateAffordances;
  auto msg = ctx.gateway->complete(s.transcript, ctx.prompts->render_prompt(step, s), step);
  auto parsed = parser::parse_cross_references(msg.content, s.registry, s.patterns);
  StepOutput out{msg.content, parsed.diagnostics};
  s.matrix = std::move(parsed.value);
  Provenance prov = ai_provenance(s, ctx.clock);
  for (auto& p : s.patterns) {
    if (!p.live()) continue;
    auto col = s.matrix.col_of(p.name);
    p.affordance_refs.clear();
    std::vector<std::string> sentences;
    if (col) {
      for (std::size_t r = 0; r < s.matrix.rows.size(); ++r) {
        if (!s.matrix.cells[r][*col]) continue;
        const Affordance* a = s.find_affordance(s.matrix.rows[r]);
        if (!a) continue;
        p.affordance_refs.push_back(a->id);
        sentences.push_back(cite(s.matrix.notes[r][*col], a->name));
      }
    }
    // Only AI text is regenerated; a human-edited detail is left alone.
    auto it = p.provenance.find("solution_detail");
    bool machine_owned = it == p.provenance.end() || it->second.origin == Origin::kAi;
    if (machine_owned) {
      p.solution_detail = text::join(sentences, " ");
      p.provenance["solution_detail"] = prov;
    }
    if (p.affordance_refs.empty()) {
      warn(out.diagnostics, "pattern '" + p.name + "' uses no affordance");
    }
  }
  return out;
}

StepOutput do_refine(Session& s, EngineContext& ctx) {
  StepId step = StepId::kRefine;
  StepOutput out;
  auto ask = [&](std::string_view part) {
    auto msg = ctx.gateway->complete(
        s.transcript, ctx.prompts->render_prompt(step, s, part), step, part);
    if (!out.raw.empty()) out.raw += "\n\n";
    out.raw += "=== " + std::string(part) + " ===\n" + msg.content;
    return msg.content;
  };

  auto listed = parser::parse_pattern_list(ask("list_patterns"), s.patterns);
  append(out.diagnostics, listed.diagnostics);

  auto missing =
      parser::parse_missing_patterns(ask("missing_patterns"), s.patterns, s.rename_map);
  append(out.diagnostics, missing.diagnostics);
  s.missing_suggestions = std::move(missing.value);

  auto edges =
      parser::parse_resulting_contexts(ask("resulting_context"), s.patterns, s.rename_map);
  append(out.diagnostics, edges.diagnostics);

  Provenance prov = ai_provenance(s, ctx.clock);
  for (auto& p : s.patterns) {
    if (!p.live()) continue;
    bool mentioned = false;
    std::vector<ContextEdge> next;
    for (const auto& e : edges.value) {
      if (normalize_name(e.source) != normalize_name(p.name)) continue;
      mentioned = true;
      if (!e.target.empty()) next.push_back({e.target, e.rationale});
    }
    if (mentioned) {
      p.resulting_context = std::move(next);
      p.no_successor = p.resulting_context.empty();
      p.provenance["resulting_context"] = prov;
    } else if (p.resulting_context.empty()) {
      p.no_successor = true;
      warn(out.diagnostics, "no resulting context given for '" + p.name +
                                "'; marked as having no successor");
    }
    if (p.problem.empty() || p.solution_statement.empty()) {
      warn(out.diagnostics, "pattern '" + p.name +
                                "' lacks a problem or solution statement and stays a draft");
    } else if (p.status == PatternStatus::kDraft) {
      p.status = PatternStatus::kRefined;
    }
  }
  return out;
}

parser::ParseResult<PatternStory> ask_story(Session& s, const KnownUse& k, EngineContext& ctx) {
  StepId step = StepId::kConsolidate;
  auto msg = ctx.gateway->complete(
      s.transcript, ctx.prompts->render_prompt(step, s, "story", story_bindings(k)), step,
      "story");
  return parser::parse_pattern_story(msg.content, k, s.patterns, s.rename_map);
}

void put_story(Session& s, PatternStory story) {
  for (auto& existing : s.stories) {
    if (existing.known_use_id == story.known_use_id) {
      existing = std::move(story);
      return;
    }
  }
  s.stories.push_back(std::move(story));
}

StepOutput do_consolidate(Session& s, EngineContext& ctx) {
  StepOutput out;
  std::vector<PatternStory> stories;
  for (const auto& k : s.known_uses) {
    try {
      auto parsed = ask_story(s, k, ctx);
      append(out.diagnostics, parsed.diagnostics);
      stories.push_back(std::move(parsed.value));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoStoryEntries) throw;
      warn(out.diagnostics, "no story for '" + k.id + "': " + e.detail());
    }
    const auto& reply = s.transcript.messages.back().content;
    if (!out.raw.empty()) out.raw += "\n\n";
    out.raw += "=== story " + k.id + " ===\n" + reply;
  }
  if (stories.empty()) throw Error(ErrorCode::kNoStoryEntries, "no example yielded a story");

  for (auto& p : s.patterns) {
    if (!p.live()) continue;
    if (p.problem.empty() || p.solution_statement.empty()) {
      warn(out.diagnostics,
           "pattern '" + p.name + "' lacks a problem or solution statement; not consolidated");
      continue;
    }
    p.status = PatternStatus::kConsolidated;
  }
  s.stories.clear();
  for (auto& st : stories) put_story(s, std::move(st));
  return out;
}

StepOutput execute(Session& s, StepId step, EngineContext& ctx) {
  switch (step) {
    case StepId::kExtractSolutions: return do_extract_solutions(s, ctx);
    case StepId::kDefineProblems: return do_define_problems(s, ctx);
    case StepId::kDistillPatterns: return do_distill_patterns(s, ctx);
    case StepId::kIdentifyAffordances: return do_identify_affordances(s, ctx);
    case StepId::kRelateAffordances: return do_relate_affordances(s, ctx);
    case StepId::kRefine: return do_refine(s, ctx);
    case StepId::kConsolidate: return do_consolidate(s, ctx);
    case StepId::kIdentifyExamples: break;
  }
  throw Error(ErrorCode::kInvalidArgument, "identify_examples runs by ingesting examples");
}

}  // namespace

std::optional<StepId> first_unapproved(const Session& s) {
  for (StepId step : kAllSteps) {
    if (s.step(step).status != StepStatus::kApproved) return step;
  }
  return std::nullopt;
}

Session ingest_examples(Session s, std::vector<KnownUse> uses, const Clock& clock) {
  if (uses.empty()) throw Error(ErrorCode::kEmptyExampleSet, "at least one example is needed");
  std::set<std::string> ids;
  std::size_t n = 0;
  for (auto& k : uses) {
    ++n;
    k.name = std::string(text::trim(k.name));
    k.narrative = std::string(text::trim(k.narrative));
    if (k.narrative.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "example " + std::to_string(n) + " has an empty narrative");
    }
    if (k.name.empty()) k.name = "Example " + std::to_string(n);
    std::string base = k.id.empty() ? slugify(k.name) : k.id;
    if (base.empty()) base = "example-" + std::to_string(n);
    std::string id = base;
    for (int suffix = 2; !ids.insert(id).second; ++suffix) {
      id = base + "-" + std::to_string(suffix);
    }
    k.id = id;
  }

  s.known_uses = std::move(uses);
  StepRecord& r = s.step(StepId::kIdentifyExamples);
  r.status = StepStatus::kAwaitingReview;
  r.runs += 1;
  r.raw_response.clear();
  r.failure.clear();
  r.diagnostics.clear();
  if (s.known_uses.size() == 1) {
    warn(r.diagnostics, "only one example given; more examples may be required");
  }
  invalidate_after(s, StepId::kIdentifyExamples);
  append(r.diagnostics, reconcile(s));
  sync_cursor(s);
  audit(s, "ingest", "identify_examples", std::to_string(s.known_uses.size()) + " examples",
        clock);
  return s;
}

Session run_step(Session s, StepId step, EngineContext& ctx) {
  if (step == StepId::kIdentifyExamples) {
    throw Error(ErrorCode::kInvalidArgument, "identify_examples runs by ingesting examples");
  }
  require_prior_approved(s, step);
  require_engine(ctx);

  Session work = s;
  StepOutput out;
  try {
    out = execute(work, step, ctx);
  } catch (const Error& e) {
    if (!is_parse_failure(e.code())) throw;
    // Keep the exchange in the transcript but none of the artifacts.
    s.transcript = work.transcript;
    StepRecord& r = s.step(step);
    r.runs += 1;
    r.failure = e.what();
    if (!s.transcript.messages.empty()) r.raw_response = s.transcript.messages.back().content;
    audit(s, "run_failed", step_name(step), e.what(), ctx.clock);
    return s;
  }

  StepRecord& r = work.step(step);
  r.status = StepStatus::kAwaitingReview;
  r.runs += 1;
  r.raw_response = std::move(out.raw);
  r.diagnostics = std::move(out.diagnostics);
  r.failure.clear();
  invalidate_after(work, step);
  append(r.diagnostics, reconcile(work));
  sync_cursor(work);
  audit(work, "run", step_name(step), "run " + std::to_string(r.runs), ctx.clock);
  return work;
}

Session approve_step(Session s, StepId step, const Clock& clock) {
  if (s.step(step).status != StepStatus::kAwaitingReview) {
    throw Error(ErrorCode::kNotAwaitingReview,
                step_name(step) + " is " + std::string(to_string(s.step(step).status)));
  }
  require_prior_approved(s, step);
  s.step(step).status = StepStatus::kApproved;
  sync_cursor(s);
  audit(s, "approve", step_name(step), {}, clock);
  return s;
}

Session rerun_step(Session s, StepId step, EngineContext& ctx) {
  if (s.step(step).runs == 0) {
    throw Error(ErrorCode::kNeverRun, step_name(step) + " has never run");
  }
  if (step == StepId::kIdentifyExamples) {
    std::vector<KnownUse> uses = s.known_uses;
    return ingest_examples(std::move(s), std::move(uses), ctx.clock);
  }
  return run_step(std::move(s), step, ctx);
}

Session run_missing_pattern_check(Session s, EngineContext& ctx,
                                  std::vector<Diagnostic>* diagnostics) {
  if (s.step(StepId::kDistillPatterns).status != StepStatus::kApproved) {
    throw Error(ErrorCode::kOutOfOrder, "the missing-pattern check needs distill_patterns approved");
  }
  require_engine(ctx);
  StepId step = StepId::kRefine;
  auto msg = ctx.gateway->complete(
      s.transcript, ctx.prompts->render_prompt(step, s, "missing_patterns"), step,
      "missing_patterns");
  auto parsed = parser::parse_missing_patterns(msg.content, s.patterns, s.rename_map);
  s.missing_suggestions = std::move(parsed.value);
  if (diagnostics) *diagnostics = std::move(parsed.diagnostics);
  audit(s, "missing_check", "refine", std::to_string(s.missing_suggestions.size()) + " suggestions",
        ctx.clock);
  return s;
}

Session generate_story(Session s, std::string_view known_use_id, EngineContext& ctx,
                       std::vector<Diagnostic>* diagnostics) {
  const KnownUse* k = s.find_known_use(known_use_id);
  if (!k) {
    throw Error(ErrorCode::kUnknownKnownUse, "no example with id '" + std::string(known_use_id) + "'");
  }
  require_consolidate_active(s, "a pattern story");
  require_engine(ctx);
  KnownUse use = *k;
  auto parsed = ask_story(s, use, ctx);
  put_story(s, std::move(parsed.value));
  if (diagnostics) *diagnostics = std::move(parsed.diagnostics);
  audit(s, "story", use.id, {}, ctx.clock);
  return s;
}

Session summarize_process(Session s, EngineContext& ctx) {
  if (s.transcript.empty()) {
    throw Error(ErrorCode::kEmptyTranscript, "nothing to reflect on yet");
  }
  require_engine(ctx);
  auto msg = ctx.gateway->complete(s.transcript, ctx.prompts->render_reflection_prompt(),
                                   std::nullopt, "reflection");
  s.process_summary = msg.content;
  audit(s, "summarize", "reflection", {}, ctx.clock);
  return s;
}

Session expand_pattern(Session s, std::string_view pattern, EngineContext& ctx) {
  const PatternDraft* p = s.find_live(pattern);
  if (!p) p = s.find_live(s.rename_map.resolve(pattern));
  if (!p) {
    throw Error(ErrorCode::kUnknownPattern, "no live pattern named '" + std::string(pattern) + "'");
  }
  require_consolidate_active(s, "pattern expansion");
  require_engine(ctx);
  PatternDraft copy = *p;
  StepId step = StepId::kConsolidate;
  auto msg = ctx.gateway->complete(
      s.transcript, ctx.prompts->render_prompt(step, s, "expand", expansion_bindings(copy)),
      step, "expand");
  s.expansions[copy.name] = msg.content;
  audit(s, "expand", copy.name, {}, ctx.clock);
  return s;
}

}  // namespace patternmine
