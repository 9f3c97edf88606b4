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

#include "support.h"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <sstream>

#include "patternmine/curation.h"
#include "patternmine/error.h"
#include "patternmine/json_io.h"
#include "patternmine/parser.h"
#include "patternmine/render.h"
#include "patternmine/store.h"

namespace patternmine::testing {
namespace fs = std::filesystem;

namespace {

std::size_t pick(std::mt19937& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(std::mt19937& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

template <typename T>
const T& choose(std::mt19937& rng, const std::vector<T>& v) {
  return v[pick(rng, v.size())];
}

const std::vector<std::string> kProse = {
    "data",   "tools",    "model",  "search", "index",   "query",  "users",   "answers",
    "topics", "clusters", "scale",  "cost",   "latency", "format", "records", "labels",
    "prompt", "context",  "noise",  "errors", "limits",  "quality", "review", "summaries",
    "needs",  "sources",  "steps",  "output", "storage", "retrieval"};
const std::vector<std::string> kProseUnicode = {"naïve", "café", "façade", "coöperate",
                                                "résumé", "straße", "µ-services"};
const std::vector<std::string> kNameWords = {
    "Adaptive", "Semantic", "Data", "Tool",     "Custom",  "Response", "Index",
    "Retrieval", "Cache",   "Guard", "Router",  "Ledger",  "Feedback", "Prompt",
    "Schema",   "Bridge",   "Filter", "Summary", "Vector", "Broker",   "Pipeline"};
// Example names use words that never occur in generated prose.
const std::vector<std::string> kExampleWords = {"Zephyr", "Quokka", "Marlin", "Tundra",
                                                "Orchid", "Basalt", "Falcon", "Juniper"};
const std::vector<std::string> kExampleKinds = {"portal", "tracker", "assistant", "monitor"};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::string words(std::mt19937& rng, std::size_t lo, std::size_t hi, bool unicode) {
  std::size_t n = lo + pick(rng, hi - lo + 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += coin(rng, 0.1) ? ", " : " ";
    // Sentences must open with a capitalizable ASCII word.
    out += i > 0 && unicode && coin(rng, 0.08) ? choose(rng, kProseUnicode) : choose(rng, kProse);
  }
  return out;
}

std::string sentences(std::mt19937& rng, std::size_t lo, std::size_t hi) {
  std::size_t n = lo + pick(rng, hi - lo + 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += " ";
    out += random_sentence(rng);
  }
  return out;
}

}  // namespace

TempDir::TempDir(std::string_view tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          (std::string(tag) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

WorkedProvider::WorkedProvider(const worked::WorkedFixture& fx) {
  for (StepId step : {StepId::kExtractSolutions, StepId::kDefineProblems, StepId::kDistillPatterns,
                      StepId::kIdentifyAffordances, StepId::kRelateAffordances}) {
    by_key_[std::string(to_string(step)) + "/"] = fx.response(to_string(step));
  }
  for (const char* part : {"list_patterns", "missing_patterns", "resulting_context"}) {
    by_key_[std::string("refine/") + part] = fx.response(std::string("refine-") + part);
  }
  for (const char* id : {"customer-support", "research-assistant", "information-extraction"}) {
    by_key_[std::string("consolidate/story/") + id] =
        fx.response(std::string("consolidate-story-") + id);
  }
  by_key_["consolidate/expand"] = fx.response("consolidate-expand-custom-logic");
  by_key_["reflection/reflection"] = fx.response("reflection");
}

CompletionResult WorkedProvider::complete(const CompletionRequest& req) {
  ++calls;
  if (garbage.count(req.step_tag)) return {"Sorry, I cannot help with that request.", 1, 1};
  const ChatMessage& last = req.messages.back();
  std::string key = req.step_tag + "/" + last.part;
  if (last.part == "story") {
    std::string id = "research-assistant";
    if (last.content.find("Customer Support") != std::string::npos) id = "customer-support";
    if (last.content.find("Information Extraction") != std::string::npos) {
      id = "information-extraction";
    }
    key += "/" + id;
  }
  auto it = by_key_.find(key);
  if (it == by_key_.end()) throw Error(ErrorCode::kReplayMiss, "no worked response for " + key);
  return {it->second, 10, 10};
}

WorkedEngine::WorkedEngine()
    : provider(std::make_shared<WorkedProvider>(fixture)),
      gateway(provider, RetryPolicy{}, worked::fixed_clock()),
      prompts(PromptKit::load(default_prompt_dir())) {
  ctx.gateway = &gateway;
  ctx.prompts = &prompts;
  ctx.clock = worked::fixed_clock();
}

Session worked_session(WorkedEngine& engine, StepId last, bool approve_last) {
  Session s;
  s.id = "worked";
  s.title = std::string(worked::kTitle);
  s = ingest_examples(std::move(s), engine.fixture.examples(), engine.ctx.clock);
  for (StepId step : kAllSteps) {
    if (step > last) break;
    if (step != StepId::kIdentifyExamples) s = run_step(std::move(s), step, engine.ctx);
    if (step < last || approve_last) s = approve_step(std::move(s), step, engine.ctx.clock);
  }
  return s;
}

Session curated_worked_session(WorkedEngine& engine) {
  Session s = worked_session(engine, StepId::kRefine);
  return apply_curation_script(std::move(s), engine.fixture.curation(), engine.ctx.clock);
}

std::string random_sentence(std::mt19937& rng, bool unicode) {
  return capitalize(words(rng, 3, 10, unicode)) + ".";
}

std::string random_name(std::mt19937& rng) {
  std::size_t n = 1 + pick(rng, 4);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += " ";
    out += choose(rng, kNameWords);
  }
  return out;
}

std::vector<KnownUse> random_known_uses(std::mt19937& rng, std::size_t count) {
  std::vector<std::string> pool = kExampleWords;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<KnownUse> uses;
  for (std::size_t i = 0; i < count && i < pool.size(); ++i) {
    KnownUse k;
    k.name = pool[i] + " " + choose(rng, kExampleKinds);
    k.id = lower(pool[i]);
    k.narrative = sentences(rng, 1, 3);
    uses.push_back(std::move(k));
  }
  return uses;
}

PatternDraft random_draft(std::mt19937& rng, const std::vector<KnownUse>& uses) {
  PatternDraft d;
  d.name = random_name(rng);
  d.context = sentences(rng, 1, 3);
  d.problem = sentences(rng, 1, 2);
  d.forces = sentences(rng, 1, 3);
  d.solution_statement = sentences(rng, 1, 2);
  std::size_t notes = uses.empty() ? 0 : pick(rng, 4);
  for (std::size_t i = 0; i < notes; ++i) {
    const KnownUse& k = choose(rng, uses);
    std::string note = "The " + lower(k.name) + " " + words(rng, 2, 6, true) + ".";
    if (coin(rng)) note = capitalize(words(rng, 2, 5, true)) + " in the " + k.name + ".";
    bool dup = std::any_of(d.known_uses.begin(), d.known_uses.end(),
                           [&](const KnownUseRef& r) { return r.note == note; });
    if (!dup) d.known_uses.push_back({k.id, note});
  }
  return d;
}

std::string random_free_text(std::mt19937& rng) {
  static const std::vector<std::string> kTokens = {
      "plain", "words", " ", " ", "\"quoted\"", "back\\slash", "\n", "\t", "\r\n",
      std::string("\x01", 1), "{brace}", "[[link]]", "é", "✳", "—", "\xF0\x9D\x94\x98",
      "<tag>", "100%", "$var", "'single'", "*emph*", ": colon"};
  std::size_t n = 1 + pick(rng, 12);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += choose(rng, kTokens);
  return out;
}

Session random_session(std::mt19937& rng, WorkedEngine& engine) {
  static const std::vector<KnownUse> worked_examples = engine.fixture.examples();
  Session s;
  s.id = "s" + std::to_string(pick(rng, 1000000));
  if (coin(rng)) s.title = random_free_text(rng);

  std::vector<KnownUse> uses;
  for (const auto& k : worked_examples) {
    if (coin(rng, 0.7)) uses.push_back(k);
  }
  for (auto& k : random_known_uses(rng, pick(rng, 3))) {
    if (coin(rng)) k.narrative = random_free_text(rng) + " tail";
    uses.push_back(std::move(k));
  }
  if (uses.empty()) uses.push_back(worked_examples.front());
  s = ingest_examples(std::move(s), uses, engine.ctx.clock);

  std::size_t ops = pick(rng, 24);
  for (std::size_t i = 0; i < ops; ++i) {
    try {
      switch (pick(rng, 6)) {
        case 0:
        case 1: {
          StepId step = s.cursor;
          if (s.step(step).status == StepStatus::kAwaitingReview) {
            s = approve_step(s, step, engine.ctx.clock);
          } else if (step != StepId::kIdentifyExamples) {
            s = run_step(s, step, engine.ctx);
          }
          break;
        }
        case 2: {
          auto live = s.live_pattern_names();
          if (live.empty()) break;
          static const std::vector<std::string> fields = {"context", "forces", "solution_detail",
                                                          "problem"};
          s = edit_field(s, choose(rng, live), choose(rng, fields),
                         random_free_text(rng) + " x", coin(rng) ? Origin::kHuman : Origin::kAi,
                         engine.ctx.clock);
          break;
        }
        case 3: {
          auto live = s.live_pattern_names();
          if (live.empty()) break;
          s = rename_pattern(s, choose(rng, live), random_name(rng), engine.ctx.clock,
                             random_free_text(rng));
          break;
        }
        case 4: {
          auto live = s.live_pattern_names();
          if (live.size() < 2 || !coin(rng, 0.3)) break;
          s = drop_pattern(s, choose(rng, live), random_free_text(rng),
                           engine.ctx.clock);
          break;
        }
        case 5: {
          StepId step = kAllSteps[pick(rng, kStepCount)];
          if (s.step(step).runs > 0) s = rerun_step(s, step, engine.ctx);
          break;
        }
      }
    } catch (const Error& e) {
      // Rejected operations (duplicate names, order conflicts) leave s as it was.
      switch (e.code()) {
        case ErrorCode::kDuplicateName:
        case ErrorCode::kOutOfOrder:
        case ErrorCode::kInvalidArgument:
        case ErrorCode::kNotAwaitingReview:
          break;
        default:
          throw;
      }
    }
  }
  check_invariants(s);
  return s;
}

CheckResult check_shortform_round_trip(std::uint32_t seed, std::size_t count) {
  std::mt19937 rng(seed);
  CheckResult r;
  for (std::size_t i = 0; i < count; ++i) {
    ++r.cases;
    auto uses = random_known_uses(rng, 1 + pick(rng, 3));
    PatternDraft d = random_draft(rng, uses);
    std::string text = render_shortform(d).body;
    std::string problem;
    try {
      auto parsed = parser::parse_pattern_shortforms(text, uses);
      if (parsed.has_errors()) {
        problem = "parse reported errors";
      } else if (parsed.value.size() != 1) {
        problem = "parsed " + std::to_string(parsed.value.size()) + " drafts";
      } else if (!(parsed.value[0] == d)) {
        problem = "draft differs after round trip";
      }
    } catch (const Error& e) {
      problem = e.what();
    }
    if (!problem.empty()) {
      ++r.failures;
      if (r.messages.size() < 5) r.messages.push_back(problem + " for:\n" + text);
    }
  }
  return r;
}

namespace {

bool is_live_status(StepStatus st) {
  return st == StepStatus::kAwaitingReview || st == StepStatus::kApproved;
}

// Order safety: a step can only hold results under review or approved when
// every earlier step is approved. The cursor sits on the first unapproved step.
std::string order_violation(const Session& s) {
  for (std::size_t j = 0; j < kStepCount; ++j) {
    if (!is_live_status(s.steps[j].status)) continue;
    for (std::size_t i = 0; i < j; ++i) {
      if (s.steps[i].status != StepStatus::kApproved) {
        return std::string(to_string(kAllSteps[j])) + " is " +
               std::string(to_string(s.steps[j].status)) + " while " +
               std::string(to_string(kAllSteps[i])) + " is " +
               std::string(to_string(s.steps[i].status));
      }
    }
  }
  auto first = first_unapproved(s);
  if (s.cursor != first.value_or(StepId::kConsolidate)) return "cursor is not on the first unapproved step";
  if (s.complete != !first.has_value()) return "complete flag disagrees with the step statuses";
  return {};
}

// After a successful (re)run or ingest of `step`: that step awaits review,
// earlier steps are untouched, later steps that ever held results are stale.
std::string staleness_violation(const Session& before, const Session& after, StepId step) {
  std::size_t k = index_of(step);
  for (std::size_t i = 0; i < k; ++i) {
    if (after.steps[i].status != before.steps[i].status) return "an earlier step changed status";
  }
  if (after.steps[k].status != StepStatus::kAwaitingReview) return "the run step is not awaiting review";
  for (std::size_t j = k + 1; j < kStepCount; ++j) {
    const StepRecord& b = before.steps[j];
    bool touched = b.status != StepStatus::kPending || b.runs > 0;
    StepStatus want = touched ? StepStatus::kStale : StepStatus::kPending;
    if (after.steps[j].status != want) {
      return std::string(to_string(kAllSteps[j])) + " is " +
             std::string(to_string(after.steps[j].status)) + ", expected " +
             std::string(to_string(want));
    }
  }
  return {};
}

bool same_statuses(const Session& a, const Session& b) {
  for (std::size_t i = 0; i < kStepCount; ++i) {
    if (a.steps[i].status != b.steps[i].status) return false;
  }
  return true;
}

bool priors_approved(const Session& s, StepId step) {
  for (std::size_t i = 0; i < index_of(step); ++i) {
    if (s.steps[i].status != StepStatus::kApproved) return false;
  }
  return true;
}

}  // namespace

CheckResult check_state_machine(std::uint32_t seed, std::size_t sequences, std::size_t max_ops) {
  std::mt19937 rng(seed);
  WorkedEngine engine;
  const std::vector<KnownUse> examples = engine.fixture.examples();
  CheckResult r;
  std::size_t total_ops = 0, good_runs = 0, failed_runs = 0, rejected = 0, approvals = 0,
              reached_consolidate = 0;

  for (std::size_t seq = 0; seq < sequences; ++seq) {
    ++r.cases;
    Session s;
    s.id = "sm";
    // Most walks start from ingested examples; a few probe the empty session.
    if (coin(rng, 0.9)) s = ingest_examples(s, examples, engine.ctx.clock);
    std::string problem;
    std::ostringstream trace;
    std::size_t ops = 1 + pick(rng, max_ops);
    for (std::size_t op = 0; op < ops && problem.empty(); ++op) {
      const Session before = s;
      // Half the operations advance at the cursor so walks reach the late
      // steps; the rest are random and often out of order.
      StepId step = kAllSteps[pick(rng, kStepCount)];
      std::size_t kind = pick(rng, 10);
      if (coin(rng, 0.5)) {
        step = s.cursor;
        kind = s.step(step).status == StepStatus::kAwaitingReview ? 4 : 1;
      }
      engine.provider->garbage.clear();

      std::optional<ErrorCode> expected;
      std::optional<ErrorCode> got;
      enum class Outcome { kRun, kFailedRun, kApprove, kIngest, kUnchanged } outcome{};
      try {
        if (kind == 0) {
          trace << " ingest";
          std::vector<KnownUse> uses;
          for (const auto& k : examples) {
            if (coin(rng, 0.7)) uses.push_back(k);
          }
          if (uses.empty()) uses.push_back(examples[pick(rng, examples.size())]);
          outcome = Outcome::kIngest;
          step = StepId::kIdentifyExamples;
          s = ingest_examples(s, uses, engine.ctx.clock);
        } else if (kind <= 3 || kind == 8) {
          bool garbage = kind == 8;
          trace << (garbage ? " bad-run " : " run ") << to_string(step);
          if (garbage) engine.provider->garbage.insert(std::string(to_string(step)));
          if (step == StepId::kIdentifyExamples) {
            expected = ErrorCode::kInvalidArgument;
          } else if (!priors_approved(s, step)) {
            expected = ErrorCode::kOutOfOrder;
          }
          // A resulting-context answer may legitimately name nothing, so an
          // unusable refine reply still counts as a run.
          outcome = garbage && step != StepId::kRefine ? Outcome::kFailedRun : Outcome::kRun;
          s = run_step(s, step, engine.ctx);
        } else if (kind <= 6) {
          trace << " approve " << to_string(step);
          if (s.step(step).status != StepStatus::kAwaitingReview) {
            expected = ErrorCode::kNotAwaitingReview;
          }
          outcome = Outcome::kApprove;
          s = approve_step(s, step, engine.ctx.clock);
        } else if (kind == 7) {
          trace << " rerun " << to_string(step);
          if (s.step(step).runs == 0) {
            expected = ErrorCode::kNeverRun;
          } else if (step != StepId::kIdentifyExamples && !priors_approved(s, step)) {
            expected = ErrorCode::kOutOfOrder;
          }
          outcome = step == StepId::kIdentifyExamples ? Outcome::kIngest : Outcome::kRun;
          s = rerun_step(s, step, engine.ctx);
        } else {
          trace << " rename";
          outcome = Outcome::kUnchanged;
          auto live = s.live_pattern_names();
          if (!live.empty()) {
            s = rename_pattern(s, choose(rng, live), random_name(rng) + " " + std::to_string(op),
                               engine.ctx.clock);
          }
        }
      } catch (const Error& e) {
        got = e.code();
        if (!expected) problem = std::string("unexpected error ") + e.what();
      }

      ++total_ops;
      if (got) ++rejected;
      if (!problem.empty()) break;
      if (expected) {
        if (!got) {
          problem = "expected " + std::string(to_string(*expected)) + " but the operation succeeded";
        } else if (*got != *expected) {
          problem = "expected " + std::string(to_string(*expected)) + ", got " +
                    std::string(to_string(*got));
        } else if (!(s == before)) {
          problem = "a rejected operation changed the session";
        }
      } else if (!got) {
        switch (outcome) {
          case Outcome::kRun:
            ++good_runs;
            if (s.step(step).runs != before.step(step).runs + 1) problem = "run count not bumped";
            if (problem.empty()) problem = staleness_violation(before, s, step);
            break;
          case Outcome::kIngest:
            problem = staleness_violation(before, s, StepId::kIdentifyExamples);
            break;
          case Outcome::kFailedRun:
            ++failed_runs;
            if (!same_statuses(before, s)) problem = "a failed run changed step statuses";
            if (s.step(step).failure.empty()) problem = "a failed run recorded no failure";
            break;
          case Outcome::kApprove:
            ++approvals;
            if (s.step(step).status != StepStatus::kApproved) problem = "approve did not approve";
            for (std::size_t i = 0; i < kStepCount && problem.empty(); ++i) {
              if (i != index_of(step) && s.steps[i].status != before.steps[i].status) {
                problem = "approve changed another step";
              }
            }
            break;
          case Outcome::kUnchanged:
            if (!same_statuses(before, s)) problem = "curation changed step statuses";
            break;
        }
      }
      if (problem.empty()) problem = order_violation(s);
      if (problem.empty()) {
        try {
          check_invariants(s);
        } catch (const Error& e) {
          problem = e.what();
        }
      }
    }
    if (s.step(StepId::kConsolidate).runs > 0) ++reached_consolidate;
    if (!problem.empty()) {
      ++r.failures;
      if (r.messages.size() < 5) r.messages.push_back(problem + " after:" + trace.str());
    }
  }
  r.coverage = std::to_string(total_ops) + " operations: " + std::to_string(good_runs) +
               " runs, " + std::to_string(failed_runs) + " unparseable runs, " +
               std::to_string(approvals) + " approvals, " + std::to_string(rejected) +
               " rejected; " + std::to_string(reached_consolidate) + " sequences reached consolidate";
  return r;
}

CheckResult check_persistence(std::uint32_t seed, std::size_t count, const fs::path& dir) {
  std::mt19937 rng(seed);
  WorkedEngine engine;
  CheckResult r;
  fs::create_directories(dir);
  for (std::size_t i = 0; i < count; ++i) {
    ++r.cases;
    std::string problem;
    try {
      Session s = random_session(rng, engine);
      fs::path path = dir / (s.id + ".json");
      save_session(s, path);
      Session loaded = load_session(path);
      if (!(loaded == s)) problem = "loaded session differs from the saved one";
      if (problem.empty() && !(parse_session_file(dump_session_file(s)) == s)) {
        problem = "in-memory round trip differs";
      }
    } catch (const Error& e) {
      problem = e.what();
    }
    if (!problem.empty()) {
      ++r.failures;
      if (r.messages.size() < 5) r.messages.push_back(problem);
    }
  }
  return r;
}

CheckResult check_kill_during_save(const fs::path& dir) {
  CheckResult r;
  fs::create_directories(dir);
  WorkedEngine engine;
  std::mt19937 rng(7);
  Session old_s = random_session(rng, engine);
  old_s.id = "victim";
  Session new_s = old_s;
  new_s.title = "Replacement title";
  new_s.audit.push_back({"edit", "title", "replaced", "2026-01-02T00:00:00Z"});
  fs::path path = dir / "victim.json";

  for (std::string stage : {"temp-open", "temp-partial", "temp-synced", "renamed"}) {
    ++r.cases;
    std::string problem;
    save_session(old_s, path);
    pid_t pid = ::fork();
    if (pid == 0) {
      try {
        save_session(new_s, path, [&](std::string_view at) {
          if (at == stage) ::kill(::getpid(), SIGKILL);
        });
      } catch (...) {
      }
      ::_exit(0);
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    if (!WIFSIGNALED(status) || WTERMSIG(status) != SIGKILL) {
      problem = "writer was not killed at " + stage;
    } else {
      try {
        Session on_disk = load_session(path);
        const Session& want = stage == "renamed" ? new_s : old_s;
        if (!(on_disk == want)) problem = "file after a kill at " + stage + " is not the expected session";
        SessionStore store(dir);
        if (store.list() != std::vector<std::string>{"victim"}) {
          problem = "leftover temp files show up as sessions";
        }
      } catch (const Error& e) {
        problem = "file unreadable after a kill at " + stage + ": " + e.what();
      }
    }
    if (!problem.empty()) {
      ++r.failures;
      r.messages.push_back(problem);
    }
  }
  return r;
}

}  // namespace patternmine::testing
