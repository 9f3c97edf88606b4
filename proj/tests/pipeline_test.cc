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

#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "patternmine/curation.h"
#include "patternmine/error.h"
#include "patternmine/pipeline.h"
#include "support/worked_oracle.h"
#include "support/support.h"

namespace patternmine {
namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

class Pipeline : public ::testing::Test {
 protected:
  testing::WorkedEngine engine;
  EngineContext& ctx = engine.ctx;
  Clock clock = engine.ctx.clock;

  Session ingested() {
    Session s;
    s.id = "t";
    return ingest_examples(s, engine.fixture.examples(), clock);
  }
};

TEST_F(Pipeline, IngestAssignsIdsAndWaitsForReview) {
  Session s;
  std::vector<KnownUse> uses = {{"", "Research Assistant", "Looks things up.", {}},
                                {"", "Research Assistant", "Another one.", {}},
                                {"", "", "Nameless.", {}}};
  s = ingest_examples(s, uses, clock);
  ASSERT_EQ(s.known_uses.size(), 3u);
  EXPECT_EQ(s.known_uses[0].id, "research-assistant");
  EXPECT_EQ(s.known_uses[1].id, "research-assistant-2");
  EXPECT_EQ(s.known_uses[2].name, "Example 3");
  EXPECT_EQ(s.step(StepId::kIdentifyExamples).status, StepStatus::kAwaitingReview);
  EXPECT_EQ(s.cursor, StepId::kIdentifyExamples);
  EXPECT_TRUE(s.step(StepId::kIdentifyExamples).diagnostics.empty());
}

TEST_F(Pipeline, IngestRejectsEmptyInputAndWarnsOnASingleExample) {
  EXPECT_EQ(code_of([&] { ingest_examples(Session{}, {}, clock); }), ErrorCode::kEmptyExampleSet);
  EXPECT_EQ(code_of([&] { ingest_examples(Session{}, {{"a", "A", "  ", {}}}, clock); }),
            ErrorCode::kInvalidArgument);
  Session one = ingest_examples(Session{}, {{"a", "A", "Narrative.", {}}}, clock);
  const auto& d = one.step(StepId::kIdentifyExamples).diagnostics;
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].severity, Severity::kWarning);
  EXPECT_NE(d[0].message.find("more examples may be required"), std::string::npos);
}

TEST_F(Pipeline, StepsRunOnlyInOrder) {
  Session s = ingested();
  EXPECT_EQ(code_of([&] { run_step(s, StepId::kExtractSolutions, ctx); }),
            ErrorCode::kOutOfOrder);
  s = approve_step(s, StepId::kIdentifyExamples, clock);
  EXPECT_EQ(s.cursor, StepId::kExtractSolutions);
  EXPECT_EQ(code_of([&] { run_step(s, StepId::kDistillPatterns, ctx); }), ErrorCode::kOutOfOrder);
  EXPECT_EQ(code_of([&] { run_step(s, StepId::kIdentifyExamples, ctx); }),
            ErrorCode::kInvalidArgument);
  s = run_step(s, StepId::kExtractSolutions, ctx);
  EXPECT_EQ(s.step(StepId::kExtractSolutions).status, StepStatus::kAwaitingReview);
  EXPECT_EQ(code_of([&] { run_step(s, StepId::kDefineProblems, ctx); }), ErrorCode::kOutOfOrder);
  EXPECT_EQ(code_of([&] { approve_step(s, StepId::kDefineProblems, clock); }),
            ErrorCode::kNotAwaitingReview);
  EXPECT_EQ(code_of([&] { rerun_step(s, StepId::kDefineProblems, ctx); }), ErrorCode::kNeverRun);
}

TEST_F(Pipeline, ExtractYieldsTheSevenSolutions) {
  Session s = approve_step(ingested(), StepId::kIdentifyExamples, clock);
  s.transcript.model_id = "gpt-4";
  s = run_step(s, StepId::kExtractSolutions, ctx);
  ASSERT_EQ(s.solutions.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(s.solutions[i].name, testing::oracle::kSolutionNames[i]);
    EXPECT_EQ(s.solutions[i].provenance.origin, Origin::kAi);
    EXPECT_EQ(s.solutions[i].provenance.model_id, "gpt-4");
  }
  ASSERT_EQ(s.transcript.messages.size(), 2u);
}

TEST_F(Pipeline, RerunMakesLaterStepsStale) {
  Session s = testing::worked_session(engine, StepId::kDistillPatterns);
  s = rerun_step(s, StepId::kExtractSolutions, ctx);
  EXPECT_EQ(s.step(StepId::kExtractSolutions).status, StepStatus::kAwaitingReview);
  EXPECT_EQ(s.step(StepId::kExtractSolutions).runs, 2);
  EXPECT_EQ(s.step(StepId::kDefineProblems).status, StepStatus::kStale);
  EXPECT_EQ(s.step(StepId::kDistillPatterns).status, StepStatus::kStale);
  EXPECT_EQ(s.step(StepId::kIdentifyAffordances).status, StepStatus::kPending);
  EXPECT_EQ(s.cursor, StepId::kExtractSolutions);
  EXPECT_FALSE(s.complete);
  // Stale steps must be rerun in order before they can be approved again.
  EXPECT_EQ(code_of([&] { approve_step(s, StepId::kDefineProblems, clock); }),
            ErrorCode::kNotAwaitingReview);
}

TEST_F(Pipeline, ReIngestMakesEverythingStale) {
  Session s = testing::worked_session(engine, StepId::kDefineProblems);
  s = ingest_examples(s, engine.fixture.examples(), clock);
  EXPECT_EQ(s.step(StepId::kExtractSolutions).status, StepStatus::kStale);
  EXPECT_EQ(s.step(StepId::kDefineProblems).status, StepStatus::kStale);
  EXPECT_EQ(s.cursor, StepId::kIdentifyExamples);
}

TEST_F(Pipeline, RerunIsDeterministicForTheSameAnswers) {
  Session s = testing::worked_session(engine, StepId::kDistillPatterns);
  Session again = rerun_step(s, StepId::kDistillPatterns, ctx);
  EXPECT_EQ(again.patterns, s.patterns);
  again = approve_step(again, StepId::kDistillPatterns, clock);
  EXPECT_EQ(again.cursor, s.cursor);
}

TEST_F(Pipeline, UnparseableResponsesAreRecordedNotApplied) {
  engine.provider->garbage.insert("extract_solutions");
  Session s = ingested();
  s = approve_step(s, StepId::kIdentifyExamples, clock);
  Session after = run_step(s, StepId::kExtractSolutions, ctx);
  const StepRecord& r = after.step(StepId::kExtractSolutions);
  EXPECT_EQ(r.status, StepStatus::kPending);
  EXPECT_EQ(r.runs, 1);
  EXPECT_NE(r.failure.find("NoSolutionsFound"), std::string::npos);
  EXPECT_FALSE(r.raw_response.empty());
  EXPECT_TRUE(after.solutions.empty());
  EXPECT_EQ(after.transcript.messages.size(), 2u);
  EXPECT_NO_THROW(check_invariants(after));

  engine.provider->garbage.clear();
  after = rerun_step(after, StepId::kExtractSolutions, ctx);
  EXPECT_TRUE(after.step(StepId::kExtractSolutions).failure.empty());
  EXPECT_EQ(after.solutions.size(), 7u);
}

TEST_F(Pipeline, ProviderFailuresLeaveNoTrace) {
  Session s = approve_step(ingested(), StepId::kIdentifyExamples, clock);
  auto empty = std::make_shared<ScriptedProvider>();
  Gateway gw(empty, {}, clock);
  EngineContext other{&gw, &engine.prompts, clock};
  EXPECT_EQ(code_of([&] { run_step(s, StepId::kExtractSolutions, other); }),
            ErrorCode::kReplayMiss);
  EngineContext unwired;
  EXPECT_EQ(code_of([&] { run_step(s, StepId::kExtractSolutions, unwired); }),
            ErrorCode::kConfigError);
}

TEST_F(Pipeline, AffordanceStepsBuildTheMatrix) {
  Session s = testing::worked_session(engine, StepId::kRelateAffordances);
  EXPECT_EQ(s.registry.size(), 12u);
  EXPECT_EQ(s.matrix.rows.size(), 12u);
  EXPECT_EQ(s.matrix.cols.size(), 7u);
  EXPECT_EQ(s.matrix.true_count(), testing::oracle::kMarks.size());
  for (const auto& [row, col] : testing::oracle::kMarks) {
    std::string_view name = testing::oracle::kAffordances[row].name;
    auto a = std::find_if(s.registry.begin(), s.registry.end(),
                          [&](const Affordance& x) { return x.name == name; });
    ASSERT_NE(a, s.registry.end()) << name;
    EXPECT_TRUE(s.matrix.marked(a->id, testing::oracle::kDraftNames[col]))
        << name << " x " << testing::oracle::kDraftNames[col];
  }
}

TEST_F(Pipeline, RefineLinksPatternsAndMarksDeadEnds) {
  Session s = testing::worked_session(engine, StepId::kRefine);
  for (const auto& p : s.patterns) {
    EXPECT_EQ(p.status, PatternStatus::kRefined) << p.name;
    if (p.name == "Integration with External Tools") {
      EXPECT_TRUE(p.no_successor);
      EXPECT_TRUE(p.resulting_context.empty());
    } else {
      EXPECT_FALSE(p.no_successor) << p.name;
      EXPECT_FALSE(p.resulting_context.empty()) << p.name;
    }
  }
}

TEST_F(Pipeline, MissingCheckFindsNothingAndChangesNoPatterns) {
  Session s = testing::worked_session(engine, StepId::kDefineProblems);
  EXPECT_EQ(code_of([&] { run_missing_pattern_check(s, ctx); }), ErrorCode::kOutOfOrder);
  s = testing::worked_session(engine, StepId::kRefine);
  Session after = run_missing_pattern_check(s, ctx);
  EXPECT_TRUE(after.missing_suggestions.empty());
  EXPECT_EQ(after.patterns, s.patterns);
  EXPECT_EQ(after.steps, s.steps);
}

TEST_F(Pipeline, ConsolidateMarksPatternsAndWritesStories) {
  Session s = testing::curated_worked_session(engine);
  s = run_step(s, StepId::kConsolidate, ctx);
  for (const auto& p : s.patterns) {
    if (p.live()) {
      EXPECT_EQ(p.status, PatternStatus::kConsolidated) << p.name;
    }
  }
  EXPECT_EQ(s.stories.size(), 3u);
  s = approve_step(s, StepId::kConsolidate, clock);
  EXPECT_TRUE(s.complete);
  EXPECT_FALSE(first_unapproved(s).has_value());
}

TEST_F(Pipeline, ExtrasNeedConsolidateAndKnownSubjects) {
  Session s = testing::curated_worked_session(engine);
  EXPECT_EQ(code_of([&] { generate_story(s, "research-assistant", ctx); }),
            ErrorCode::kOutOfOrder);
  EXPECT_EQ(code_of([&] { expand_pattern(s, "Custom Logic", ctx); }), ErrorCode::kOutOfOrder);
  s = run_step(s, StepId::kConsolidate, ctx);
  EXPECT_EQ(code_of([&] { generate_story(s, "nowhere", ctx); }), ErrorCode::kUnknownKnownUse);
  EXPECT_EQ(code_of([&] { expand_pattern(s, "Nope", ctx); }), ErrorCode::kUnknownPattern);

  Session x = expand_pattern(s, "Custom Application Logic", ctx);
  EXPECT_EQ(x.expansions.count("Custom Logic"), 1u);
  x = generate_story(x, "research-assistant", ctx);
  EXPECT_EQ(x.stories.size(), 3u);

  EXPECT_EQ(code_of([&] { summarize_process(Session{}, ctx); }), ErrorCode::kEmptyTranscript);
  x = summarize_process(x, ctx);
  EXPECT_FALSE(x.process_summary.empty());
}

TEST_F(Pipeline, StoriesWithNoKnownPatternAreRejected) {
  engine.provider->garbage.insert("consolidate");
  Session s = testing::curated_worked_session(engine);
  s = run_step(s, StepId::kConsolidate, ctx);
  EXPECT_EQ(s.step(StepId::kConsolidate).status, StepStatus::kPending);
  EXPECT_NE(s.step(StepId::kConsolidate).failure.find("NoStoryEntries"), std::string::npos);
}

TEST_F(Pipeline, FirstUnapprovedTracksTheCursor) {
  Session s = ingested();
  EXPECT_EQ(first_unapproved(s), StepId::kIdentifyExamples);
  s = testing::worked_session(engine, StepId::kRefine);
  EXPECT_EQ(first_unapproved(s), StepId::kConsolidate);
  EXPECT_EQ(s.cursor, StepId::kConsolidate);
}

TEST(PipelineProperties, RandomOperationSequencesKeepTheInvariants) {
  auto r = testing::check_state_machine(5, 150);
  EXPECT_TRUE(r.ok()) << (r.messages.empty() ? "" : r.messages.front());
}

}  // namespace
}  // namespace patternmine
