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

#include "worked_flow.h"
#include "patternmine/gateway.h"
#include "patternmine/workbench.h"
#include "support/worked_oracle.h"
#include "support/support.h"

namespace patternmine {
namespace {

// Text the worked example prints verbatim; compared literally against the
// replayed session.
constexpr std::string_view kCalSolution =
    "Each example is driven by custom application logic that defines how the LLM, data "
    "sources, and external tools are integrated. This logic includes the sequence of "
    "operations, the criteria for data retrieval and processing, and the way in which the "
    "LLM's outputs are used. The application logic is tailored to the specific goal of the "
    "system, whether it's providing customer support, assisting with research, or analyzing "
    "startup failures.";
constexpr std::string_view kCalProblem =
    "This solution addresses the problem of the diverse and specific requirements of different "
    "applications. A one-size-fits-all approach is often insufficient for the wide range of "
    "tasks and goals that LLMs can be applied to, necessitating custom logic that tailors the "
    "integration of data, tools, and LLM capabilities to the specific needs of each "
    "application.";
constexpr std::string_view kCalRationale =
    "After establishing custom application logic, Integration with External Tools may be "
    "revisited to ensure that all necessary tools are effectively integrated into the "
    "workflow. This ensures that the application logic fully leverages the capabilities of "
    "each component, from data handling to analysis and response generation.";

class WorkedReplay : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("replay");
    worked::WorkedFixture fx;
    Config c;
    c.fixture = fx.replay_path();
    c.data_dir = dir_->path();
    Workbench wb(c, worked::fixed_clock());
    plain_ = new Session(worked::plain_flow(wb, "plain", fx));
    curated_ = new Session(worked::curated_flow(wb, "curated", fx));
    extras_ = new Session(worked::extras(wb, "curated"));
  }
  static void TearDownTestSuite() {
    delete plain_;
    delete curated_;
    delete extras_;
    delete dir_;
  }
  static testing::TempDir* dir_;
  static Session* plain_;
  static Session* curated_;
  static Session* extras_;
};

testing::TempDir* WorkedReplay::dir_ = nullptr;
Session* WorkedReplay::plain_ = nullptr;
Session* WorkedReplay::curated_ = nullptr;
Session* WorkedReplay::extras_ = nullptr;

TEST_F(WorkedReplay, SolutionsAndProblemsAreVerbatim) {
  const Session& s = *plain_;
  auto cal = std::find_if(s.solutions.begin(), s.solutions.end(),
                          [](const auto& x) { return x.name == "Custom Application Logic"; });
  ASSERT_NE(cal, s.solutions.end());
  EXPECT_EQ(cal->description, kCalSolution);
  auto prob = std::find_if(s.problems.begin(), s.problems.end(), [](const auto& p) {
    return p.solution_name == "Custom Application Logic";
  });
  ASSERT_NE(prob, s.problems.end());
  EXPECT_EQ(prob->text, kCalProblem);
  EXPECT_EQ(s.problems.size(), 7u);
}

TEST_F(WorkedReplay, CustomApplicationLogicDraftIsVerbatim) {
  const PatternDraft* p = plain_->find_live("Custom Application Logic");
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->context,
            "Diverse applications of LLMs, each with unique goals, data sources, and requirements, "
            "from customer support to research assistance to failure analysis.");
  EXPECT_EQ(p->problem,
            "A one-size-fits-all approach does not adequately address the specific requirements "
            "of different applications.");
  EXPECT_EQ(p->forces,
            "The diversity of application domains, the specificity of user needs, and the "
            "variability of data sources contribute to the complexity.");
  EXPECT_EQ(p->solution_statement,
            "Develop custom logic that defines the specific integration and interaction of LLMs, "
            "data, and tools tailored to the application's goals.");
  EXPECT_EQ(p->known_uses.size(), 3u);
  ASSERT_EQ(p->resulting_context.size(), 1u);
  EXPECT_EQ(p->resulting_context[0].target_pattern_name, "Integration with External Tools");
  EXPECT_EQ(p->resulting_context[0].rationale, kCalRationale);
}

TEST_F(WorkedReplay, CustomApplicationLogicAffordancesCarryTheirNotes) {
  const Session& s = *plain_;
  auto note = [&](std::string_view affordance) -> std::string {
    for (const auto& a : s.registry) {
      if (a.name != affordance) continue;
      auto r = s.matrix.row_of(a.id);
      auto c = s.matrix.col_of("Custom Application Logic");
      if (!r || !c || !s.matrix.cells[*r][*c]) return "(unmarked)";
      return s.matrix.notes[*r][*c];
    }
    return "(missing)";
  };
  EXPECT_EQ(note("Content generation"),
            "LLMs can be programmed with custom logic to generate specific outputs required by "
            "the application.");
  EXPECT_EQ(note("Data organization and categorization"),
            "Databases can be structured according to the custom logic of the application to "
            "optimize data retrieval and storage.");
  EXPECT_EQ(note("Interoperability and integration"),
            "Essential for custom applications that integrate multiple tools and systems, "
            "enabling seamless workflows.");
}

TEST_F(WorkedReplay, CuratedLanguageAndStory) {
  const Session& s = *curated_;
  auto live = s.live_pattern_names();
  ASSERT_EQ(live.size(), testing::oracle::kFinalNames.size());
  for (std::size_t i = 0; i < live.size(); ++i) EXPECT_EQ(live[i], testing::oracle::kFinalNames[i]);
  EXPECT_TRUE(s.complete);
  const PatternStory* ra = nullptr;
  for (const auto& st : s.stories) {
    if (st.known_use_id == "research-assistant") ra = &st;
  }
  ASSERT_NE(ra, nullptr);
  ASSERT_EQ(ra->entries.size(), testing::oracle::kResearchAssistantStory.size());
  for (std::size_t i = 0; i < ra->entries.size(); ++i) {
    EXPECT_EQ(ra->entries[i].pattern_name, testing::oracle::kResearchAssistantStory[i]);
  }
}

TEST_F(WorkedReplay, ExtrasReplayToo) {
  const Session& s = *extras_;
  EXPECT_TRUE(s.missing_suggestions.empty());
  EXPECT_EQ(s.expansions.count("Custom Logic"), 1u);
  EXPECT_FALSE(s.process_summary.empty());
}

// The checked-in fixture is exactly what the builder produces today, so a
// change to prompts or parsers cannot silently leave it behind.
TEST(WorkedFixture, CheckedInFixtureIsUpToDate) {
  worked::WorkedFixture fx;
  testing::TempDir scratch("rebuild");
  ReplayFixture rebuilt = worked::build_replay_fixture(fx, scratch.path());
  ReplayFixture checked_in = load_fixture(fx.replay_path());
  EXPECT_EQ(rebuilt, checked_in)
      << "regenerate with: build/make_worked_fixture --out fixtures/worked/replay.fixture";
}

}  // namespace
}  // namespace patternmine
