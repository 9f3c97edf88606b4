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

// Expected values for the worked example, typed in by hand from the source
// tables rather than read from the fixture responses, so a fixture typo cannot
// hide.

#ifndef PATTERNMINE_TESTS_WORKED_ORACLE_H_
#define PATTERNMINE_TESTS_WORKED_ORACLE_H_

#include <array>
#include <string_view>
#include <utility>

namespace patternmine::testing::oracle {

inline constexpr std::array<std::string_view, 7> kSolutionNames = {
    "Data Preprocessing",
    "Data Structuring and Enhancement",
    "Integration with External Tools",
    "Semantic Understanding and Synthesis",
    "Iterative Refinement and Feedback",
    "Custom Application Logic",
    "Adaptive Response Generation",
};

// Column order of the cross-reference table.
inline constexpr std::array<std::string_view, 7> kDraftNames = {
    "Data Retrieval and Preprocessing",
    "Data Structuring and Enhancement",
    "Integration with External Tools",
    "Semantic Understanding and Synthesis",
    "Iterative Refinement and Feedback",
    "Custom Application Logic",
    "Adaptive Response Generation",
};

struct OracleAffordance {
  std::string_view component;  // "llm", "database", "external_tool"
  std::string_view name;
};

inline constexpr std::array<OracleAffordance, 12> kAffordances = {{
    {"llm", "Natural language understanding"},
    {"llm", "Content generation"},
    {"llm", "Semantic search and matching"},
    {"llm", "Adaptive learning"},
    {"database", "Structured data storage"},
    {"database", "Semantic indexing and retrieval"},
    {"database", "Scalability and performance"},
    {"database", "Data organization and categorization"},
    {"external_tool", "Specialized analytical capabilities"},
    {"external_tool", "Data preprocessing and enhancement"},
    {"external_tool", "Efficiency and optimization"},
    {"external_tool", "Interoperability and integration"},
}};

// The X marks: (affordance row, draft column) as indices into the arrays above.
inline constexpr std::array<std::pair<int, int>, 16> kMarks = {{
    {0, 3}, {0, 6},          // natural language understanding: SUS, ARG
    {1, 0}, {1, 5}, {1, 6},  // content generation: DRP, CAL, ARG
    {2, 1},                  // semantic search and matching: DSE
    {3, 2}, {3, 4},          // adaptive learning: IET, IRF
    {4, 1},                  // structured data storage: DSE
    {5, 1},                  // semantic indexing and retrieval: DSE
    {6, 4},                  // scalability and performance: IRF
    {7, 5},                  // data organization and categorization: CAL
    {8, 1}, {8, 2},          // specialized analytical capabilities: DSE, IET
    {9, 0},                  // data preprocessing and enhancement: DRP
    {11, 5},                 // interoperability and integration: CAL
}};

inline constexpr std::array<std::string_view, 6> kFinalNames = {
    "Data Preprocessing",
    "Data Structuring and Enhancement",
    "Tool Integration",
    "Semantic Understanding and Synthesis",
    "Adaptive Response",
    "Custom Logic",
};

inline constexpr std::array<std::string_view, 5> kResearchAssistantStory = {
    "Data Preprocessing",
    "Data Structuring and Enhancement",
    "Tool Integration",
    "Semantic Understanding and Synthesis",
    "Custom Logic",
};

}  // namespace patternmine::testing::oracle

#endif  // PATTERNMINE_TESTS_WORKED_ORACLE_H_
