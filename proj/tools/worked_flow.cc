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

#include "worked_flow.h"

#include <algorithm>

#include "patternmine/error.h"
#include "patternmine/file_io.h"

namespace patternmine::worked {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kStoryOrder[] = {"customer-support", "research-assistant",
                                            "information-extraction"};

}  // namespace

Clock fixed_clock() {
  return [] { return std::string("2026-01-01T00:00:00Z"); };
}

WorkedFixture::WorkedFixture(fs::path root) : root_(std::move(root)) {}

fs::path WorkedFixture::default_root() { return fs::path(PATTERNMINE_SOURCE_DIR) / "fixtures" / "worked"; }

std::vector<fs::path> WorkedFixture::example_files() const {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(examples_dir())) {
    if (entry.path().extension() == ".md") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<KnownUse> WorkedFixture::examples() const {
  std::vector<KnownUse> uses;
  for (const auto& f : example_files()) uses.push_back(parse_example_file(read_text_file(f), f.stem().string()));
  return uses;
}

Json WorkedFixture::curation() const { return Json::parse(read_text_file(root_ / "curation.json")); }

std::string WorkedFixture::golden_summary() const {
  return read_text_file(root_ / "golden" / "summary_table.md");
}

std::string WorkedFixture::response(std::string_view name) const {
  return read_text_file(root_ / "responses" / (std::string(name) + ".md"));
}

std::shared_ptr<ScriptedProvider> WorkedFixture::scripted_provider() const {
  auto p = std::make_shared<ScriptedProvider>();
  for (StepId step : {StepId::kExtractSolutions, StepId::kDefineProblems, StepId::kDistillPatterns,
                      StepId::kIdentifyAffordances, StepId::kRelateAffordances}) {
    p->push(to_string(step), response(to_string(step)));
  }
  p->push("refine", response("refine-list_patterns"));
  p->push("refine", response("refine-missing_patterns"));
  p->push("refine", response("refine-resulting_context"));
  for (auto id : kStoryOrder) p->push("consolidate", response("consolidate-story-" + std::string(id)));
  // extras()
  p->push("consolidate", response("consolidate-story-research-assistant"));
  p->push("refine", response("refine-missing_patterns"));
  p->push("consolidate", response("consolidate-expand-custom-logic"));
  p->push("reflection", response("reflection"));
  return p;
}

Session ingest(Workbench& wb, std::string_view id, const WorkedFixture& fx) {
  wb.create(id, kTitle);
  wb.add_examples(id, fx.examples());
  return wb.approve(id, StepId::kIdentifyExamples);
}

Session run_through(Workbench& wb, std::string_view id, StepId last) {
  Session s = wb.get(id);
  for (StepId step : kAllSteps) {
    if (index_of(step) > index_of(last)) break;
    if (s.step(step).status == StepStatus::kApproved) continue;
    if (s.step(step).status != StepStatus::kAwaitingReview) wb.run(id, step);
    s = wb.approve(id, step);
  }
  return s;
}

Session plain_flow(Workbench& wb, std::string_view id, const WorkedFixture& fx) {
  ingest(wb, id, fx);
  return run_through(wb, id, StepId::kConsolidate);
}

Session curated_flow(Workbench& wb, std::string_view id, const WorkedFixture& fx,
                     std::vector<std::string>* curation_log) {
  ingest(wb, id, fx);
  run_through(wb, id, StepId::kRefine);
  wb.curate(id, fx.curation(), curation_log);
  return run_through(wb, id, StepId::kConsolidate);
}

Session extras(Workbench& wb, std::string_view id) {
  wb.story(id, "research-assistant");
  wb.missing_check(id);
  wb.expand(id, "Custom Logic");
  return wb.summarize(id);
}

ReplayFixture build_replay_fixture(const WorkedFixture& fx, const fs::path& scratch) {
  auto scripted = fx.scripted_provider();
  auto recorder = std::make_shared<RecordingProvider>(scripted);
  Config config;
  config.data_dir = scratch;
  Workbench wb(config, recorder, fixed_clock());
  curated_flow(wb, "worked", fx);
  extras(wb, "worked");
  if (scripted->remaining() != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::to_string(scripted->remaining()) + " scripted responses were never used");
  }
  return recorder->fixture();
}

}  // namespace patternmine::worked
