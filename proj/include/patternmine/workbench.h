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

// The single entry point the CLI and the HTTP service share. Every mutation
// is load -> transform -> atomic save under the session's lock, so both
// front ends reach identical states for identical commands.

#ifndef PATTERNMINE_WORKBENCH_H_
#define PATTERNMINE_WORKBENCH_H_

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patternmine/curation.h"
#include "patternmine/gateway.h"
#include "patternmine/json_io.h"
#include "patternmine/model.h"
#include "patternmine/pipeline.h"
#include "patternmine/prompts.h"
#include "patternmine/render.h"
#include "patternmine/store.h"

namespace patternmine {

enum class ProviderMode { kLive, kRecord, kReplay };

std::string_view to_string(ProviderMode mode);
/// Throws kConfigError.
ProviderMode parse_provider_mode(std::string_view text);

struct Config {
  std::string endpoint;  // chat-completions URL for live and record modes
  std::string model_id = "gpt-4";
  ProviderMode mode = ProviderMode::kReplay;
  std::filesystem::path fixture;
  std::filesystem::path data_dir = "sessions";
  std::filesystem::path prompt_dir;  // empty: default_prompt_dir()
  SamplingParams params;
  // Name of the environment variable holding the provider credential.
  std::string api_key_env = "PATTERNMINE_API_KEY";

  /// Throws kConfigError: replay and record need a fixture path, live and
  /// record need an endpoint.
  void validate() const;

  /// Defaults overridden by PATTERNMINE_{MODE,FIXTURE,ENDPOINT,MODEL,DATA,PROMPTS}.
  static Config from_env();
};

/// Reads one example. Markdown front-matter (id, name, aliases as a comma
/// list) is optional; otherwise a leading "# Heading" or the file stem gives
/// the name. Throws kInvalidArgument for an empty narrative.
KnownUse parse_example_file(std::string_view text, std::string_view file_stem);

class Workbench {
 public:
  /// The provider the config asks for is built on first use, so commands
  /// that never call the model work without a fixture or endpoint.
  explicit Workbench(Config config, Clock clock = utc_now);
  /// Uses `provider` as is (tests, fixture builder).
  Workbench(Config config, std::shared_ptr<Provider> provider, Clock clock = utc_now,
            RetryPolicy retry = {});

  const Config& config() const { return config_; }
  SessionStore& store() { return *store_; }
  const PromptKit& prompts() const { return prompts_; }

  std::vector<std::string> list_sessions() const { return store_->list(); }
  Session get(std::string_view id) const { return store_->load(id); }

  Session create(std::string_view id, std::string_view title = {});
  /// Appends to the session's examples and re-ingests.
  Session add_examples(std::string_view id, std::vector<KnownUse> uses);

  /// A response that cannot be parsed is saved with the session and then
  /// reported as kStepFailed.
  Session run(std::string_view id, StepId step);
  Session approve(std::string_view id, StepId step);
  Session rerun(std::string_view id, StepId step);

  Session rename(std::string_view id, std::string_view old_name, std::string_view new_name,
                 std::string_view reason = {});
  Session drop(std::string_view id, std::string_view name, std::string_view reason = {});
  Session edit(std::string_view id, std::string_view pattern, std::string_view field,
               std::string_view text, Origin actor = Origin::kHuman);
  Session move(std::string_view id, std::string_view name, std::string_view before);
  Session curate(std::string_view id, const Json& ops, std::vector<std::string>* log = nullptr);

  Session story(std::string_view id, std::string_view known_use);
  Session missing_check(std::string_view id);
  Session summarize(std::string_view id);
  Session expand(std::string_view id, std::string_view pattern);

  RenderedDocument render(std::string_view id, DocumentKind kind,
                          std::string_view subject = {}) const;
  ValidationReport validate(std::string_view id) const;

 private:
  Session with_engine(std::string_view id,
                      const std::function<Session(Session, EngineContext&)>& op);
  Gateway& gateway();  // throws kConfigError for an invalid config
  void flush_recording();

  Config config_;
  Clock clock_;
  PromptKit prompts_;
  std::unique_ptr<SessionStore> store_;
  std::shared_ptr<Provider> provider_;
  std::shared_ptr<RecordingProvider> recorder_;  // record mode only
  std::unique_ptr<Gateway> gateway_;
  std::mutex provider_mu_;
  std::mutex record_mu_;
};

}  // namespace patternmine

#endif  // PATTERNMINE_WORKBENCH_H_
