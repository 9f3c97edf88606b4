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

#include "patternmine/workbench.h"

#include <cctype>
#include <cstdlib>

#include "patternmine/error.h"
#include "patternmine/text.h"

namespace patternmine {
namespace fs = std::filesystem;

std::string_view to_string(ProviderMode mode) {
  switch (mode) {
    case ProviderMode::kLive: return "live";
    case ProviderMode::kRecord: return "record";
    case ProviderMode::kReplay: return "replay";
  }
  return "replay";
}

ProviderMode parse_provider_mode(std::string_view text) {
  std::string t = text::to_lower(text::trim(text));
  if (t == "live") return ProviderMode::kLive;
  if (t == "record") return ProviderMode::kRecord;
  if (t == "replay") return ProviderMode::kReplay;
  throw Error(ErrorCode::kConfigError, "unknown provider mode '" + std::string(text) + "'");
}

void Config::validate() const {
  if (mode != ProviderMode::kLive && fixture.empty()) {
    throw Error(ErrorCode::kConfigError,
                std::string(to_string(mode)) + " mode needs a fixture path");
  }
  if (mode != ProviderMode::kReplay && endpoint.empty()) {
    throw Error(ErrorCode::kConfigError,
                std::string(to_string(mode)) + " mode needs a provider endpoint");
  }
  if (data_dir.empty()) throw Error(ErrorCode::kConfigError, "data directory is empty");
  if (params.max_output_tokens <= 0) {
    throw Error(ErrorCode::kConfigError, "max output tokens must be positive");
  }
}

Config Config::from_env() {
  Config c;
  auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  if (auto v = env("PATTERNMINE_MODE")) c.mode = parse_provider_mode(*v);
  if (auto v = env("PATTERNMINE_FIXTURE")) c.fixture = *v;
  if (auto v = env("PATTERNMINE_ENDPOINT")) c.endpoint = *v;
  if (auto v = env("PATTERNMINE_MODEL")) c.model_id = *v;
  if (auto v = env("PATTERNMINE_DATA")) c.data_dir = *v;
  if (auto v = env("PATTERNMINE_PROMPTS")) c.prompt_dir = *v;
  return c;
}

KnownUse parse_example_file(std::string_view input, std::string_view file_stem) {
  KnownUse k;
  std::vector<std::string> lines = text::split_lines(input);
  std::size_t i = 0;
  while (i < lines.size() && text::trim(lines[i]).empty()) ++i;
  if (i < lines.size() && text::trim(lines[i]) == "---") {
    std::size_t end = i + 1;
    while (end < lines.size() && text::trim(lines[end]) != "---") ++end;
    if (end == lines.size()) {
      throw Error(ErrorCode::kInvalidArgument, "unterminated front-matter in example file");
    }
    for (std::size_t j = i + 1; j < end; ++j) {
      std::string_view line = lines[j];
      auto colon = line.find(':');
      if (colon == std::string_view::npos) continue;
      std::string key = text::to_lower(text::trim(line.substr(0, colon)));
      std::string value(text::trim(line.substr(colon + 1)));
      if (key == "id") {
        k.id = value;
      } else if (key == "name") {
        k.name = value;
      } else if (key == "aliases") {
        std::size_t pos = 0;
        while (pos <= value.size()) {
          std::size_t comma = value.find(',', pos);
          if (comma == std::string::npos) comma = value.size();
          std::string alias(text::trim(std::string_view(value).substr(pos, comma - pos)));
          if (!alias.empty()) k.aliases.push_back(alias);
          pos = comma + 1;
        }
      }
    }
    i = end + 1;
  }
  while (i < lines.size() && text::trim(lines[i]).empty()) ++i;
  if (k.name.empty() && i < lines.size() && text::trim(lines[i]).substr(0, 2) == "# ") {
    k.name = std::string(text::trim(text::trim(lines[i]).substr(2)));
    ++i;
  }
  if (k.name.empty()) {
    std::string name(file_stem);
    for (char& c : name) {
      if (c == '-' || c == '_') c = ' ';
    }
    if (!name.empty()) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    k.name = name;
  }
  std::vector<std::string> body(lines.begin() + static_cast<long>(std::min(i, lines.size())),
                                lines.end());
  k.narrative = std::string(text::trim(text::join(body, "\n")));
  if (k.narrative.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "example '" + k.name + "' has no narrative");
  }
  return k;
}

Workbench::Workbench(Config config, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
  if (config_.data_dir.empty()) throw Error(ErrorCode::kConfigError, "data directory is empty");
  prompts_ = PromptKit::load(config_.prompt_dir.empty() ? default_prompt_dir()
                                                        : config_.prompt_dir);
  store_ = std::make_unique<SessionStore>(config_.data_dir);
}

Workbench::Workbench(Config config, std::shared_ptr<Provider> provider, Clock clock,
                     RetryPolicy retry)
    : config_(std::move(config)), clock_(std::move(clock)), provider_(std::move(provider)) {
  prompts_ = PromptKit::load(config_.prompt_dir.empty() ? default_prompt_dir()
                                                        : config_.prompt_dir);
  store_ = std::make_unique<SessionStore>(config_.data_dir);
  gateway_ = std::make_unique<Gateway>(provider_, std::move(retry), clock_);
}

Session Workbench::create(std::string_view id, std::string_view title) {
  Session s;
  s.id = std::string(id);
  if (!text::trim(title).empty()) s.title = std::string(text::trim(title));
  s.transcript.model_id = config_.model_id;
  s.transcript.params = config_.params;
  s.audit.push_back({"create", s.id, s.title, clock_()});
  return store_->create(std::move(s));
}

Session Workbench::add_examples(std::string_view id, std::vector<KnownUse> uses) {
  return store_->mutate(id, [&](Session s) {
    std::vector<KnownUse> all = s.known_uses;
    for (auto& k : uses) all.push_back(std::move(k));
    return ingest_examples(std::move(s), std::move(all), clock_);
  });
}

Gateway& Workbench::gateway() {
  std::lock_guard<std::mutex> guard(provider_mu_);
  if (gateway_) return *gateway_;
  config_.validate();
  auto live = [&] {
    const char* key = std::getenv(config_.api_key_env.c_str());
    return std::make_shared<HttpChatProvider>(config_.endpoint, key ? key : "");
  };
  switch (config_.mode) {
    case ProviderMode::kReplay:
      provider_ = std::make_shared<ReplayProvider>(load_fixture(config_.fixture));
      break;
    case ProviderMode::kRecord:
      recorder_ = std::make_shared<RecordingProvider>(live());
      provider_ = recorder_;
      break;
    case ProviderMode::kLive:
      provider_ = live();
      break;
  }
  gateway_ = std::make_unique<Gateway>(provider_, RetryPolicy{}, clock_);
  return *gateway_;
}

void Workbench::flush_recording() {
  if (!recorder_) return;
  std::lock_guard<std::mutex> guard(record_mu_);
  ReplayFixture merged;
  if (fs::exists(config_.fixture)) merged = load_fixture(config_.fixture);
  for (auto& e : recorder_->fixture().entries) merged.upsert(e);
  save_fixture(merged, config_.fixture);
}

Session Workbench::with_engine(std::string_view id,
                               const std::function<Session(Session, EngineContext&)>& op) {
  EngineContext ctx{&gateway(), &prompts_, clock_};
  Session out = store_->mutate(id, [&](Session s) { return op(std::move(s), ctx); });
  flush_recording();
  return out;
}

Session Workbench::run(std::string_view id, StepId step) {
  Session s = with_engine(id, [&](Session s, EngineContext& ctx) {
    return run_step(std::move(s), step, ctx);
  });
  if (!s.step(step).failure.empty()) {
    throw Error(ErrorCode::kStepFailed, std::string(to_string(step)) + ": " + s.step(step).failure);
  }
  return s;
}

Session Workbench::approve(std::string_view id, StepId step) {
  return store_->mutate(id, [&](Session s) { return approve_step(std::move(s), step, clock_); });
}

Session Workbench::rerun(std::string_view id, StepId step) {
  Session s = with_engine(id, [&](Session s, EngineContext& ctx) {
    return rerun_step(std::move(s), step, ctx);
  });
  if (!s.step(step).failure.empty()) {
    throw Error(ErrorCode::kStepFailed, std::string(to_string(step)) + ": " + s.step(step).failure);
  }
  return s;
}

Session Workbench::rename(std::string_view id, std::string_view old_name,
                          std::string_view new_name, std::string_view reason) {
  return store_->mutate(id, [&](Session s) {
    return rename_pattern(std::move(s), old_name, new_name, clock_, reason);
  });
}

Session Workbench::drop(std::string_view id, std::string_view name, std::string_view reason) {
  return store_->mutate(id, [&](Session s) {
    return drop_pattern(std::move(s), name, reason, clock_);
  });
}

Session Workbench::edit(std::string_view id, std::string_view pattern, std::string_view field,
                        std::string_view text, Origin actor) {
  return store_->mutate(id, [&](Session s) {
    return edit_field(std::move(s), pattern, field, text, actor, clock_);
  });
}

Session Workbench::move(std::string_view id, std::string_view name, std::string_view before) {
  return store_->mutate(id, [&](Session s) {
    return move_pattern(std::move(s), name, before, clock_);
  });
}

Session Workbench::curate(std::string_view id, const Json& ops, std::vector<std::string>* log) {
  return store_->mutate(id, [&](Session s) {
    return apply_curation_script(std::move(s), ops, clock_, log);
  });
}

Session Workbench::story(std::string_view id, std::string_view known_use) {
  return with_engine(id, [&](Session s, EngineContext& ctx) {
    return generate_story(std::move(s), known_use, ctx);
  });
}

Session Workbench::missing_check(std::string_view id) {
  return with_engine(id, [&](Session s, EngineContext& ctx) {
    return run_missing_pattern_check(std::move(s), ctx);
  });
}

Session Workbench::summarize(std::string_view id) {
  return with_engine(id, [&](Session s, EngineContext& ctx) {
    return summarize_process(std::move(s), ctx);
  });
}

Session Workbench::expand(std::string_view id, std::string_view pattern) {
  return with_engine(id, [&](Session s, EngineContext& ctx) {
    return expand_pattern(std::move(s), pattern, ctx);
  });
}

RenderedDocument Workbench::render(std::string_view id, DocumentKind kind,
                                   std::string_view subject) const {
  return render_document(store_->load(id), kind, subject);
}

ValidationReport Workbench::validate(std::string_view id) const {
  return validate_language(store_->load(id));
}

}  // namespace patternmine
