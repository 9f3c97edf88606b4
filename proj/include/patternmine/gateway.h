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

// Chat-completion providers (live HTTP, replay, record, scripted) and the
// gateway that threads a session transcript through them.
//
// Replay fixtures are plain text so responses can be transcribed by hand:
//
//   >>> step=extract_solutions digest=9f86d0...
//   --- prompt
//   In the following, you will help me ...
//   --- response
//   Data Preprocessing: ...
//
// `digest` may be omitted when a prompt section is present. Body lines that
// start with ">>>", "---" or "\" are written with an extra leading "\".
// Trailing blank lines of a section are ignored unless escaped as "\".

#ifndef PATTERNMINE_GATEWAY_H_
#define PATTERNMINE_GATEWAY_H_

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patternmine/model.h"

namespace patternmine {

/// CRLF to LF, trailing whitespace stripped per line, trailing blank lines
/// dropped.
std::string normalize_prompt(std::string_view prompt);

/// Lower-case hex SHA-256 of normalize_prompt(prompt).
std::string prompt_digest(std::string_view prompt);

/// Fixture key for a message: the step name, else the part ("reflection"),
/// else "none".
std::string fixture_tag(const std::optional<StepId>& step, std::string_view part);

struct FixtureEntry {
  std::string step_tag;
  std::string prompt_digest;
  std::string prompt;  // optional, kept for readability
  std::string response;

  bool operator==(const FixtureEntry&) const = default;
};

struct ReplayFixture {
  std::vector<FixtureEntry> entries;

  /// Inserts or replaces the entry with the same (step_tag, digest).
  void upsert(FixtureEntry entry);
  const FixtureEntry* find(std::string_view step_tag, std::string_view digest) const;
  bool operator==(const ReplayFixture&) const = default;
};

/// Throws kIoError on malformed text or a digest that does not match its
/// prompt section.
ReplayFixture parse_fixture(std::string_view text, std::string_view source = "<memory>");
std::string dump_fixture(const ReplayFixture& fixture);
ReplayFixture load_fixture(const std::filesystem::path& path);
void save_fixture(const ReplayFixture& fixture, const std::filesystem::path& path);

struct CompletionRequest {
  std::string model_id;
  SamplingParams params;
  std::vector<ChatMessage> messages;  // full conversation, new prompt last
  std::string step_tag;
  std::string digest;

  const std::string& prompt() const { return messages.back().content; }
};

struct CompletionResult {
  std::string content;
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

class Provider {
 public:
  virtual ~Provider() = default;
  /// Throws Error(kProviderError, transient) or Error(kReplayMiss).
  virtual CompletionResult complete(const CompletionRequest& request) = 0;
};

class ReplayProvider : public Provider {
 public:
  explicit ReplayProvider(ReplayFixture fixture) : fixture_(std::move(fixture)) {}
  CompletionResult complete(const CompletionRequest& request) override;

 private:
  ReplayFixture fixture_;
};

/// Answers from per-step queues in call order; used by tests and by the
/// fixture builder. A queue that runs dry is a kReplayMiss.
class ScriptedProvider : public Provider {
 public:
  void push(std::string_view step_tag, std::string response);
  CompletionResult complete(const CompletionRequest& request) override;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::deque<std::string>, std::less<>> queues_;
};

/// Wraps another provider and keeps every exchange as a fixture entry.
class RecordingProvider : public Provider {
 public:
  explicit RecordingProvider(std::shared_ptr<Provider> inner) : inner_(std::move(inner)) {}
  CompletionResult complete(const CompletionRequest& request) override;
  ReplayFixture fixture() const;

 private:
  std::shared_ptr<Provider> inner_;
  mutable std::mutex mu_;
  ReplayFixture recorded_;
};

/// OpenAI-style chat-completion endpoint: POSTs {model, messages,
/// temperature, max_tokens} and reads choices[0].message.content and usage.
class HttpChatProvider : public Provider {
 public:
  HttpChatProvider(std::string endpoint, std::string api_key,
                   std::chrono::seconds timeout = std::chrono::seconds(120));
  CompletionResult complete(const CompletionRequest& request) override;

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};
  std::function<void(std::chrono::milliseconds)> sleep;  // default: this_thread
};

class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Provider> provider, RetryPolicy retry = {},
                   Clock clock = utc_now);

  /// Sends `user_message` after the transcript so far. On success appends
  /// the user and assistant messages and returns the latter; on failure the
  /// transcript is untouched. Throws kEmptyPrompt, kProviderError,
  /// kReplayMiss.
  ChatMessage complete(Transcript& transcript, std::string_view user_message,
                       std::optional<StepId> step = std::nullopt,
                       std::string_view part = {});

  Provider& provider() { return *provider_; }

 private:
  std::shared_ptr<Provider> provider_;
  RetryPolicy retry_;
  Clock clock_;
};

/// One fixture entry per user->assistant exchange of the transcript
/// (a repeated prompt keeps the last answer), written to `path`.
/// Throws kIoError for an empty transcript or an unwritable path.
ReplayFixture record(const Transcript& transcript, const std::filesystem::path& path);

}  // namespace patternmine

#endif  // PATTERNMINE_GATEWAY_H_
