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

#include "patternmine/gateway.h"

#include <openssl/evp.h>

#include <cstdio>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "patternmine/error.h"
#include "patternmine/file_io.h"
#include "patternmine/text.h"

namespace patternmine {
namespace {

constexpr std::string_view kEntryMarker = ">>>";
constexpr std::string_view kPromptMarker = "--- prompt";
constexpr std::string_view kResponseMarker = "--- response";

bool needs_escape(std::string_view line) {
  return line.rfind(">>>", 0) == 0 || line.rfind("---", 0) == 0 || line.rfind("\\", 0) == 0;
}

void write_section(std::ostringstream& out, std::string_view marker, std::string_view body) {
  out << marker << "\n";
  auto lines = text::split_lines(body);
  // trailing empty lines are escaped so the parser keeps them
  std::size_t keep = lines.size();
  while (keep > 0 && lines[keep - 1].empty()) --keep;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (i >= keep) {
      out << "\\\n";
    } else {
      out << (needs_escape(l) ? "\\" : "") << l << "\n";
    }
  }
}

std::string read_section(std::vector<std::string> raw) {
  while (!raw.empty() && text::trim(raw.back()).empty()) raw.pop_back();
  for (auto& l : raw) {
    if (!l.empty() && l[0] == '\\') l.erase(0, 1);
  }
  return text::join(raw, "\n");
}

Error provider_error(const std::string& detail, bool transient) {
  return Error(ErrorCode::kProviderError, detail, transient);
}

}  // namespace

std::string normalize_prompt(std::string_view prompt) { return text::normalize_block(prompt); }

std::string prompt_digest(std::string_view prompt) {
  std::string norm = normalize_prompt(prompt);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(norm.data(), norm.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(len * 2);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string fixture_tag(const std::optional<StepId>& step, std::string_view part) {
  if (step) return std::string(to_string(*step));
  if (!part.empty()) return std::string(part);
  return "none";
}

void ReplayFixture::upsert(FixtureEntry entry) {
  for (auto& e : entries) {
    if (e.step_tag == entry.step_tag && e.prompt_digest == entry.prompt_digest) {
      e = std::move(entry);
      return;
    }
  }
  entries.push_back(std::move(entry));
}

const FixtureEntry* ReplayFixture::find(std::string_view step_tag,
                                        std::string_view digest) const {
  for (const auto& e : entries) {
    if (e.step_tag == step_tag && e.prompt_digest == digest) return &e;
  }
  return nullptr;
}

ReplayFixture parse_fixture(std::string_view input, std::string_view source) {
  ReplayFixture fx;
  auto fail = [&](int line, const std::string& msg) {
    throw Error(ErrorCode::kIoError,
                std::string(source) + ":" + std::to_string(line) + ": " + msg);
  };

  struct Pending {
    FixtureEntry entry;
    int line = 0;
    bool has_prompt = false;
    bool has_response = false;
    std::vector<std::string> prompt;
    std::vector<std::string> response;
  };
  std::optional<Pending> cur;
  std::vector<std::string>* section = nullptr;

  auto flush = [&]() {
    if (!cur) return;
    if (!cur->has_response) fail(cur->line, "entry has no response section");
    FixtureEntry e = std::move(cur->entry);
    e.response = read_section(std::move(cur->response));
    if (cur->has_prompt) {
      e.prompt = read_section(std::move(cur->prompt));
      std::string computed = prompt_digest(e.prompt);
      if (e.prompt_digest.empty()) {
        e.prompt_digest = computed;
      } else if (e.prompt_digest != computed) {
        fail(cur->line, "digest does not match the prompt section");
      }
    }
    if (e.prompt_digest.empty()) fail(cur->line, "entry has neither digest nor prompt");
    fx.upsert(std::move(e));
    cur.reset();
    section = nullptr;
  };

  int number = 0;
  for (const auto& line : text::split_lines(input)) {
    ++number;
    if (line.rfind(kEntryMarker, 0) == 0) {
      flush();
      cur.emplace();
      cur->line = number;
      std::istringstream in(line.substr(kEntryMarker.size()));
      std::string field;
      while (in >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) fail(number, "expected key=value, got '" + field + "'");
        std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "step") {
          cur->entry.step_tag = value;
        } else if (key == "digest") {
          cur->entry.prompt_digest = value;
        } else {
          fail(number, "unknown entry field '" + key + "'");
        }
      }
      if (cur->entry.step_tag.empty()) fail(number, "entry has no step");
      continue;
    }
    if (line == kPromptMarker || line == kResponseMarker) {
      if (!cur) fail(number, "section outside an entry");
      bool prompt = line == kPromptMarker;
      bool& seen = prompt ? cur->has_prompt : cur->has_response;
      if (seen) fail(number, "repeated section");
      seen = true;
      section = prompt ? &cur->prompt : &cur->response;
      continue;
    }
    if (section) {
      section->push_back(line);
    } else if (!text::trim(line).empty() && line[0] != '#') {
      fail(number, "text outside a section");
    }
  }
  flush();
  return fx;
}

std::string dump_fixture(const ReplayFixture& fx) {
  std::ostringstream out;
  out << "# patternmine replay fixture\n";
  for (const auto& e : fx.entries) {
    out << "\n" << kEntryMarker << " step=" << e.step_tag << " digest=" << e.prompt_digest
        << "\n";
    if (!e.prompt.empty()) write_section(out, kPromptMarker, e.prompt);
    write_section(out, kResponseMarker, e.response);
  }
  return out.str();
}

ReplayFixture load_fixture(const std::filesystem::path& path) {
  return parse_fixture(read_text_file(path), path.string());
}

void save_fixture(const ReplayFixture& fx, const std::filesystem::path& path) {
  write_file_atomic(path, dump_fixture(fx));
}

CompletionResult ReplayProvider::complete(const CompletionRequest& req) {
  const FixtureEntry* e = fixture_.find(req.step_tag, req.digest);
  if (e == nullptr) {
    throw Error(ErrorCode::kReplayMiss, "no fixture entry for step " + req.step_tag +
                                            " with prompt digest " + req.digest.substr(0, 12));
  }
  return {e->response, 0, 0};
}

void ScriptedProvider::push(std::string_view step_tag, std::string response) {
  std::lock_guard lock(mu_);
  queues_[std::string(step_tag)].push_back(std::move(response));
}

CompletionResult ScriptedProvider::complete(const CompletionRequest& req) {
  std::lock_guard lock(mu_);
  auto it = queues_.find(req.step_tag);
  if (it == queues_.end() || it->second.empty()) {
    throw Error(ErrorCode::kReplayMiss, "no scripted response left for step " + req.step_tag);
  }
  std::string r = std::move(it->second.front());
  it->second.pop_front();
  return {std::move(r), 0, 0};
}

std::size_t ScriptedProvider::remaining() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [k, q] : queues_) n += q.size();
  return n;
}

CompletionResult RecordingProvider::complete(const CompletionRequest& req) {
  CompletionResult r = inner_->complete(req);
  std::lock_guard lock(mu_);
  recorded_.upsert({req.step_tag, req.digest, normalize_prompt(req.prompt()), r.content});
  return r;
}

ReplayFixture RecordingProvider::fixture() const {
  std::lock_guard lock(mu_);
  return recorded_;
}

HttpChatProvider::HttpChatProvider(std::string endpoint, std::string api_key,
                                   std::chrono::seconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  std::size_t scheme = endpoint.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::kConfigError, "endpoint '" + endpoint + "' has no scheme");
  }
  std::size_t slash = endpoint.find('/', scheme + 3);
  base_ = endpoint.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : endpoint.substr(slash);
}

CompletionResult HttpChatProvider::complete(const CompletionRequest& req) {
  nlohmann::json body;
  body["model"] = req.model_id;
  body["temperature"] = req.params.temperature;
  body["max_tokens"] = req.params.max_output_tokens;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : req.messages) {
    body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }

  httplib::Client cli(base_);
  cli.set_connection_timeout(std::chrono::seconds(10));
  cli.set_read_timeout(timeout_);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = cli.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw provider_error("request to " + base_ + " failed: " + httplib::to_string(res.error()),
                         true);
  }
  if (res->status == 429 || res->status >= 500) {
    throw provider_error("provider returned HTTP " + std::to_string(res->status), true);
  }
  if (res->status != 200) {
    throw provider_error("provider returned HTTP " + std::to_string(res->status) + ": " +
                             res->body.substr(0, 200),
                         false);
  }
  try {
    auto j = nlohmann::json::parse(res->body);
    CompletionResult out;
    out.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
    if (auto u = j.find("usage"); u != j.end()) {
      out.prompt_tokens = u->value("prompt_tokens", 0);
      out.completion_tokens = u->value("completion_tokens", 0);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw provider_error(std::string("malformed provider response: ") + e.what(), false);
  }
}

Gateway::Gateway(std::shared_ptr<Provider> provider, RetryPolicy retry, Clock clock)
    : provider_(std::move(provider)), retry_(std::move(retry)), clock_(std::move(clock)) {
  if (!retry_.sleep) {
    retry_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
  if (retry_.max_attempts < 1) retry_.max_attempts = 1;
}

ChatMessage Gateway::complete(Transcript& transcript, std::string_view user_message,
                              std::optional<StepId> step, std::string_view part) {
  if (text::trim(user_message).empty()) {
    throw Error(ErrorCode::kEmptyPrompt, "refusing to send an empty prompt");
  }
  ChatMessage user{Role::kUser, std::string(user_message), step, std::string(part), clock_()};

  CompletionRequest req;
  req.model_id = transcript.model_id;
  req.params = transcript.params;
  req.messages = transcript.messages;
  req.messages.push_back(user);
  req.step_tag = fixture_tag(step, part);
  req.digest = prompt_digest(user_message);

  CompletionResult result;
  for (int attempt = 1;; ++attempt) {
    try {
      result = provider_->complete(req);
      break;
    } catch (const Error& e) {
      bool retry = e.code() == ErrorCode::kProviderError && e.transient() &&
                   attempt < retry_.max_attempts;
      if (!retry) throw;
      retry_.sleep(retry_.base_delay * (1 << (attempt - 1)));
    }
  }
  if (result.content.empty()) {
    throw Error(ErrorCode::kProviderError, "provider returned an empty message");
  }
  ChatMessage reply{Role::kAssistant, std::move(result.content), step, std::string(part),
                    clock_()};
  transcript.messages.push_back(std::move(user));
  transcript.messages.push_back(reply);
  return reply;
}

ReplayFixture record(const Transcript& transcript, const std::filesystem::path& path) {
  ReplayFixture fx;
  const auto& msgs = transcript.messages;
  for (std::size_t i = 0; i + 1 < msgs.size(); ++i) {
    if (msgs[i].role != Role::kUser || msgs[i + 1].role != Role::kAssistant) continue;
    fx.upsert({fixture_tag(msgs[i].step_tag, msgs[i].part), prompt_digest(msgs[i].content),
               normalize_prompt(msgs[i].content), msgs[i + 1].content});
    ++i;
  }
  if (fx.entries.empty()) {
    throw Error(ErrorCode::kIoError, "refusing to record a transcript with no exchanges");
  }
  save_fixture(fx, path);
  return fx;
}

}  // namespace patternmine
