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

#include <chrono>

#include <json.hpp>

#include "patternmine/error.h"
#include "patternmine/file_io.h"
#include "patternmine/gateway.h"
#include "support/mock_chat.h"
#include "support/support.h"

namespace patternmine {
namespace {

using namespace std::chrono_literals;

template <typename Fn>
Error error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an Error";
  return Error(ErrorCode::kInvalidArgument, "none");
}

std::string fixed_time() { return "2026-01-01T00:00:00Z"; }

// Digests below were computed with Python's hashlib, not with this code.
TEST(Digest, IsSha256OfTheNormalizedPrompt) {
  EXPECT_EQ(prompt_digest("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(prompt_digest(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(prompt_digest("List the patterns identified so far."),
            "5215d1ac375bdf53b50d7d29c9217cc799f17f2b50d924c5a1aaf58601f9cb1d");
  EXPECT_EQ(prompt_digest("line one  \r\nline two\t\r\n\r\n\n"),
            "b6858b03a6cae635deeaeab09a74e598979b72c917cbfff0bb3fe2cd05111dbc");
}

TEST(Digest, NormalizationAndTags) {
  EXPECT_EQ(normalize_prompt("a \r\nb\n\n"), "a\nb");
  EXPECT_EQ(fixture_tag(StepId::kRefine, "list_patterns"), "refine");
  EXPECT_EQ(fixture_tag(std::nullopt, "reflection"), "reflection");
  EXPECT_EQ(fixture_tag(std::nullopt, ""), "none");
}

TEST(Fixture, RoundTripsAwkwardBodies) {
  ReplayFixture fx;
  fx.upsert({"extract_solutions", prompt_digest("P1\n>>> not a marker"), "P1\n>>> not a marker",
             ">>> step=x\n--- response\n\\backslash\n\nend"});
  fx.upsert({"refine", prompt_digest("P2"), "P2", "trailing blank follows\n\n"});
  fx.upsert({"reflection", prompt_digest("P3"), "", "no prompt kept"});
  std::string text = dump_fixture(fx);
  ReplayFixture back = parse_fixture(text);
  EXPECT_EQ(back, fx);
  EXPECT_EQ(dump_fixture(back), text);
}

TEST(Fixture, UpsertReplacesSameKey) {
  ReplayFixture fx;
  fx.upsert({"refine", "d1", "", "old"});
  fx.upsert({"refine", "d1", "", "new"});
  fx.upsert({"define_problems", "d1", "", "other"});
  ASSERT_EQ(fx.entries.size(), 2u);
  EXPECT_EQ(fx.find("refine", "d1")->response, "new");
  EXPECT_EQ(fx.find("refine", "d2"), nullptr);
}

TEST(Fixture, HandWrittenEntriesMayOmitTheDigest) {
  ReplayFixture fx = parse_fixture(
      ">>> step=refine\n--- prompt\nList the patterns identified so far.\r\n--- response\n"
      "1. Data Preprocessing\n\n\n");
  ASSERT_EQ(fx.entries.size(), 1u);
  EXPECT_EQ(fx.entries[0].prompt_digest,
            "5215d1ac375bdf53b50d7d29c9217cc799f17f2b50d924c5a1aaf58601f9cb1d");
  EXPECT_EQ(fx.entries[0].response, "1. Data Preprocessing");
}

TEST(Fixture, MalformedTextIsAnIoError) {
  auto code = [](std::string_view t) { return error_of([&] { parse_fixture(t); }).code(); };
  EXPECT_EQ(code(">>> step=refine digest=abc\n--- prompt\nsomething else\n--- response\nx\n"),
            ErrorCode::kIoError);
  EXPECT_EQ(code(">>> step=refine digest=abc\n--- prompt\nx\n"), ErrorCode::kIoError);
  EXPECT_EQ(code(">>> step=refine\n--- response\nx\n"), ErrorCode::kIoError);
  EXPECT_EQ(code(">>> refine\n--- response\nx\n"), ErrorCode::kIoError);
  EXPECT_EQ(error_of([] { load_fixture("/nonexistent/fixture.txt"); }).code(),
            ErrorCode::kIoError);
}

TEST(Fixture, CheckedInWorkedFixtureParses) {
  worked::WorkedFixture worked;
  ReplayFixture fx = load_fixture(worked.replay_path());
  EXPECT_EQ(fx.entries.size(), 13u);
  for (const auto& e : fx.entries) {
    EXPECT_FALSE(e.response.empty()) << e.step_tag;
    EXPECT_EQ(prompt_digest(e.prompt), e.prompt_digest) << e.step_tag;
  }
}

class GatewayTest : public ::testing::Test {
 protected:
  Transcript transcript;
  void SetUp() override {
    transcript.model_id = "gpt-4";
  }
};

TEST_F(GatewayTest, AppendsBothMessagesOnSuccess) {
  auto scripted = std::make_shared<ScriptedProvider>();
  scripted->push("refine", "One\nTwo");
  Gateway gw(scripted, {}, fixed_time);
  ChatMessage reply = gw.complete(transcript, "List the patterns identified so far.",
                                  StepId::kRefine, "list_patterns");
  EXPECT_EQ(reply.content, "One\nTwo");
  ASSERT_EQ(transcript.messages.size(), 2u);
  EXPECT_EQ(transcript.messages[0].role, Role::kUser);
  EXPECT_EQ(transcript.messages[0].part, "list_patterns");
  EXPECT_EQ(transcript.messages[1].role, Role::kAssistant);
  EXPECT_EQ(transcript.messages[1].timestamp, "2026-01-01T00:00:00Z");
  EXPECT_EQ(scripted->remaining(), 0u);
}

TEST_F(GatewayTest, FailuresLeaveTheTranscriptAlone) {
  auto scripted = std::make_shared<ScriptedProvider>();
  Gateway gw(scripted, {}, fixed_time);
  EXPECT_EQ(error_of([&] { gw.complete(transcript, "hi", StepId::kRefine); }).code(),
            ErrorCode::kReplayMiss);
  EXPECT_EQ(error_of([&] { gw.complete(transcript, " \n\t", StepId::kRefine); }).code(),
            ErrorCode::kEmptyPrompt);
  scripted->push("refine", "");
  EXPECT_EQ(error_of([&] { gw.complete(transcript, "hi", StepId::kRefine); }).code(),
            ErrorCode::kProviderError);
  EXPECT_TRUE(transcript.messages.empty());
}

TEST_F(GatewayTest, ReplayAnswersByTagAndDigest) {
  ReplayFixture fx;
  fx.upsert({"refine", prompt_digest("Q"), "Q", "A"});
  Gateway gw(std::make_shared<ReplayProvider>(fx), {}, fixed_time);
  EXPECT_EQ(gw.complete(transcript, "Q  \r\n", StepId::kRefine).content, "A");
  EXPECT_EQ(error_of([&] { gw.complete(transcript, "Q", StepId::kConsolidate); }).code(),
            ErrorCode::kReplayMiss);
  EXPECT_EQ(error_of([&] { gw.complete(transcript, "Q?", StepId::kRefine); }).code(),
            ErrorCode::kReplayMiss);
}

class Flaky : public Provider {
 public:
  explicit Flaky(int failures, bool transient) : failures_(failures), transient_(transient) {}
  CompletionResult complete(const CompletionRequest&) override {
    ++calls;
    if (calls <= failures_) throw Error(ErrorCode::kProviderError, "flaky", transient_);
    return {"ok", 1, 1};
  }
  int calls = 0;

 private:
  int failures_;
  bool transient_;
};

TEST_F(GatewayTest, RetriesTransientErrorsWithBackoff) {
  std::vector<std::chrono::milliseconds> waits;
  RetryPolicy policy{3, 100ms, [&](std::chrono::milliseconds d) { waits.push_back(d); }};

  auto flaky = std::make_shared<Flaky>(2, true);
  Gateway gw(flaky, policy, fixed_time);
  EXPECT_EQ(gw.complete(transcript, "hi").content, "ok");
  EXPECT_EQ(flaky->calls, 3);
  EXPECT_EQ(waits, (std::vector<std::chrono::milliseconds>{100ms, 200ms}));

  waits.clear();
  auto hopeless = std::make_shared<Flaky>(5, true);
  Gateway gw2(hopeless, policy, fixed_time);
  Error e = error_of([&] { gw2.complete(transcript, "hi"); });
  EXPECT_EQ(e.code(), ErrorCode::kProviderError);
  EXPECT_EQ(hopeless->calls, 3);

  auto permanent = std::make_shared<Flaky>(1, false);
  Gateway gw3(permanent, policy, fixed_time);
  EXPECT_EQ(error_of([&] { gw3.complete(transcript, "hi"); }).code(), ErrorCode::kProviderError);
  EXPECT_EQ(permanent->calls, 1);
}

TEST_F(GatewayTest, RecordingKeepsEachExchange) {
  auto scripted = std::make_shared<ScriptedProvider>();
  scripted->push("refine", "A1");
  scripted->push("reflection", "A2");
  auto recording = std::make_shared<RecordingProvider>(scripted);
  Gateway gw(recording, {}, fixed_time);
  gw.complete(transcript, "Q1 ", StepId::kRefine);
  gw.complete(transcript, "Q2", std::nullopt, "reflection");
  ReplayFixture fx = recording->fixture();
  ASSERT_EQ(fx.entries.size(), 2u);
  EXPECT_EQ(fx.entries[0], (FixtureEntry{"refine", prompt_digest("Q1"), "Q1", "A1"}));
  EXPECT_EQ(fx.entries[1].step_tag, "reflection");

  // Replaying the recording reproduces the transcript.
  Transcript again;
  Gateway replay(std::make_shared<ReplayProvider>(fx), {}, fixed_time);
  replay.complete(again, "Q1 ", StepId::kRefine);
  replay.complete(again, "Q2", std::nullopt, "reflection");
  EXPECT_EQ(again.messages, transcript.messages);
}

TEST_F(GatewayTest, RecordWritesTheTranscriptAsAFixture) {
  testing::TempDir dir("record");
  EXPECT_EQ(error_of([&] { record(transcript, dir / "x.fixture"); }).code(), ErrorCode::kIoError);
  auto scripted = std::make_shared<ScriptedProvider>();
  scripted->push("refine", "first");
  scripted->push("refine", "second");
  Gateway gw(scripted, {}, fixed_time);
  gw.complete(transcript, "Q", StepId::kRefine);
  gw.complete(transcript, "Q", StepId::kRefine);
  ReplayFixture fx = record(transcript, dir / "x.fixture");
  ASSERT_EQ(fx.entries.size(), 1u);
  EXPECT_EQ(fx.entries[0].response, "second");
  EXPECT_EQ(load_fixture(dir / "x.fixture"), fx);
}

using MockServer = testing::MockChat;

TEST_F(GatewayTest, HttpProviderSpeaksChatCompletions) {
  MockServer mock;
  auto http = std::make_shared<HttpChatProvider>(mock.endpoint(), "sk-test", 5s);
  Gateway gw(http, {}, fixed_time);
  transcript.params.temperature = 0.2;
  transcript.params.max_output_tokens = 512;
  gw.complete(transcript, "first", StepId::kRefine);
  EXPECT_EQ(gw.complete(transcript, "second", StepId::kRefine).content, "Hello there");
  auto body = nlohmann::json::parse(mock.last_body);
  EXPECT_EQ(body["model"], "gpt-4");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.2);
  EXPECT_EQ(body["max_tokens"], 512);
  ASSERT_EQ(body["messages"].size(), 3u);
  EXPECT_EQ(body["messages"][0]["role"], "user");
  EXPECT_EQ(body["messages"][1]["role"], "assistant");
  EXPECT_EQ(body["messages"][2]["content"], "second");
  EXPECT_EQ(mock.last_auth, "Bearer sk-test");
}

TEST_F(GatewayTest, HttpStatusMapsToTransience) {
  MockServer mock;
  HttpChatProvider http(mock.endpoint(), "", 5s);
  CompletionRequest req;
  req.messages.push_back({Role::kUser, "x", std::nullopt, "", ""});

  mock.status = 503;
  Error e = error_of([&] { http.complete(req); });
  EXPECT_EQ(e.code(), ErrorCode::kProviderError);
  EXPECT_TRUE(e.transient());
  mock.status = 429;
  EXPECT_TRUE(error_of([&] { http.complete(req); }).transient());
  mock.status = 401;
  EXPECT_FALSE(error_of([&] { http.complete(req); }).transient());
  mock.status = 200;
  mock.reply = R"({"choices":[]})";
  e = error_of([&] { http.complete(req); });
  EXPECT_EQ(e.code(), ErrorCode::kProviderError);
  EXPECT_FALSE(e.transient());
}

TEST_F(GatewayTest, UnreachableEndpointIsTransient) {
  int port;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  HttpChatProvider http("http://127.0.0.1:" + std::to_string(port) + "/v1/chat", "", 2s);
  CompletionRequest req;
  req.messages.push_back({Role::kUser, "x", std::nullopt, "", ""});
  Error e = error_of([&] { http.complete(req); });
  EXPECT_EQ(e.code(), ErrorCode::kProviderError);
  EXPECT_TRUE(e.transient());
}

}  // namespace
}  // namespace patternmine
