// Copyright 2026 The PeepSeek Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "peepseek/ir/parser.h"
#include "peepseek/ir/printer.h"
#include "peepseek/llm/backend.h"
#include "peepseek/llm/prompt.h"

using namespace peepseek;
using namespace peepseek::llm;

namespace {

std::string slurp(const std::string &rel) {
  std::ifstream in(std::string(PEEPSEEK_FIXTURES) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

extract::WrappedFunction wrapped(const std::string &rel) {
  auto m = ir::parse_module(slurp(rel));
  REQUIRE(m);
  extract::WrappedFunction w;
  w.func = m.value().functions.at(0);
  w.digest = extract::digest(w.func);
  return w;
}

std::size_t occurrences(const std::string &hay, const std::string &needle) {
  std::size_t n = 0;
  for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1))
    ++n;
  return n;
}

/// Local chat-completions server on an ephemeral port.
struct FakeServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  template <typename Handler>
  explicit FakeServer(Handler h) {
    server.Post("/v1/chat/completions", h);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~FakeServer() {
    server.stop();
    thread.join();
  }
  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  }
};

std::string chat_reply(const std::string &content) {
  nlohmann::json j;
  j["choices"] = nlohmann::json::array({{{"message", {{"role", "assistant"}, {"content", content}}}}});
  return j.dump();
}

} // namespace

TEST_CASE("initial prompt embeds the printed function exactly once") {
  auto f = wrapped("pairs/extracted_vector_clamp.ll");
  PromptText p = build_initial_prompt(f);
  CHECK(p.kind == PromptText::Kind::Initial);
  CHECK(occurrences(p.text, ir::print_function(f.func)) == 1);
  CHECK(p.text.find("@src(ptr %inp.0, i64 %index)") != std::string::npos);
  CHECK(p.text.find("return it unchanged") != std::string::npos);
  CHECK(p.text.find("```llvm") != std::string::npos);
  CHECK(p.function_digest == f.digest.hex());
  CHECK(p.attempt == 0);
  CHECK(build_initial_prompt(f).text == p.text);
}

TEST_CASE("feedback prompt carries original, candidate and payload verbatim") {
  auto f = wrapped("pairs/extracted_vector_clamp.ll");
  Candidate c{slurp("pairs/candidate_invalid.ll"), 0, ""};
  std::string diag = "candidate.ll:5:8: error: expected instruction opcode\n"
                     "  %1 = smax <4 x i32> %wide.load, zeroinitializer\n       ^\n";
  PromptText p = build_feedback_prompt(f, c, {Feedback::Kind::SyntaxError, diag});
  CHECK(p.kind == PromptText::Kind::Feedback);
  CHECK(p.attempt == 1);
  CHECK(p.function_digest == f.digest.hex());
  CHECK(occurrences(p.text, ir::print_function(f.func)) == 1);
  CHECK(occurrences(p.text, c.ir_text) == 1);
  CHECK(occurrences(p.text, diag) == 1);
  CHECK(p.text.find("error: expected instruction opcode") != std::string::npos);

  std::string cex = "ERROR: Value mismatch\n\nExample:\ni8 %x = #x01 (1)\n\n"
                    "Source value: #x02 (2)\nTarget value: #x01 (1)\n";
  PromptText q = build_feedback_prompt(f, c, {Feedback::Kind::Incorrect, cex});
  CHECK(occurrences(q.text, cex) == 1);

  PromptText e = build_feedback_prompt(f, c, {Feedback::Kind::VerifierError, ""});
  CHECK(e.text.find("(no details)") != std::string::npos);
}

TEST_CASE("parse_candidate: fences, bare IR and refusals") {
  auto fenced = parse_candidate("Here you go:\n```llvm\ndefine i8 @src(i8 %x) {\n  ret i8 %x\n}\n```\nDone.", 1);
  REQUIRE(fenced);
  CHECK(fenced->ir_text == "define i8 @src(i8 %x) {\n  ret i8 %x\n}\n");
  CHECK(fenced->attempt == 1);
  CHECK(fenced->raw_response.rfind("Here you go", 0) == 0);

  std::string bare = "define i8 @src(i8 %x) {\n  ret i8 %x\n}\n";
  auto b = parse_candidate(bare, 0);
  REQUIRE(b);
  CHECK(b->ir_text == bare);

  CHECK_FALSE(parse_candidate("I cannot optimize this.", 0));
  // Only the first block counts.
  auto two = parse_candidate("```\nno ir here\n```\n```llvm\ndefine i8 @src() {\n  ret i8 0\n}\n```", 0);
  CHECK_FALSE(two);
  auto unterminated = parse_candidate("```llvm\ndefine i8 @src() {\n  ret i8 0\n}\n", 0);
  REQUIRE(unterminated);
  CHECK(unterminated->ir_text == "define i8 @src() {\n  ret i8 0\n}\n");
}

TEST_CASE("replay backend answers by digest and attempt") {
  auto f = wrapped("pairs/extracted_vector_clamp.ll");
  auto t = std::make_shared<Transcript>();
  t->add({f.digest.hex(), 0, "```llvm\n" + slurp("pairs/candidate_invalid.ll") + "```\n"});
  t->add({f.digest.hex(), 1, "```llvm\n" + slurp("pairs/candidate_corrected.ll") + "```\n"});
  ReplayBackend replay(t);
  PromptText p0 = build_initial_prompt(f);
  auto r0 = replay.complete(p0);
  REQUIRE(r0);
  CHECK(r0.value().find("smax <4 x i32>") != std::string::npos);
  auto c0 = parse_candidate(r0.value(), 0);
  REQUIRE(c0);
  auto r1 = replay.complete(build_feedback_prompt(f, c0.value(), {Feedback::Kind::SyntaxError, "x"}));
  REQUIRE(r1);
  CHECK(r1.value().find("@llvm.smax.v4i32") != std::string::npos);
  PromptText p2 = p0;
  p2.attempt = 2;
  auto r2 = replay.complete(p2);
  REQUIRE_FALSE(r2);
  CHECK(r2.error().kind == AgentError::Kind::ExhaustedTranscript);

  ReplayBackend empty(std::make_shared<Transcript>());
  auto e = empty.complete(p0);
  REQUIRE_FALSE(e);
  CHECK(e.error().kind == AgentError::Kind::ExhaustedTranscript);

  auto round = Transcript::parse(t->to_jsonl());
  REQUIRE(round);
  CHECK(round->size() == 2);
  CHECK(*round->find(f.digest.hex(), 1) == *t->find(f.digest.hex(), 1));
  CHECK_FALSE(Transcript::parse("{\"attempt\": 0}\n"));
}

TEST_CASE("recording backend captures live responses") {
  auto sink = std::make_shared<Transcript>();
  RecordingBackend rec(std::make_unique<FunctionBackend>(
                           [](const PromptText &p) -> Result<std::string, AgentError> {
                             return "reply " + std::to_string(p.attempt);
                           }),
                       sink, std::make_shared<std::mutex>());
  PromptText p;
  p.function_digest = "ab";
  p.attempt = 1;
  REQUIRE(rec.complete(p));
  REQUIRE(sink->find("ab", 1));
  CHECK(*sink->find("ab", 1) == "reply 1");
}

TEST_CASE("http backend speaks chat completions") {
  std::string auth, body;
  FakeServer srv([&](const httplib::Request &req, httplib::Response &res) {
    auth = req.get_header_value("Authorization");
    body = req.body;
    res.set_content(chat_reply("```llvm\ndefine i8 @src(i8 %x) {\n  ret i8 %x\n}\n```"),
                     "application/json");
  });
  ::setenv("PEEPSEEK_TEST_KEY", "sekrit", 1);
  AgentConfig cfg;
  cfg.backend = AgentConfig::Backend::HttpApi;
  cfg.endpoint = srv.endpoint();
  cfg.model = "test-model";
  cfg.api_key_env = "PEEPSEEK_TEST_KEY";
  cfg.requests_per_second = 0;
  HttpBackend http(cfg);
  PromptText p;
  p.text = "optimize me";
  auto r = http.complete(p);
  REQUIRE(r);
  CHECK(r.value().find("define i8 @src") != std::string::npos);
  CHECK(auth == "Bearer sekrit");
  auto j = nlohmann::json::parse(body);
  CHECK(j["model"] == "test-model");
  CHECK(j["temperature"] == 0.0);
  CHECK(j["messages"][0]["role"] == "user");
  CHECK(j["messages"][0]["content"] == "optimize me");
  CHECK(http.model_id() == "test-model");
}

TEST_CASE("http backend retries 429 three times at most") {
  std::atomic<int> hits{0};
  int fail_first = 2;
  FakeServer srv([&](const httplib::Request &, httplib::Response &res) {
    if (++hits <= fail_first) {
      res.status = 429;
      return;
    }
    res.set_content(chat_reply("ok"), "application/json");
  });
  AgentConfig cfg;
  cfg.endpoint = srv.endpoint();
  cfg.requests_per_second = 0;
  cfg.backoff_ms = 5;
  HttpBackend http(cfg);
  auto r = http.complete({});
  REQUIRE(r);
  CHECK(r.value() == "ok");
  CHECK(hits == 3);

  hits = 0;
  fail_first = 100;
  auto limited = http.complete({});
  REQUIRE_FALSE(limited);
  CHECK(limited.error().kind == AgentError::Kind::RateLimited);
  CHECK(hits == 3);
}

TEST_CASE("http backend failure paths") {
  AgentConfig cfg;
  cfg.requests_per_second = 0;
  cfg.timeout_seconds = 1;
  {
    // Grab a port, then close it so nothing listens there.
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    REQUIRE(::bind(fd, reinterpret_cast<sockaddr *>(&addr), sizeof addr) == 0);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr *>(&addr), &len);
    ::close(fd);
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(ntohs(addr.sin_port)) + "/v1/chat/completions";
  }
  auto start = std::chrono::steady_clock::now();
  auto r = HttpBackend(cfg).complete({});
  REQUIRE_FALSE(r);
  CHECK(r.error().kind == AgentError::Kind::Transport);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(2));

  FakeServer slow([](const httplib::Request &, httplib::Response &res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1500));
    res.set_content(chat_reply("late"), "application/json");
  });
  cfg.endpoint = slow.endpoint();
  cfg.timeout_seconds = 0.3;
  auto t = HttpBackend(cfg).complete({});
  REQUIRE_FALSE(t);
  CHECK(t.error().kind == AgentError::Kind::Timeout);

  FakeServer broken([](const httplib::Request &, httplib::Response &res) {
    res.status = 500;
    res.set_content("boom", "text/plain");
  });
  cfg.endpoint = broken.endpoint();
  cfg.timeout_seconds = 5;
  auto b = HttpBackend(cfg).complete({});
  REQUIRE_FALSE(b);
  CHECK(b.error().kind == AgentError::Kind::Transport);
  CHECK(b.error().message.find("500") != std::string::npos);
}
