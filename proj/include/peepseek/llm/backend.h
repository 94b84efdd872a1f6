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

#ifndef PEEPSEEK_LLM_BACKEND_H
#define PEEPSEEK_LLM_BACKEND_H

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "peepseek/llm/prompt.h"
#include "peepseek/support/result.h"

namespace peepseek::llm {

struct AgentConfig {
  enum class Backend { HttpApi, ScriptedReplay };
  Backend backend = Backend::ScriptedReplay;
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o";
  std::string api_key_env = "PEEPSEEK_API_KEY";
  std::string transcript_path;
  int max_reattempts = 2;
  double timeout_seconds = 120;
  double temperature = 0;
  /// Process-wide request rate for the http backend.
  double requests_per_second = 2;
  /// First backoff after a 429; doubles on each retry.
  int backoff_ms = 1000;
};

struct AgentError {
  enum class Kind { Timeout, Transport, ExhaustedTranscript, RateLimited };
  Kind kind;
  std::string message;
};

const char *to_string(AgentError::Kind k);

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual Result<std::string, AgentError> complete(const PromptText &prompt) = 0;
  virtual std::string model_id() const = 0;
};

/// Recorded responses keyed by (function digest, attempt).
class Transcript {
 public:
  struct Entry {
    std::string function_digest;
    int attempt = 0;
    std::string response;
  };

  /// JSON Lines; blank lines are skipped. Errors name the offending line.
  static Result<Transcript, std::string> load(const std::string &path);
  static Result<Transcript, std::string> parse(std::string_view jsonl);

  void add(Entry e);
  const std::string *find(const std::string &digest, int attempt) const;
  std::size_t size() const { return entries_.size(); }
  std::string to_jsonl() const;

 private:
  std::map<std::pair<std::string, int>, std::string> entries_;
  std::vector<std::pair<std::string, int>> order_;
};

class ReplayBackend : public CompletionBackend {
 public:
  explicit ReplayBackend(std::shared_ptr<const Transcript> transcript)
      : transcript_(std::move(transcript)) {}
  Result<std::string, AgentError> complete(const PromptText &prompt) override;
  std::string model_id() const override { return "scripted-replay"; }

 private:
  std::shared_ptr<const Transcript> transcript_;
};

/// Arbitrary scripted behaviour, for tests and dry runs.
class FunctionBackend : public CompletionBackend {
 public:
  using Fn = std::function<Result<std::string, AgentError>(const PromptText &)>;
  explicit FunctionBackend(Fn fn, std::string id = "scripted") : fn_(std::move(fn)), id_(std::move(id)) {}
  Result<std::string, AgentError> complete(const PromptText &prompt) override { return fn_(prompt); }
  std::string model_id() const override { return id_; }

 private:
  Fn fn_;
  std::string id_;
};

/// OpenAI-style chat completions over http(s) with bearer auth from the
/// configured environment variable. A 429 is retried twice with doubling
/// backoff before surfacing as RateLimited.
class HttpBackend : public CompletionBackend {
 public:
  explicit HttpBackend(AgentConfig cfg);
  Result<std::string, AgentError> complete(const PromptText &prompt) override;
  std::string model_id() const override { return cfg_.model; }

  /// Request body for a prompt.
  std::string request_body(const PromptText &prompt) const;

 private:
  AgentConfig cfg_;
};

/// Wraps another backend and appends every response it returns to a
/// transcript, so a live session can be replayed later.
class RecordingBackend : public CompletionBackend {
 public:
  RecordingBackend(std::unique_ptr<CompletionBackend> inner, std::shared_ptr<Transcript> sink,
                   std::shared_ptr<std::mutex> mu)
      : inner_(std::move(inner)), sink_(std::move(sink)), mu_(std::move(mu)) {}
  Result<std::string, AgentError> complete(const PromptText &prompt) override;
  std::string model_id() const override { return inner_->model_id(); }

 private:
  std::unique_ptr<CompletionBackend> inner_;
  std::shared_ptr<Transcript> sink_;
  std::shared_ptr<std::mutex> mu_;
};

} // namespace peepseek::llm

#endif // PEEPSEEK_LLM_BACKEND_H
