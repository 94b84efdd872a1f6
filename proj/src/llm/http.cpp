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

#include "httplib.h"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "peepseek/llm/backend.h"

namespace peepseek::llm {

namespace {

/// Process-wide token bucket shared by every http session.
class RateLimiter {
 public:
  void acquire(double per_second) {
    if (per_second <= 0)
      return;
    std::unique_lock lock(mu_);
    auto now = std::chrono::steady_clock::now();
    double burst = std::max(1.0, per_second);
    if (!started_) {
      tokens_ = burst;
      last_ = now;
      started_ = true;
    }
    tokens_ = std::min(burst, tokens_ + std::chrono::duration<double>(now - last_).count() * per_second);
    last_ = now;
    tokens_ -= 1;
    double wait = tokens_ < 0 ? -tokens_ / per_second : 0;
    lock.unlock();
    if (wait > 0)
      std::this_thread::sleep_for(std::chrono::duration<double>(wait));
  }

 private:
  std::mutex mu_;
  bool started_ = false;
  double tokens_ = 0;
  std::chrono::steady_clock::time_point last_;
};

RateLimiter &limiter() {
  static RateLimiter r;
  return r;
}

struct Url {
  std::string origin; // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string &url) {
  std::size_t scheme = url.find("://");
  std::size_t slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash == std::string::npos)
    return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

} // namespace

HttpBackend::HttpBackend(AgentConfig cfg) : cfg_(std::move(cfg)) {}

std::string HttpBackend::request_body(const PromptText &prompt) const {
  nlohmann::ordered_json body;
  body["model"] = cfg_.model;
  body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt.text}}});
  body["temperature"] = cfg_.temperature;
  return body.dump();
}

Result<std::string, AgentError> HttpBackend::complete(const PromptText &prompt) {
  Url url = split_url(cfg_.endpoint);
  httplib::Client client(url.origin);
  auto secs = std::chrono::duration<double>(cfg_.timeout_seconds);
  auto as_us = std::chrono::duration_cast<std::chrono::microseconds>(secs);
  client.set_connection_timeout(as_us);
  client.set_read_timeout(as_us);
  client.set_write_timeout(as_us);
  httplib::Headers headers;
  if (const char *key = std::getenv(cfg_.api_key_env.c_str()); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);
  std::string body = request_body(prompt);

  int backoff = cfg_.backoff_ms;
  for (int attempt = 1;; ++attempt) {
    limiter().acquire(cfg_.requests_per_second);
    auto res = client.Post(url.path, headers, body, "application/json");
    if (!res) {
      httplib::Error e = res.error();
      bool timeout = e == httplib::Error::ConnectionTimeout || e == httplib::Error::Read ||
                     e == httplib::Error::Write;
      return AgentError{timeout ? AgentError::Kind::Timeout : AgentError::Kind::Transport,
                        httplib::to_string(e)};
    }
    if (res->status == 429) {
      if (attempt >= 3)
        return AgentError{AgentError::Kind::RateLimited, "HTTP 429 after 3 tries"};
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
      continue;
    }
    if (res->status != 200)
      return AgentError{AgentError::Kind::Transport,
                        "HTTP " + std::to_string(res->status) + ": " + res->body};
    try {
      auto j = nlohmann::json::parse(res->body);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception &e) {
      return AgentError{AgentError::Kind::Transport, std::string("malformed response: ") + e.what()};
    }
  }
}

} // namespace peepseek::llm
