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

#include "peepseek/llm/backend.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace peepseek::llm {

const char *to_string(AgentError::Kind k) {
  switch (k) {
  case AgentError::Kind::Timeout: return "timeout";
  case AgentError::Kind::Transport: return "transport";
  case AgentError::Kind::ExhaustedTranscript: return "exhausted-transcript";
  case AgentError::Kind::RateLimited: return "rate-limited";
  }
  return "?";
}

Result<Transcript, std::string> Transcript::parse(std::string_view jsonl) {
  Transcript t;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    try {
      auto j = nlohmann::json::parse(line);
      t.add({j.at("function_digest").get<std::string>(), j.at("attempt").get<int>(),
             j.at("response").get<std::string>()});
    } catch (const std::exception &e) {
      return "transcript line " + std::to_string(n) + ": " + e.what();
    }
  }
  return t;
}

Result<Transcript, std::string> Transcript::load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return "cannot open transcript " + path;
  std::stringstream ss;
  ss << in.rdbuf();
  auto t = parse(ss.str());
  if (!t)
    return path + ": " + t.error();
  return t;
}

void Transcript::add(Entry e) {
  auto key = std::make_pair(std::move(e.function_digest), e.attempt);
  auto [it, fresh] = entries_.insert_or_assign(key, std::move(e.response));
  if (fresh)
    order_.push_back(key);
}

const std::string *Transcript::find(const std::string &digest, int attempt) const {
  auto it = entries_.find({digest, attempt});
  return it == entries_.end() ? nullptr : &it->second;
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const auto &key : order_) {
    nlohmann::ordered_json j;
    j["function_digest"] = key.first;
    j["attempt"] = key.second;
    j["response"] = entries_.at(key);
    out += j.dump() + "\n";
  }
  return out;
}

Result<std::string, AgentError> ReplayBackend::complete(const PromptText &prompt) {
  const std::string *r = transcript_ ? transcript_->find(prompt.function_digest, prompt.attempt)
                                     : nullptr;
  if (!r)
    return AgentError{AgentError::Kind::ExhaustedTranscript,
                      "no recorded response for " + prompt.function_digest + " attempt " +
                          std::to_string(prompt.attempt)};
  return *r;
}

Result<std::string, AgentError> RecordingBackend::complete(const PromptText &prompt) {
  auto r = inner_->complete(prompt);
  if (r) {
    std::lock_guard lock(*mu_);
    sink_->add({prompt.function_digest, prompt.attempt, r.value()});
  }
  return r;
}

} // namespace peepseek::llm
