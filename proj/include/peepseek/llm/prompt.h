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

#ifndef PEEPSEEK_LLM_PROMPT_H
#define PEEPSEEK_LLM_PROMPT_H

#include <string>
#include <string_view>

#include "peepseek/extract/extractor.h"
#include "peepseek/support/result.h"

namespace peepseek::llm {

inline constexpr std::string_view kPromptTemplateId = "peephole-v1";

struct PromptText {
  enum class Kind { Initial, Feedback };
  Kind kind = Kind::Initial;
  std::string text;
  /// Digest (hex) of the original function the prompt embeds; replay
  /// transcripts are keyed by it, not by the prompt wording.
  std::string function_digest;
  int attempt = 0;
};

struct Candidate {
  std::string ir_text;
  int attempt = 0;
  std::string raw_response;
};

struct Feedback {
  enum class Kind { SyntaxError, Incorrect, VerifierError };
  Kind kind;
  std::string payload;
};

const char *to_string(Feedback::Kind k);

PromptText build_initial_prompt(const extract::WrappedFunction &f);

/// Stateless: the original, the rejected candidate and the feedback
/// payload, with no earlier conversation.
PromptText build_feedback_prompt(const extract::WrappedFunction &f, const Candidate &c,
                                 const Feedback &fb);

struct ExtractionError {
  std::string reason = "no-ir-found";
};

/// First fenced block of the response (language tag dropped), or the whole
/// response when it has no fence.
Result<Candidate, ExtractionError> parse_candidate(std::string_view response, int attempt);

} // namespace peepseek::llm

#endif // PEEPSEEK_LLM_PROMPT_H
