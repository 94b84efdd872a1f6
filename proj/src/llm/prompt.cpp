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

#include "peepseek/llm/prompt.h"

#include "peepseek/ir/printer.h"

namespace peepseek::llm {

const char *to_string(Feedback::Kind k) {
  switch (k) {
  case Feedback::Kind::SyntaxError: return "syntax_error";
  case Feedback::Kind::Incorrect: return "incorrect";
  case Feedback::Kind::VerifierError: return "verifier_error";
  }
  return "?";
}

namespace {

constexpr std::string_view kPreamble =
    "You are an expert in LLVM IR and peephole optimization.\n\n";

constexpr std::string_view kAnswerFormat =
    "Answer with exactly one fenced ```llvm code block containing the complete function "
    "definition, and nothing else inside the block.\n";

std::string fenced(std::string_view body, std::string_view lang = "llvm") {
  std::string s = "```" + std::string(lang) + "\n" + std::string(body);
  if (s.back() != '\n')
    s += '\n';
  return s + "```\n";
}

std::string_view feedback_label(Feedback::Kind k) {
  switch (k) {
  case Feedback::Kind::SyntaxError:
    return "It was rejected by the LLVM optimizer with this error";
  case Feedback::Kind::Incorrect:
    return "It is not a correct replacement. The verifier found this counterexample";
  case Feedback::Kind::VerifierError:
    return "The verifier could not check it and reported this error";
  }
  return "";
}

} // namespace

PromptText build_initial_prompt(const extract::WrappedFunction &f) {
  PromptText p;
  p.kind = PromptText::Kind::Initial;
  p.function_digest = f.digest.hex();
  p.attempt = 0;
  p.text = std::string(kPreamble) +
           "Optimize the LLVM IR function below. Produce a function that is equivalent to it "
           "or refines it, is more efficient, and keeps the same function name and "
           "signature. If the function is already optimal, return it unchanged.\n\n" +
           fenced(ir::print_function(f.func)) + "\n" + std::string(kAnswerFormat);
  return p;
}

PromptText build_feedback_prompt(const extract::WrappedFunction &f, const Candidate &c,
                                 const Feedback &fb) {
  PromptText p;
  p.kind = PromptText::Kind::Feedback;
  p.function_digest = f.digest.hex();
  p.attempt = c.attempt + 1;
  std::string payload = fb.payload.empty() ? "(no details)" : fb.payload;
  p.text = std::string(kPreamble) + "Original function:\n\n" + fenced(ir::print_function(f.func)) +
           "\nYou proposed this optimized version:\n\n" + fenced(c.ir_text) + "\n" +
           std::string(feedback_label(fb.kind)) + " (" + to_string(fb.kind) + "):\n\n" +
           fenced(payload, "") +
           "\nProduce a corrected version that is equivalent to the original function or "
           "refines it, is more efficient, and keeps the same function name and signature.\n\n" +
           std::string(kAnswerFormat);
  return p;
}

Result<Candidate, ExtractionError> parse_candidate(std::string_view response, int attempt) {
  std::string_view body = response;
  std::size_t open = response.find("```");
  if (open != std::string_view::npos) {
    std::size_t line_end = response.find('\n', open);
    if (line_end == std::string_view::npos) {
      body = {};
    } else {
      std::size_t start = line_end + 1;
      std::size_t close = response.find("```", start);
      body = response.substr(start, close == std::string_view::npos ? std::string_view::npos
                                                                    : close - start);
    }
  }
  if (body.find("define ") == std::string_view::npos)
    return ExtractionError{};
  return Candidate{std::string(body), attempt, std::string(response)};
}

} // namespace peepseek::llm
