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

#ifndef PEEPSEEK_TOOLCHAIN_ADAPTERS_H
#define PEEPSEEK_TOOLCHAIN_ADAPTERS_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "peepseek/oracle/equivalence.h"
#include "peepseek/support/result.h"

namespace peepseek::toolchain {

struct ToolConfig {
  std::string opt_path = "opt";
  std::string llc_path = "llc";
  std::string mca_path = "llvm-mca";
  std::string alive_tv_path = "alive-tv";
  std::string target_triple = "x86_64-unknown-unknown";
  std::string cpu = "btver2";
  double timeout_seconds = 60;
  std::vector<std::string> alive_flags = {"--disable-undef-input"};
  bool keep_temps = false;
  std::string temp_root; // system temp dir when empty
};

struct ToolError {
  enum class Kind { Spawn, Timeout, LoweringFailed, ParseFailed };
  Kind kind;
  std::string message;
};

const char *to_string(ToolError::Kind k);

struct PreprocessResult {
  enum class Kind { Optimized, SyntaxError };
  Kind kind;
  std::string text; // optimized IR, or the diagnostic verbatim
};

struct RefinementVerdict {
  enum class Kind { Correct, Incorrect, VerifierError, Timeout };
  Kind kind;
  std::string text; // counterexample block or error message
  /// VerifierError only: whether a new candidate could plausibly fix it
  /// (a signature mismatch can, an unsupported construct cannot).
  bool fixable = true;
};

const char *to_string(RefinementVerdict::Kind k);

/// `opt -passes=default<O3> -S in.ll -o out.ll`. The input is re-printed
/// with declarations for its callees when it parses; otherwise it is passed
/// through untouched so the optimizer reports the problem.
Result<PreprocessResult, ToolError> preprocess(const ToolConfig &cfg, std::string_view ir_text);

/// Same contract, computed by the builtin canonicalizer.
PreprocessResult preprocess_builtin(std::string_view ir_text);

/// `llc -O3` for the configured triple and cpu, then `llvm-mca`; returns
/// the "Total Cycles:" figure.
Result<uint64_t, ToolError> estimate_cycles(const ToolConfig &cfg, std::string_view ir_text);

/// `alive-tv <flags> src.ll tgt.ll` with the functions renamed @src and @tgt.
Result<RefinementVerdict, ToolError> verify_refinement(const ToolConfig &cfg,
                                                       std::string_view src_text,
                                                       std::string_view tgt_text);

/// Maps an alive-tv run (stdout+stderr, exit code) onto a verdict.
RefinementVerdict parse_alive_output(const std::string &output, int exit_code);

/// The builtin oracle behind the same verdict type. Unsupported pairs are
/// unfixable VerifierErrors.
RefinementVerdict verify_builtin(std::string_view src_text, std::string_view tgt_text,
                                 const oracle::EquivalenceOptions &options = {});

/// Whether both functions lie in the oracle's subset.
bool builtin_supports(std::string_view ir_text);

} // namespace peepseek::toolchain

#endif // PEEPSEEK_TOOLCHAIN_ADAPTERS_H
