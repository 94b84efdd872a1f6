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

#ifndef PEEPSEEK_PIPELINE_PIPELINE_H
#define PEEPSEEK_PIPELINE_PIPELINE_H

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "peepseek/catalog/catalog.h"
#include "peepseek/extract/extractor.h"
#include "peepseek/llm/backend.h"
#include "peepseek/pipeline/config.h"
#include "peepseek/toolchain/adapters.h"

namespace peepseek::pipeline {

struct Ruling {
  toolchain::RefinementVerdict verdict;
  std::string verifier; // "external" or "builtin"
};

/// The adapters one pipeline run talks to. Every hook takes the wall-clock
/// seconds it may use.
struct Toolbox {
  std::function<Result<toolchain::PreprocessResult, toolchain::ToolError>(std::string_view, double)>
      preprocess;
  /// Empty in count-only mode; nullopt when estimation fails.
  std::function<std::optional<uint64_t>(std::string_view, double)> cycles;
  std::function<Result<Ruling, toolchain::ToolError>(std::string_view src, std::string_view tgt,
                                                     double)>
      verify;
  /// Set when the verifier that will rule is the builtin oracle: functions
  /// outside its subset are dropped before any agent call.
  std::function<bool(const ir::Function &)> verifiable;
};

Toolbox make_toolbox(const PipelineConfig &cfg);

/// Digest-change test against the preprocessor, for extract().
extract::OptimizableCheck make_optimizable_check(const Toolbox &tools, const PipelineConfig &cfg);

struct SequenceOutcome {
  enum class State {
    Finding,
    NotInteresting,
    SyntaxFailedFinal,
    IncorrectFinal,
    VerifierErrorFinal,
    ExtractionFailedFinal,
    Unsupported,
    Timeout,
    AgentFailed,
    ToolFailed,
  };
  State state = State::AgentFailed;
  uint64_t finding_id = 0;
  std::vector<catalog::AttemptRecord> attempts;
  std::optional<catalog::Finding> finding;
  /// This sequence's contribution to the run counters (everything except
  /// the extraction buckets).
  catalog::RunStats stats;
};

const char *to_string(SequenceOutcome::State s);

/// The agent loop for one wrapped function: prompt, complete, parse,
/// preprocess, judge, verify, with feedback on syntax errors, refutations
/// and fixable verifier errors, for at most 1 + max_reattempts calls. The
/// finding is recorded in `log` when given.
SequenceOutcome process_sequence(const extract::WrappedFunction &f, llm::CompletionBackend &agent,
                                 const Toolbox &tools, const PipelineConfig &cfg,
                                 catalog::FindingsLog *log = nullptr);

using BackendFactory = std::function<std::unique_ptr<llm::CompletionBackend>()>;

/// Backend per AgentConfig; replay transcripts are loaded once and shared.
Result<BackendFactory, std::string> make_backend_factory(const llm::AgentConfig &cfg);

struct RunResult {
  catalog::RunStats stats;
  int exit_code = 0; // 0 ok, 1 config/IO, 2 corpus unreadable
  std::vector<std::string> messages;
  uint64_t self_check_failures = 0;
};

/// .ll files under the corpus paths, each with a module id relative to the
/// path it was found under. Directories are walked recursively and sorted.
Result<std::vector<std::pair<std::filesystem::path, std::string>>, std::string> collect_corpus(
    const std::vector<std::string> &paths);

/// Whole pipeline: extraction runs ahead on its own thread, `cfg.workers`
/// workers drain the queue, each with its own backend. Setting `cancel`
/// stops dispatch; in-flight sequences finish, the rest are counted as
/// cancelled and their digests released, then everything is flushed.
RunResult run(const PipelineConfig &cfg, const BackendFactory &backends, const Toolbox &tools,
              const std::atomic<bool> *cancel = nullptr, std::ostream *log = nullptr);

} // namespace peepseek::pipeline

#endif // PEEPSEEK_PIPELINE_PIPELINE_H
