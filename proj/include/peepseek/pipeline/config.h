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

#ifndef PEEPSEEK_PIPELINE_CONFIG_H
#define PEEPSEEK_PIPELINE_CONFIG_H

#include <filesystem>
#include <string>
#include <vector>

#include "peepseek/extract/extractor.h"
#include "peepseek/llm/backend.h"
#include "peepseek/oracle/equivalence.h"
#include "peepseek/support/result.h"
#include "peepseek/toolchain/adapters.h"

namespace peepseek::pipeline {

enum class InterestMode { CountOnly, CountAndCycles };
enum class VerifierMode { External, Builtin, ExternalThenBuiltin };
/// Who preprocesses candidates: the external optimizer, the builtin
/// canonicalizer, or the optimizer when it is on PATH and the builtin one
/// otherwise.
enum class PreprocessorMode { External, Builtin, Auto };

const char *to_string(InterestMode m);
const char *to_string(VerifierMode m);
const char *to_string(PreprocessorMode m);

struct PipelineConfig {
  std::vector<std::string> corpus;
  llm::AgentConfig agent;
  toolchain::ToolConfig tools;
  oracle::EquivalenceOptions oracle;
  extract::ExtractOptions extract;
  /// Skip the "optimizer can still improve it" filter during extraction.
  bool skip_optimizable_filter = false;
  InterestMode interest = InterestMode::CountOnly;
  VerifierMode verifier = VerifierMode::ExternalThenBuiltin;
  PreprocessorMode preprocessor = PreprocessorMode::Auto;
  int workers = 1;
  bool deterministic = false;
  std::string digest_path;   // no persistence when empty
  std::string findings_path; // required by run()
  std::string stats_path;    // optional JSON stats
  double sequence_budget_seconds = 600;
  /// Re-verify every finding of the run once it ends.
  bool self_check = true;

  int max_reattempts() const { return agent.max_reattempts; }
};

/// Field-level validation (worker count, budgets, reattempt limit).
Result<bool, std::string> validate(const PipelineConfig &cfg);

/// Reads a TOML config over `base`. Relative paths resolve against the
/// config file's directory. Unknown keys are errors.
Result<PipelineConfig, std::string> load_config(const std::filesystem::path &path,
                                                PipelineConfig base = {});
Result<PipelineConfig, std::string> parse_config(std::string_view text,
                                                 const std::filesystem::path &dir,
                                                 PipelineConfig base = {});

} // namespace peepseek::pipeline

#endif // PEEPSEEK_PIPELINE_CONFIG_H
