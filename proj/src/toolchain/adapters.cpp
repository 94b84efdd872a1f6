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

#include "peepseek/toolchain/adapters.h"

#include <chrono>
#include <regex>

#include "peepseek/ir/parser.h"
#include "peepseek/ir/printer.h"
#include "peepseek/oracle/interpreter.h"
#include "peepseek/toolchain/canonicalize.h"
#include "peepseek/toolchain/process.h"

namespace peepseek::toolchain {

const char *to_string(ToolError::Kind k) {
  switch (k) {
  case ToolError::Kind::Spawn: return "spawn";
  case ToolError::Kind::Timeout: return "timeout";
  case ToolError::Kind::LoweringFailed: return "lowering-failed";
  case ToolError::Kind::ParseFailed: return "parse-failed";
  }
  return "?";
}

const char *to_string(RefinementVerdict::Kind k) {
  switch (k) {
  case RefinementVerdict::Kind::Correct: return "correct";
  case RefinementVerdict::Kind::Incorrect: return "incorrect";
  case RefinementVerdict::Kind::VerifierError: return "verifier_error";
  case RefinementVerdict::Kind::Timeout: return "timeout";
  }
  return "?";
}

namespace {

std::chrono::milliseconds timeout_of(const ToolConfig &cfg) {
  return std::chrono::milliseconds(static_cast<int64_t>(cfg.timeout_seconds * 1000));
}

/// The text as external tools should see it: one function, named `rename`
/// when given, followed by declarations of its callees.
std::string standalone(std::string_view text, const std::string &rename = {}) {
  auto m = ir::parse_module(text);
  if (!m || m.value().functions.size() != 1)
    return std::string(text);
  ir::Function f = m.value().functions[0];
  if (!rename.empty())
    f.name = rename;
  return ir::print_standalone(f);
}

ToolError spawn_error(const ProcessResult &r) { return {ToolError::Kind::Spawn, r.spawn_error}; }

std::string strip_tool_prefix(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' '))
    s.pop_back();
  return s + "\n";
}

} // namespace

Result<PreprocessResult, ToolError> preprocess(const ToolConfig &cfg, std::string_view ir_text) {
  TempDir dir(cfg.temp_root, cfg.keep_temps);
  auto in = dir.write("in.ll", standalone(ir_text));
  auto out = dir.path() / "out.ll";
  ProcessResult r = run_process(
      {cfg.opt_path, "-passes=default<O3>", "-S", in.string(), "-o", out.string()}, timeout_of(cfg));
  if (!r.spawned)
    return spawn_error(r);
  if (r.timed_out)
    return ToolError{ToolError::Kind::Timeout, cfg.opt_path + " timed out"};
  if (r.exit_code != 0) {
    if (cfg.keep_temps)
      dir.keep();
    return PreprocessResult{PreprocessResult::Kind::SyntaxError, strip_tool_prefix(r.err)};
  }
  try {
    return PreprocessResult{PreprocessResult::Kind::Optimized, read_file(out)};
  } catch (const std::exception &e) {
    return ToolError{ToolError::Kind::ParseFailed, e.what()};
  }
}

PreprocessResult preprocess_builtin(std::string_view ir_text) {
  auto r = canonicalize_text(ir_text);
  if (!r)
    return {PreprocessResult::Kind::SyntaxError, r.error().render("candidate.ll")};
  return {PreprocessResult::Kind::Optimized, r.value()};
}

Result<uint64_t, ToolError> estimate_cycles(const ToolConfig &cfg, std::string_view ir_text) {
  TempDir dir(cfg.temp_root, cfg.keep_temps);
  auto in = dir.write("in.ll", standalone(ir_text));
  auto asm_path = dir.path() / "out.s";
  ProcessResult llc = run_process({cfg.llc_path, "-O3", "-mtriple=" + cfg.target_triple,
                                   "-mcpu=" + cfg.cpu, in.string(), "-o", asm_path.string()},
                                  timeout_of(cfg));
  if (!llc.spawned)
    return spawn_error(llc);
  if (llc.timed_out)
    return ToolError{ToolError::Kind::Timeout, cfg.llc_path + " timed out"};
  if (llc.exit_code != 0)
    return ToolError{ToolError::Kind::LoweringFailed, llc.err};

  ProcessResult mca = run_process(
      {cfg.mca_path, "-mtriple=" + cfg.target_triple, "-mcpu=" + cfg.cpu, asm_path.string()},
      timeout_of(cfg));
  if (!mca.spawned)
    return spawn_error(mca);
  if (mca.timed_out)
    return ToolError{ToolError::Kind::Timeout, cfg.mca_path + " timed out"};
  static const std::regex kTotal(R"(Total Cycles:\s*(\d+))");
  std::smatch m;
  if (mca.exit_code != 0 || !std::regex_search(mca.out, m, kTotal))
    return ToolError{ToolError::Kind::ParseFailed,
                     "no \"Total Cycles:\" in " + cfg.mca_path + " output\n" + mca.err};
  return static_cast<uint64_t>(std::stoull(m[1].str()));
}

RefinementVerdict parse_alive_output(const std::string &output, int exit_code) {
  using K = RefinementVerdict::Kind;
  auto block_from = [&](std::size_t start) {
    std::size_t end = output.find("\nSummary:", start);
    std::string block = output.substr(start, end == std::string::npos ? std::string::npos
                                                                      : end - start);
    while (!block.empty() && (block.back() == '\n' || block.back() == ' '))
      block.pop_back();
    return block + "\n";
  };
  std::size_t bad = output.find("doesn't verify");
  if (bad != std::string::npos) {
    std::size_t err = output.find("ERROR:", bad);
    std::string block = block_from(err == std::string::npos ? bad : err);
    return {K::Incorrect, block, true};
  }
  if (output.find("seems to be correct") != std::string::npos &&
      output.find("ERROR:") == std::string::npos)
    return {K::Correct, "", true};
  std::size_t err = output.find("ERROR:");
  if (err != std::string::npos) {
    std::string block = block_from(err);
    if (block.find("Timeout") != std::string::npos || block.find("timeout") != std::string::npos)
      return {K::Timeout, block, true};
    bool fixable = block.find("Unsupported") == std::string::npos &&
                   block.find("unsupported") == std::string::npos;
    return {K::VerifierError, block, fixable};
  }
  return {K::VerifierError,
          output.empty() ? "validator exited with status " + std::to_string(exit_code) + "\n"
                         : output,
          true};
}

Result<RefinementVerdict, ToolError> verify_refinement(const ToolConfig &cfg,
                                                       std::string_view src_text,
                                                       std::string_view tgt_text) {
  TempDir dir(cfg.temp_root, cfg.keep_temps);
  auto src = dir.write("src.ll", standalone(src_text, "src"));
  auto tgt = dir.write("tgt.ll", standalone(tgt_text, "tgt"));
  std::vector<std::string> argv = {cfg.alive_tv_path};
  argv.insert(argv.end(), cfg.alive_flags.begin(), cfg.alive_flags.end());
  argv.push_back(src.string());
  argv.push_back(tgt.string());
  ProcessResult r = run_process(argv, timeout_of(cfg));
  if (!r.spawned)
    return spawn_error(r);
  if (r.timed_out)
    return RefinementVerdict{RefinementVerdict::Kind::Timeout,
                             cfg.alive_tv_path + " timed out\n", true};
  RefinementVerdict v = parse_alive_output(r.out + r.err, r.exit_code);
  if (v.kind != RefinementVerdict::Kind::Correct && cfg.keep_temps)
    dir.keep();
  return v;
}

namespace {

Result<ir::Function, std::string> single_function(std::string_view text) {
  auto m = ir::parse_module(text);
  if (!m)
    return m.error().render();
  if (m.value().functions.size() != 1)
    return std::string("expected exactly one function definition\n");
  return m.value().functions[0];
}

} // namespace

RefinementVerdict verify_builtin(std::string_view src_text, std::string_view tgt_text,
                                 const oracle::EquivalenceOptions &options) {
  using K = RefinementVerdict::Kind;
  auto src = single_function(src_text);
  if (!src)
    return {K::VerifierError, "ERROR: " + src.error(), false};
  auto tgt = single_function(tgt_text);
  if (!tgt)
    return {K::VerifierError, "ERROR: " + tgt.error(), true};
  oracle::EquivalenceReport r = oracle::check_equivalence(src.value(), tgt.value(), options);
  switch (r.verdict) {
  case oracle::EquivalenceReport::Verdict::Equivalent: return {K::Correct, "", true};
  case oracle::EquivalenceReport::Verdict::NotEquivalent:
    return {K::Incorrect, oracle::format_counterexample(r, src.value()), true};
  case oracle::EquivalenceReport::Verdict::SignatureMismatch:
    return {K::VerifierError, "ERROR: " + r.detail + "\n", true};
  case oracle::EquivalenceReport::Verdict::Unsupported:
    return {K::VerifierError, "ERROR: Unsupported instruction: " + r.detail + "\n", false};
  }
  return {K::VerifierError, "ERROR: unknown oracle verdict\n", false};
}

bool builtin_supports(std::string_view ir_text) {
  auto f = single_function(ir_text);
  return f && oracle::Program::compile(f.value()).ok();
}

} // namespace peepseek::toolchain
