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

#include "peepseek/pipeline/pipeline.h"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "peepseek/interest/interestingness.h"
#include "peepseek/ir/parser.h"
#include "peepseek/ir/printer.h"
#include "peepseek/llm/prompt.h"
#include "peepseek/oracle/interpreter.h"
#include "peepseek/toolchain/process.h"

namespace peepseek::pipeline {

using catalog::AttemptRecord;
using catalog::RunStats;
using toolchain::PreprocessResult;
using toolchain::RefinementVerdict;
using toolchain::ToolConfig;
using toolchain::ToolError;

const char *to_string(SequenceOutcome::State s) {
  using S = SequenceOutcome::State;
  switch (s) {
  case S::Finding: return "finding";
  case S::NotInteresting: return "not_interesting";
  case S::SyntaxFailedFinal: return "syntax_failed_final";
  case S::IncorrectFinal: return "incorrect_final";
  case S::VerifierErrorFinal: return "verifier_error_final";
  case S::ExtractionFailedFinal: return "extraction_failed_final";
  case S::Unsupported: return "unsupported";
  case S::Timeout: return "timeout";
  case S::AgentFailed: return "agent_failed";
  case S::ToolFailed: return "tool_failed";
  }
  return "?";
}

namespace {

ToolConfig capped(const ToolConfig &base, double seconds) {
  ToolConfig c = base;
  c.timeout_seconds = std::max(0.001, std::min(base.timeout_seconds, seconds));
  return c;
}

bool oracle_supports(const ir::Function &f) { return oracle::Program::compile(f).ok(); }

bool oracle_supports_text(std::string_view text) { return toolchain::builtin_supports(text); }

int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

} // namespace

Toolbox make_toolbox(const PipelineConfig &cfg) {
  Toolbox t;
  ToolConfig tools = cfg.tools;

  PreprocessorMode pre = cfg.preprocessor;
  if (pre == PreprocessorMode::Auto)
    pre = toolchain::executable_available(tools.opt_path) ? PreprocessorMode::External
                                                          : PreprocessorMode::Builtin;
  if (pre == PreprocessorMode::External)
    t.preprocess = [tools](std::string_view text, double secs) {
      return toolchain::preprocess(capped(tools, secs), text);
    };
  else
    t.preprocess = [](std::string_view text, double) -> Result<PreprocessResult, ToolError> {
      return toolchain::preprocess_builtin(text);
    };

  if (cfg.interest == InterestMode::CountAndCycles)
    t.cycles = [tools](std::string_view text, double secs) -> std::optional<uint64_t> {
      auto r = toolchain::estimate_cycles(capped(tools, secs), text);
      return r ? std::optional<uint64_t>(r.value()) : std::nullopt;
    };

  oracle::EquivalenceOptions oracle = cfg.oracle;
  auto builtin = [oracle](std::string_view src, std::string_view tgt) {
    return Ruling{toolchain::verify_builtin(src, tgt, oracle), "builtin"};
  };
  switch (cfg.verifier) {
  case VerifierMode::Builtin:
    t.verify = [builtin](std::string_view src, std::string_view tgt, double) -> Result<Ruling, ToolError> {
      return builtin(src, tgt);
    };
    t.verifiable = oracle_supports;
    break;
  case VerifierMode::External:
    t.verify = [tools](std::string_view src, std::string_view tgt, double secs) -> Result<Ruling, ToolError> {
      auto r = toolchain::verify_refinement(capped(tools, secs), src, tgt);
      if (!r)
        return r.error();
      return Ruling{r.value(), "external"};
    };
    break;
  case VerifierMode::ExternalThenBuiltin: {
    bool alive = toolchain::executable_available(tools.alive_tv_path);
    t.verify = [tools, builtin, alive](std::string_view src, std::string_view tgt,
                                       double secs) -> Result<Ruling, ToolError> {
      std::optional<Result<RefinementVerdict, ToolError>> ext;
      if (alive) {
        ext = toolchain::verify_refinement(capped(tools, secs), src, tgt);
        if (ext->ok() && ext->value().kind != RefinementVerdict::Kind::Timeout)
          return Ruling{ext->value(), "external"};
      }
      if (oracle_supports_text(src) && oracle_supports_text(tgt))
        return builtin(src, tgt);
      if (ext && ext->ok())
        return Ruling{ext->value(), "external"};
      if (ext)
        return ext->error();
      return ToolError{ToolError::Kind::Spawn,
                       tools.alive_tv_path + " is not available and the builtin oracle does not "
                                             "support this pair"};
    };
    if (!alive)
      t.verifiable = oracle_supports;
    break;
  }
  }
  return t;
}

extract::OptimizableCheck make_optimizable_check(const Toolbox &tools, const PipelineConfig &cfg) {
  if (cfg.skip_optimizable_filter)
    return {};
  double secs = cfg.tools.timeout_seconds;
  return [&tools, secs](const extract::WrappedFunction &w) -> Result<bool, extract::ExtractError> {
    auto r = tools.preprocess(ir::print_standalone(w.func), secs);
    if (!r)
      return extract::ExtractError{"optimizer", std::string(toolchain::to_string(r.error().kind)) +
                                                    ": " + r.error().message};
    // A wrapped sequence the optimizer rejects can never be verified; drop it.
    if (r->kind == PreprocessResult::Kind::SyntaxError)
      return true;
    auto m = ir::parse_module(r->text);
    if (!m || m.value().functions.empty())
      return true;
    return extract::digest(m.value().functions.front()) != w.digest;
  };
}

SequenceOutcome process_sequence(const extract::WrappedFunction &f, llm::CompletionBackend &agent,
                                 const Toolbox &tools, const PipelineConfig &cfg,
                                 catalog::FindingsLog *log) {
  using S = SequenceOutcome::State;
  SequenceOutcome out;
  RunStats &st = out.stats;
  auto start = std::chrono::steady_clock::now();
  int64_t started_at = cfg.deterministic ? 0 : now_ms();
  auto remaining = [&] {
    return cfg.sequence_budget_seconds -
           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  auto finish = [&](S state) -> SequenceOutcome & {
    out.state = state;
    switch (state) {
    case S::Finding: ++st.findings; break;
    case S::NotInteresting: ++st.not_interesting; break;
    case S::SyntaxFailedFinal: ++st.syntax_final; break;
    case S::IncorrectFinal: ++st.incorrect_final; break;
    case S::VerifierErrorFinal: ++st.verifier_error_final; break;
    case S::ExtractionFailedFinal: ++st.extraction_final; break;
    case S::Unsupported: ++st.unsupported; break;
    case S::Timeout: ++st.timeouts; break;
    case S::AgentFailed: ++st.agent_failed; break;
    case S::ToolFailed: ++st.tool_failed; break;
    }
    return out;
  };
  auto note = [&](int attempt, std::string digest, std::string outcome, std::string detail) {
    out.attempts.push_back({attempt, std::move(digest), std::move(outcome), std::move(detail)});
  };

  if (tools.verifiable && !tools.verifiable(f.func))
    return finish(S::Unsupported);

  const std::string original_text = ir::print_standalone(f.func);
  interest::CycleFn cycle_fn;
  if (tools.cycles)
    cycle_fn = [&](std::string_view text) { return tools.cycles(text, std::max(0.001, remaining())); };
  const interest::Metrics before = interest::measure(f.func, cycle_fn);

  const int max_attempts = 1 + std::max(0, cfg.max_reattempts());
  llm::Candidate previous;
  llm::Feedback feedback{llm::Feedback::Kind::SyntaxError, ""};
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const bool last = attempt + 1 == max_attempts;
    if (remaining() <= 0) {
      note(attempt, "", "timeout", "sequence budget exhausted");
      return finish(S::Timeout);
    }
    llm::PromptText prompt = attempt == 0 ? llm::build_initial_prompt(f)
                                          : llm::build_feedback_prompt(f, previous, feedback);
    prompt.attempt = attempt;
    auto response = agent.complete(prompt);
    if (!response) {
      ++st.agent_errors;
      note(attempt, "", "agent_error",
           std::string(llm::to_string(response.error().kind)) + ": " + response.error().message);
      return finish(response.error().kind == llm::AgentError::Kind::Timeout ? S::Timeout
                                                                            : S::AgentFailed);
    }
    ++st.agent_calls;

    auto candidate = llm::parse_candidate(response.value(), attempt);
    if (!candidate) {
      ++st.extraction_errors;
      std::string msg = "no LLVM IR function definition found in the response";
      note(attempt, "", "no_ir_found", msg);
      previous = llm::Candidate{response.value(), attempt, response.value()};
      feedback = {llm::Feedback::Kind::SyntaxError, msg};
      if (last)
        return finish(S::ExtractionFailedFinal);
      continue;
    }
    previous = candidate.value();

    auto pre = tools.preprocess(candidate->ir_text, std::max(0.001, remaining()));
    if (!pre) {
      note(attempt, "", "tool_error",
           std::string(toolchain::to_string(pre.error().kind)) + ": " + pre.error().message);
      return finish(pre.error().kind == ToolError::Kind::Timeout ? S::Timeout : S::ToolFailed);
    }
    std::optional<ir::Function> optimized;
    std::string syntax_message = pre->text;
    if (pre->kind == PreprocessResult::Kind::Optimized) {
      auto m = ir::parse_module(pre->text);
      if (m && m.value().functions.size() == 1)
        optimized = m.value().functions[0];
      else
        syntax_message = m ? "expected exactly one function definition\n" : m.error().render();
    }
    if (!optimized) {
      ++st.syntax_errors;
      note(attempt, "", "syntax_error", syntax_message);
      feedback = {llm::Feedback::Kind::SyntaxError, syntax_message};
      if (last)
        return finish(S::SyntaxFailedFinal);
      continue;
    }

    std::string cand_digest = extract::digest(*optimized).hex();
    interest::Metrics after = interest::measure(*optimized, cycle_fn);
    interest::InterestDecision decision =
        interest::judge(before, after, interest::texts_differ(f.func, *optimized));
    if (!decision.interesting) {
      note(attempt, cand_digest, "not_interesting", "");
      return finish(S::NotInteresting);
    }

    const std::string candidate_text = ir::print_standalone(*optimized);
    if (remaining() <= 0) {
      note(attempt, cand_digest, "timeout", "sequence budget exhausted");
      return finish(S::Timeout);
    }
    auto ruling = tools.verify(original_text, candidate_text, std::max(0.001, remaining()));
    if (!ruling) {
      note(attempt, cand_digest, "tool_error",
           std::string(toolchain::to_string(ruling.error().kind)) + ": " + ruling.error().message);
      return finish(S::ToolFailed);
    }
    const RefinementVerdict &v = ruling->verdict;
    switch (v.kind) {
    case RefinementVerdict::Kind::Correct: {
      note(attempt, cand_digest, "correct", "");
      catalog::Finding finding;
      finding.original_digest = f.digest.hex();
      finding.provenance = f.origin;
      finding.original_ir = original_text;
      finding.candidate_ir = candidate_text;
      finding.attempts_used = attempt + 1;
      finding.verdict_chain = out.attempts;
      finding.metrics_before = before;
      finding.metrics_after = after;
      finding.interest_reason = interest::to_string(decision);
      finding.verifier = ruling->verifier;
      finding.prompt_template_id = std::string(llm::kPromptTemplateId);
      finding.model_id = agent.model_id();
      finding.temperature = cfg.agent.temperature;
      finding.started_at_ms = started_at;
      finding.recorded_at_ms = cfg.deterministic ? 0 : now_ms();
      if (log) {
        auto id = log->record(finding);
        if (!id) {
          note(attempt, cand_digest, "tool_error", "findings log: " + id.error().message);
          return finish(S::ToolFailed);
        }
        finding.id = id.value();
        out.finding_id = id.value();
      }
      out.finding = std::move(finding);
      return finish(S::Finding);
    }
    case RefinementVerdict::Kind::Incorrect:
      ++st.incorrect;
      note(attempt, cand_digest, "incorrect", v.text);
      feedback = {llm::Feedback::Kind::Incorrect, v.text};
      if (last)
        return finish(S::IncorrectFinal);
      continue;
    case RefinementVerdict::Kind::VerifierError:
      ++st.verifier_errors;
      note(attempt, cand_digest, v.fixable ? "verifier_error" : "unsupported", v.text);
      if (!v.fixable)
        return finish(S::Unsupported);
      feedback = {llm::Feedback::Kind::VerifierError, v.text};
      if (last)
        return finish(S::VerifierErrorFinal);
      continue;
    case RefinementVerdict::Kind::Timeout:
      note(attempt, cand_digest, "timeout", v.text);
      return finish(S::Timeout);
    }
  }
  return finish(S::AgentFailed); // max_attempts is at least 1; not reached
}

Result<BackendFactory, std::string> make_backend_factory(const llm::AgentConfig &cfg) {
  if (cfg.backend == llm::AgentConfig::Backend::HttpApi)
    return BackendFactory([cfg] { return std::make_unique<llm::HttpBackend>(cfg); });
  if (cfg.transcript_path.empty())
    return std::string("the scripted-replay backend needs a transcript");
  auto t = llm::Transcript::load(cfg.transcript_path);
  if (!t)
    return t.error();
  auto shared = std::make_shared<const llm::Transcript>(std::move(t.value()));
  return BackendFactory([shared] { return std::make_unique<llm::ReplayBackend>(shared); });
}

Result<std::vector<std::pair<std::filesystem::path, std::string>>, std::string> collect_corpus(
    const std::vector<std::string> &paths) {
  namespace fs = std::filesystem;
  std::vector<std::pair<fs::path, std::string>> out;
  for (const std::string &p : paths) {
    std::error_code ec;
    fs::file_status st = fs::status(p, ec);
    if (ec || !fs::exists(st))
      return "corpus path " + p + " does not exist";
    if (fs::is_regular_file(st)) {
      out.emplace_back(p, fs::path(p).filename().string());
      continue;
    }
    if (!fs::is_directory(st))
      return "corpus path " + p + " is neither a file nor a directory";
    std::vector<std::pair<fs::path, std::string>> found;
    fs::recursive_directory_iterator it(p, ec), end;
    if (ec)
      return "cannot read corpus directory " + p + ": " + ec.message();
    for (; it != end; it.increment(ec)) {
      if (ec)
        return "cannot read corpus directory " + p + ": " + ec.message();
      if (it->is_regular_file() && it->path().extension() == ".ll")
        found.emplace_back(it->path(), fs::relative(it->path(), p).generic_string());
    }
    std::sort(found.begin(), found.end(),
              [](const auto &a, const auto &b) { return a.second < b.second; });
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

namespace {

class WorkQueue {
 public:
  void push(extract::WrappedFunction f) {
    {
      std::lock_guard lock(mu_);
      items_.push_back(std::move(f));
    }
    cv_.notify_one();
  }
  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }
  std::optional<extract::WrappedFunction> pop() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return closed_ || !items_.empty(); });
    if (items_.empty())
      return std::nullopt;
    extract::WrappedFunction f = std::move(items_.front());
    items_.pop_front();
    return f;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<extract::WrappedFunction> items_;
  bool closed_ = false;
};

std::optional<std::string> read_text(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

RunResult run(const PipelineConfig &cfg, const BackendFactory &backends, const Toolbox &tools,
              const std::atomic<bool> *cancel, std::ostream *log) {
  RunResult result;
  std::mutex mu; // guards result
  auto message = [&](const std::string &m) {
    std::lock_guard lock(mu);
    result.messages.push_back(m);
    if (log)
      *log << m << "\n";
  };
  auto fatal = [&](int code, const std::string &m) {
    message(m);
    result.exit_code = code;
    return result;
  };
  auto cancelled = [&] { return cancel && cancel->load(); };

  if (auto ok = validate(cfg); !ok)
    return fatal(1, "config: " + ok.error());
  if (cfg.findings_path.empty())
    return fatal(1, "config: no findings file configured");
  auto corpus = collect_corpus(cfg.corpus);
  if (!corpus)
    return fatal(2, corpus.error());

  extract::DigestSet digests;
  if (!cfg.digest_path.empty()) {
    auto loaded = catalog::load_digests(cfg.digest_path);
    if (!loaded)
      return fatal(1, "digest file: " + std::string(catalog::to_string(loaded.error().kind)) + ": " +
                          loaded.error().message);
    digests = std::move(loaded.value());
  }
  auto findings_log = catalog::FindingsLog::open(cfg.findings_path);
  if (!findings_log)
    return fatal(1, "findings file: " + findings_log.error().message);

  RunStats &stats = result.stats;
  stats.files = corpus->size();
  WorkQueue queue;
  extract::OptimizableCheck optimizable = make_optimizable_check(tools, cfg);
  std::size_t since_flush = 0;
  auto flush = [&]() -> bool {
    if (cfg.digest_path.empty())
      return true;
    auto r = catalog::flush_digests(cfg.digest_path, digests);
    if (!r) {
      message("digest file: " + r.error().message);
      std::lock_guard lock(mu);
      result.exit_code = 1;
    }
    return r.ok();
  };

  std::thread producer([&] {
    for (const auto &[path, module_id] : corpus.value()) {
      if (cancelled())
        break;
      auto text = read_text(path);
      if (!text) {
        message("cannot read " + path.string());
        std::lock_guard lock(mu);
        ++stats.parse_failures;
        continue;
      }
      auto module = ir::parse_module(*text);
      if (!module) {
        message(module.error().render(module_id));
        std::lock_guard lock(mu);
        ++stats.parse_failures;
        continue;
      }
      module.value().id = module_id;
      extract::ExtractStats es;
      auto seqs = extract::extract(module.value(), digests, cfg.extract, optimizable, &es);
      {
        std::lock_guard lock(mu);
        stats.sequences_seen += es.seen;
        stats.deduped += es.deduped;
        stats.filtered_optimizable += es.filtered_optimizable;
        stats.wrap_errors += es.wrap_errors;
        stats.over_cap += es.over_cap;
      }
      if (!seqs) {
        message("extraction stopped: " + seqs.error().tool + ": " + seqs.error().message);
        std::lock_guard lock(mu);
        // Whatever this module claimed was never dispatched.
        stats.sequences_seen -= es.seen;
        stats.deduped -= es.deduped;
        stats.filtered_optimizable -= es.filtered_optimizable;
        stats.wrap_errors -= es.wrap_errors;
        stats.over_cap -= es.over_cap;
        result.exit_code = 1;
        break;
      }
      for (extract::WrappedFunction &w : seqs.value())
        queue.push(std::move(w));
      since_flush += digests.take_dirty_count();
      if (since_flush >= catalog::kDigestFlushInterval) {
        flush();
        since_flush = 0;
      }
    }
    queue.close();
  });

  std::vector<catalog::Finding> recorded;
  std::vector<std::thread> workers;
  for (int w = 0; w < cfg.workers; ++w) {
    workers.emplace_back([&] {
      std::unique_ptr<llm::CompletionBackend> agent = backends();
      while (auto item = queue.pop()) {
        if (cancelled()) {
          digests.erase(item->digest);
          std::lock_guard lock(mu);
          ++stats.cancelled;
          continue;
        }
        SequenceOutcome o = process_sequence(*item, *agent, tools, cfg, findings_log.value().get());
        std::lock_guard lock(mu);
        stats += o.stats;
        if (o.finding)
          recorded.push_back(std::move(*o.finding));
      }
    });
  }
  producer.join();
  for (std::thread &t : workers)
    t.join();
  flush();

  if (cfg.self_check) {
    for (const catalog::Finding &f : recorded) {
      RefinementVerdict v;
      if (f.verifier == "builtin") {
        v = toolchain::verify_builtin(f.original_ir, f.candidate_ir, cfg.oracle);
      } else {
        auto r = toolchain::verify_refinement(cfg.tools, f.original_ir, f.candidate_ir);
        if (!r) {
          message("self-check skipped for finding " + std::to_string(f.id) + ": " + r.error().message);
          continue;
        }
        v = r.value();
      }
      if (v.kind != RefinementVerdict::Kind::Correct) {
        ++result.self_check_failures;
        message("self-check: finding " + std::to_string(f.id) + " no longer verifies (" +
                toolchain::to_string(v.kind) + ")\n" + v.text);
      }
    }
    if (result.self_check_failures)
      result.exit_code = 1;
  }

  if (!cfg.stats_path.empty()) {
    std::ofstream out(cfg.stats_path, std::ios::binary);
    out << catalog::to_json(stats);
    if (!out)
      return fatal(1, "cannot write stats file " + cfg.stats_path);
  }
  if (!stats.conserved())
    message("warning: run counters do not add up");
  return result;
}

} // namespace peepseek::pipeline
