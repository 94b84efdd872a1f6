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

// peepseek: mine LLVM IR corpora for missed peephole optimizations.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "peepseek/catalog/catalog.h"
#include "peepseek/extract/extractor.h"
#include "peepseek/ir/parser.h"
#include "peepseek/ir/printer.h"
#include "peepseek/pipeline/config.h"
#include "peepseek/pipeline/pipeline.h"
#include "peepseek/toolchain/adapters.h"

namespace fs = std::filesystem;
using namespace peepseek;

namespace {

constexpr int kExitFatal = 1;
constexpr int kExitCorpus = 2;

std::atomic<bool> g_cancel{false};

extern "C" void on_sigint(int) { g_cancel = true; }

std::optional<std::string> read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int fail(int code, const std::string &message) {
  std::cerr << "peepseek: " << message << "\n";
  return code;
}

const std::map<std::string, pipeline::VerifierMode> kVerifiers = {
    {"external", pipeline::VerifierMode::External},
    {"builtin", pipeline::VerifierMode::Builtin},
    {"external-then-builtin", pipeline::VerifierMode::ExternalThenBuiltin}};
const std::map<std::string, pipeline::PreprocessorMode> kPreprocessors = {
    {"external", pipeline::PreprocessorMode::External},
    {"builtin", pipeline::PreprocessorMode::Builtin},
    {"auto", pipeline::PreprocessorMode::Auto}};
const std::map<std::string, pipeline::InterestMode> kInterest = {
    {"count-only", pipeline::InterestMode::CountOnly},
    {"count+cycles", pipeline::InterestMode::CountAndCycles}};

struct CommonFlags {
  std::string config;
  std::optional<pipeline::VerifierMode> verifier;
  std::optional<pipeline::PreprocessorMode> preprocessor;
  std::optional<pipeline::InterestMode> interest;
  std::optional<int> max_reattempts;
  std::optional<int> workers;

  void add(CLI::App *cmd, bool config_required) {
    auto *c = cmd->add_option("--config", config, "TOML configuration file")->check(CLI::ExistingFile);
    if (config_required)
      c->required();
    cmd->add_option("--verifier", verifier, "external | builtin | external-then-builtin")
        ->transform(CLI::CheckedTransformer(kVerifiers));
    cmd->add_option("--preprocessor", preprocessor, "external | builtin | auto")
        ->transform(CLI::CheckedTransformer(kPreprocessors));
    cmd->add_option("--interestingness", interest, "count-only | count+cycles")
        ->transform(CLI::CheckedTransformer(kInterest));
    cmd->add_option("--max-reattempts", max_reattempts)->check(CLI::NonNegativeNumber);
    cmd->add_option("--workers", workers)->check(CLI::PositiveNumber);
  }

  Result<pipeline::PipelineConfig, std::string> load() const {
    pipeline::PipelineConfig cfg;
    if (!config.empty()) {
      auto loaded = pipeline::load_config(config);
      if (!loaded)
        return loaded.error();
      cfg = std::move(loaded.value());
    }
    if (verifier)
      cfg.verifier = *verifier;
    if (preprocessor)
      cfg.preprocessor = *preprocessor;
    if (interest)
      cfg.interest = *interest;
    if (max_reattempts)
      cfg.agent.max_reattempts = *max_reattempts;
    if (workers)
      cfg.workers = *workers;
    return cfg;
  }
};

void print_outcome(const pipeline::SequenceOutcome &o, std::ostream &out) {
  out << "outcome: " << pipeline::to_string(o.state) << "\n";
  for (const catalog::AttemptRecord &a : o.attempts) {
    out << "attempt " << a.attempt << ": " << a.outcome;
    if (!a.candidate_digest.empty())
      out << " (" << a.candidate_digest.substr(0, 16) << ")";
    out << "\n";
    if (!a.detail.empty()) {
      std::istringstream lines(a.detail);
      for (std::string line; std::getline(lines, line);)
        out << "    " << line << "\n";
    }
  }
  if (o.finding)
    out << "\n" << o.finding->candidate_ir;
}

// -- extract ---------------------------------------------------------------

struct ExtractCmd {
  std::vector<std::string> paths;
  std::string dedup_file;
  std::string out_dir;
  std::string memdep = "off";
  std::size_t max_len = 16;
  int threads = 1;
  bool no_filter = false;
  std::optional<pipeline::PreprocessorMode> preprocessor;

  void add(CLI::App &app) {
    CLI::App *cmd = app.add_subcommand("extract", "Emit wrapped instruction sequences");
    cmd->add_option("paths", paths, ".ll files or directories")->required();
    cmd->add_option("--dedup-file", dedup_file, "Persistent digest set");
    cmd->add_option("--out", out_dir, "Write seq-<digest>.ll files and manifest.jsonl here");
    cmd->add_option("--memory-dependence", memdep)->check(CLI::IsMember({"off", "conservative"}));
    cmd->add_option("--max-seq-len", max_len)->check(CLI::PositiveNumber);
    cmd->add_option("--threads", threads)->check(CLI::PositiveNumber);
    cmd->add_flag("--no-filter", no_filter, "Keep sequences the preprocessor still simplifies");
    cmd->add_option("--preprocessor", preprocessor)->transform(CLI::CheckedTransformer(kPreprocessors));
    cmd->callback([this] { throw CLI::RuntimeError(run()); });
  }

  int run() {
    pipeline::PipelineConfig cfg;
    cfg.extract.memory_dependence =
        memdep == "off" ? extract::MemoryDependence::Off : extract::MemoryDependence::Conservative;
    cfg.extract.max_seq_len = max_len;
    cfg.extract.threads = threads;
    cfg.skip_optimizable_filter = no_filter;
    if (preprocessor)
      cfg.preprocessor = *preprocessor;
    auto corpus = pipeline::collect_corpus(paths);
    if (!corpus)
      return fail(kExitCorpus, corpus.error());

    extract::DigestSet digests;
    if (!dedup_file.empty()) {
      auto loaded = catalog::load_digests(dedup_file);
      if (!loaded)
        return fail(kExitFatal, dedup_file + ": " + loaded.error().message);
      digests = std::move(loaded.value());
    }
    std::ofstream manifest;
    if (!out_dir.empty()) {
      std::error_code ec;
      fs::create_directories(out_dir, ec);
      manifest.open(fs::path(out_dir) / "manifest.jsonl", std::ios::binary | std::ios::trunc);
      if (!manifest)
        return fail(kExitFatal, "cannot write " + out_dir + "/manifest.jsonl");
    }

    pipeline::Toolbox tools = pipeline::make_toolbox(cfg);
    extract::OptimizableCheck optimizable = pipeline::make_optimizable_check(tools, cfg);
    extract::ExtractStats total;
    std::size_t parse_failures = 0;
    for (const auto &[path, module_id] : corpus.value()) {
      auto text = read_text(path.string());
      auto module = text ? ir::parse_module(*text) : Result<ir::Module, ir::ParseError>(ir::ParseError{0, 0, "unreadable", ""});
      if (!module) {
        std::cerr << module.error().render(module_id);
        ++parse_failures;
        continue;
      }
      module.value().id = module_id;
      extract::ExtractStats st;
      auto seqs = extract::extract(module.value(), digests, cfg.extract, optimizable, &st);
      if (!seqs)
        return fail(kExitFatal, seqs.error().tool + ": " + seqs.error().message);
      total += st;
      for (const extract::WrappedFunction &w : seqs.value()) {
        std::string text_out = ir::print_standalone(w.func);
        if (out_dir.empty()) {
          std::cout << "; " << w.origin.module_id << " @" << w.origin.function << " %" << w.origin.block
                    << " " << w.digest.hex() << "\n"
                    << text_out << "\n";
          continue;
        }
        std::string file = "seq-" + w.digest.hex() + ".ll";
        std::ofstream(fs::path(out_dir) / file, std::ios::binary) << text_out;
        nlohmann::ordered_json m;
        m["digest"] = w.digest.hex();
        m["file"] = file;
        m["module"] = w.origin.module_id;
        m["function"] = w.origin.function;
        m["block"] = w.origin.block;
        m["indices"] = w.indices;
        manifest << m.dump() << "\n";
      }
    }
    if (!dedup_file.empty()) {
      auto flushed = catalog::flush_digests(dedup_file, digests);
      if (!flushed)
        return fail(kExitFatal, dedup_file + ": " + flushed.error().message);
    }
    std::cerr << "files " << corpus->size() << ", parse failures " << parse_failures << ", seen "
              << total.seen << ", deduped " << total.deduped << ", filtered " << total.filtered_optimizable
              << ", wrap errors " << total.wrap_errors << ", over cap " << total.over_cap << ", emitted "
              << total.emitted << "\n";
    return 0;
  }
};

// -- optimize --------------------------------------------------------------

struct OptimizeCmd {
  std::string file;
  std::string agent = "replay";
  std::string transcript;
  CommonFlags common;

  void add(CLI::App &app) {
    CLI::App *cmd = app.add_subcommand("optimize", "Run the agent loop on one function");
    cmd->add_option("function", file, ".ll file; its first definition is used")->required()->check(CLI::ExistingFile);
    cmd->add_option("--agent", agent)->check(CLI::IsMember({"http", "replay"}));
    cmd->add_option("--transcript", transcript, "JSON Lines transcript for --agent replay");
    common.add(cmd, false);
    cmd->callback([this] { throw CLI::RuntimeError(run()); });
  }

  int run() {
    auto cfg = common.load();
    if (!cfg)
      return fail(kExitFatal, cfg.error());
    cfg.value().agent.backend = agent == "http" ? llm::AgentConfig::Backend::HttpApi
                                                : llm::AgentConfig::Backend::ScriptedReplay;
    if (!transcript.empty())
      cfg.value().agent.transcript_path = transcript;
    auto text = read_text(file);
    if (!text)
      return fail(kExitFatal, "cannot read " + file);
    auto module = ir::parse_module(*text);
    if (!module)
      return fail(kExitFatal, module.error().render(file));
    if (module.value().functions.empty())
      return fail(kExitFatal, file + ": no function definition");
    extract::WrappedFunction w;
    w.func = module.value().functions.front();
    w.digest = extract::digest(w.func);
    w.origin = {fs::path(file).filename().string(), w.func.name, w.func.blocks.empty() ? "" : w.func.blocks[0].label};

    auto factory = pipeline::make_backend_factory(cfg.value().agent);
    if (!factory)
      return fail(kExitFatal, factory.error());
    std::unique_ptr<llm::CompletionBackend> backend = factory.value()();
    pipeline::Toolbox tools = pipeline::make_toolbox(cfg.value());
    pipeline::SequenceOutcome o = pipeline::process_sequence(w, *backend, tools, cfg.value());
    print_outcome(o, std::cout);
    return 0;
  }
};

// -- run / replay ----------------------------------------------------------

int run_pipeline(const pipeline::PipelineConfig &cfg) {
  auto factory = pipeline::make_backend_factory(cfg.agent);
  if (!factory)
    return fail(kExitFatal, factory.error());
  pipeline::Toolbox tools = pipeline::make_toolbox(cfg);
  std::signal(SIGINT, on_sigint);
  pipeline::RunResult r = pipeline::run(cfg, factory.value(), tools, &g_cancel, &std::cerr);
  std::signal(SIGINT, SIG_DFL);
  std::cout << catalog::to_text(r.stats);
  if (g_cancel)
    std::cerr << "peepseek: interrupted; unprocessed sequences were released\n";
  return r.exit_code;
}

struct RunCmd {
  std::vector<std::string> corpus;
  bool deterministic = false;
  CommonFlags common;

  void add(CLI::App &app) {
    CLI::App *cmd = app.add_subcommand("run", "Full pipeline over a corpus");
    cmd->add_option("corpus", corpus, "Overrides the configured corpus");
    cmd->add_flag("--deterministic", deterministic, "Zero timestamps");
    common.add(cmd, true);
    cmd->callback([this] { throw CLI::RuntimeError(run()); });
  }

  int run() {
    auto cfg = common.load();
    if (!cfg)
      return fail(kExitFatal, cfg.error());
    if (!corpus.empty())
      cfg.value().corpus = corpus;
    if (deterministic)
      cfg.value().deterministic = true;
    if (cfg.value().corpus.empty())
      return fail(kExitCorpus, "no corpus given");
    return run_pipeline(cfg.value());
  }
};

struct ReplayCmd {
  std::vector<std::string> corpus;
  std::string transcript;
  std::string out_dir = ".";
  std::string dedup_file;
  bool timestamps = false;
  CommonFlags common;

  void add(CLI::App &app) {
    CLI::App *cmd = app.add_subcommand("replay", "Deterministic run against a recorded transcript");
    cmd->add_option("corpus", corpus)->required();
    cmd->add_option("--transcript", transcript)->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "Directory for findings.jsonl and stats.json");
    cmd->add_option("--dedup-file", dedup_file, "Persist digests across replays");
    cmd->add_flag("--timestamps", timestamps, "Record wall-clock timestamps");
    common.add(cmd, false);
    cmd->callback([this] { throw CLI::RuntimeError(run()); });
  }

  int run() {
    auto cfg = common.load();
    if (!cfg)
      return fail(kExitFatal, cfg.error());
    pipeline::PipelineConfig &c = cfg.value();
    c.corpus = corpus;
    c.agent.backend = llm::AgentConfig::Backend::ScriptedReplay;
    c.agent.transcript_path = transcript;
    c.deterministic = !timestamps;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    c.findings_path = (fs::path(out_dir) / "findings.jsonl").string();
    c.stats_path = (fs::path(out_dir) / "stats.json").string();
    c.digest_path = dedup_file;
    if (fs::exists(c.findings_path))
      return fail(kExitFatal, c.findings_path + " already exists; replay writes a fresh log");
    return run_pipeline(c);
  }
};

// -- verify / report / digest ----------------------------------------------

struct VerifyCmd {
  std::string src, tgt;
  std::string oracle = "builtin";
  std::string config;

  void add(CLI::App &app) {
    CLI::App *cmd = app.add_subcommand("verify", "Check that tgt refines src");
    cmd->add_option("src", src)->required()->check(CLI::ExistingFile);
    cmd->add_option("tgt", tgt)->required()->check(CLI::ExistingFile);
    cmd->add_option("--oracle", oracle)->check(CLI::IsMember({"builtin", "external"}));
    cmd->add_option("--config", config, "Tool paths and oracle settings")->check(CLI::ExistingFile);
    cmd->callback([this] { throw CLI::RuntimeError(run()); });
  }

  int run() {
    pipeline::PipelineConfig cfg;
    if (!config.empty()) {
      auto loaded = pipeline::load_config(config);
      if (!loaded)
        return fail(kExitFatal, loaded.error());
      cfg = std::move(loaded.value());
    }
    auto s = read_text(src), t = read_text(tgt);
    if (!s || !t)
      return fail(kExitFatal, "cannot read input");
    toolchain::RefinementVerdict v;
    if (oracle == "builtin") {
      v = toolchain::verify_builtin(*s, *t, cfg.oracle);
    } else {
      auto r = toolchain::verify_refinement(cfg.tools, *s, *t);
      if (!r)
        return fail(kExitFatal, std::string(toolchain::to_string(r.error().kind)) + ": " + r.error().message);
      v = r.value();
    }
    std::cout << toolchain::to_string(v.kind) << "\n";
    if (!v.text.empty())
      std::cout << v.text << (v.text.back() == '\n' ? "" : "\n");
    return v.kind == toolchain::RefinementVerdict::Kind::Correct ? 0 : kExitFatal;
  }
};

struct ReportCmd {
  std::string findings;
  std::string pairs;

  void add(CLI::App &app) {
    CLI::App *cmd = app.add_subcommand("report", "Render a findings log");
    cmd->add_option("findings", findings)->required()->check(CLI::ExistingFile);
    cmd->add_option("--pairs", pairs, "Also write finding-<id>.src.ll/.tgt.ll here");
    cmd->callback([this] { throw CLI::RuntimeError(run()); });
  }

  int run() {
    auto loaded = catalog::load_findings(findings);
    if (!loaded)
      return fail(kExitFatal, findings + ": " + loaded.error().message);
    auto text = catalog::report(loaded.value(), pairs);
    if (!text)
      return fail(kExitFatal, text.error().message);
    std::cout << text.value();
    return 0;
  }
};

struct DigestCmd {
  std::string file;

  void add(CLI::App &app) {
    CLI::App *cmd = app.add_subcommand("digest", "Print the sequence digest of each function");
    cmd->add_option("file", file)->required()->check(CLI::ExistingFile);
    cmd->callback([this] { throw CLI::RuntimeError(run()); });
  }

  int run() {
    auto text = read_text(file);
    if (!text)
      return fail(kExitFatal, "cannot read " + file);
    auto module = ir::parse_module(*text);
    if (!module)
      return fail(kExitFatal, module.error().render(file));
    for (const ir::Function &f : module.value().functions)
      std::cout << extract::digest(f).hex() << "  @" << f.name << "\n";
    return 0;
  }
};

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"peepseek: mine LLVM IR for missed peephole optimizations"};
  app.require_subcommand(1);
  ExtractCmd extract_cmd;
  OptimizeCmd optimize_cmd;
  RunCmd run_cmd;
  ReplayCmd replay_cmd;
  VerifyCmd verify_cmd;
  ReportCmd report_cmd;
  DigestCmd digest_cmd;
  extract_cmd.add(app);
  optimize_cmd.add(app);
  run_cmd.add(app);
  replay_cmd.add(app);
  verify_cmd.add(app);
  report_cmd.add(app);
  digest_cmd.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::RuntimeError &e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitFatal;
  }
  return 0;
}
