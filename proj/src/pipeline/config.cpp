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

#include "peepseek/pipeline/config.h"

#include <fstream>
#include <functional>
#include <sstream>

#include "peepseek/support/toml.h"

namespace peepseek::pipeline {

const char *to_string(InterestMode m) {
  return m == InterestMode::CountOnly ? "count-only" : "count+cycles";
}

const char *to_string(VerifierMode m) {
  switch (m) {
  case VerifierMode::External: return "external";
  case VerifierMode::Builtin: return "builtin";
  case VerifierMode::ExternalThenBuiltin: return "external-then-builtin";
  }
  return "?";
}

const char *to_string(PreprocessorMode m) {
  switch (m) {
  case PreprocessorMode::External: return "external";
  case PreprocessorMode::Builtin: return "builtin";
  case PreprocessorMode::Auto: return "auto";
  }
  return "?";
}

Result<bool, std::string> validate(const PipelineConfig &cfg) {
  if (cfg.workers < 1)
    return std::string("workers must be at least 1");
  if (cfg.agent.max_reattempts < 0)
    return std::string("max_reattempts must not be negative");
  if (cfg.sequence_budget_seconds <= 0)
    return std::string("sequence_budget_seconds must be positive");
  if (cfg.tools.timeout_seconds <= 0 || cfg.agent.timeout_seconds <= 0)
    return std::string("timeouts must be positive");
  if (cfg.extract.max_seq_len == 0)
    return std::string("max_seq_len must be positive");
  if (cfg.oracle.budget == 0)
    return std::string("oracle budget must be positive");
  return true;
}

namespace {

using Setter = std::function<std::optional<std::string>(const toml::Value &)>;

std::string type_error(const char *want) { return std::string("expected ") + want; }

Setter str(std::string &out) {
  return [&out](const toml::Value &v) -> std::optional<std::string> {
    if (auto s = std::get_if<std::string>(&v.data)) {
      out = *s;
      return std::nullopt;
    }
    return type_error("a string");
  };
}

Setter path(std::string &out, const std::filesystem::path &dir) {
  return [&out, dir](const toml::Value &v) -> std::optional<std::string> {
    auto s = std::get_if<std::string>(&v.data);
    if (!s)
      return type_error("a string");
    std::filesystem::path p(*s);
    out = (p.is_absolute() || s->empty() ? p : dir / p).lexically_normal().string();
    return std::nullopt;
  };
}

template <typename T>
Setter integer(T &out, int64_t lo) {
  return [&out, lo](const toml::Value &v) -> std::optional<std::string> {
    auto i = std::get_if<int64_t>(&v.data);
    if (!i)
      return type_error("an integer");
    if (*i < lo)
      return "must be at least " + std::to_string(lo);
    out = static_cast<T>(*i);
    return std::nullopt;
  };
}

Setter number(double &out) {
  return [&out](const toml::Value &v) -> std::optional<std::string> {
    if (auto d = std::get_if<double>(&v.data))
      out = *d;
    else if (auto i = std::get_if<int64_t>(&v.data))
      out = static_cast<double>(*i);
    else
      return type_error("a number");
    return std::nullopt;
  };
}

Setter boolean(bool &out) {
  return [&out](const toml::Value &v) -> std::optional<std::string> {
    if (auto b = std::get_if<bool>(&v.data)) {
      out = *b;
      return std::nullopt;
    }
    return type_error("true or false");
  };
}

Setter strings(std::vector<std::string> &out, const std::filesystem::path *dir) {
  return [&out, dir](const toml::Value &v) -> std::optional<std::string> {
    auto a = std::get_if<toml::Array>(&v.data);
    if (!a)
      return type_error("an array of strings");
    out.clear();
    for (const toml::Value &item : *a) {
      auto s = std::get_if<std::string>(&item.data);
      if (!s)
        return type_error("an array of strings");
      std::filesystem::path p(*s);
      out.push_back(dir && !p.is_absolute() ? (*dir / p).lexically_normal().string() : *s);
    }
    return std::nullopt;
  };
}

template <typename E>
Setter choice(E &out, std::vector<std::pair<const char *, E>> options) {
  return [&out, options](const toml::Value &v) -> std::optional<std::string> {
    auto s = std::get_if<std::string>(&v.data);
    std::string names;
    for (auto &[name, e] : options) {
      if (s && *s == name) {
        out = e;
        return std::nullopt;
      }
      names += (names.empty() ? "" : ", ") + std::string(name);
    }
    return "expected one of " + names;
  };
}

} // namespace

Result<PipelineConfig, std::string> parse_config(std::string_view text,
                                                 const std::filesystem::path &dir,
                                                 PipelineConfig cfg) {
  auto doc = toml::parse(text);
  if (!doc)
    return doc.error().render();

  std::map<std::string, std::map<std::string, Setter>> schema;
  auto &root = schema[""];
  root["corpus"] = strings(cfg.corpus, &dir);
  root["workers"] = integer(cfg.workers, 1);
  root["deterministic"] = boolean(cfg.deterministic);
  root["max_reattempts"] = integer(cfg.agent.max_reattempts, 0);
  root["interestingness"] = choice(cfg.interest, {{"count-only", InterestMode::CountOnly},
                                                  {"count+cycles", InterestMode::CountAndCycles}});
  root["verifier"] = choice(cfg.verifier, {{"external", VerifierMode::External},
                                           {"builtin", VerifierMode::Builtin},
                                           {"external-then-builtin", VerifierMode::ExternalThenBuiltin}});
  root["preprocessor"] = choice(cfg.preprocessor, {{"external", PreprocessorMode::External},
                                                   {"builtin", PreprocessorMode::Builtin},
                                                   {"auto", PreprocessorMode::Auto}});
  root["sequence_budget_seconds"] = number(cfg.sequence_budget_seconds);
  root["digest_file"] = path(cfg.digest_path, dir);
  root["findings_file"] = path(cfg.findings_path, dir);
  root["stats_file"] = path(cfg.stats_path, dir);
  root["self_check"] = boolean(cfg.self_check);

  auto &ex = schema["extract"];
  ex["memory_dependence"] = choice(cfg.extract.memory_dependence,
                                   {{"off", extract::MemoryDependence::Off},
                                    {"conservative", extract::MemoryDependence::Conservative}});
  ex["max_seq_len"] = integer(cfg.extract.max_seq_len, 1);
  ex["threads"] = integer(cfg.extract.threads, 1);
  ex["skip_optimizable_filter"] = boolean(cfg.skip_optimizable_filter);

  auto &ag = schema["agent"];
  ag["backend"] = choice(cfg.agent.backend, {{"http-api", llm::AgentConfig::Backend::HttpApi},
                                             {"scripted-replay", llm::AgentConfig::Backend::ScriptedReplay}});
  ag["endpoint"] = str(cfg.agent.endpoint);
  ag["model"] = str(cfg.agent.model);
  ag["api_key_env"] = str(cfg.agent.api_key_env);
  ag["transcript"] = path(cfg.agent.transcript_path, dir);
  ag["max_reattempts"] = integer(cfg.agent.max_reattempts, 0);
  ag["timeout_seconds"] = number(cfg.agent.timeout_seconds);
  ag["temperature"] = number(cfg.agent.temperature);
  ag["requests_per_second"] = number(cfg.agent.requests_per_second);

  auto &tl = schema["tools"];
  tl["opt"] = str(cfg.tools.opt_path);
  tl["llc"] = str(cfg.tools.llc_path);
  tl["llvm_mca"] = str(cfg.tools.mca_path);
  tl["alive_tv"] = str(cfg.tools.alive_tv_path);
  tl["target_triple"] = str(cfg.tools.target_triple);
  tl["cpu"] = str(cfg.tools.cpu);
  tl["timeout_seconds"] = number(cfg.tools.timeout_seconds);
  tl["alive_flags"] = strings(cfg.tools.alive_flags, nullptr);
  tl["keep_temps"] = boolean(cfg.tools.keep_temps);
  tl["temp_dir"] = path(cfg.tools.temp_root, dir);

  auto &orc = schema["oracle"];
  orc["budget"] = integer(cfg.oracle.budget, 1);
  orc["seed"] = integer(cfg.oracle.seed, 0);
  orc["exhaustive_bits"] = integer(cfg.oracle.exhaustive_bits, 0);
  orc["threads"] = integer(cfg.oracle.threads, 0);

  for (const auto &[table, keys] : doc.value()) {
    auto t = schema.find(table);
    if (t == schema.end()) {
      unsigned line = keys.empty() ? 0 : keys.begin()->second.line;
      return "unknown table [" + table + "]" + (line ? " near line " + std::to_string(line) : "");
    }
    for (const auto &[key, value] : keys) {
      std::string where = "line " + std::to_string(value.line) + ": " +
                          (table.empty() ? "" : table + ".") + key;
      auto setter = t->second.find(key);
      if (setter == t->second.end())
        return where + ": unknown key";
      if (auto err = setter->second(value))
        return where + ": " + *err;
    }
  }
  if (auto ok = validate(cfg); !ok)
    return ok.error();
  return cfg;
}

Result<PipelineConfig, std::string> load_config(const std::filesystem::path &p, PipelineConfig base) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    return "cannot read config " + p.string();
  std::stringstream ss;
  ss << in.rdbuf();
  auto r = parse_config(ss.str(), p.parent_path(), std::move(base));
  if (!r)
    return p.string() + ": " + r.error();
  return r;
}

} // namespace peepseek::pipeline
