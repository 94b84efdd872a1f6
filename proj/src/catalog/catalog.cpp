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

#include "peepseek/catalog/catalog.h"

#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "peepseek/ir/parser.h"
#include "peepseek/ir/printer.h"

namespace peepseek::catalog {

using nlohmann::ordered_json;

const char *to_string(StorageError::Kind k) {
  switch (k) {
  case StorageError::Kind::Io: return "io";
  case StorageError::Kind::CorruptHeader: return "corrupt-header";
  case StorageError::Kind::Truncated: return "truncated";
  }
  return "?";
}

namespace {

ordered_json metrics_json(const interest::Metrics &m) {
  ordered_json j;
  j["instruction_count"] = m.instruction_count;
  j["total_cycles"] = m.total_cycles ? ordered_json(*m.total_cycles) : ordered_json(nullptr);
  return j;
}

interest::Metrics metrics_from(const nlohmann::json &j) {
  interest::Metrics m;
  m.instruction_count = j.at("instruction_count").get<std::size_t>();
  if (!j.at("total_cycles").is_null())
    m.total_cycles = j.at("total_cycles").get<uint64_t>();
  return m;
}

StorageError io_error(const std::string &what, const std::filesystem::path &p) {
  return {StorageError::Kind::Io, what + " " + p.string() + ": " + std::strerror(errno)};
}

} // namespace

std::string to_json(const Finding &f) {
  ordered_json j;
  j["id"] = f.id;
  j["original_digest"] = f.original_digest;
  j["provenance"] = {{"module", f.provenance.module_id},
                     {"function", f.provenance.function},
                     {"block", f.provenance.block}};
  j["original_ir"] = f.original_ir;
  j["candidate_ir"] = f.candidate_ir;
  j["attempts_used"] = f.attempts_used;
  ordered_json chain = ordered_json::array();
  for (const AttemptRecord &a : f.verdict_chain) {
    ordered_json r;
    r["attempt"] = a.attempt;
    r["candidate_digest"] = a.candidate_digest;
    r["outcome"] = a.outcome;
    r["detail"] = a.detail;
    chain.push_back(r);
  }
  j["verdict_chain"] = chain;
  j["metrics_before"] = metrics_json(f.metrics_before);
  j["metrics_after"] = metrics_json(f.metrics_after);
  j["interest_reason"] = f.interest_reason;
  j["verifier"] = f.verifier;
  j["prompt_template_id"] = f.prompt_template_id;
  j["model_id"] = f.model_id;
  j["temperature"] = f.temperature;
  j["started_at_ms"] = f.started_at_ms;
  j["recorded_at_ms"] = f.recorded_at_ms;
  return j.dump();
}

Result<Finding, std::string> finding_from_json(std::string_view line) {
  try {
    auto j = nlohmann::json::parse(line);
    Finding f;
    f.id = j.at("id").get<uint64_t>();
    f.original_digest = j.at("original_digest").get<std::string>();
    const auto &p = j.at("provenance");
    f.provenance = {p.at("module").get<std::string>(), p.at("function").get<std::string>(),
                    p.at("block").get<std::string>()};
    f.original_ir = j.at("original_ir").get<std::string>();
    f.candidate_ir = j.at("candidate_ir").get<std::string>();
    f.attempts_used = j.at("attempts_used").get<int>();
    for (const auto &a : j.at("verdict_chain"))
      f.verdict_chain.push_back({a.at("attempt").get<int>(), a.at("candidate_digest").get<std::string>(),
                                 a.at("outcome").get<std::string>(), a.at("detail").get<std::string>()});
    f.metrics_before = metrics_from(j.at("metrics_before"));
    f.metrics_after = metrics_from(j.at("metrics_after"));
    f.interest_reason = j.at("interest_reason").get<std::string>();
    f.verifier = j.at("verifier").get<std::string>();
    f.prompt_template_id = j.at("prompt_template_id").get<std::string>();
    f.model_id = j.at("model_id").get<std::string>();
    f.temperature = j.at("temperature").get<double>();
    f.started_at_ms = j.at("started_at_ms").get<int64_t>();
    f.recorded_at_ms = j.at("recorded_at_ms").get<int64_t>();
    return f;
  } catch (const std::exception &e) {
    return std::string(e.what());
  }
}

Result<std::vector<Finding>, StorageError> load_findings(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return io_error("cannot open", path);
  std::vector<Finding> out;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (line.empty())
      continue;
    auto f = finding_from_json(line);
    if (!f)
      return StorageError{StorageError::Kind::Io,
                          path.string() + ":" + std::to_string(n) + ": " + f.error()};
    out.push_back(std::move(f.value()));
  }
  return out;
}

Result<std::unique_ptr<FindingsLog>, StorageError> FindingsLog::open(const std::filesystem::path &path) {
  uint64_t next = 1;
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    auto existing = load_findings(path);
    if (!existing)
      return existing.error();
    for (const Finding &f : existing.value())
      next = std::max(next, f.id + 1);
  }
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path(), ec);
  std::FILE *file = std::fopen(path.c_str(), "ab");
  if (!file)
    return io_error("cannot open", path);
  return std::unique_ptr<FindingsLog>(new FindingsLog(file, next));
}

FindingsLog::~FindingsLog() {
  if (file_)
    std::fclose(file_);
}

Result<uint64_t, StorageError> FindingsLog::record(Finding f) {
  std::lock_guard lock(mu_);
  f.id = next_;
  std::string line = to_json(f) + "\n";
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fflush(file_) != 0 ||
      ::fsync(::fileno(file_)) != 0)
    return StorageError{StorageError::Kind::Io, std::string("findings write: ") + std::strerror(errno)};
  ++next_;
  ++recorded_;
  return f.id;
}

uint64_t FindingsLog::recorded() const {
  std::lock_guard lock(mu_);
  return recorded_;
}

namespace {

constexpr char kMagic[8] = {'P', 'S', 'D', 'I', 'G', 'S', 'T', '1'};

} // namespace

Result<extract::DigestSet, StorageError> load_digests(const std::filesystem::path &path) {
  extract::DigestSet set;
  std::error_code ec;
  if (!std::filesystem::exists(path, ec))
    return set;
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return io_error("cannot open", path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 16 || std::memcmp(data.data(), kMagic, 8) != 0)
    return StorageError{StorageError::Kind::CorruptHeader, path.string() + ": bad digest file header"};
  uint64_t count = 0;
  for (int i = 7; i >= 0; --i)
    count = (count << 8) | static_cast<uint8_t>(data[8 + i]);
  uint64_t body = data.size() - 16;
  if (body % 32 != 0 || body / 32 > count)
    return StorageError{StorageError::Kind::CorruptHeader,
                        path.string() + ": body size " + std::to_string(body) +
                            " does not match header count " + std::to_string(count)};
  if (body / 32 < count)
    return StorageError{StorageError::Kind::Truncated,
                        path.string() + ": header promises " + std::to_string(count) +
                            " digests, file holds " + std::to_string(body / 32)};
  for (uint64_t k = 0; k < count; ++k) {
    extract::SeqDigest d;
    std::memcpy(d.bytes.data(), data.data() + 16 + k * 32, 32);
    set.insert(d);
  }
  set.take_dirty_count();
  return set;
}

Result<std::size_t, StorageError> flush_digests(const std::filesystem::path &path,
                                                const extract::DigestSet &set) {
  std::vector<extract::SeqDigest> all = set.sorted();
  std::string data(kMagic, 8);
  uint64_t count = all.size();
  for (int i = 0; i < 8; ++i)
    data.push_back(static_cast<char>((count >> (8 * i)) & 0xFF));
  for (const extract::SeqDigest &d : all)
    data.append(reinterpret_cast<const char *>(d.bytes.data()), 32);

  std::error_code ec;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path(), ec);
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  std::FILE *f = std::fopen(tmp.c_str(), "wb");
  if (!f)
    return io_error("cannot create", tmp);
  bool ok = std::fwrite(data.data(), 1, data.size(), f) == data.size() && std::fflush(f) == 0 &&
            ::fsync(::fileno(f)) == 0;
  ok = (std::fclose(f) == 0) && ok;
  if (!ok)
    return io_error("cannot write", tmp);
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    return StorageError{StorageError::Kind::Io, "rename " + tmp.string() + ": " + ec.message()};
  return all.size();
}

RunStats &RunStats::operator+=(const RunStats &o) {
  files += o.files;
  parse_failures += o.parse_failures;
  sequences_seen += o.sequences_seen;
  deduped += o.deduped;
  filtered_optimizable += o.filtered_optimizable;
  wrap_errors += o.wrap_errors;
  over_cap += o.over_cap;
  agent_calls += o.agent_calls;
  agent_errors += o.agent_errors;
  extraction_errors += o.extraction_errors;
  syntax_errors += o.syntax_errors;
  incorrect += o.incorrect;
  verifier_errors += o.verifier_errors;
  findings += o.findings;
  not_interesting += o.not_interesting;
  syntax_final += o.syntax_final;
  incorrect_final += o.incorrect_final;
  verifier_error_final += o.verifier_error_final;
  extraction_final += o.extraction_final;
  unsupported += o.unsupported;
  timeouts += o.timeouts;
  agent_failed += o.agent_failed;
  tool_failed += o.tool_failed;
  cancelled += o.cancelled;
  return *this;
}

uint64_t RunStats::agent_processed() const {
  return findings + not_interesting + syntax_final + incorrect_final + verifier_error_final +
         extraction_final + timeouts + agent_failed + tool_failed;
}

bool RunStats::conserved() const {
  return sequences_seen == deduped + filtered_optimizable + wrap_errors + over_cap + unsupported +
                               cancelled + agent_processed() &&
         findings <= sequences_seen - deduped;
}

namespace {

std::vector<std::pair<const char *, uint64_t>> fields(const RunStats &s) {
  return {{"files", s.files},
          {"parse_failures", s.parse_failures},
          {"sequences_seen", s.sequences_seen},
          {"deduped", s.deduped},
          {"filtered_optimizable", s.filtered_optimizable},
          {"wrap_errors", s.wrap_errors},
          {"over_cap", s.over_cap},
          {"agent_calls", s.agent_calls},
          {"agent_errors", s.agent_errors},
          {"extraction_errors", s.extraction_errors},
          {"syntax_errors", s.syntax_errors},
          {"incorrect", s.incorrect},
          {"verifier_errors", s.verifier_errors},
          {"findings", s.findings},
          {"not_interesting", s.not_interesting},
          {"syntax_final", s.syntax_final},
          {"incorrect_final", s.incorrect_final},
          {"verifier_error_final", s.verifier_error_final},
          {"extraction_final", s.extraction_final},
          {"unsupported", s.unsupported},
          {"timeouts", s.timeouts},
          {"agent_failed", s.agent_failed},
          {"tool_failed", s.tool_failed},
          {"cancelled", s.cancelled}};
}

} // namespace

std::string to_json(const RunStats &s) {
  ordered_json j;
  for (auto [k, v] : fields(s))
    j[k] = v;
  return j.dump(2) + "\n";
}

std::string to_text(const RunStats &s) {
  std::string out;
  for (auto [k, v] : fields(s)) {
    std::string key = k;
    out += key + std::string(key.size() < 22 ? 22 - key.size() : 1, ' ') + std::to_string(v) + "\n";
  }
  return out;
}

namespace {

std::string renamed(const std::string &text, const std::string &name) {
  auto m = ir::parse_module(text);
  if (!m || m.value().functions.size() != 1)
    return text;
  ir::Function f = m.value().functions[0];
  f.name = name;
  return ir::print_standalone(f);
}

std::string metrics_text(const interest::Metrics &m) {
  std::string s = std::to_string(m.instruction_count) + " instructions";
  if (m.total_cycles)
    s += ", " + std::to_string(*m.total_cycles) + " cycles";
  return s;
}

} // namespace

Result<std::string, StorageError> report(const std::vector<Finding> &findings,
                                         const std::filesystem::path &pair_dir) {
  std::ostringstream out;
  out << findings.size() << " finding" << (findings.size() == 1 ? "" : "s") << "\n";
  std::error_code ec;
  if (!pair_dir.empty())
    std::filesystem::create_directories(pair_dir, ec);
  for (const Finding &f : findings) {
    out << "\n== finding " << f.id << " ==\n"
        << "from:      " << f.provenance.module_id << " @" << f.provenance.function << " %"
        << f.provenance.block << "\n"
        << "digest:    " << f.original_digest << "\n"
        << "why:       " << f.interest_reason << " (" << metrics_text(f.metrics_before) << " -> "
        << metrics_text(f.metrics_after) << ")\n"
        << "verifier:  " << f.verifier << "\n"
        << "model:     " << f.model_id << " (" << f.prompt_template_id << ")\n"
        << "attempts:  " << f.attempts_used;
    for (const AttemptRecord &a : f.verdict_chain)
      out << (a.attempt ? " -> " : " [") << a.outcome;
    out << (f.verdict_chain.empty() ? "" : "]") << "\n\n--- original\n"
        << f.original_ir << "+++ candidate\n"
        << f.candidate_ir;
    if (!pair_dir.empty()) {
      for (auto [suffix, text, name] :
           {std::tuple{".src.ll", &f.original_ir, "src"}, std::tuple{".tgt.ll", &f.candidate_ir, "tgt"}}) {
        std::filesystem::path p = pair_dir / ("finding-" + std::to_string(f.id) + suffix);
        std::ofstream o(p, std::ios::binary);
        o << renamed(*text, name);
        if (!o)
          return io_error("cannot write", p);
      }
    }
  }
  return out.str();
}

} // namespace peepseek::catalog
