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

#ifndef PEEPSEEK_CATALOG_CATALOG_H
#define PEEPSEEK_CATALOG_CATALOG_H

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "peepseek/extract/digest.h"
#include "peepseek/extract/extractor.h"
#include "peepseek/interest/interestingness.h"
#include "peepseek/support/result.h"

namespace peepseek::catalog {

struct StorageError {
  enum class Kind { Io, CorruptHeader, Truncated };
  Kind kind;
  std::string message;
};

const char *to_string(StorageError::Kind k);

/// One attempt of the agent loop as it ended.
struct AttemptRecord {
  int attempt = 0;
  std::string candidate_digest; // empty when no candidate was parsed
  std::string outcome;          // syntax_error, not_interesting, incorrect, correct, ...
  std::string detail;           // feedback payload or diagnostic

  bool operator==(const AttemptRecord &) const = default;
};

struct Finding {
  uint64_t id = 0;
  std::string original_digest;
  extract::SeqSource provenance;
  std::string original_ir;
  std::string candidate_ir;
  int attempts_used = 0;
  std::vector<AttemptRecord> verdict_chain;
  interest::Metrics metrics_before;
  interest::Metrics metrics_after;
  std::string interest_reason;
  std::string verifier; // external | builtin
  std::string prompt_template_id;
  std::string model_id;
  double temperature = 0;
  int64_t started_at_ms = 0;  // zero under --deterministic
  int64_t recorded_at_ms = 0; // zero under --deterministic

  bool operator==(const Finding &) const = default;
};

/// One JSON object, keys in a fixed order, no trailing newline.
std::string to_json(const Finding &f);
Result<Finding, std::string> finding_from_json(std::string_view line);

/// Append-only findings.jsonl. Ids continue after the largest id already in
/// the file. Each record is written, flushed and fsynced under a lock
/// before record() returns.
class FindingsLog {
 public:
  static Result<std::unique_ptr<FindingsLog>, StorageError> open(const std::filesystem::path &path);
  ~FindingsLog();

  Result<uint64_t, StorageError> record(Finding f);
  uint64_t recorded() const;

 private:
  FindingsLog(std::FILE *file, uint64_t next) : file_(file), next_(next) {}

  mutable std::mutex mu_;
  std::FILE *file_;
  uint64_t next_;
  uint64_t recorded_ = 0;
};

Result<std::vector<Finding>, StorageError> load_findings(const std::filesystem::path &path);

/// Digest file: "PSDIGST1", entry count as u64 little-endian, then the
/// sorted 32-byte digests. A missing file loads as the empty set.
Result<extract::DigestSet, StorageError> load_digests(const std::filesystem::path &path);
/// Writes to a sibling temp file and renames it into place.
Result<std::size_t, StorageError> flush_digests(const std::filesystem::path &path,
                                                const extract::DigestSet &set);

inline constexpr std::size_t kDigestFlushInterval = 10000;

struct RunStats {
  uint64_t files = 0;
  uint64_t parse_failures = 0;
  uint64_t sequences_seen = 0;
  uint64_t deduped = 0;
  uint64_t filtered_optimizable = 0;
  uint64_t wrap_errors = 0;
  uint64_t over_cap = 0;
  // Per attempt.
  uint64_t agent_calls = 0;
  uint64_t agent_errors = 0;
  uint64_t extraction_errors = 0;
  uint64_t syntax_errors = 0;
  uint64_t incorrect = 0;
  uint64_t verifier_errors = 0;
  // Per sequence, terminal.
  uint64_t findings = 0;
  uint64_t not_interesting = 0;
  uint64_t syntax_final = 0;
  uint64_t incorrect_final = 0;
  uint64_t verifier_error_final = 0;
  uint64_t extraction_final = 0;
  uint64_t unsupported = 0;
  uint64_t timeouts = 0;
  uint64_t agent_failed = 0;
  uint64_t tool_failed = 0;
  uint64_t cancelled = 0;

  RunStats &operator+=(const RunStats &o);
  bool operator==(const RunStats &) const = default;

  uint64_t agent_processed() const;
  /// sequences_seen equals the filtered buckets plus every terminal state.
  bool conserved() const;
};

std::string to_json(const RunStats &s);
std::string to_text(const RunStats &s);

/// Human-readable rendering of findings; with `pair_dir` set, also writes
/// finding-<id>.src.ll / .tgt.ll (functions named @src and @tgt) there.
Result<std::string, StorageError> report(const std::vector<Finding> &findings,
                                         const std::filesystem::path &pair_dir = {});

} // namespace peepseek::catalog

#endif // PEEPSEEK_CATALOG_CATALOG_H
