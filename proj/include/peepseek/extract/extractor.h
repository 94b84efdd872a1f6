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

#ifndef PEEPSEEK_EXTRACT_EXTRACTOR_H
#define PEEPSEEK_EXTRACT_EXTRACTOR_H

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "peepseek/extract/digest.h"
#include "peepseek/ir/ir.h"
#include "peepseek/support/result.h"

namespace peepseek::extract {

struct SeqSource {
  std::string module_id;
  std::string function;
  std::string block;

  bool operator==(const SeqSource &) const = default;
};

struct InstrSeq {
  SeqSource source;
  std::vector<std::size_t> indices; // strictly increasing
  std::vector<ir::Instruction> instructions;
};

struct WrappedFunction {
  ir::Function func;
  SeqSource origin;
  std::vector<std::size_t> indices;
  SeqDigest digest;
};

struct WrapError {
  enum class Reason { VoidResult, Opaque, Empty };
  Reason reason;
  std::string detail;
};

const char *to_string(WrapError::Reason r);

enum class MemoryDependence { Off, Conservative };

/// Sequence extraction on one block: walk the non-terminator, non-phi instructions in
/// reverse, prepend each to every sequence holding one of its users, and
/// start a singleton when it has none. Sequences come back in creation order.
std::vector<std::vector<std::size_t>> extract_index_seqs(
    const ir::BasicBlock &bb, MemoryDependence memdep = MemoryDependence::Off);

std::vector<InstrSeq> extract_seqs_from_bb(const ir::BasicBlock &bb, const SeqSource &source = {},
                                           MemoryDependence memdep = MemoryDependence::Off);

Result<WrappedFunction, WrapError> wrap_as_func(const InstrSeq &seq);

struct ExtractError {
  std::string tool;
  std::string message;
};

struct ExtractOptions {
  MemoryDependence memory_dependence = MemoryDependence::Off;
  std::size_t max_seq_len = 16;
  /// OpenMP threads for the per-block and filter phases; 1 runs serially.
  int threads = 1;
};

/// Per-sequence accounting. Every extracted sequence lands in exactly one
/// bucket: seen = deduped + filtered_optimizable + wrap_errors + over_cap +
/// emitted.
struct ExtractStats {
  std::size_t seen = 0;
  std::size_t deduped = 0;
  std::size_t filtered_optimizable = 0;
  std::size_t wrap_errors = 0;
  std::size_t over_cap = 0;
  std::size_t emitted = 0;

  ExtractStats &operator+=(const ExtractStats &o);
};

/// Decides whether the preprocessing pipeline still simplifies a wrapped
/// function. Must be safe to call concurrently.
using OptimizableCheck = std::function<Result<bool, ExtractError>(const WrappedFunction &)>;

/// Extracts, wraps and deduplicates every block of `module`. Digests are
/// claimed in `dedup` before the wrap, cap and optimizability checks, so a
/// sequence is counted once across runs no matter which bucket it lands in.
/// Output order depends only on the module, never on the thread count.
Result<std::vector<WrappedFunction>, ExtractError> extract(const ir::Module &module,
                                                           DigestSet &dedup,
                                                           const ExtractOptions &options,
                                                           const OptimizableCheck &optimizable,
                                                           ExtractStats *stats = nullptr);

/// Single-threaded reference for extract(); same contract.
Result<std::vector<WrappedFunction>, ExtractError> extract_serial(
    const ir::Module &module, DigestSet &dedup, const ExtractOptions &options,
    const OptimizableCheck &optimizable, ExtractStats *stats = nullptr);

} // namespace peepseek::extract

#endif // PEEPSEEK_EXTRACT_EXTRACTOR_H
