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

#ifndef PEEPSEEK_ORACLE_EQUIVALENCE_H
#define PEEPSEEK_ORACLE_EQUIVALENCE_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peepseek/ir/ir.h"
#include "peepseek/oracle/interpreter.h"

namespace peepseek::oracle {

struct EquivalenceOptions {
  uint64_t budget = 65536;
  uint64_t seed = 0x9e3779b97f4a7c15ull;
  /// Functions whose inputs total at most this many bits, and that do not
  /// read memory, are checked exhaustively.
  unsigned exhaustive_bits = 20;
  /// OpenMP threads; 0 uses the runtime default.
  int threads = 0;
};

struct EquivalenceReport {
  enum class Verdict { Equivalent, NotEquivalent, Unsupported, SignatureMismatch };
  enum class Mode { Exhaustive, Sampled };

  Verdict verdict = Verdict::Unsupported;
  Mode mode = Mode::Sampled;
  uint64_t inputs_checked = 0;
  /// Index of the refuting input in the enumeration order; the smallest one
  /// is always reported.
  uint64_t counterexample_index = 0;
  std::vector<RuntimeValue> inputs;
  std::optional<MemoryModel> memory;
  std::optional<EvalResult> src_out;
  std::optional<EvalResult> tgt_out;
  std::string detail; // unsupported instruction or signature message

  bool equivalent() const { return verdict == Verdict::Equivalent; }
};

/// Compares `src` and `tgt` on every input when the input space is small,
/// otherwise on a deterministic suite: per-input boundary values and values
/// next to the constants both functions mention (cross product, capped at
/// the budget), then seeded uniform samples up to the budget. Both sides
/// trapping counts as agreement. Parallel over the input range; the result
/// does not depend on the thread count.
EquivalenceReport check_equivalence(const ir::Function &src, const ir::Function &tgt,
                                    const EquivalenceOptions &options = {});

/// Single-threaded reference with the same contract.
EquivalenceReport check_equivalence_serial(const ir::Function &src, const ir::Function &tgt,
                                           const EquivalenceOptions &options = {});

/// The first `limit` inputs of the enumeration check_equivalence would use,
/// one value per parameter, with the memory each input sees.
std::vector<std::pair<std::vector<RuntimeValue>, std::optional<MemoryModel>>> input_suite(
    const ir::Function &src, const ir::Function &tgt, const EquivalenceOptions &options,
    uint64_t limit);

/// Alive-style counterexample block for a NotEquivalent report; parameter
/// names come from `src`.
std::string format_counterexample(const EquivalenceReport &report, const ir::Function &src);

const char *to_string(EquivalenceReport::Verdict v);

} // namespace peepseek::oracle

#endif // PEEPSEEK_ORACLE_EQUIVALENCE_H
