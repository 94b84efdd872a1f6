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

#ifndef PEEPSEEK_INTEREST_INTERESTINGNESS_H
#define PEEPSEEK_INTEREST_INTERESTINGNESS_H

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "peepseek/ir/ir.h"
#include "peepseek/ir/parser.h"
#include "peepseek/support/result.h"

namespace peepseek::interest {

struct Metrics {
  std::size_t instruction_count = 0; // non-terminators; the ret is not counted
  std::optional<uint64_t> total_cycles;

  bool operator==(const Metrics &) const = default;
};

/// Cycle estimator hook; nullopt when it fails or is disabled.
using CycleFn = std::function<std::optional<uint64_t>(std::string_view ir_text)>;

Metrics measure(const ir::Function &f, const CycleFn &cycles = {});
Result<Metrics, ir::ParseError> measure(std::string_view f_text, const CycleFn &cycles = {});

struct InterestDecision {
  enum class Reason { FewerInstructions, FewerCycles, SyntacticDifference };
  bool interesting = false;
  Reason reason = Reason::FewerInstructions; // meaningful when interesting

  bool operator==(const InterestDecision &) const = default;
};

const char *to_string(InterestDecision::Reason r);
/// "fewer_instructions", ..., or "not_interesting".
const char *to_string(const InterestDecision &d);

/// Fewer instructions, else strictly fewer cycles (both known), else a
/// syntactic difference at equal count and equal-or-unknown cycles.
InterestDecision judge(const Metrics &original, const Metrics &candidate, bool texts_differ);

/// Compares canonical encodings, so layout and value names never count.
bool texts_differ(const ir::Function &a, const ir::Function &b);

} // namespace peepseek::interest

#endif // PEEPSEEK_INTEREST_INTERESTINGNESS_H
