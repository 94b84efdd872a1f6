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

#ifndef PEEPSEEK_ORACLE_INTERPRETER_H
#define PEEPSEEK_ORACLE_INTERPRETER_H

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "peepseek/ir/ir.h"
#include "peepseek/support/result.h"
#include "peepseek/support/wide_int.h"

namespace peepseek::oracle {

struct BitValue {
  unsigned width = 0;
  u128 value = 0;

  bool operator==(const BitValue &) const = default;
};

/// A scalar or fixed-vector integer value; scalars have one lane. Pointers
/// are 64-bit integers.
struct RuntimeValue {
  unsigned width = 0;
  bool is_vector = false;
  std::vector<u128> lanes;

  static RuntimeValue scalar(unsigned width, u128 v) { return {width, false, {truncate(v, width)}}; }
  BitValue lane(std::size_t i) const { return {width, lanes.at(i)}; }

  bool operator==(const RuntimeValue &) const = default;
};

struct Trap {
  std::string reason;
};

using EvalResult = std::variant<RuntimeValue, Trap>;

struct Unsupported {
  std::string instruction;
};

/// Read-only memory seen by loads: every address holds a byte, either a
/// constant fill or a hash of (seed, address). Source and target of one
/// check always read the same memory.
struct MemoryModel {
  enum class Kind { Fill, Hashed };
  Kind kind = Kind::Fill;
  uint8_t fill = 0;
  uint64_t seed = 0;

  uint8_t byte(uint64_t addr) const {
    return kind == Kind::Fill ? fill : static_cast<uint8_t>(mix64(seed ^ mix64(addr)) >> 24);
  }
  std::string describe() const;
};

/// A function compiled to a flat register program over the supported
/// subset: integer binops, icmp, select, zext/sext/trunc, freeze, the
/// llvm.umin/umax/smin/smax/abs intrinsics (scalar and fixed vector), and
/// getelementptr/load against a MemoryModel.
class Program {
 public:
  static Result<Program, Unsupported> compile(const ir::Function &f);

  struct Slot {
    uint32_t offset = 0;
    uint32_t lanes = 1;
    unsigned width = 0;
    bool is_vector = false;
  };

  const std::vector<Slot> &params() const { return params_; }
  const Slot &result() const { return result_; }
  bool reads_memory() const { return reads_memory_; }
  const std::vector<u128> &constants_seen() const { return constants_; }

  /// Fresh register file with constants in place; inputs go into the
  /// parameter slots.
  std::vector<u128> registers() const { return template_; }

  /// Runs on a register file prepared by registers(). Returns false on a
  /// trap, with the reason in `trap`.
  bool run(std::vector<u128> &regs, const MemoryModel &mem, const char **trap) const;

  RuntimeValue read(const std::vector<u128> &regs, const Slot &s) const;
  void write(std::vector<u128> &regs, const Slot &s, const RuntimeValue &v) const;

  struct GepTerm {
    uint32_t slot;
    unsigned width;
    uint64_t scale;
  };

  struct Step {
    uint8_t op = 0;
    uint8_t pred = 0;
    unsigned width = 0;     // operand width
    unsigned out_width = 0; // result width
    uint32_t lanes = 1;
    uint32_t dst = 0;
    uint32_t a = 0, b = 0, c = 0;
    uint8_t flags = 0;     // poison-generating flags to check
    bool a_scalar = false; // select condition broadcast
    std::vector<GepTerm> gep;
  };

 private:
  std::vector<Step> steps_;
  std::vector<u128> template_;
  std::vector<Slot> params_;
  Slot result_;
  bool reads_memory_ = false;
  std::vector<u128> constants_;
};

/// Evaluates `f` on `args` (one per parameter, matching widths).
Result<EvalResult, Unsupported> eval(const ir::Function &f, const std::vector<RuntimeValue> &args,
                                     const MemoryModel &mem = {});

/// Alive-style rendering: `#x01 (1)`, vectors as `< ... >`.
std::string format_value(const RuntimeValue &v);

} // namespace peepseek::oracle

#endif // PEEPSEEK_ORACLE_INTERPRETER_H
