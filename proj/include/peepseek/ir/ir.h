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

#ifndef PEEPSEEK_IR_IR_H
#define PEEPSEEK_IR_IR_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peepseek/support/wide_int.h"

namespace peepseek::ir {

enum class FloatKind { Half, BFloat, Float, Double, FP128, X86FP80, PPCFP128 };

/// A first-class IR type. Aggregates the pipeline never inspects (structs,
/// named types, typed pointers, function types) are kept verbatim as `Other`.
struct IrType {
  enum class Kind { Integer, Pointer, Vector, Float, Void, Label, Array, Other };

  Kind kind = Kind::Void;
  unsigned width = 0;      // Integer
  uint64_t count = 0;      // Vector lanes, Array length
  bool scalable = false;   // Vector
  unsigned addrspace = 0;  // Pointer
  FloatKind float_kind = FloatKind::Float;
  std::vector<IrType> element; // Vector, Array: exactly one entry
  std::string text;        // Other

  static IrType integer(unsigned width);
  static IrType pointer(unsigned addrspace = 0);
  static IrType vector(uint64_t lanes, IrType element, bool scalable = false);
  static IrType array(uint64_t count, IrType element);
  static IrType floating(FloatKind kind);
  static IrType void_type();
  static IrType label();
  static IrType other(std::string text);

  bool is_integer() const { return kind == Kind::Integer; }
  bool is_pointer() const { return kind == Kind::Pointer; }
  bool is_vector() const { return kind == Kind::Vector; }
  bool is_void() const { return kind == Kind::Void; }
  bool is_label() const { return kind == Kind::Label; }
  bool is_float() const { return kind == Kind::Float; }

  /// Element type for vectors, the type itself otherwise.
  const IrType &scalar() const { return is_vector() ? element.front() : *this; }
  uint64_t lanes() const { return is_vector() ? count : 1; }
  bool is_int_or_int_vector() const { return scalar().is_integer() && !scalable; }

  std::string str() const;

  bool operator==(const IrType &) const = default;
};

/// Constant payloads. Integers are exact `width`-bit patterns; the width
/// comes from the owning operand's type.
struct Constant {
  enum class Kind { Int, Null, Zero, Poison, Undef, Vector, Float, Other };

  Kind kind = Kind::Int;
  u128 bits = 0;
  std::vector<Constant> lanes; // Vector: one entry per lane
  std::string text;            // Float, Other: verbatim spelling

  static Constant integer(u128 bits);
  static Constant of(Kind kind);
  static Constant verbatim(Kind kind, std::string text);

  bool operator==(const Constant &) const = default;
};

struct ValueRef {
  enum class Kind { Local, Constant, Global };

  Kind kind = Kind::Local;
  std::string name; // Local, Global (without sigil)
  Constant constant;

  static ValueRef local(std::string name);
  static ValueRef global(std::string name);
  static ValueRef of(Constant c);

  bool is_local() const { return kind == Kind::Local; }
  bool is_constant() const { return kind == Kind::Constant; }

  bool operator==(const ValueRef &) const = default;
};

/// A value together with the type it is used at. `attrs` carries
/// parameter attributes on call arguments (`noundef`, `align 4`, ...).
struct Operand {
  IrType type;
  ValueRef value;
  std::string attrs;

  bool is_label() const { return type.is_label(); }

  bool operator==(const Operand &) const = default;
};

/// One instruction. Operand layout per opcode class:
///   binary ops, fneg, freeze:    operands = inputs (all share a type)
///   icmp/fcmp:                   predicate set, operands = lhs, rhs
///   select:                      operands = cond, true value, false value
///   casts:                       operands = source, type_args[0] = dest
///   call:                        callee set, type_args[0] = return type,
///                                optional type_args[1] = explicit fn type
///   load:                        type_args[0] = loaded type, operands = ptr
///   store:                       operands = value, ptr
///   getelementptr:               type_args[0] = source element type,
///                                operands = base, indices...
///   phi:                         type_args[0] = type, operands = value,
///                                label pairs
///   ret/br:                      operands as written (labels typed `label`)
/// Unsupported opcodes are `opaque`: printed from `verbatim`, with the local
/// names they mention collected best-effort into operands (type Other).
struct Instruction {
  std::optional<std::string> result;
  std::string opcode;
  std::vector<std::string> flags;
  std::vector<IrType> type_args;
  std::vector<Operand> operands;
  std::optional<std::string> callee;
  std::optional<std::string> predicate;
  std::string call_attrs;
  std::string metadata_text;
  bool opaque = false;
  std::string verbatim;

  bool is_terminator() const;
  bool is_phi() const { return opcode == "phi"; }
  bool produces_value() const { return result.has_value(); }

  /// Type of the produced value, when it can be derived structurally.
  std::optional<IrType> result_type() const;

  /// Names of SSA values read by this instruction (labels excluded), in
  /// operand order, duplicates kept.
  std::vector<std::string> used_locals() const;

  bool uses_local(std::string_view name) const;

  bool operator==(const Instruction &) const = default;
};

struct BasicBlock {
  std::string label; // empty for an unlabeled entry block
  std::vector<Instruction> instructions;

  bool operator==(const BasicBlock &) const = default;
};

struct Param {
  std::string name;
  IrType type;
  std::string attrs;

  bool operator==(const Param &) const = default;
};

struct Function {
  std::string name;
  std::vector<Param> params;
  IrType return_type;
  std::vector<BasicBlock> blocks;
  std::string prefix_text; // linkage, visibility, return attributes
  std::string attrs_text;  // everything between `)` and `{`

  const BasicBlock *find_block(std::string_view label) const;

  /// Number of non-terminator instructions across all blocks.
  std::size_t body_instruction_count() const;

  bool operator==(const Function &) const = default;
};

struct Module {
  std::string id;            // corpus file name or caller-supplied tag
  std::string preamble_text; // top-level entities other than definitions
  std::vector<Function> functions;

  const Function *find_function(std::string_view name) const;

  bool operator==(const Module &other) const {
    return preamble_text == other.preamble_text && functions == other.functions;
  }
};

bool is_terminator_opcode(std::string_view opcode);
bool is_int_binary_opcode(std::string_view opcode);
bool is_float_binary_opcode(std::string_view opcode);
bool is_cast_opcode(std::string_view opcode);
bool is_commutative_opcode(std::string_view opcode);
/// Every opcode LLVM's textual reader accepts.
bool is_llvm_opcode(std::string_view opcode);

/// Sorts flags into the fixed printing order and drops duplicates.
void canonicalize_flags(std::vector<std::string> &flags);

} // namespace peepseek::ir

#endif // PEEPSEEK_IR_IR_H
