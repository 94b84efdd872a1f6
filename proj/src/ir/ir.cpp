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

#include "peepseek/ir/ir.h"

#include <algorithm>
#include <array>

namespace peepseek::ir {

IrType IrType::integer(unsigned width) {
  IrType t;
  t.kind = Kind::Integer;
  t.width = width;
  return t;
}

IrType IrType::pointer(unsigned addrspace) {
  IrType t;
  t.kind = Kind::Pointer;
  t.addrspace = addrspace;
  return t;
}

IrType IrType::vector(uint64_t lanes, IrType element, bool scalable) {
  IrType t;
  t.kind = Kind::Vector;
  t.count = lanes;
  t.scalable = scalable;
  t.element.push_back(std::move(element));
  return t;
}

IrType IrType::array(uint64_t count, IrType element) {
  IrType t;
  t.kind = Kind::Array;
  t.count = count;
  t.element.push_back(std::move(element));
  return t;
}

IrType IrType::floating(FloatKind kind) {
  IrType t;
  t.kind = Kind::Float;
  t.float_kind = kind;
  return t;
}

IrType IrType::void_type() { return IrType{}; }

IrType IrType::label() {
  IrType t;
  t.kind = Kind::Label;
  return t;
}

IrType IrType::other(std::string text) {
  IrType t;
  t.kind = Kind::Other;
  t.text = std::move(text);
  return t;
}

static const char *float_name(FloatKind kind) {
  switch (kind) {
  case FloatKind::Half: return "half";
  case FloatKind::BFloat: return "bfloat";
  case FloatKind::Float: return "float";
  case FloatKind::Double: return "double";
  case FloatKind::FP128: return "fp128";
  case FloatKind::X86FP80: return "x86_fp80";
  case FloatKind::PPCFP128: return "ppc_fp128";
  }
  return "float";
}

std::string IrType::str() const {
  switch (kind) {
  case Kind::Integer:
    return "i" + std::to_string(width);
  case Kind::Pointer:
    return addrspace == 0 ? "ptr" : "ptr addrspace(" + std::to_string(addrspace) + ")";
  case Kind::Vector:
    return std::string("<") + (scalable ? "vscale x " : "") + std::to_string(count) +
           " x " + element.front().str() + ">";
  case Kind::Array:
    return "[" + std::to_string(count) + " x " + element.front().str() + "]";
  case Kind::Float:
    return float_name(float_kind);
  case Kind::Void:
    return "void";
  case Kind::Label:
    return "label";
  case Kind::Other:
    return text;
  }
  return text;
}

Constant Constant::integer(u128 bits) {
  Constant c;
  c.kind = Kind::Int;
  c.bits = bits;
  return c;
}

Constant Constant::of(Kind kind) {
  Constant c;
  c.kind = kind;
  return c;
}

Constant Constant::verbatim(Kind kind, std::string text) {
  Constant c;
  c.kind = kind;
  c.text = std::move(text);
  return c;
}

ValueRef ValueRef::local(std::string name) {
  ValueRef v;
  v.kind = Kind::Local;
  v.name = std::move(name);
  return v;
}

ValueRef ValueRef::global(std::string name) {
  ValueRef v;
  v.kind = Kind::Global;
  v.name = std::move(name);
  return v;
}

ValueRef ValueRef::of(Constant c) {
  ValueRef v;
  v.kind = Kind::Constant;
  v.constant = std::move(c);
  return v;
}

template <std::size_t N>
static bool contains(const std::array<std::string_view, N> &set, std::string_view s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

static constexpr std::array<std::string_view, 11> kTerminators = {
    "ret",    "br",         "switch",    "indirectbr", "invoke",     "resume",
    "unreachable", "cleanupret", "catchret", "catchswitch", "callbr"};

static constexpr std::array<std::string_view, 13> kIntBinary = {
    "add", "sub", "mul", "udiv", "sdiv", "urem", "srem",
    "shl", "lshr", "ashr", "and", "or", "xor"};

static constexpr std::array<std::string_view, 5> kFloatBinary = {"fadd", "fsub", "fmul",
                                                                 "fdiv", "frem"};

static constexpr std::array<std::string_view, 13> kCasts = {
    "trunc",  "zext",   "sext",     "fptrunc",  "fpext",   "fptoui",       "fptosi",
    "uitofp", "sitofp", "ptrtoint", "inttoptr", "bitcast", "addrspacecast"};

static constexpr std::array<std::string_view, 65> kLlvmOpcodes = {
    "ret",           "br",          "switch",       "indirectbr",   "invoke",
    "resume",        "unreachable", "cleanupret",   "catchret",     "catchswitch",
    "callbr",        "fneg",        "add",          "fadd",         "sub",
    "fsub",          "mul",         "fmul",         "udiv",         "sdiv",
    "fdiv",          "urem",        "srem",         "frem",         "shl",
    "lshr",          "ashr",        "and",          "or",           "xor",
    "extractelement", "insertelement", "shufflevector", "extractvalue", "insertvalue",
    "alloca",        "load",        "store",        "fence",        "cmpxchg",
    "atomicrmw",     "getelementptr", "trunc",      "zext",         "sext",
    "fptrunc",       "fpext",       "fptoui",       "fptosi",       "uitofp",
    "sitofp",        "ptrtoint",    "inttoptr",     "bitcast",      "addrspacecast",
    "icmp",          "fcmp",        "phi",          "select",       "freeze",
    "call",          "va_arg",      "landingpad",   "catchpad",     "cleanuppad"};

bool is_terminator_opcode(std::string_view opcode) { return contains(kTerminators, opcode); }
bool is_int_binary_opcode(std::string_view opcode) { return contains(kIntBinary, opcode); }
bool is_float_binary_opcode(std::string_view opcode) { return contains(kFloatBinary, opcode); }
bool is_cast_opcode(std::string_view opcode) { return contains(kCasts, opcode); }
bool is_llvm_opcode(std::string_view opcode) { return contains(kLlvmOpcodes, opcode); }

bool is_commutative_opcode(std::string_view opcode) {
  return opcode == "add" || opcode == "mul" || opcode == "and" || opcode == "or" ||
         opcode == "xor" || opcode == "fadd" || opcode == "fmul";
}

void canonicalize_flags(std::vector<std::string> &flags) {
  static constexpr std::array<std::string_view, 20> kOrder = {
      "tail",  "musttail", "notail",   "volatile", "inbounds", "nusw", "nuw",
      "nsw",   "exact",    "disjoint", "nneg",     "samesign", "fast", "nnan",
      "ninf",  "nsz",      "arcp",     "contract", "afn",      "reassoc"};
  auto rank = [](const std::string &f) {
    auto it = std::find(kOrder.begin(), kOrder.end(), f);
    return static_cast<std::size_t>(it - kOrder.begin());
  };
  std::sort(flags.begin(), flags.end(), [&](const std::string &a, const std::string &b) {
    auto ra = rank(a), rb = rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  flags.erase(std::unique(flags.begin(), flags.end()), flags.end());
}

bool Instruction::is_terminator() const { return is_terminator_opcode(opcode); }

std::optional<IrType> Instruction::result_type() const {
  if (opaque || !result)
    return std::nullopt;
  if (is_int_binary_opcode(opcode) || is_float_binary_opcode(opcode) || opcode == "fneg" ||
      opcode == "freeze") {
    if (operands.empty())
      return std::nullopt;
    return operands[0].type;
  }
  if (opcode == "icmp" || opcode == "fcmp") {
    if (operands.empty())
      return std::nullopt;
    const IrType &t = operands[0].type;
    if (t.is_vector())
      return IrType::vector(t.count, IrType::integer(1), t.scalable);
    return IrType::integer(1);
  }
  if (opcode == "select")
    return operands.size() == 3 ? std::optional<IrType>(operands[1].type) : std::nullopt;
  if (is_cast_opcode(opcode) || opcode == "call" || opcode == "load" || opcode == "phi")
    return type_args.empty() ? std::nullopt : std::optional<IrType>(type_args[0]);
  if (opcode == "getelementptr") {
    if (operands.empty())
      return std::nullopt;
    for (const Operand &op : operands)
      if (op.type.is_vector())
        return IrType::vector(op.type.count, IrType::pointer(operands[0].type.scalar().addrspace),
                              op.type.scalable);
    return operands[0].type;
  }
  if (opcode == "extractelement")
    return operands.empty() || !operands[0].type.is_vector()
               ? std::nullopt
               : std::optional<IrType>(operands[0].type.element.front());
  if (opcode == "insertelement")
    return operands.empty() ? std::nullopt : std::optional<IrType>(operands[0].type);
  if (opcode == "shufflevector") {
    if (operands.size() != 3 || !operands[0].type.is_vector())
      return std::nullopt;
    return IrType::vector(operands[2].type.lanes(), operands[0].type.element.front(),
                          operands[2].type.scalable);
  }
  return std::nullopt;
}

std::vector<std::string> Instruction::used_locals() const {
  std::vector<std::string> out;
  for (const Operand &op : operands)
    if (op.value.is_local() && !op.is_label())
      out.push_back(op.value.name);
  return out;
}

bool Instruction::uses_local(std::string_view name) const {
  for (const Operand &op : operands)
    if (op.value.is_local() && !op.is_label() && op.value.name == name)
      return true;
  return false;
}

const BasicBlock *Function::find_block(std::string_view label) const {
  for (const BasicBlock &bb : blocks)
    if (bb.label == label)
      return &bb;
  return nullptr;
}

std::size_t Function::body_instruction_count() const {
  std::size_t n = 0;
  for (const BasicBlock &bb : blocks)
    for (const Instruction &inst : bb.instructions)
      if (!inst.is_terminator())
        ++n;
  return n;
}

const Function *Module::find_function(std::string_view name) const {
  for (const Function &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

} // namespace peepseek::ir
