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

#include "peepseek/toolchain/canonicalize.h"

#include <set>

#include "peepseek/ir/printer.h"
#include "peepseek/oracle/interpreter.h"

namespace peepseek::toolchain {

using ir::Constant;
using ir::Function;
using ir::Instruction;
using ir::IrType;
using ir::Operand;
using ir::ValueRef;

namespace {

const std::set<std::string_view> kMinMax = {"llvm.umin", "llvm.umax", "llvm.smin", "llvm.smax"};

std::string_view intrinsic_base(const Instruction &inst) {
  if (inst.opcode != "call" || !inst.callee)
    return {};
  std::string_view c = *inst.callee;
  if (c.rfind("llvm.", 0) != 0)
    return {};
  std::size_t dot = c.find('.', 5);
  return c.substr(0, dot);
}

bool is_minmax(const Instruction &inst) { return kMinMax.count(intrinsic_base(inst)) > 0; }

bool is_foldable(const Instruction &inst) {
  if (inst.opaque || !inst.result)
    return false;
  const std::string &op = inst.opcode;
  if (ir::is_int_binary_opcode(op) || op == "icmp" || op == "select" || op == "zext" ||
      op == "sext" || op == "trunc")
    return true;
  return is_minmax(inst) || intrinsic_base(inst) == "llvm.abs";
}

/// Instructions that may be deleted when unused.
bool is_pure(const Instruction &inst) {
  if (inst.opaque || !inst.result)
    return false;
  const std::string &op = inst.opcode;
  if (op == "call")
    return is_minmax(inst) || intrinsic_base(inst) == "llvm.abs";
  if (op == "load")
    return std::find(inst.flags.begin(), inst.flags.end(), "volatile") == inst.flags.end() &&
           inst.metadata_text.find("atomic") == std::string::npos;
  return op != "store" && op != "phi" && !inst.is_terminator() && op != "alloca" &&
         op != "fence" && op != "atomicrmw" && op != "cmpxchg" && op != "va_arg";
}

bool is_int_constant(const Operand &o) {
  if (!o.value.is_constant() || !o.type.is_int_or_int_vector())
    return false;
  auto k = o.value.constant.kind;
  if (k == Constant::Kind::Int || k == Constant::Kind::Zero)
    return true;
  if (k != Constant::Kind::Vector)
    return false;
  for (const Constant &l : o.value.constant.lanes)
    if (l.kind != Constant::Kind::Int)
      return false;
  return true;
}

/// The value every lane of an integer constant holds, if they agree.
std::optional<u128> uniform(const Operand &o) {
  if (!is_int_constant(o))
    return std::nullopt;
  const Constant &c = o.value.constant;
  if (c.kind == Constant::Kind::Int)
    return c.bits;
  if (c.kind == Constant::Kind::Zero)
    return u128(0);
  if (c.lanes.empty())
    return std::nullopt;
  for (const Constant &l : c.lanes)
    if (l.bits != c.lanes.front().bits)
      return std::nullopt;
  return c.lanes.front().bits;
}

ValueRef make_uniform(const IrType &type, u128 v) {
  unsigned w = type.scalar().width;
  v = truncate(v, w);
  if (!type.is_vector())
    return ValueRef::of(Constant::integer(v));
  if (v == 0)
    return ValueRef::of(Constant::of(Constant::Kind::Zero));
  Constant c = Constant::of(Constant::Kind::Vector);
  c.lanes.assign(type.count, Constant::integer(v));
  return ValueRef::of(c);
}

ValueRef from_runtime(const IrType &type, const oracle::RuntimeValue &v) {
  if (!type.is_vector())
    return ValueRef::of(Constant::integer(v.lanes.at(0)));
  Constant c = Constant::of(Constant::Kind::Vector);
  for (u128 lane : v.lanes)
    c.lanes.push_back(Constant::integer(lane));
  return ValueRef::of(c);
}

std::optional<ValueRef> fold(const Instruction &inst) {
  if (!is_foldable(inst))
    return std::nullopt;
  for (const Operand &o : inst.operands)
    if (!is_int_constant(o))
      return std::nullopt;
  std::optional<IrType> rt = inst.result_type();
  if (!rt || !rt->is_int_or_int_vector())
    return std::nullopt;
  Function probe;
  probe.name = "fold";
  probe.return_type = *rt;
  Instruction ret;
  ret.opcode = "ret";
  ret.operands.push_back(Operand{*rt, ValueRef::local(*inst.result), {}});
  probe.blocks.push_back({"entry", {inst, ret}});
  auto r = oracle::eval(probe, {});
  if (!r || !std::holds_alternative<oracle::RuntimeValue>(r.value()))
    return std::nullopt;
  return from_runtime(*rt, std::get<oracle::RuntimeValue>(r.value()));
}

std::string swapped_predicate(const std::string &p) {
  static const std::pair<const char *, const char *> kSwap[] = {
      {"ugt", "ult"}, {"ult", "ugt"}, {"uge", "ule"}, {"ule", "uge"},
      {"sgt", "slt"}, {"slt", "sgt"}, {"sge", "sle"}, {"sle", "sge"}};
  for (auto [a, b] : kSwap)
    if (p == a)
      return b;
  return p;
}

/// Constant operands go on the right. Returns true if swapped.
bool move_constants_right(Instruction &inst) {
  if (inst.opaque || inst.operands.size() < 2)
    return false;
  bool commutes = (ir::is_commutative_opcode(inst.opcode) && inst.operands.size() == 2) ||
                  inst.opcode == "icmp" || is_minmax(inst);
  if (!commutes)
    return false;
  Operand &a = inst.operands[0], &b = inst.operands[1];
  if (!a.value.is_constant() || b.value.is_constant())
    return false;
  std::swap(a.value, b.value);
  std::swap(a.attrs, b.attrs);
  if (inst.opcode == "icmp")
    inst.predicate = swapped_predicate(*inst.predicate);
  return true;
}

bool same_local(const Operand &a, const Operand &b) {
  return a.value.is_local() && a.value == b.value;
}

std::optional<ValueRef> simplify(const Instruction &inst) {
  if (inst.opaque || !inst.result)
    return std::nullopt;
  if (auto c = fold(inst))
    return c;
  const std::string &op = inst.opcode;
  const auto &ops = inst.operands;

  if (op == "select" && ops.size() == 3) {
    if (ops[1].value == ops[2].value)
      return ops[1].value;
    if (auto c = uniform(ops[0]))
      return *c ? ops[1].value : ops[2].value;
    return std::nullopt;
  }
  if (ops.size() != 2)
    return std::nullopt;
  const Operand &a = ops[0], &b = ops[1];
  const IrType &t = a.type;
  if (!t.is_int_or_int_vector())
    return std::nullopt;
  unsigned w = t.scalar().width;
  std::optional<u128> c = uniform(b);

  if (ir::is_int_binary_opcode(op)) {
    if (c) {
      if (*c == 0 && (op == "add" || op == "sub" || op == "or" || op == "xor" || op == "shl" ||
                      op == "lshr" || op == "ashr"))
        return a.value;
      if (*c == 1 && (op == "mul" || op == "udiv" || op == "sdiv"))
        return a.value;
      if (*c == width_mask(w) && op == "and")
        return a.value;
      if (*c == 0 && (op == "mul" || op == "and"))
        return make_uniform(t, 0);
      if (*c == width_mask(w) && op == "or")
        return make_uniform(t, width_mask(w));
      if (*c == 1 && (op == "urem" || op == "srem"))
        return make_uniform(t, 0);
    }
    if (same_local(a, b)) {
      if (op == "sub" || op == "xor")
        return make_uniform(t, 0);
      if (op == "and" || op == "or")
        return a.value;
    }
    return std::nullopt;
  }
  if (op == "icmp" && same_local(a, b)) {
    const std::string &p = *inst.predicate;
    bool v = p == "eq" || p == "uge" || p == "ule" || p == "sge" || p == "sle";
    return make_uniform(*inst.result_type(), v ? 1 : 0);
  }
  if (is_minmax(inst) && same_local(a, b))
    return a.value;
  return std::nullopt;
}

void replace_uses(Function &f, const std::string &name, const ValueRef &with) {
  for (ir::BasicBlock &bb : f.blocks)
    for (Instruction &inst : bb.instructions)
      for (Operand &o : inst.operands)
        if (o.value.is_local() && o.value.name == name)
          o.value = with;
}

bool used(const Function &f, const std::string &name) {
  for (const ir::BasicBlock &bb : f.blocks)
    for (const Instruction &inst : bb.instructions)
      if (inst.uses_local(name))
        return true;
  return false;
}

} // namespace

bool canonicalize(Function &f) {
  bool any = false;
  for (bool changed = true; changed;) {
    changed = false;
    for (ir::BasicBlock &bb : f.blocks) {
      for (std::size_t i = 0; i < bb.instructions.size();) {
        Instruction &inst = bb.instructions[i];
        changed |= move_constants_right(inst);
        if (auto repl = simplify(inst)) {
          std::string name = *inst.result;
          bb.instructions.erase(bb.instructions.begin() + static_cast<std::ptrdiff_t>(i));
          replace_uses(f, name, *repl);
          changed = true;
          continue;
        }
        ++i;
      }
    }
    for (ir::BasicBlock &bb : f.blocks) {
      for (std::size_t i = bb.instructions.size(); i-- > 0;) {
        const Instruction &inst = bb.instructions[i];
        if (is_pure(inst) && !used(f, *inst.result)) {
          bb.instructions.erase(bb.instructions.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
        }
      }
    }
    any |= changed;
  }
  return any;
}

Result<std::string, ir::ParseError> canonicalize_text(std::string_view text) {
  ir::ParseOptions strict;
  strict.strict = true;
  auto m = ir::parse_module(text, strict);
  if (!m)
    return m.error();
  std::string out;
  for (Function &f : m.value().functions) {
    canonicalize(f);
    if (!out.empty())
      out += "\n";
    out += ir::print_standalone(f);
  }
  return out;
}

} // namespace peepseek::toolchain
