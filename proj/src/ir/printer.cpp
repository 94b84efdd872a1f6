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

#include "peepseek/ir/printer.h"

#include <cctype>
#include <set>

namespace peepseek::ir {

namespace {

bool is_tail_flag(const std::string &f) {
  return f == "tail" || f == "musttail" || f == "notail";
}

std::string sigil_name(char sigil, const std::string &name) {
  bool plain = !name.empty();
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '$' || c == '.' ||
          c == '_'))
      plain = false;
  if (plain)
    return std::string(1, sigil) + name;
  return std::string(1, sigil) + "\"" + name + "\"";
}

std::string label_def(const std::string &name) {
  std::string s = sigil_name('%', name).substr(1);
  return s + ":";
}

std::string print_constant(const Constant &c, const IrType &type) {
  switch (c.kind) {
  case Constant::Kind::Int:
    if (type.is_integer() && type.width == 1)
      return (c.bits & 1) ? "true" : "false";
    if (type.is_integer())
      return to_signed_decimal(c.bits, type.width);
    return to_decimal(c.bits);
  case Constant::Kind::Null:
    return type.is_pointer() ? "null" : "none";
  case Constant::Kind::Zero:
    return "zeroinitializer";
  case Constant::Kind::Poison:
    return "poison";
  case Constant::Kind::Undef:
    return "undef";
  case Constant::Kind::Vector: {
    const IrType &elem = type.scalar();
    std::string s = "<";
    for (std::size_t i = 0; i < c.lanes.size(); ++i) {
      if (i)
        s += ", ";
      s += elem.str() + " " + print_constant(c.lanes[i], elem);
    }
    return s + ">";
  }
  case Constant::Kind::Float:
  case Constant::Kind::Other:
    return c.text;
  }
  return c.text;
}

std::string typed(const Operand &op) {
  return op.type.str() + " " + print_value(op.value, op.type);
}

std::string flag_prefix(const Instruction &inst) {
  std::string s;
  for (const std::string &f : inst.flags)
    if (!is_tail_flag(f))
      s += f + " ";
  return s;
}

std::string body(const Instruction &inst) {
  const std::string &op = inst.opcode;
  const auto &ops = inst.operands;
  std::string fl = flag_prefix(inst);
  if (is_int_binary_opcode(op) || is_float_binary_opcode(op))
    return op + " " + fl + typed(ops[0]) + ", " + print_value(ops[1].value, ops[1].type);
  if (op == "fneg" || op == "freeze")
    return op + " " + fl + typed(ops[0]);
  if (op == "icmp" || op == "fcmp")
    return op + " " + fl + *inst.predicate + " " + typed(ops[0]) + ", " +
           print_value(ops[1].value, ops[1].type);
  if (op == "select")
    return op + " " + fl + typed(ops[0]) + ", " + typed(ops[1]) + ", " + typed(ops[2]);
  if (is_cast_opcode(op))
    return op + " " + fl + typed(ops[0]) + " to " + inst.type_args[0].str();
  if (op == "call") {
    std::string s;
    for (const std::string &f : inst.flags)
      if (is_tail_flag(f))
        s += f + " ";
    s += "call " + fl;
    if (!inst.call_attrs.empty())
      s += inst.call_attrs + " ";
    s += inst.type_args[0].str() + " ";
    if (inst.type_args.size() > 1)
      s += inst.type_args[1].str() + " ";
    s += sigil_name('@', *inst.callee) + "(";
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (i)
        s += ", ";
      s += ops[i].type.str() + " ";
      if (!ops[i].attrs.empty())
        s += ops[i].attrs + " ";
      s += print_value(ops[i].value, ops[i].type);
    }
    return s + ")";
  }
  if (op == "load")
    return op + " " + fl + inst.type_args[0].str() + ", " + typed(ops[0]);
  if (op == "store")
    return op + " " + fl + typed(ops[0]) + ", " + typed(ops[1]);
  if (op == "getelementptr") {
    std::string s = op + " " + fl + inst.type_args[0].str();
    for (const Operand &o : ops)
      s += ", " + typed(o);
    return s;
  }
  if (op == "phi") {
    std::string s = op + " " + fl + inst.type_args[0].str() + " ";
    for (std::size_t i = 0; i + 1 < ops.size(); i += 2) {
      if (i)
        s += ", ";
      s += "[ " + print_value(ops[i].value, ops[i].type) + ", " +
           print_value(ops[i + 1].value, ops[i + 1].type) + " ]";
    }
    return s;
  }
  if (op == "ret")
    return ops.empty() ? "ret void" : "ret " + typed(ops[0]);
  std::string s = op;
  for (std::size_t i = 0; i < ops.size(); ++i)
    s += (i ? ", " : " ") + typed(ops[i]);
  return s;
}

} // namespace

std::string print_value(const ValueRef &value, const IrType &type) {
  switch (value.kind) {
  case ValueRef::Kind::Local:
    return sigil_name('%', value.name);
  case ValueRef::Kind::Global:
    return sigil_name('@', value.name);
  case ValueRef::Kind::Constant:
    return print_constant(value.constant, type);
  }
  return {};
}

std::string print_instruction(const Instruction &inst) {
  if (inst.opaque)
    return inst.verbatim;
  std::string s;
  if (inst.result)
    s += sigil_name('%', *inst.result) + " = ";
  s += body(inst);
  if (!inst.metadata_text.empty())
    s += (inst.metadata_text.front() == ',' ? "" : " ") + inst.metadata_text;
  return s;
}

std::string print_function(const Function &f) {
  std::string s = "define ";
  if (!f.prefix_text.empty())
    s += f.prefix_text + " ";
  s += f.return_type.str() + " " + sigil_name('@', f.name) + "(";
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    const Param &p = f.params[i];
    if (i)
      s += ", ";
    s += p.type.str();
    if (!p.attrs.empty())
      s += " " + p.attrs;
    if (!p.name.empty())
      s += " " + sigil_name('%', p.name);
  }
  s += ")";
  if (!f.attrs_text.empty())
    s += " " + f.attrs_text;
  s += " {\n";
  for (std::size_t b = 0; b < f.blocks.size(); ++b) {
    const BasicBlock &bb = f.blocks[b];
    if (b)
      s += "\n";
    if (!bb.label.empty())
      s += label_def(bb.label) + "\n";
    for (const Instruction &inst : bb.instructions)
      s += "  " + print_instruction(inst) + "\n";
  }
  return s + "}\n";
}

std::string print_module(const Module &m) {
  std::string s;
  if (!m.preamble_text.empty())
    s += m.preamble_text + "\n\n";
  for (std::size_t i = 0; i < m.functions.size(); ++i) {
    if (i)
      s += "\n";
    s += print_function(m.functions[i]);
  }
  return s;
}

std::string print_standalone(const Function &f) {
  std::string s = print_function(f);
  std::set<std::string> seen{f.name};
  for (const BasicBlock &bb : f.blocks) {
    for (const Instruction &inst : bb.instructions) {
      if (inst.opaque || inst.opcode != "call" || !inst.callee || !seen.insert(*inst.callee).second)
        continue;
      std::string decl = "declare " + inst.type_args[0].str() + " " +
                         sigil_name('@', *inst.callee) + "(";
      for (std::size_t i = 0; i < inst.operands.size(); ++i)
        decl += (i ? ", " : "") + inst.operands[i].type.str();
      s += "\n" + decl + ")\n";
    }
  }
  return s;
}

} // namespace peepseek::ir
