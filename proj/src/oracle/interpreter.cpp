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

#include "peepseek/oracle/interpreter.h"

#include <map>
#include <optional>

namespace peepseek::oracle {

using ir::Constant;
using ir::Function;
using ir::Instruction;
using ir::IrType;
using ir::Operand;

namespace {

enum Op : uint8_t {
  kAdd, kSub, kMul, kUDiv, kSDiv, kURem, kSRem, kAnd, kOr, kXor, kShl, kLShr, kAShr,
  kICmp, kSelect, kZExt, kSExt, kTrunc, kUMin, kUMax, kSMin, kSMax, kAbs, kCopy, kGep, kLoad,
};

enum Pred : uint8_t { kEq, kNe, kUgt, kUge, kUlt, kUle, kSgt, kSge, kSlt, kSle };

const std::map<std::string, uint8_t> &binary_ops() {
  static const std::map<std::string, uint8_t> m = {
      {"add", kAdd}, {"sub", kSub},   {"mul", kMul},   {"udiv", kUDiv}, {"sdiv", kSDiv},
      {"urem", kURem}, {"srem", kSRem}, {"and", kAnd}, {"or", kOr},     {"xor", kXor},
      {"shl", kShl}, {"lshr", kLShr}, {"ashr", kAShr}};
  return m;
}

enum Flag : uint8_t { kNsw = 1, kNuw = 2, kExact = 4, kDisjoint = 8, kNneg = 16, kSameSign = 32 };

uint8_t flag_bits(const Instruction &inst) {
  static const std::map<std::string, uint8_t> m = {{"nsw", kNsw},           {"nuw", kNuw},
                                                   {"exact", kExact},       {"disjoint", kDisjoint},
                                                   {"nneg", kNneg},         {"samesign", kSameSign}};
  uint8_t bits = 0;
  for (const std::string &f : inst.flags)
    if (auto it = m.find(f); it != m.end())
      bits |= it->second;
  return bits;
}

const std::map<std::string, uint8_t> &predicates() {
  static const std::map<std::string, uint8_t> m = {
      {"eq", kEq},   {"ne", kNe},   {"ugt", kUgt}, {"uge", kUge}, {"ult", kUlt},
      {"ule", kUle}, {"sgt", kSgt}, {"sge", kSge}, {"slt", kSlt}, {"sle", kSle}};
  return m;
}

struct Shape {
  unsigned width;
  uint32_t lanes;
  bool is_vector;
};

std::optional<Shape> shape_of(const IrType &t) {
  if (t.is_integer())
    return Shape{t.width, 1, false};
  if (t.is_pointer())
    return Shape{64, 1, false};
  if (t.is_vector() && !t.scalable && t.element.front().is_integer())
    return Shape{t.element.front().width, static_cast<uint32_t>(t.count), true};
  return std::nullopt;
}

uint64_t round_pow2(uint64_t n) {
  uint64_t p = 1;
  while (p < n)
    p <<= 1;
  return p;
}

std::optional<uint64_t> alloc_size(const IrType &t) {
  switch (t.kind) {
  case IrType::Kind::Integer:
    return round_pow2((t.width + 7) / 8);
  case IrType::Kind::Pointer:
    return 8;
  case IrType::Kind::Vector: {
    if (t.scalable || !t.element.front().is_integer() || t.element.front().width % 8)
      return std::nullopt;
    return round_pow2(t.count * (t.element.front().width / 8));
  }
  case IrType::Kind::Array: {
    auto e = alloc_size(t.element.front());
    if (!e)
      return std::nullopt;
    return t.count * *e;
  }
  default:
    return std::nullopt;
  }
}

bool signed_less(u128 a, u128 b, unsigned w) { return to_signed(a, w) < to_signed(b, w); }

class Compiler {
 public:
  std::optional<Unsupported> run(const Function &f, std::vector<Program::Step> &steps,
                                std::vector<u128> &regs, std::vector<Program::Slot> &params,
                                Program::Slot &result, bool &reads_memory,
                                std::vector<u128> &constants) {
    regs_ = &regs;
    constants_ = &constants;
    if (f.blocks.size() != 1)
      return Unsupported{"br"};
    for (const ir::Param &prm : f.params) {
      auto s = shape_of(prm.type);
      if (!s)
        return Unsupported{"parameter of type " + prm.type.str()};
      Program::Slot slot = alloc(*s);
      params.push_back(slot);
      locals_[prm.name] = slot;
    }
    const auto &insts = f.blocks[0].instructions;
    for (std::size_t i = 0; i < insts.size(); ++i) {
      const Instruction &inst = insts[i];
      if (inst.opaque)
        return Unsupported{inst.opcode};
      if (inst.opcode == "ret") {
        if (i + 1 != insts.size() || inst.operands.empty())
          return Unsupported{"ret void"};
        auto s = operand(inst.operands[0]);
        if (!s)
          return s.error();
        result = s.value();
        continue;
      }
      auto step = compile(inst, reads_memory);
      if (!step)
        return step.error();
      steps.push_back(std::move(step).value());
    }
    if (insts.empty() || insts.back().opcode != "ret")
      return Unsupported{"missing ret"};
    return std::nullopt;
  }

 private:
  Program::Slot alloc(const Shape &s) {
    Program::Slot slot;
    slot.offset = static_cast<uint32_t>(regs_->size());
    slot.lanes = s.lanes;
    slot.width = s.width;
    slot.is_vector = s.is_vector;
    regs_->resize(regs_->size() + s.lanes, 0);
    return slot;
  }

  Result<std::vector<u128>, Unsupported> constant_lanes(const Constant &c, const Shape &s) {
    switch (c.kind) {
    case Constant::Kind::Int:
      constants_->push_back(c.bits);
      return std::vector<u128>(s.lanes, truncate(c.bits, s.width));
    case Constant::Kind::Zero:
    case Constant::Kind::Null:
      return std::vector<u128>(s.lanes, 0);
    case Constant::Kind::Vector: {
      if (c.lanes.size() != s.lanes)
        return Unsupported{"malformed vector constant"};
      std::vector<u128> out;
      for (const Constant &lane : c.lanes) {
        if (lane.kind != Constant::Kind::Int)
          return Unsupported{lane.kind == Constant::Kind::Poison ? "poison" : "undef"};
        constants_->push_back(lane.bits);
        out.push_back(truncate(lane.bits, s.width));
      }
      return out;
    }
    case Constant::Kind::Poison:
      return Unsupported{"poison"};
    case Constant::Kind::Undef:
      return Unsupported{"undef"};
    default:
      return Unsupported{"constant " + c.text};
    }
  }

  Result<Program::Slot, Unsupported> operand(const Operand &op) {
    switch (op.value.kind) {
    case ir::ValueRef::Kind::Local: {
      auto it = locals_.find(op.value.name);
      if (it == locals_.end())
        return Unsupported{"undefined value %" + op.value.name};
      return it->second;
    }
    case ir::ValueRef::Kind::Global:
      return Unsupported{"global @" + op.value.name};
    case ir::ValueRef::Kind::Constant: {
      auto s = shape_of(op.type);
      if (!s)
        return Unsupported{"operand of type " + op.type.str()};
      auto lanes = constant_lanes(op.value.constant, *s);
      if (!lanes)
        return lanes.error();
      Program::Slot slot = alloc(*s);
      for (uint32_t l = 0; l < s->lanes; ++l)
        (*regs_)[slot.offset + l] = lanes.value()[l];
      return slot;
    }
    }
    return Unsupported{"operand"};
  }

  Result<Program::Step, Unsupported> define(const Instruction &inst, Program::Step step,
                                            const IrType &type) {
    auto s = shape_of(type);
    if (!s)
      return Unsupported{inst.opcode + " producing " + type.str()};
    Program::Slot slot = alloc(*s);
    step.dst = slot.offset;
    step.lanes = slot.lanes;
    step.out_width = slot.width;
    if (inst.result)
      locals_[*inst.result] = slot;
    return step;
  }

  Result<Program::Step, Unsupported> compile(const Instruction &inst, bool &reads_memory) {
    const std::string &op = inst.opcode;
    Program::Step step;
    auto ops = [&](std::size_t n) -> Result<std::vector<Program::Slot>, Unsupported> {
      if (inst.operands.size() < n)
        return Unsupported{op};
      std::vector<Program::Slot> out;
      for (std::size_t k = 0; k < n; ++k) {
        auto s = operand(inst.operands[k]);
        if (!s)
          return s.error();
        out.push_back(s.value());
      }
      return out;
    };
    if (auto it = binary_ops().find(op); it != binary_ops().end()) {
      if (!inst.operands[0].type.is_int_or_int_vector())
        return Unsupported{op + " on " + inst.operands[0].type.str()};
      auto s = ops(2);
      if (!s)
        return s.error();
      step.op = it->second;
      step.width = s.value()[0].width;
      step.flags = flag_bits(inst);
      if (step.op == kMul && (step.flags & kNsw) && step.width > 64)
        return Unsupported{"mul nsw on " + inst.operands[0].type.str()};
      step.a = s.value()[0].offset;
      step.b = s.value()[1].offset;
      return define(inst, step, inst.operands[0].type);
    }
    if (op == "icmp") {
      auto s = ops(2);
      if (!s)
        return s.error();
      step.op = kICmp;
      step.pred = predicates().at(*inst.predicate);
      step.flags = flag_bits(inst);
      step.width = s.value()[0].width;
      step.a = s.value()[0].offset;
      step.b = s.value()[1].offset;
      return define(inst, step, *inst.result_type());
    }
    if (op == "select") {
      auto s = ops(3);
      if (!s)
        return s.error();
      step.op = kSelect;
      step.width = s.value()[1].width;
      step.c = s.value()[0].offset;
      step.a_scalar = !s.value()[0].is_vector && s.value()[1].is_vector;
      step.a = s.value()[1].offset;
      step.b = s.value()[2].offset;
      return define(inst, step, inst.operands[1].type);
    }
    if (op == "zext" || op == "sext" || op == "trunc" || op == "ptrtoint" || op == "inttoptr") {
      auto s = ops(1);
      if (!s)
        return s.error();
      auto to = shape_of(inst.type_args[0]);
      if (!to)
        return Unsupported{op + " to " + inst.type_args[0].str()};
      step.width = s.value()[0].width;
      step.op = op == "sext" ? kSExt : (to->width >= step.width ? kZExt : kTrunc);
      step.flags = flag_bits(inst);
      step.a = s.value()[0].offset;
      return define(inst, step, inst.type_args[0]);
    }
    if (op == "freeze") {
      auto s = ops(1);
      if (!s)
        return s.error();
      step.op = kCopy;
      step.width = s.value()[0].width;
      step.a = s.value()[0].offset;
      return define(inst, step, inst.operands[0].type);
    }
    if (op == "call") {
      const std::string callee = inst.callee.value_or("");
      static const std::map<std::string, uint8_t> kIntrinsics = {
          {"umin", kUMin}, {"umax", kUMax}, {"smin", kSMin}, {"smax", kSMax}, {"abs", kAbs}};
      std::optional<uint8_t> code;
      if (callee.rfind("llvm.", 0) == 0) {
        std::size_t dot = callee.find('.', 5);
        auto it = kIntrinsics.find(callee.substr(5, dot == std::string::npos ? std::string::npos : dot - 5));
        if (it != kIntrinsics.end())
          code = it->second;
      }
      if (!code || inst.type_args.empty() || !inst.type_args[0].is_int_or_int_vector())
        return Unsupported{"call @" + callee};
      auto s = ops(*code == kAbs ? 1 : 2);
      if (!s)
        return s.error();
      step.op = *code;
      step.width = s.value()[0].width;
      step.a = s.value()[0].offset;
      step.b = *code == kAbs ? step.a : s.value()[1].offset;
      return define(inst, step, inst.type_args[0]);
    }
    if (op == "getelementptr") {
      if (inst.operands.empty() || !inst.operands[0].type.is_pointer())
        return Unsupported{"vector getelementptr"};
      auto base = operand(inst.operands[0]);
      if (!base)
        return base.error();
      step.op = kGep;
      step.a = base.value().offset;
      IrType current = inst.type_args[0];
      for (std::size_t k = 1; k < inst.operands.size(); ++k) {
        if (k > 1) {
          if (current.kind != IrType::Kind::Array && !current.is_vector())
            return Unsupported{"getelementptr into " + current.str()};
          IrType elem = current.element.front();
          current = elem;
        }
        auto size = alloc_size(current);
        if (!size)
          return Unsupported{"getelementptr over " + current.str()};
        if (inst.operands[k].type.is_vector())
          return Unsupported{"vector getelementptr"};
        auto idx = operand(inst.operands[k]);
        if (!idx)
          return idx.error();
        step.gep.push_back({idx.value().offset, idx.value().width, *size});
      }
      return define(inst, step, IrType::pointer());
    }
    if (op == "load") {
      const IrType &t = inst.type_args[0];
      auto s = shape_of(t);
      if (!s || (s->is_vector && s->width % 8))
        return Unsupported{"load of " + t.str()};
      auto ptr = ops(1);
      if (!ptr)
        return ptr.error();
      reads_memory = true;
      step.op = kLoad;
      step.width = s->width;
      step.a = ptr.value()[0].offset;
      return define(inst, step, t);
    }
    return Unsupported{op};
  }

  std::vector<u128> *regs_ = nullptr;
  std::vector<u128> *constants_ = nullptr;
  std::map<std::string, Program::Slot> locals_;
};

u128 sext(u128 v, unsigned from, unsigned to) {
  if (sign_bit(v, from))
    v |= ~width_mask(from);
  return truncate(v, to);
}

/// Non-null when `z = x op y` violates one of the step's flags; the result
/// would be poison, which the interpreter reports as a trap.
const char *flag_violation(const Program::Step &s, u128 x, u128 y, u128 z) {
  const unsigned w = s.width;
  switch (s.op) {
  case kAdd:
    if ((s.flags & kNuw) && z < x)
      return "poison: add nuw overflow";
    if ((s.flags & kNsw) && sign_bit(x, w) == sign_bit(y, w) && sign_bit(z, w) != sign_bit(x, w))
      return "poison: add nsw overflow";
    break;
  case kSub:
    if ((s.flags & kNuw) && y > x)
      return "poison: sub nuw overflow";
    if ((s.flags & kNsw) && sign_bit(x, w) != sign_bit(y, w) && sign_bit(z, w) != sign_bit(x, w))
      return "poison: sub nsw overflow";
    break;
  case kMul:
    if ((s.flags & kNuw) && x != 0 && y > width_mask(w) / x)
      return "poison: mul nuw overflow";
    if (s.flags & kNsw) {
      __int128 p = static_cast<__int128>(to_signed(x, w)) * static_cast<__int128>(to_signed(y, w));
      __int128 lo = -(static_cast<__int128>(1) << (w - 1)), hi = (static_cast<__int128>(1) << (w - 1)) - 1;
      if (p < lo || p > hi)
        return "poison: mul nsw overflow";
    }
    break;
  case kShl: {
    unsigned n = static_cast<unsigned>(y);
    if ((s.flags & kNuw) && (z >> n) != x)
      return "poison: shl nuw overflow";
    if ((s.flags & kNsw) && truncate(static_cast<u128>(static_cast<__int128>(sext(z, w, 128)) >> n), w) != x)
      return "poison: shl nsw overflow";
    break;
  }
  case kLShr: case kAShr:
    if ((s.flags & kExact) && (x & ((u128(1) << static_cast<unsigned>(y)) - 1)) != 0)
      return "poison: exact shift lost bits";
    break;
  case kOr:
    if ((s.flags & kDisjoint) && (x & y) != 0)
      return "poison: or disjoint operands overlap";
    break;
  default:
    break;
  }
  return nullptr;
}

} // namespace

std::string MemoryModel::describe() const {
  if (kind == Kind::Fill)
    return "every byte = #x" + to_hex(fill, 8);
  return "bytes hashed from seed " + std::to_string(seed);
}

Result<Program, Unsupported> Program::compile(const Function &f) {
  Program p;
  std::vector<Step> steps;
  std::vector<u128> regs;
  std::vector<Slot> params;
  Slot result;
  bool reads_memory = false;
  std::vector<u128> constants;
  Compiler c;
  if (auto err = c.run(f, steps, regs, params, result, reads_memory, constants))
    return *err;
  p.steps_ = std::move(steps);
  p.template_ = std::move(regs);
  p.params_ = std::move(params);
  p.result_ = result;
  p.reads_memory_ = reads_memory;
  p.constants_ = std::move(constants);
  return p;
}

bool Program::run(std::vector<u128> &r, const MemoryModel &mem, const char **trap) const {
  for (const Step &s : steps_) {
    const unsigned w = s.width;
    switch (s.op) {
    case kAdd: case kSub: case kMul: case kAnd: case kOr: case kXor:
      for (uint32_t l = 0; l < s.lanes; ++l) {
        u128 x = r[s.a + l], y = r[s.b + l], z = 0;
        switch (s.op) {
        case kAdd: z = x + y; break;
        case kSub: z = x - y; break;
        case kMul: z = x * y; break;
        case kAnd: z = x & y; break;
        case kOr: z = x | y; break;
        default: z = x ^ y; break;
        }
        z = truncate(z, w);
        if (s.flags) {
          if (const char *why = flag_violation(s, x, y, z)) {
            *trap = why;
            return false;
          }
        }
        r[s.dst + l] = z;
      }
      break;
    case kUDiv: case kURem: case kSDiv: case kSRem:
      for (uint32_t l = 0; l < s.lanes; ++l) {
        u128 x = r[s.a + l], y = r[s.b + l];
        if (y == 0) {
          *trap = "division by zero";
          return false;
        }
        if ((s.flags & kExact) && (s.op == kUDiv ? x % y != 0 : y != width_mask(w) && to_signed(x, w) % to_signed(y, w) != 0)) {
          *trap = "poison: exact division has a remainder";
          return false;
        }
        if (s.op == kUDiv || s.op == kURem) {
          r[s.dst + l] = s.op == kUDiv ? x / y : x % y;
          continue;
        }
        if (x == signed_min(w) && y == width_mask(w)) {
          *trap = "signed division overflow";
          return false;
        }
        bool nx = sign_bit(x, w), ny = sign_bit(y, w);
        u128 ax = nx ? truncate(~x + 1, w) : x, ay = ny ? truncate(~y + 1, w) : y;
        u128 q = ax / ay, rem = ax % ay;
        u128 z = s.op == kSDiv ? ((nx != ny) ? ~q + 1 : q) : (nx ? ~rem + 1 : rem);
        r[s.dst + l] = truncate(z, w);
      }
      break;
    case kShl: case kLShr: case kAShr:
      for (uint32_t l = 0; l < s.lanes; ++l) {
        u128 x = r[s.a + l], y = r[s.b + l];
        if (y >= w) {
          *trap = "shift amount exceeds bit width";
          return false;
        }
        unsigned n = static_cast<unsigned>(y);
        u128 z;
        if (s.op == kShl)
          z = x << n;
        else if (s.op == kLShr)
          z = x >> n;
        else
          z = sext(x, w, 128) >> n | (sign_bit(x, w) && n ? ~(~u128(0) >> n) : 0);
        z = truncate(z, w);
        if (s.flags) {
          if (const char *why = flag_violation(s, x, y, z)) {
            *trap = why;
            return false;
          }
        }
        r[s.dst + l] = z;
      }
      break;
    case kICmp:
      for (uint32_t l = 0; l < s.lanes; ++l) {
        u128 x = r[s.a + l], y = r[s.b + l];
        if ((s.flags & kSameSign) && sign_bit(x, w) != sign_bit(y, w)) {
          *trap = "poison: icmp samesign operands differ in sign";
          return false;
        }
        bool z = false;
        switch (s.pred) {
        case kEq: z = x == y; break;
        case kNe: z = x != y; break;
        case kUgt: z = x > y; break;
        case kUge: z = x >= y; break;
        case kUlt: z = x < y; break;
        case kUle: z = x <= y; break;
        case kSgt: z = signed_less(y, x, w); break;
        case kSge: z = !signed_less(x, y, w); break;
        case kSlt: z = signed_less(x, y, w); break;
        case kSle: z = !signed_less(y, x, w); break;
        }
        r[s.dst + l] = z ? 1 : 0;
      }
      break;
    case kSelect:
      for (uint32_t l = 0; l < s.lanes; ++l) {
        bool cond = r[s.c + (s.a_scalar ? 0 : l)] & 1;
        r[s.dst + l] = cond ? r[s.a + l] : r[s.b + l];
      }
      break;
    case kZExt: case kTrunc: case kCopy:
      for (uint32_t l = 0; l < s.lanes; ++l) {
        u128 x = r[s.a + l], z = truncate(x, s.out_width);
        if (s.flags) {
          const char *why = nullptr;
          if (s.op == kZExt && (s.flags & kNneg) && sign_bit(x, w))
            why = "poison: zext nneg of a negative value";
          else if (s.op == kTrunc && (s.flags & kNuw) && z != x)
            why = "poison: trunc nuw dropped set bits";
          else if (s.op == kTrunc && (s.flags & kNsw) && sext(z, s.out_width, w) != x)
            why = "poison: trunc nsw changed the signed value";
          if (why) {
            *trap = why;
            return false;
          }
        }
        r[s.dst + l] = z;
      }
      break;
    case kSExt:
      for (uint32_t l = 0; l < s.lanes; ++l)
        r[s.dst + l] = sext(r[s.a + l], w, s.out_width);
      break;
    case kUMin: case kUMax: case kSMin: case kSMax:
      for (uint32_t l = 0; l < s.lanes; ++l) {
        u128 x = r[s.a + l], y = r[s.b + l];
        bool x_first;
        switch (s.op) {
        case kUMin: x_first = x < y; break;
        case kUMax: x_first = x > y; break;
        case kSMin: x_first = signed_less(x, y, w); break;
        default: x_first = signed_less(y, x, w); break;
        }
        r[s.dst + l] = x_first ? x : y;
      }
      break;
    case kAbs:
      for (uint32_t l = 0; l < s.lanes; ++l) {
        u128 x = r[s.a + l];
        r[s.dst + l] = sign_bit(x, w) ? truncate(~x + 1, w) : x;
      }
      break;
    case kGep: {
      u128 addr = r[s.a];
      for (const GepTerm &t : s.gep)
        addr += sext(r[t.slot], t.width, 64) * t.scale;
      r[s.dst] = truncate(addr, 64);
      break;
    }
    case kLoad: {
      uint64_t addr = static_cast<uint64_t>(r[s.a]);
      const unsigned bytes = (w + 7) / 8;
      for (uint32_t l = 0; l < s.lanes; ++l) {
        u128 v = 0;
        for (unsigned k = 0; k < bytes; ++k)
          v |= u128(mem.byte(addr + l * bytes + k)) << (8 * k);
        r[s.dst + l] = truncate(v, w);
      }
      break;
    }
    }
  }
  return true;
}

RuntimeValue Program::read(const std::vector<u128> &regs, const Slot &s) const {
  RuntimeValue v;
  v.width = s.width;
  v.is_vector = s.is_vector;
  v.lanes.assign(regs.begin() + s.offset, regs.begin() + s.offset + s.lanes);
  return v;
}

void Program::write(std::vector<u128> &regs, const Slot &s, const RuntimeValue &v) const {
  for (uint32_t l = 0; l < s.lanes && l < v.lanes.size(); ++l)
    regs[s.offset + l] = truncate(v.lanes[l], s.width);
}

Result<EvalResult, Unsupported> eval(const Function &f, const std::vector<RuntimeValue> &args,
                                     const MemoryModel &mem) {
  auto p = Program::compile(f);
  if (!p)
    return p.error();
  const Program &prog = p.value();
  if (args.size() != prog.params().size())
    return Unsupported{"argument count mismatch"};
  std::vector<u128> regs = prog.registers();
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Program::Slot &s = prog.params()[i];
    if (args[i].width != s.width || args[i].lanes.size() != s.lanes)
      return Unsupported{"argument " + std::to_string(i) + " shape mismatch"};
    prog.write(regs, s, args[i]);
  }
  const char *trap = nullptr;
  if (!prog.run(regs, mem, &trap))
    return EvalResult{Trap{trap}};
  return EvalResult{prog.read(regs, prog.result())};
}

std::string format_value(const RuntimeValue &v) {
  auto one = [&](u128 x) {
    std::string s = "#x" + to_hex(x, v.width) + " (" + to_decimal(x);
    if (v.width > 1 && sign_bit(x, v.width))
      s += ", " + to_signed_decimal(x, v.width);
    return s + ")";
  };
  if (!v.is_vector)
    return v.lanes.empty() ? "?" : one(v.lanes[0]);
  std::string s = "< ";
  for (std::size_t i = 0; i < v.lanes.size(); ++i)
    s += (i ? ", " : "") + one(v.lanes[i]);
  return s + " >";
}

} // namespace peepseek::oracle
