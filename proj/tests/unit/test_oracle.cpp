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

#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "peepseek/ir/parser.h"
#include "peepseek/oracle/equivalence.h"
#include "random_ir.h"

using namespace peepseek;
using namespace peepseek::oracle;

namespace {

ir::Function fn(std::string_view text) {
  auto m = ir::parse_module(text);
  if (!m)
    FAIL(m.error().render());
  return m.value().functions.at(0);
}

ir::Function fixture(const std::string &rel) {
  std::ifstream in(std::string(PEEPSEEK_FIXTURES) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return fn(ss.str());
}

u128 run1(const ir::Function &f, std::vector<RuntimeValue> args) {
  auto r = eval(f, args);
  REQUIRE(r);
  REQUIRE(std::holds_alternative<RuntimeValue>(r.value()));
  return std::get<RuntimeValue>(r.value()).lanes.at(0);
}

/// Straightforward 64-bit reference semantics for widths up to 32, kept
/// independent of the register interpreter.
struct Reference {
  std::map<std::string, std::pair<unsigned, int64_t>> env; // width, signed value

  static int64_t norm(int64_t v, unsigned w) {
    uint64_t u = static_cast<uint64_t>(v) & ((uint64_t(1) << w) - 1);
    if (w > 1 && (u >> (w - 1)) & 1)
      return static_cast<int64_t>(u) - (int64_t(1) << w);
    return static_cast<int64_t>(u);
  }
  static uint64_t uns(int64_t v, unsigned w) {
    return static_cast<uint64_t>(v) & ((uint64_t(1) << w) - 1);
  }

  int64_t value(const ir::Operand &op) {
    if (op.value.is_local())
      return env.at(op.value.name).second;
    return norm(static_cast<int64_t>(static_cast<uint64_t>(op.value.constant.bits)),
                op.type.width);
  }

  /// Returns nullopt on a trap.
  std::optional<int64_t> run(const ir::Function &f, const std::vector<int64_t> &args) {
    for (std::size_t i = 0; i < args.size(); ++i)
      env[f.params[i].name] = {f.params[i].type.width, norm(args[i], f.params[i].type.width)};
    for (const ir::Instruction &inst : f.blocks[0].instructions) {
      const std::string &op = inst.opcode;
      if (op == "ret")
        return value(inst.operands[0]);
      unsigned w = inst.operands[0].type.width;
      int64_t a = value(inst.operands[0]);
      int64_t b = inst.operands.size() > 1 ? value(inst.operands[1]) : 0;
      uint64_t ua = uns(a, w), ub = uns(b, w);
      int64_t r = 0;
      unsigned rw = w;
      if (op == "add") r = a + b;
      else if (op == "sub") r = a - b;
      else if (op == "mul") r = static_cast<int64_t>(ua * ub);
      else if (op == "and") r = a & b;
      else if (op == "or") r = a | b;
      else if (op == "xor") r = a ^ b;
      else if (op == "udiv" || op == "urem") {
        if (ub == 0) return std::nullopt;
        r = static_cast<int64_t>(op == "udiv" ? ua / ub : ua % ub);
      } else if (op == "sdiv" || op == "srem") {
        if (b == 0 || (b == -1 && a == norm(int64_t(1) << (w - 1), w))) return std::nullopt;
        r = op == "sdiv" ? a / b : a % b;
      } else if (op == "shl" || op == "lshr" || op == "ashr") {
        if (ub >= w) return std::nullopt;
        r = op == "shl" ? static_cast<int64_t>(ua << ub)
            : op == "lshr" ? static_cast<int64_t>(ua >> ub) : (a >> ub);
      } else if (op == "icmp") {
        const std::string &p = *inst.predicate;
        bool c = p == "eq" ? a == b : p == "ne" ? a != b : p == "ugt" ? ua > ub
               : p == "uge" ? ua >= ub : p == "ult" ? ua < ub : p == "ule" ? ua <= ub
               : p == "sgt" ? a > b : p == "sge" ? a >= b : p == "slt" ? a < b : a <= b;
        r = c;
        rw = 1;
      } else if (op == "select") {
        int64_t t = value(inst.operands[1]), e = value(inst.operands[2]);
        r = (a & 1) ? t : e;
        rw = inst.operands[1].type.width;
      } else if (op == "zext" || op == "sext" || op == "trunc") {
        rw = inst.type_args[0].width;
        r = op == "zext" ? static_cast<int64_t>(ua) : a;
      } else if (op == "call") {
        const std::string &c = *inst.callee;
        if (c.find("umin") != std::string::npos) r = ua < ub ? a : b;
        else if (c.find("umax") != std::string::npos) r = ua > ub ? a : b;
        else if (c.find("smin") != std::string::npos) r = a < b ? a : b;
        else r = a > b ? a : b;
      } else {
        FAIL("reference has no rule for " << op);
      }
      if (op == "add" || op == "sub" || op == "mul") {
        bool nsw = std::find(inst.flags.begin(), inst.flags.end(), "nsw") != inst.flags.end();
        bool nuw = std::find(inst.flags.begin(), inst.flags.end(), "nuw") != inst.flags.end();
        int64_t exact = op == "add" ? a + b : op == "sub" ? a - b : a * b;
        uint64_t uexact = op == "add" ? ua + ub : ua * ub;
        if (nsw && norm(exact, w) != exact) return std::nullopt;
        if (nuw && (op == "sub" ? ua < ub : uexact >> w != 0)) return std::nullopt;
      }
      env[*inst.result] = {rw, norm(r, rw)};
    }
    return std::nullopt;
  }
};

} // namespace

TEST_CASE("clamp source evaluates to x < 0 ? 0 : umin(x, 255)") {
  ir::Function src = fixture("pairs/clamp_src.ll");
  for (int64_t x : {300, -5, 100, 0, 255, 256, -1, 2147483647, -2147483647 - 1}) {
    int64_t expect = x < 0 ? 0 : std::min<int64_t>(x, 255);
    CHECK(run1(src, {RuntimeValue::scalar(32, static_cast<u128>(static_cast<uint32_t>(x)))}) ==
          static_cast<u128>(expect));
  }
}

TEST_CASE("sub x, x is zero and division by zero traps") {
  ir::Function sub = fn("define i8 @f(i8 %x) {\n  %r = sub i8 %x, %x\n  ret i8 %r\n}\n");
  for (unsigned x = 0; x < 256; ++x)
    CHECK(run1(sub, {RuntimeValue::scalar(8, x)}) == 0);
  ir::Function div = fn("define i8 @f(i8 %x) {\n  %r = sdiv i8 %x, 0\n  ret i8 %r\n}\n");
  auto r = eval(div, {RuntimeValue::scalar(8, 7)});
  REQUIRE(r);
  REQUIRE(std::holds_alternative<Trap>(r.value()));
  CHECK(std::get<Trap>(r.value()).reason == "division by zero");
  ir::Function shift = fn("define i8 @f(i8 %x) {\n  %r = shl i8 %x, 8\n  ret i8 %r\n}\n");
  auto s = eval(shift, {RuntimeValue::scalar(8, 1)});
  REQUIRE(s);
  CHECK(std::holds_alternative<Trap>(s.value()));
}

namespace {
std::string trap_of(const std::string &text, std::vector<RuntimeValue> args) {
  auto r = eval(fn(text), args);
  REQUIRE(r);
  if (!std::holds_alternative<Trap>(r.value()))
    return "";
  return std::get<Trap>(r.value()).reason;
}
} // namespace

TEST_CASE("poison-generating flags trap when violated") {
  auto i8 = [](uint64_t v) { return RuntimeValue::scalar(8, v); };
  std::string add_nsw = "define i8 @f(i8 %x) {\n  %r = add nsw i8 %x, 1\n  ret i8 %r\n}\n";
  CHECK(trap_of(add_nsw, {i8(127)}) == "poison: add nsw overflow");
  CHECK(trap_of(add_nsw, {i8(126)}).empty());
  CHECK(trap_of(add_nsw, {i8(255)}).empty());
  std::string sub_nuw = "define i8 @f(i8 %x) {\n  %r = sub nuw i8 %x, 1\n  ret i8 %r\n}\n";
  CHECK(trap_of(sub_nuw, {i8(0)}) == "poison: sub nuw overflow");
  CHECK(trap_of(sub_nuw, {i8(1)}).empty());
  std::string udiv = "define i8 @f(i8 %x) {\n  %r = udiv exact i8 %x, 4\n  ret i8 %r\n}\n";
  CHECK(trap_of(udiv, {i8(6)}) == "poison: exact division has a remainder");
  CHECK(trap_of(udiv, {i8(8)}).empty());
  std::string lshr = "define i8 @f(i8 %x) {\n  %r = lshr exact i8 %x, 1\n  ret i8 %r\n}\n";
  CHECK(trap_of(lshr, {i8(3)}) == "poison: exact shift lost bits");
  std::string disj = "define i8 @f(i8 %x) {\n  %r = or disjoint i8 %x, 1\n  ret i8 %r\n}\n";
  CHECK(trap_of(disj, {i8(1)}) == "poison: or disjoint operands overlap");
  CHECK(trap_of(disj, {i8(2)}).empty());
  std::string trunc = "define i8 @f(i16 %x) {\n  %r = trunc nuw i16 %x to i8\n  ret i8 %r\n}\n";
  CHECK(trap_of(trunc, {RuntimeValue::scalar(16, 256)}) == "poison: trunc nuw dropped set bits");
  CHECK(trap_of(trunc, {RuntimeValue::scalar(16, 255)}).empty());
  std::string zext = "define i16 @f(i8 %x) {\n  %r = zext nneg i8 %x to i16\n  ret i16 %r\n}\n";
  CHECK(trap_of(zext, {i8(128)}) == "poison: zext nneg of a negative value");
}

TEST_CASE("a target that adds an unjustified flag is refuted") {
  ir::Function src = fn("define i8 @src(i8 %x) {\n  %r = add i8 %x, 1\n  ret i8 %r\n}\n");
  ir::Function tgt = fn("define i8 @tgt(i8 %x) {\n  %r = add nsw i8 %x, 1\n  ret i8 %r\n}\n");
  auto r = check_equivalence(src, tgt);
  REQUIRE(r.verdict == EquivalenceReport::Verdict::NotEquivalent);
  REQUIRE(r.inputs.size() == 1);
  CHECK(r.inputs[0].lanes[0] == 127);
  // Same flag on both sides traps identically and agrees.
  CHECK(check_equivalence(tgt, tgt).verdict == EquivalenceReport::Verdict::Equivalent);
}

TEST_CASE("unsupported constructs are reported") {
  auto r = eval(fn("define double @f(double %x) {\n  %r = fadd double %x, 1.0\n  ret double %r\n}\n"), {});
  REQUIRE_FALSE(r);
  auto st = eval(fn("define void @f(ptr %p) {\n  store i8 0, ptr %p\n  ret void\n}\n"), {});
  REQUIRE_FALSE(st);
  auto pz = Program::compile(fn("define i8 @f(i8 %x) {\n  %r = add i8 %x, poison\n  ret i8 %r\n}\n"));
  REQUIRE_FALSE(pz);
  CHECK(pz.error().instruction == "poison");
}

TEST_CASE("umax/shl case: equivalent over every i8") {
  auto r = check_equivalence(fixture("pairs/umax_shl_src.ll"), fixture("pairs/umax_shl_tgt.ll"));
  CHECK(r.verdict == EquivalenceReport::Verdict::Equivalent);
  CHECK(r.mode == EquivalenceReport::Mode::Exhaustive);
  CHECK(r.inputs_checked == 256);
}

TEST_CASE("add vs or: smallest counterexample is (1, 1)") {
  ir::Function src = fixture("pairs/add_or_src.ll");
  ir::Function tgt = fixture("pairs/add_or_tgt.ll");
  auto r = check_equivalence(src, tgt);
  REQUIRE(r.verdict == EquivalenceReport::Verdict::NotEquivalent);
  CHECK(r.mode == EquivalenceReport::Mode::Exhaustive);
  REQUIRE(r.inputs.size() == 2);
  CHECK(r.inputs[0].lanes[0] == 1);
  CHECK(r.inputs[1].lanes[0] == 1);
  CHECK(std::get<RuntimeValue>(*r.src_out).lanes[0] == 2);
  CHECK(std::get<RuntimeValue>(*r.tgt_out).lanes[0] == 1);

  // Independent search for the first differing pair in (x, y) order.
  std::optional<std::pair<unsigned, unsigned>> first;
  for (unsigned x = 0; x < 256 && !first; ++x)
    for (unsigned y = 0; y < 256 && !first; ++y)
      if (((x + y) & 0xFF) != (x | y))
        first = {x, y};
  REQUIRE(first);
  CHECK(first->first == 1);
  CHECK(first->second == 1);

  // Replay.
  CHECK(run1(src, r.inputs) != run1(tgt, r.inputs));
  std::string text = format_counterexample(r, src);
  CHECK(text == "ERROR: Value mismatch\n\nExample:\ni8 %x = #x01 (1)\ni8 %y = #x01 (1)\n\n"
                "Source value: #x02 (2)\nTarget value: #x01 (1)\n");
}

TEST_CASE("clamp pair: equivalent on the boundary and sampled suite") {
  ir::Function src = fixture("pairs/clamp_src.ll");
  ir::Function tgt = fixture("pairs/clamp_tgt.ll");
  auto r = check_equivalence(src, tgt);
  CHECK(r.verdict == EquivalenceReport::Verdict::Equivalent);
  CHECK(r.mode == EquivalenceReport::Mode::Sampled);
  CHECK(r.inputs_checked >= 65536);

  auto suite = input_suite(src, tgt, {}, 65536);
  CHECK(suite.size() == 65536);
  std::set<u128> seen;
  for (const auto &in : suite)
    seen.insert(in.first.at(0).lanes.at(0));
  for (uint32_t v : {0u, 255u, 256u, 0xFFFFFFFFu, 0x80000000u, 0x7FFFFFFFu})
    CHECK(seen.count(v) == 1);
  CHECK(seen.size() > 60000);
}

TEST_CASE("vector clamp with memory: corrected candidate is equivalent, broken one is not") {
  ir::Function src = fixture("pairs/extracted_vector_clamp.ll");
  ir::Function good = fixture("pairs/candidate_corrected.ll");
  auto r = check_equivalence(src, good);
  CHECK(r.verdict == EquivalenceReport::Verdict::Equivalent);
  CHECK(r.mode == EquivalenceReport::Mode::Sampled);

  ir::Function bad = fn(
      "define <4 x i8> @src(ptr %inp.0, i64 %index) {\nentry:\n"
      "  %0 = getelementptr inbounds i32, ptr %inp.0, i64 %index\n"
      "  %wide.load = load <4 x i32>, ptr %0, align 4\n"
      "  %1 = call <4 x i32> @llvm.umin.v4i32(<4 x i32> %wide.load, <4 x i32> splat (i32 255))\n"
      "  %2 = trunc <4 x i32> %1 to <4 x i8>\n  ret <4 x i8> %2\n}\n");
  auto n = check_equivalence(src, bad);
  REQUIRE(n.verdict == EquivalenceReport::Verdict::NotEquivalent);
  REQUIRE(n.memory);
  std::string text = format_counterexample(n, src);
  CHECK(text.find("memory: ") != std::string::npos);
  CHECK(text.find("<4 x i8>") == std::string::npos);

  auto sr = eval(src, n.inputs, *n.memory);
  auto tr = eval(bad, n.inputs, *n.memory);
  REQUIRE(sr);
  REQUIRE(tr);
  CHECK(std::get<RuntimeValue>(sr.value()) != std::get<RuntimeValue>(tr.value()));
}

TEST_CASE("load merge case is equivalent under little-endian memory") {
  auto r = check_equivalence(fixture("pairs/load_merge_src.ll"), fixture("pairs/load_merge_tgt.ll"));
  CHECK(r.verdict == EquivalenceReport::Verdict::Equivalent);
}

TEST_CASE("signature mismatch and unsupported pairs") {
  auto m = check_equivalence(fixture("pairs/add_or_src.ll"), fixture("pairs/umax_shl_tgt.ll"));
  CHECK(m.verdict == EquivalenceReport::Verdict::SignatureMismatch);
  auto u = check_equivalence(fixture("pairs/nan_select_src.ll"), fixture("pairs/nan_select_tgt.ll"));
  CHECK(u.verdict == EquivalenceReport::Verdict::Unsupported);
}

TEST_CASE("interpreter agrees with the reference evaluator on random programs") {
  testing::RandomIr gen(99, {.max_instructions = 10, .widths = {8, 16, 32}});
  std::mt19937_64 rng(5);
  for (int n = 0; n < 300; ++n) {
    ir::Function f = fn(gen.function());
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<RuntimeValue> args;
      std::vector<int64_t> ref_args;
      for (const ir::Param &p : f.params) {
        uint64_t v = rng() & ((uint64_t(1) << p.type.width) - 1);
        if (trial < 4)
          v = trial == 0 ? 0 : trial == 1 ? 1 : ((uint64_t(1) << p.type.width) - 1);
        args.push_back(RuntimeValue::scalar(p.type.width, v));
        ref_args.push_back(static_cast<int64_t>(v));
      }
      auto got = eval(f, args);
      REQUIRE(got);
      Reference ref;
      auto want = ref.run(f, ref_args);
      if (!want) {
        CHECK(std::holds_alternative<Trap>(got.value()));
        continue;
      }
      REQUIRE(std::holds_alternative<RuntimeValue>(got.value()));
      const auto &rv = std::get<RuntimeValue>(got.value());
      CHECK(rv.lanes[0] == static_cast<u128>(Reference::uns(*want, rv.width)));
    }
  }
}

TEST_CASE("parallel and serial equivalence checks report the same thing") {
  testing::RandomIr gen(314, {.max_instructions = 6, .max_params = 2, .widths = {8}});
  int disagreements = 0, refuted = 0;
  for (int n = 0; n < 60; ++n) {
    ir::Function a = fn(gen.function());
    ir::Function b = a;
    // Perturb one constant or opcode so roughly half the pairs differ.
    for (auto &inst : b.blocks[0].instructions)
      if (inst.opcode == "add" && n % 2) {
        inst.opcode = "or";
        break;
      }
    EquivalenceOptions opts;
    opts.threads = 4;
    auto p = check_equivalence(a, b, opts);
    auto s = check_equivalence_serial(a, b, opts);
    if (p.verdict != s.verdict || p.counterexample_index != s.counterexample_index ||
        p.inputs != s.inputs)
      ++disagreements;
    if (p.verdict == EquivalenceReport::Verdict::NotEquivalent)
      ++refuted;
  }
  CHECK(disagreements == 0);
  CHECK(refuted > 0);
}

TEST_CASE("sampled mode: parallel matches serial with a late counterexample") {
  ir::Function a = fn("define i32 @f(i32 %x, i32 %y) {\n  %r = add i32 %x, %y\n  ret i32 %r\n}\n");
  ir::Function b = fn("define i32 @f(i32 %x, i32 %y) {\n  %s = add i32 %x, %y\n"
                      "  %c = icmp eq i32 %s, 123456789\n  %r = select i1 %c, i32 0, i32 %s\n"
                      "  ret i32 %r\n}\n");
  EquivalenceOptions opts;
  opts.threads = 3;
  auto p = check_equivalence(a, b, opts);
  auto s = check_equivalence_serial(a, b, opts);
  CHECK(p.verdict == s.verdict);
  CHECK(p.counterexample_index == s.counterexample_index);
}
