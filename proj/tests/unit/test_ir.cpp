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

#include "peepseek/ir/def_use.h"
#include "peepseek/ir/parser.h"
#include "peepseek/ir/printer.h"

using namespace peepseek;
using namespace peepseek::ir;

namespace {

Module must_parse(std::string_view text, ParseOptions opts = {}) {
  auto m = parse_module(text, opts);
  if (!m)
    FAIL(m.error().render());
  return m.value();
}

} // namespace

TEST_CASE("parses a one-block function") {
  Module m = must_parse("define i8 @f(i8 %x) {\nentry:\n  %y = add i8 %x, 1\n  ret i8 %y\n}\n");
  REQUIRE(m.functions.size() == 1);
  const Function &f = m.functions[0];
  CHECK(f.name == "f");
  REQUIRE(f.blocks.size() == 1);
  CHECK(f.blocks[0].label == "entry");
  REQUIRE(f.blocks[0].instructions.size() == 2);
  const Instruction &add = f.blocks[0].instructions[0];
  CHECK(add.opcode == "add");
  CHECK(*add.result == "y");
  CHECK(add.operands[1].value.constant.bits == 1);
  CHECK(f.blocks[0].instructions[1].is_terminator());
  CHECK(f.body_instruction_count() == 1);
}

TEST_CASE("truncated instruction is a parse error") {
  auto m = parse_module("%y = add i8");
  REQUIRE_FALSE(m);
  CHECK(m.error().line == 1);
  CHECK(m.error().column == 12);
}

TEST_CASE("strict mode rejects unknown opcodes") {
  const char *text = "define <4 x i32> @src(<4 x i32> %3) {\n"
                     "  %4 = smax <4 x i32> %3, zeroinitializer\n"
                     "  ret <4 x i32> %4\n}\n";
  auto strict = parse_module(text, {.strict = true});
  REQUIRE_FALSE(strict);
  CHECK(strict.error().message == "expected instruction opcode");
  CHECK(strict.error().line == 2);
  CHECK(strict.error().column == 8);
  std::string rendered = strict.error().render("cand.ll");
  CHECK(rendered.rfind("cand.ll:2:8: error: expected instruction opcode\n", 0) == 0);
  CHECK(rendered.find("\n       ^") != std::string::npos);

  auto lax = parse_module(text);
  REQUIRE(lax);
  CHECK(lax.value().functions[0].blocks[0].instructions[0].opaque);
}

TEST_CASE("strict mode rejects undefined values and type mismatches") {
  auto undef = parse_module("define i8 @f(i8 %x) {\n  %y = add i8 %z, 1\n  ret i8 %y\n}\n",
                            {.strict = true});
  REQUIRE_FALSE(undef);
  CHECK(undef.error().message == "use of undefined value '%z'");

  auto mismatch = parse_module(
      "define i8 @f(i32 %x) {\n  %y = add i8 %x, 1\n  ret i8 %y\n}\n", {.strict = true});
  REQUIRE_FALSE(mismatch);
  CHECK(mismatch.error().message == "'%x' defined with type 'i32' but expected 'i8'");

  auto ret = parse_module("define i8 @f(i32 %x) {\n  ret i32 %x\n}\n", {.strict = true});
  REQUIRE_FALSE(ret);
  CHECK(ret.error().message.rfind("value doesn't match function result type", 0) == 0);
}

TEST_CASE("structural errors") {
  CHECK_FALSE(parse_module("define void @f() {\n  %a = add i8 1, 2\n}\n"));
  CHECK_FALSE(parse_module("define i8 @f(i8 %x) {\n  %a = add i8 %x, 1\n  %a = add i8 %x, 2\n"
                           "  ret i8 %a\n}\n"));
  CHECK_FALSE(parse_module("define i8 @f(i8 %x) {\n  ret i8 %x\n  %a = add i8 %x, 1\n}\n"));
  CHECK_FALSE(parse_module("define i8 @f(i8 %x) {\n  %a = add i8 %x, 300\n  ret i8 %a\n}\n"));
  CHECK_FALSE(parse_module("garbage"));
}

TEST_CASE("vector constants, splat and intrinsic calls") {
  Module m = must_parse(
      "define <4 x i8> @f(<4 x i32> %v) {\n"
      "  %a = tail call <4 x i32> @llvm.umin.v4i32(<4 x i32> %v, <4 x i32> splat (i32 255))\n"
      "  %b = icmp slt <4 x i32> %v,\n     zeroinitializer\n"
      "  %c = trunc nuw <4 x i32> %a to <4 x i8>\n"
      "  %d = select <4 x i1> %b, <4 x i8> <i8 0, i8 0, i8 0, i8 -1>, <4 x i8> %c\n"
      "  ret <4 x i8> %d\n}\n");
  const auto &insts = m.functions[0].blocks[0].instructions;
  CHECK(*insts[0].callee == "llvm.umin.v4i32");
  CHECK(insts[0].flags == std::vector<std::string>{"tail"});
  CHECK(insts[0].operands[1].value.constant.lanes.size() == 4);
  CHECK(insts[3].operands[1].value.constant.lanes[3].bits == 0xFF);
  CHECK(print_instruction(insts[1]) == "%b = icmp slt <4 x i32> %v, zeroinitializer");
  CHECK(print_instruction(insts[3]) ==
        "%d = select <4 x i1> %b, <4 x i8> <i8 0, i8 0, i8 0, i8 -1>, <4 x i8> %c");
}

TEST_CASE("multi-block module with metadata round-trips") {
  const char *text =
      "; ModuleID = 'clamp'\n"
      "source_filename = \"clamp.rs\"\n"
      "target triple = \"x86_64-unknown-linux-gnu\"\n\n"
      "define void @clamp(ptr noalias nocapture noundef readonly %inp.0, i64 %n) unnamed_addr #0 {\n"
      "start:\n  br label %body\n\n"
      "body:\n"
      "  %index = phi i64 [ 0, %start ], [ %index.next, %body ]\n"
      "  %0 = getelementptr inbounds i32, ptr %inp.0, i64 %index\n"
      "  %wide = load <4 x i32>, ptr %0, align 4, !alias.scope !3\n"
      "  store <4 x i32> %wide, ptr %0, align 4\n"
      "  %index.next = add nuw i64 %index, 8\n"
      "  %done = icmp eq i64 %index.next, %n\n"
      "  br i1 %done, label %exit, label %body, !llvm.loop !0\n\n"
      "exit:\n  ret void\n}\n\n"
      "declare <4 x i32> @llvm.umin.v4i32(<4 x i32>, <4 x i32>) #1\n"
      "attributes #0 = { nounwind }\n"
      "!0 = distinct !{!0, !1}\n";
  Module m = must_parse(text, {.strict = true});
  REQUIRE(m.functions.size() == 1);
  const Function &f = m.functions[0];
  CHECK(f.blocks.size() == 3);
  CHECK(f.params[0].attrs == "noalias nocapture noundef readonly");
  CHECK(f.attrs_text == "unnamed_addr #0");
  CHECK(f.blocks[1].instructions[2].metadata_text == ", align 4, !alias.scope !3");
  CHECK(f.blocks[1].instructions[6].metadata_text == ", !llvm.loop !0");
  CHECK(f.body_instruction_count() == 6);
  std::string printed = print_module(m);
  Module again = must_parse(printed, {.strict = true});
  CHECK(again == m);
  CHECK(print_module(again) == printed);
}

TEST_CASE("def-use within a block") {
  Module m = must_parse("define i8 @f(i8 %x) {\n  %a = add i8 %x, 1\n  %b = mul i8 %a, %a\n"
                        "  %c = sub i8 %x, 2\n  %d = xor i8 %b, %a\n  ret i8 %d\n}\n");
  const BasicBlock &bb = m.functions[0].blocks[0];
  CHECK(direct_uses(bb, 0) == std::set<std::size_t>{1, 3});
  CHECK(direct_uses(bb, 2).empty());
  CHECK(direct_uses(bb, 3) == std::set<std::size_t>{4});
}
