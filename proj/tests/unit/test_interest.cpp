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

#include <fstream>
#include <sstream>

#include "peepseek/interest/interestingness.h"
#include "peepseek/ir/parser.h"

using namespace peepseek;
using namespace peepseek::interest;

namespace {

std::string slurp(const std::string &rel) {
  std::ifstream in(std::string(PEEPSEEK_FIXTURES) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ir::Function fn(std::string_view text) {
  auto m = ir::parse_module(text);
  if (!m)
    FAIL(m.error().render());
  return m.value().functions.at(0);
}

} // namespace

TEST_CASE("instruction counts of the vector clamp fixtures") {
  auto before = measure(slurp("pairs/extracted_vector_clamp.ll"));
  auto after = measure(slurp("pairs/candidate_corrected.ll"));
  REQUIRE(before);
  REQUIRE(after);
  // gep, load, icmp, umin, trunc, select
  CHECK(before->instruction_count == 6);
  CHECK(after->instruction_count == before->instruction_count - 1);
  CHECK_FALSE(before->total_cycles);

  auto empty = measure("define i8 @src(i8 %x) {\n  ret i8 %x\n}\n");
  REQUIRE(empty);
  CHECK(empty->instruction_count == 0);

  int calls = 0;
  auto with = measure(fn("define i8 @src(i8 %x) {\n  %a = add i8 %x, 1\n  ret i8 %a\n}\n"),
                      [&](std::string_view text) -> std::optional<uint64_t> {
                        ++calls;
                        CHECK(text.find("define i8 @src") != std::string_view::npos);
                        return 42;
                      });
  CHECK(calls == 1);
  CHECK(with.instruction_count == 1);
  CHECK(with.total_cycles == 42u);
  auto failing = measure(fn("define i8 @src(i8 %x) {\n  ret i8 %x\n}\n"),
                         [](std::string_view) -> std::optional<uint64_t> { return std::nullopt; });
  CHECK_FALSE(failing.total_cycles);
}

TEST_CASE("judge matches the decision table over every combination") {
  using R = InterestDecision::Reason;
  // Cycle relations: candidate less/equal/greater, or one or both unknown.
  enum class Cyc { Less, Equal, Greater, OrigOnly, CandOnly, Neither };
  const Cyc kCyc[] = {Cyc::Less, Cyc::Equal, Cyc::Greater, Cyc::OrigOnly, Cyc::CandOnly, Cyc::Neither};
  int checked = 0;
  for (int count_rel = -1; count_rel <= 1; ++count_rel) {
    for (Cyc cyc : kCyc) {
      for (bool differ : {false, true}) {
        Metrics orig{5, std::nullopt}, cand{static_cast<std::size_t>(5 + count_rel), std::nullopt};
        switch (cyc) {
        case Cyc::Less: orig.total_cycles = 100, cand.total_cycles = 90; break;
        case Cyc::Equal: orig.total_cycles = 100, cand.total_cycles = 100; break;
        case Cyc::Greater: orig.total_cycles = 100, cand.total_cycles = 110; break;
        case Cyc::OrigOnly: orig.total_cycles = 100; break;
        case Cyc::CandOnly: cand.total_cycles = 100; break;
        case Cyc::Neither: break;
        }
        InterestDecision expect{};
        if (count_rel < 0)
          expect = {true, R::FewerInstructions};
        else if (cyc == Cyc::Less)
          expect = {true, R::FewerCycles};
        else if (count_rel == 0 && (cyc == Cyc::Equal || cyc == Cyc::Neither) && differ)
          expect = {true, R::SyntacticDifference};
        InterestDecision got = judge(orig, cand, differ);
        CHECK_MESSAGE(got == expect, "count_rel=", count_rel, " cyc=", static_cast<int>(cyc),
                      " differ=", differ);
        if (count_rel > 0 && cyc == Cyc::Greater)
          CHECK_FALSE(got.interesting);
        ++checked;
      }
    }
  }
  CHECK(checked == 36);
  CHECK(judge({4, 100}, {4, 100}, true) == InterestDecision{true, R::SyntacticDifference});
  CHECK(judge({5, {}}, {4, {}}, false) == InterestDecision{true, R::FewerInstructions});
  CHECK_FALSE(judge({4, 100}, {4, 100}, false).interesting);
}

TEST_CASE("texts_differ ignores names and layout") {
  ir::Function a = fn("define i8 @src(i8 %x) {\n  %a = add i8 %x, 1\n  ret i8 %a\n}\n");
  ir::Function b = fn("define i8 @tgt(i8 %y) {\nentry:\n  %t   = add i8 %y, 1\n  ret i8 %t\n}\n");
  ir::Function c = fn("define i8 @src(i8 %x) {\n  %a = sub i8 %x, -1\n  ret i8 %a\n}\n");
  CHECK_FALSE(texts_differ(a, b));
  CHECK(texts_differ(a, c));
  CHECK(std::string(to_string(judge(measure(a), measure(b), texts_differ(a, b)))) ==
        "not_interesting");
}
