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

#include "fixture_text.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "peepseek/extract/extractor.h"
#include "peepseek/ir/parser.h"
#include "peepseek/ir/printer.h"
#include "random_ir.h"

using namespace peepseek;
using namespace peepseek::extract;
using ir::BasicBlock;
using ir::Module;

namespace {

Module parse_ok(std::string_view text) {
  auto m = ir::parse_module(text);
  if (!m)
    FAIL(m.error().render());
  return m.value();
}

std::string read_fixture(const std::string &rel) {
  std::ifstream in(std::string(PEEPSEEK_FIXTURES) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using IndexSets = std::set<std::vector<std::size_t>>;

/// One sequence per sink: the in-block backward slice, in block order.
IndexSets slice_oracle(const BasicBlock &bb) {
  const auto &insts = bb.instructions;
  std::map<std::string, std::size_t> def;
  for (std::size_t i = 0; i < insts.size(); ++i)
    if (insts[i].result)
      def[*insts[i].result] = i;
  IndexSets out;
  for (std::size_t s = 0; s < insts.size(); ++s) {
    if (insts[s].is_terminator())
      continue;
    bool used_later = false;
    for (std::size_t j = s + 1; j < insts.size(); ++j)
      if (!insts[j].is_terminator() && insts[s].result && insts[j].uses_local(*insts[s].result))
        used_later = true;
    if (used_later)
      continue;
    std::set<std::size_t> slice{s};
    std::vector<std::size_t> work{s};
    while (!work.empty()) {
      std::size_t k = work.back();
      work.pop_back();
      for (const std::string &name : insts[k].used_locals()) {
        auto it = def.find(name);
        if (it != def.end() && slice.insert(it->second).second)
          work.push_back(it->second);
      }
    }
    out.insert(std::vector<std::size_t>(slice.begin(), slice.end()));
  }
  return out;
}

IndexSets as_set(const std::vector<std::vector<std::size_t>> &seqs) {
  return IndexSets(seqs.begin(), seqs.end());
}

std::string rename_locals(const std::string &text) {
  return std::regex_replace(std::regex_replace(text, std::regex("%v"), "%tmp_"),
                            std::regex("%p"), "%arg");
}

} // namespace

TEST_CASE("extract_seqs_from_bb: chain") {
  Module m = parse_ok("define i8 @f(i8 %x, i8 %y, i8 %z) {\n  %a = add i8 %x, %y\n"
                      "  %b = mul i8 %a, %z\n  ret i8 %b\n}\n");
  CHECK(as_set(extract_index_seqs(m.functions[0].blocks[0])) == IndexSets{{0, 1}});
}

TEST_CASE("extract_seqs_from_bb: shared prefix is duplicated") {
  Module m = parse_ok("define i8 @f(i8 %x) {\n  %a = add i8 %x, 1\n  %d = xor i8 %a, 1\n"
                      "  %e = or i8 %a, 2\n  ret i8 %d\n}\n");
  auto seqs = extract_seqs_from_bb(m.functions[0].blocks[0]);
  CHECK(as_set(extract_index_seqs(m.functions[0].blocks[0])) == IndexSets{{0, 1}, {0, 2}});
  for (const InstrSeq &s : seqs)
    CHECK(*s.instructions.front().result == "a");
}

TEST_CASE("extract_seqs_from_bb: terminator only") {
  Module m = parse_ok("define void @f() {\n  ret void\n}\n");
  CHECK(extract_seqs_from_bb(m.functions[0].blocks[0]).empty());
}

TEST_CASE("extract_seqs_from_bb agrees with the backward-slice oracle") {
  testing::RandomIr gen(20260101, {.widths = {8, 16, 32}});
  for (int n = 0; n < 300; ++n) {
    std::string text = gen.function();
    Module m = parse_ok(text);
    const BasicBlock &bb = m.functions[0].blocks[0];
    auto seqs = extract_index_seqs(bb);
    INFO(text);
    REQUIRE(as_set(seqs) == slice_oracle(bb));
    CHECK(seqs.size() == as_set(seqs).size());

    std::set<std::size_t> finals;
    for (const auto &seq : seqs) {
      CHECK(std::is_sorted(seq.begin(), seq.end()));
      CHECK(std::adjacent_find(seq.begin(), seq.end()) == seq.end());
      finals.insert(seq.back());
      for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        const auto &inst = bb.instructions[seq[k]];
        bool used = false;
        for (std::size_t j = k + 1; j < seq.size(); ++j)
          used = used || bb.instructions[seq[j]].uses_local(*inst.result);
        CHECK(used);
      }
    }
    std::set<std::size_t> sinks;
    for (const auto &s : slice_oracle(bb))
      sinks.insert(s.back());
    CHECK(finals == sinks);
  }
}

TEST_CASE("wrapped functions re-parse strictly and digests ignore names") {
  testing::RandomIr gen(77, {.widths = {8, 32}});
  for (int n = 0; n < 200; ++n) {
    std::string text = gen.function();
    Module a = parse_ok(text);
    Module b = parse_ok(rename_locals(text));
    auto sa = extract_seqs_from_bb(a.functions[0].blocks[0]);
    auto sb = extract_seqs_from_bb(b.functions[0].blocks[0]);
    REQUIRE(sa.size() == sb.size());
    for (std::size_t k = 0; k < sa.size(); ++k) {
      auto wa = wrap_as_func(sa[k]);
      auto wb = wrap_as_func(sb[k]);
      REQUIRE(wa);
      REQUIRE(wb);
      std::string printed = ir::print_standalone(wa->func);
      INFO(printed);
      auto again = ir::parse_module(printed, {.strict = true});
      REQUIRE(again);
      CHECK(digest(again.value().functions[0]) == wa->digest);
      CHECK(wa->digest == wb->digest);
      CHECK(canonical_encoding(wa->func) == canonical_encoding(wb->func));
    }
  }
}

TEST_CASE("wrap_as_func") {
  Module m = parse_ok("define i8 @f(i8 %x, ptr %p) {\n  %a = add i8 %x, 1\n  %b = mul i8 %a, %a\n"
                      "  store i8 %b, ptr %p, align 1\n  ret i8 %b\n}\n");
  const BasicBlock &bb = m.functions[0].blocks[0];
  InstrSeq seq;
  seq.indices = {0, 1};
  seq.instructions = {bb.instructions[0], bb.instructions[1]};
  auto w = wrap_as_func(seq);
  REQUIRE(w);
  CHECK(ir::print_function(w->func) == "define i8 @src(i8 %x) {\nentry:\n  %a = add i8 %x, 1\n"
                                       "  %b = mul i8 %a, %a\n  ret i8 %b\n}\n");

  seq.indices.push_back(2);
  seq.instructions.push_back(bb.instructions[2]);
  auto bad = wrap_as_func(seq);
  REQUIRE_FALSE(bad);
  CHECK(bad.error().reason == WrapError::Reason::VoidResult);

  auto conservative = extract_index_seqs(bb, MemoryDependence::Conservative);
  CHECK(as_set(conservative) == IndexSets{{0, 1, 2}});
  CHECK(as_set(extract_index_seqs(bb)) == IndexSets{{0, 1}});
}

TEST_CASE("digest distinguishes constants and opcodes") {
  auto d = [](const char *body) {
    Module m = parse_ok(std::string("define i8 @src(i8 %x) {\n") + body + "\n  ret i8 %r\n}\n");
    return digest(m.functions[0]);
  };
  CHECK(d("  %r = add i8 %x, 1") != d("  %r = add i8 %x, 2"));
  CHECK(d("  %r = add i8 %x, 1") != d("  %r = sub i8 %x, 1"));
  CHECK(d("  %r = add nuw i8 %x, 1") != d("  %r = add i8 %x, 1"));
  CHECK(d("  %r = add i8 %x, 1") == d("  %r = add i8 %x, 1"));
  CHECK(d("  %r = add i8 %x, 1").hex().size() == 64);
  auto round = SeqDigest::from_hex(d("  %r = add i8 %x, 1").hex());
  REQUIRE(round);
  CHECK(*round == d("  %r = add i8 %x, 1"));
}

TEST_CASE("vector clamp module yields the committed extracted sequence") {
  Module m = parse_ok(read_fixture("corpus/clamp.ll"));
  m.id = "clamp.ll";
  Module fixture = parse_ok(read_fixture("pairs/extracted_vector_clamp.ll"));
  SeqDigest want = digest(fixture.functions[0]);
  DigestSet dedup;
  ExtractStats stats;
  auto out = extract::extract(m, dedup, {}, nullptr, &stats);
  REQUIRE(out);
  auto hit = std::find_if(out.value().begin(), out.value().end(),
                          [&](const WrappedFunction &w) { return w.digest == want; });
  REQUIRE(hit != out.value().end());
  CHECK(hit->origin.block == "vector.body");
  CHECK(hit->origin.module_id == "clamp.ll");
  CHECK(hit->func.body_instruction_count() == 6);
  CHECK(ir::print_standalone(hit->func) == testing::without_header(read_fixture("pairs/extracted_vector_clamp.ll")));
  CHECK(stats.seen == stats.deduped + stats.filtered_optimizable + stats.wrap_errors +
                          stats.over_cap + stats.emitted);
}

TEST_CASE("extract deduplicates across calls and alpha-equivalent functions") {
  Module m = parse_ok("define i8 @f(i8 %x) {\n  %a = add i8 %x, 1\n  %b = mul i8 %a, %a\n  ret i8 %b\n}\n"
                      "define i8 @g(i8 %y) {\n  %c = add i8 %y, 1\n  %d = mul i8 %c, %c\n  ret i8 %d\n}\n");
  DigestSet dedup;
  ExtractStats first;
  auto a = extract::extract(m, dedup, {}, nullptr, &first);
  REQUIRE(a);
  CHECK(a.value().size() == 1);
  CHECK(first.seen == 2);
  CHECK(first.deduped == 1);
  ExtractStats second;
  auto b = extract::extract(m, dedup, {}, nullptr, &second);
  REQUIRE(b);
  CHECK(b.value().empty());
  CHECK(second.deduped == second.seen);
}

TEST_CASE("extract drops sequences the preprocessor still simplifies") {
  Module m = parse_ok("define i8 @f(i8 %x) {\n  %a = add i8 %x, 0\n  ret i8 %a\n}\n"
                      "define i8 @g(i8 %x) {\n  %a = add i8 %x, 3\n  ret i8 %a\n}\n");
  DigestSet dedup;
  ExtractStats stats;
  OptimizableCheck check = [](const WrappedFunction &w) -> Result<bool, ExtractError> {
    return w.func.blocks[0].instructions[0].operands[1].value.constant.bits == 0;
  };
  auto out = extract::extract(m, dedup, {}, check, &stats);
  REQUIRE(out);
  REQUIRE(out.value().size() == 1);
  CHECK(out.value()[0].origin.function == "g");
  CHECK(stats.filtered_optimizable == 1);

  OptimizableCheck broken = [](const WrappedFunction &) -> Result<bool, ExtractError> {
    return ExtractError{"opt", "not found"};
  };
  DigestSet fresh;
  auto err = extract::extract(m, fresh, {}, broken);
  REQUIRE_FALSE(err);
  CHECK(err.error().tool == "opt");
}

TEST_CASE("over-cap sequences are counted, not truncated") {
  Module m = parse_ok("define i8 @f(i8 %x) {\n  %a = add i8 %x, 1\n  %b = mul i8 %a, %a\n"
                      "  %c = xor i8 %b, 3\n  ret i8 %c\n}\n");
  DigestSet dedup;
  ExtractStats stats;
  ExtractOptions opts;
  opts.max_seq_len = 2;
  auto out = extract::extract(m, dedup, opts, nullptr, &stats);
  REQUIRE(out);
  CHECK(out.value().empty());
  CHECK(stats.over_cap == 1);
}

TEST_CASE("parallel extract matches the serial reference") {
  testing::RandomIr gen(4242, {.widths = {8, 16}});
  std::string text;
  for (int f = 0; f < 40; ++f)
    text += gen.function("f" + std::to_string(f));
  Module m = parse_ok(text);
  m.id = "random.ll";
  ExtractOptions opts;
  opts.max_seq_len = 6;
  opts.threads = 4;
  DigestSet d1, d2;
  ExtractStats s1, s2;
  auto par = extract::extract(m, d1, opts, nullptr, &s1);
  auto ser = extract_serial(m, d2, opts, nullptr, &s2);
  REQUIRE(par);
  REQUIRE(ser);
  REQUIRE(par.value().size() == ser.value().size());
  for (std::size_t k = 0; k < par.value().size(); ++k) {
    CHECK(par.value()[k].digest == ser.value()[k].digest);
    CHECK(par.value()[k].origin == ser.value()[k].origin);
  }
  CHECK(d1 == d2);
  CHECK(s1.seen == s2.seen);
  CHECK(s1.deduped == s2.deduped);
  CHECK(s1.over_cap == s2.over_cap);
  CHECK(s1.emitted == s2.emitted);
}
