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

// Parallel kernels against their serial references: the equivalence oracle
// (exhaustive and sampled) and corpus extraction with the optimizer filter.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "peepseek/extract/extractor.h"
#include "peepseek/ir/parser.h"
#include "peepseek/oracle/equivalence.h"
#include "peepseek/pipeline/pipeline.h"
#include "random_ir.h"

using namespace peepseek;

namespace {

ir::Function parse(const std::string &text) {
  auto m = ir::parse_module(text);
  if (!m)
    throw std::runtime_error(m.error().render());
  return m.value().functions.at(0);
}

// 20 input bits: the largest exhaustive space.
const char *kExhaustiveSrc = R"(define i10 @src(i10 %x, i10 %y) {
  %a = xor i10 %x, %y
  %b = and i10 %x, %y
  %c = shl i10 %b, 1
  %d = add i10 %a, %c
  ret i10 %d
})";
const char *kExhaustiveTgt = R"(define i10 @tgt(i10 %x, i10 %y) {
  %d = add i10 %x, %y
  ret i10 %d
})";

const char *kSampledSrc = R"(define i8 @src(i32 %x) {
  %neg = icmp slt i32 %x, 0
  %m = call i32 @llvm.umin.i32(i32 %x, i32 255)
  %t = trunc i32 %m to i8
  %r = select i1 %neg, i8 0, i8 %t
  ret i8 %r
})";
const char *kSampledTgt = R"(define i8 @tgt(i32 %x) {
  %s = call i32 @llvm.smax.i32(i32 %x, i32 0)
  %m = call i32 @llvm.umin.i32(i32 %s, i32 255)
  %t = trunc i32 %m to i8
  ret i8 %t
})";

void equivalence(benchmark::State &state, bool parallel, const char *src_text, const char *tgt_text) {
  ir::Function src = parse(src_text), tgt = parse(tgt_text);
  oracle::EquivalenceOptions opts;
  opts.threads = int(state.range(0));
  uint64_t inputs = 0;
  for (auto _ : state) {
    auto r = parallel ? oracle::check_equivalence(src, tgt, opts) : oracle::check_equivalence_serial(src, tgt, opts);
    if (!r.equivalent())
      state.SkipWithError("pair should be equivalent");
    inputs += r.inputs_checked;
  }
  state.counters["inputs/s"] = benchmark::Counter(double(inputs), benchmark::Counter::kIsRate);
}

ir::Module synthetic_module(int functions) {
  testing::RandomIrOptions opts;
  opts.max_instructions = 12;
  opts.widths = {8, 16, 32};
  testing::RandomIr gen(42, opts);
  std::string text;
  for (int i = 0; i < functions; ++i)
    text += gen.function("f" + std::to_string(i)) + "\n";
  auto m = ir::parse_module(text);
  if (!m)
    throw std::runtime_error(m.error().render());
  m.value().id = "synthetic.ll";
  return m.value();
}

void extraction(benchmark::State &state, bool parallel) {
  ir::Module module = synthetic_module(int(state.range(1)));
  pipeline::PipelineConfig cfg;
  cfg.preprocessor = pipeline::PreprocessorMode::Builtin;
  cfg.extract.threads = int(state.range(0));
  pipeline::Toolbox tools = pipeline::make_toolbox(cfg);
  extract::OptimizableCheck check = pipeline::make_optimizable_check(tools, cfg);
  std::size_t seen = 0;
  for (auto _ : state) {
    extract::DigestSet digests;
    extract::ExtractStats st;
    auto r = parallel ? extract::extract(module, digests, cfg.extract, check, &st)
                      : extract::extract_serial(module, digests, cfg.extract, check, &st);
    benchmark::DoNotOptimize(r);
    seen += st.seen;
  }
  state.counters["seqs/s"] = benchmark::Counter(double(seen), benchmark::Counter::kIsRate);
}

void BM_EquivalenceSerial(benchmark::State &state, const char *src, const char *tgt) {
  equivalence(state, false, src, tgt);
}
void BM_EquivalenceOmp(benchmark::State &state, const char *src, const char *tgt) {
  equivalence(state, true, src, tgt);
}
void BM_ExtractSerial(benchmark::State &state) { extraction(state, false); }
void BM_ExtractOmp(benchmark::State &state) { extraction(state, true); }

void thread_args(benchmark::internal::Benchmark *b) {
  for (int t = 1; t <= std::max(1, omp_get_num_procs()); t *= 2)
    b->Arg(t);
}

} // namespace

BENCHMARK_CAPTURE(BM_EquivalenceSerial, exhaustive_serial, kExhaustiveSrc, kExhaustiveTgt)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EquivalenceOmp, exhaustive_omp, kExhaustiveSrc, kExhaustiveTgt)->Apply(thread_args)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EquivalenceSerial, sampled_serial, kSampledSrc, kSampledTgt)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EquivalenceOmp, sampled_omp, kSampledSrc, kSampledTgt)->Apply(thread_args)->Unit(benchmark::kMillisecond);

BENCHMARK(BM_ExtractSerial)->Args({1, 400})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractOmp)->ArgsProduct({{1, 2, 4}, {400}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
