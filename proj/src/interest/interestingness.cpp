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

#include "peepseek/interest/interestingness.h"

#include "peepseek/extract/digest.h"
#include "peepseek/ir/printer.h"

namespace peepseek::interest {

Metrics measure(const ir::Function &f, const CycleFn &cycles) {
  Metrics m;
  m.instruction_count = f.body_instruction_count();
  if (cycles)
    m.total_cycles = cycles(ir::print_standalone(f));
  return m;
}

Result<Metrics, ir::ParseError> measure(std::string_view f_text, const CycleFn &cycles) {
  auto m = ir::parse_module(f_text);
  if (!m)
    return m.error();
  if (m.value().functions.empty())
    return ir::ParseError{1, 1, "no function definition", ""};
  return measure(m.value().functions.front(), cycles);
}

const char *to_string(InterestDecision::Reason r) {
  switch (r) {
  case InterestDecision::Reason::FewerInstructions: return "fewer_instructions";
  case InterestDecision::Reason::FewerCycles: return "fewer_cycles";
  case InterestDecision::Reason::SyntacticDifference: return "syntactic_difference";
  }
  return "?";
}

const char *to_string(const InterestDecision &d) {
  return d.interesting ? to_string(d.reason) : "not_interesting";
}

InterestDecision judge(const Metrics &original, const Metrics &candidate, bool differ) {
  using R = InterestDecision::Reason;
  if (candidate.instruction_count < original.instruction_count)
    return {true, R::FewerInstructions};
  if (original.total_cycles && candidate.total_cycles &&
      *candidate.total_cycles < *original.total_cycles)
    return {true, R::FewerCycles};
  bool same_cycles = original.total_cycles == candidate.total_cycles;
  if (candidate.instruction_count == original.instruction_count && same_cycles && differ)
    return {true, R::SyntacticDifference};
  return {};
}

bool texts_differ(const ir::Function &a, const ir::Function &b) {
  return extract::canonical_encoding(a) != extract::canonical_encoding(b);
}

} // namespace peepseek::interest
