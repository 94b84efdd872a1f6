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

#include "peepseek/ir/def_use.h"

namespace peepseek::ir {

std::set<std::size_t> direct_uses(const BasicBlock &bb, std::size_t inst_index) {
  std::set<std::size_t> uses;
  if (inst_index >= bb.instructions.size())
    return uses;
  const Instruction &def = bb.instructions[inst_index];
  if (!def.result)
    return uses;
  for (std::size_t j = inst_index + 1; j < bb.instructions.size(); ++j)
    if (bb.instructions[j].uses_local(*def.result))
      uses.insert(j);
  return uses;
}

} // namespace peepseek::ir
