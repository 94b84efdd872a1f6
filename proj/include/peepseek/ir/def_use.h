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

#ifndef PEEPSEEK_IR_DEF_USE_H
#define PEEPSEEK_IR_DEF_USE_H

#include <cstddef>
#include <set>

#include "peepseek/ir/ir.h"

namespace peepseek::ir {

/// Indices j > inst_index in `bb` whose instruction reads the result of
/// instruction `inst_index`. Empty when that instruction produces no value.
std::set<std::size_t> direct_uses(const BasicBlock &bb, std::size_t inst_index);

} // namespace peepseek::ir

#endif // PEEPSEEK_IR_DEF_USE_H
