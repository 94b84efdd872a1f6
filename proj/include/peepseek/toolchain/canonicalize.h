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

#ifndef PEEPSEEK_TOOLCHAIN_CANONICALIZE_H
#define PEEPSEEK_TOOLCHAIN_CANONICALIZE_H

#include <string>
#include <string_view>

#include "peepseek/ir/ir.h"
#include "peepseek/ir/parser.h"
#include "peepseek/support/result.h"

namespace peepseek::toolchain {

/// In-process stand-in for the external optimizer on the integer subset:
/// folds instructions whose operands are all constants, moves constants to
/// the right of commutative operations and comparisons, applies algebraic
/// identities (x+0, x*1, x&x, select c,a,a, ...), and deletes dead pure
/// instructions. Runs to a fixpoint. Returns true if anything changed.
bool canonicalize(ir::Function &f);

/// Strict parse, canonicalize every definition, print. Parse failures come
/// back as the rendered diagnostic.
Result<std::string, ir::ParseError> canonicalize_text(std::string_view text);

} // namespace peepseek::toolchain

#endif // PEEPSEEK_TOOLCHAIN_CANONICALIZE_H
